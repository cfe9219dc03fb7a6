//! Classifies a few one-relation monoids and shows their sealing words.

use weakcomp::presentations::{classify, is_self_overlap_free, MonoidPresentation};
use weakcomp::symbol::chars;

fn main() -> weakcomp::Result<()> {
    let cases = [
        ("xy", "xyyxxxyxxyyxxxy", "xy"),
        ("xy", "xyxyyxyx", "x"),
        ("abc", "abca", "1"),
        ("ab", "ab", "ba"),
        ("xy", "xyxy", "xy"),
    ];
    for (gens, u, v) in cases {
        let p = MonoidPresentation::from_strs(gens, &[(u, v)])?;
        let c = classify(&p);
        let seal = c.sealing_word.as_ref().map(|w| w.spell()).unwrap_or_else(|| "-".into());
        println!(
            "{p:<36} special={:<5} subspecial={:<5} sealed by {seal}",
            c.special, c.subspecial
        );
    }

    for w in ["xy", "xyx", "xyxyy", "abab"] {
        println!("{w}: self-overlap free = {}", is_self_overlap_free(&chars(w)));
    }
    Ok(())
}
