//! Compression chains and their JSON reports.

use weakcomp::compression::{canonical_form, compress, compress_chain, gamma_part};
use weakcomp::presentations::MonoidPresentation;
use weakcomp::symbol::chars;

fn main() -> weakcomp::Result<()> {
    let m1 = MonoidPresentation::from_strs("xy", &[("xyyxxxyxxyyxxxy", "xy")])?;
    let step = compress(&m1)?;
    println!("{m1}\n  alpha = {}", step.alpha);
    for (piece, g) in step.sigma.iter().zip(&step.gamma) {
        println!("  {g} <- {piece}");
    }
    println!("  left monoid: {}\n", step.target);

    // canonical form u' u† u'' and the γ-part of u†
    let w = chars("yyxyyxxxyxxyyxxxyxx");
    let cf = canonical_form(&w, &step.alpha).expect("w contains alpha");
    println!("{w} = {} . {} . {}", cf.prefix, cf.core, cf.suffix);
    println!("gamma part: {}\n", gamma_part(&w, &step).expect("w contains alpha"));

    // two steps down to a one-generator monoid
    let p = MonoidPresentation::from_strs("xy", &[("xyxyyxyxy", "xyxy")])?;
    let chain = compress_chain(&p)?;
    println!("{chain}\n");
    println!("{}", serde_json::to_string_pretty(&chain.to_json())?);
    Ok(())
}
