//! The production guard is process-wide, so this file holds a single test.

use weakcomp::compression::compress;
use weakcomp::grammars::{set_production_guard, DEFAULT_PRODUCTION_GUARD};
use weakcomp::pipeline::{build_wp_grammar, terminal_wp_grammar, STAGES};
use weakcomp::presentations::MonoidPresentation;
use weakcomp::Error;

#[test]
fn oversized_stage_is_reported() {
    let lhs = format!("{}{}{}xy", "xy".repeat(2), "xyx".repeat(3), "xyy".repeat(4));
    let p = MonoidPresentation::from_strs("xy", &[(&lhs, "xyxxy")]).unwrap();
    let base = terminal_wp_grammar(&compress(&p).unwrap().target).unwrap();

    set_production_guard(40);
    let err = build_wp_grammar(&p, &base).unwrap_err();
    set_production_guard(DEFAULT_PRODUCTION_GUARD);

    match err {
        Error::Guard { stage, count, limit, .. } => {
            assert!(STAGES.iter().any(|s| stage.starts_with(s)), "{stage}");
            assert!(count > limit);
            assert_eq!(limit, 40);
        }
        other => panic!("expected a guard error, got {other}"),
    }
    assert!(build_wp_grammar(&p, &base).is_ok());
}
