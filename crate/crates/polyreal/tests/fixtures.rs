//! The checked-in fixture files stay in sync with the programmatic
//! builders, and the ill-tiered fixture stays rejected.

use std::path::PathBuf;

use polyreal::bc::{check_bc_tiers, parse_bc};
use polyreal::builders;
use polyreal::term::parse;
use polyreal::tier::check_tiers;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path:?}: {e}"))
}

#[test]
fn term_fixtures_match_builders() {
    assert_eq!(parse(&fixture("nat_id.w")).unwrap(), builders::nat_id());
    assert_eq!(parse(&fixture("ones.w")).unwrap(), builders::ones());
    assert_eq!(parse(&fixture("popcount3.w")).unwrap(), builders::popcount_plus_3());
}

#[test]
fn bad_scomp_fixture_rejected_with_expected_rule() {
    let term = parse(&fixture("bad_scomp.w")).unwrap();
    let report = check_tiers(&term);
    assert!(!report.accepted);
    assert!(report.violations.iter().any(|v| v.rule == "safe-into-normal"));
}

#[test]
fn bc_fixtures_accepted() {
    for name in ["ident.bc", "shr.bc"] {
        let term = parse_bc(&fixture(name)).unwrap();
        assert!(check_bc_tiers(&term).accepted, "{name}");
    }
    let first_proj = parse(&fixture("first_proj.w")).unwrap();
    let report = check_tiers(&first_proj);
    assert!(report.accepted);
}
