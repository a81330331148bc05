#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigInt;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(term) = polyreal::bc::parse_bc(src) else { return };
    let printed = term.to_string();
    let reparsed = polyreal::bc::parse_bc(&printed).expect("printed terms reparse");
    assert_eq!(term, reparsed, "round trip changed the tree");
    let report = polyreal::bc::check_bc_tiers(&term);
    if !report.accepted {
        return;
    }
    // Accepted discrete terms translate to accepted real terms with the
    // same signature.
    let translated = polyreal::bc::translate(&term);
    let real_report = polyreal::tier::check_tiers(&translated);
    assert!(real_report.accepted, "translation broke tiering");
    assert_eq!(real_report.signature, report.signature);
    // Small evaluations must not panic (errors are fine).
    if src.len() <= 200 {
        let sig = report.signature.expect("accepted");
        let args: Vec<BigInt> = (0..sig.arity()).map(|i| BigInt::from(i % 3)).collect();
        let _ = polyreal::bc::bc_eval(&term, &args);
    }
});
