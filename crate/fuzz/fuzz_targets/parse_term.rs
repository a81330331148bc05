#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(term) = polyreal::term::parse(src) else { return };
    // Checking never panics; violations come back as data.
    let report = polyreal::tier::check_tiers(&term);
    // Round trip: printing an accepted or rejected tree and reparsing it
    // reproduces the tree exactly.
    let printed = polyreal::term::pretty_print(&term);
    let reparsed = polyreal::term::parse(&printed).expect("printed terms reparse");
    assert_eq!(term, reparsed, "round trip changed the tree");
    if report.accepted {
        assert!(report.signature.is_some());
        assert!(report.violations.is_empty());
    }
});
