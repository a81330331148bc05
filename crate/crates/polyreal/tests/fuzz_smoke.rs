//! Runs the fuzz-target invariants over the checked-in corpus seeds and a
//! set of adversarial inputs, so `cargo test` exercises the same properties
//! the fuzzers drive (round trips, no panics on hostile input, translation
//! preserving acceptance).

use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;

use polyreal::bc::{bc_eval, check_bc_tiers, parse_bc, translate};
use polyreal::creal::PointLiteral;
use polyreal::dyadic::Dyadic;
use polyreal::term::{parse, pretty_print};
use polyreal::tier::check_tiers;

fn corpus_dir(target: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target)
}

fn corpus_inputs(target: &str) -> Vec<Vec<u8>> {
    let dir = corpus_dir(target);
    let mut out = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap_or_else(|e| panic!("{dir:?}: {e}")) {
        out.push(std::fs::read(entry.unwrap().path()).unwrap());
    }
    assert!(!out.is_empty(), "no corpus seeds in {dir:?}");
    out
}

fn adversarial() -> Vec<Vec<u8>> {
    let mut cases: Vec<Vec<u8>> = [
        "", "(", ")", "((((", "0)", "(comp", "(proj 99999999999 0 1)",
        "(k 18446744073709551615)", "(si 0 0 0)(si 0 0 0)", "; only a comment",
        "(add (add))", "(proj 1 1 0)", "(comp 0 () ())", "\u{0000}", "(k -0)",
        "1/0", "0/0", "*2^", "1*2^", "1*2^99999999999999999999", "..", "1..2",
        "(pred) ", " (parity)", "(comp (pred) () ((pred)))",
    ]
    .iter()
    .map(|s| s.as_bytes().to_vec())
    .collect();
    cases.push(format!("{}0{}", "(".repeat(4000), ")".repeat(4000)).into_bytes());
    cases.push(format!("(k {})", u64::MAX).into_bytes());
    cases.push(vec![0xff, 0xfe, 0x28, 0x29]);
    cases
}

fn drive_parse_term(data: &[u8]) {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(term) = parse(src) else { return };
    let report = check_tiers(&term);
    let printed = pretty_print(&term);
    let reparsed = parse(&printed).expect("printed terms reparse");
    assert_eq!(term, reparsed, "round trip changed the tree for `{src}`");
    if report.accepted {
        assert!(report.signature.is_some());
        assert!(report.violations.is_empty());
    }
}

fn drive_parse_bc(data: &[u8]) {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(term) = parse_bc(src) else { return };
    let printed = term.to_string();
    assert_eq!(parse_bc(&printed).expect("reparse"), term);
    let report = check_bc_tiers(&term);
    if !report.accepted {
        return;
    }
    let translated = translate(&term);
    let real_report = check_tiers(&translated);
    assert!(real_report.accepted, "translation broke tiering for `{src}`");
    assert_eq!(real_report.signature, report.signature);
    if src.len() <= 200 {
        let sig = report.signature.expect("accepted");
        let args: Vec<BigInt> = (0..sig.arity()).map(|i| BigInt::from(i % 3)).collect();
        let _ = bc_eval(&term, &args);
    }
}

fn drive_parse_point(data: &[u8]) {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(point) = PointLiteral::from_str(src) else { return };
    match &point {
        PointLiteral::Exact(d) => {
            let printed = d.to_string();
            assert_eq!(&Dyadic::from_str(&printed).expect("reparse"), d);
        }
        PointLiteral::Rational { .. } => {
            let _ = point.to_creal().query(8);
        }
    }
}

#[test]
fn parse_term_target_over_corpus() {
    for input in corpus_inputs("parse_term").into_iter().chain(adversarial()) {
        drive_parse_term(&input);
    }
}

#[test]
fn parse_bc_target_over_corpus() {
    for input in corpus_inputs("parse_bc_term").into_iter().chain(adversarial()) {
        drive_parse_bc(&input);
    }
}

#[test]
fn parse_point_target_over_corpus() {
    for input in corpus_inputs("parse_point").into_iter().chain(adversarial()) {
        drive_parse_point(&input);
    }
}

/// Byte-level mutation sweep over every seed: cheap deterministic
/// mini-fuzzing inside the normal test suite.
#[test]
fn mutated_seeds_do_not_panic() {
    for target in ["parse_term", "parse_bc_term", "parse_point"] {
        for input in corpus_inputs(target) {
            for i in 0..input.len() {
                for replacement in [b'(', b')', b'0', b' ', 0xff] {
                    let mut mutated = input.clone();
                    mutated[i] = replacement;
                    match target {
                        "parse_term" => drive_parse_term(&mutated),
                        "parse_bc_term" => drive_parse_bc(&mutated),
                        _ => drive_parse_point(&mutated),
                    }
                }
            }
        }
    }
}
