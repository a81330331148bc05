#![no_main]

use libfuzzer_sys::fuzz_target;
use std::str::FromStr;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(point) = polyreal::creal::PointLiteral::from_str(src) else { return };
    match &point {
        polyreal::creal::PointLiteral::Exact(d) => {
            // The canonical textual form round-trips exactly.
            let printed = d.to_string();
            let reparsed = polyreal::dyadic::Dyadic::from_str(&printed).expect("reparse");
            assert_eq!(&reparsed, d);
        }
        polyreal::creal::PointLiteral::Rational { .. } => {
            // Queries at low precision must not panic.
            let x = point.to_creal();
            let _ = x.query(8);
        }
    }
});
