use num_bigint::BigInt;
use polyreal::builders;
use polyreal::bc::{translate, BcTerm};
use polyreal::creal::CauchyReal;
use polyreal::dyadic::Dyadic;
use polyreal::eval::{eval_to_precision, si_integer_values, EvalConfig, EvalContext, PointBox};
use polyreal::interval::Interval;
use polyreal::tier::CheckedTerm;

#[test]
fn high_precision_parity() {
    // n = 1024 drives the pi/sin series at ~1040 bits.
    let t = CheckedTerm::new(&polyreal::term::Term::Parity).unwrap();
    let half = CauchyReal::from_dyadic(Dyadic::new(BigInt::from(1), -1).unwrap());
    let out = eval_to_precision(&t, &[half], 1024, &EvalConfig::default()).unwrap();
    let pi = polyreal::interval::pi_enclosure(1040).unwrap();
    let half_pi_lo = pi.lo().shift(-1).unwrap();
    let err = out.sub(&half_pi_lo).unwrap().abs();
    assert!(err <= Dyadic::pow2(-1000).unwrap(), "err exponent too big");
}

#[test]
fn huge_recursion_variable() {
    let t = CheckedTerm::new(&builders::nat_id()).unwrap();
    let mut ctx = EvalContext::new(48);
    let k = BigInt::from(7u8) << 200;
    let v = si_integer_values(&t, &k, &PointBox::new(vec![], vec![]), &mut ctx).unwrap();
    assert!(v.contains(&Dyadic::from_bigint(k)));
    assert!(ctx.si_expansions <= 2 * 210);
}

#[test]
fn large_noninteger_point() {
    // 2^40 + 0.5 exercises the closed form with a huge unit-interval index.
    let t = CheckedTerm::new(&builders::nat_id()).unwrap();
    let x = Dyadic::pow2(40).unwrap().add(&Dyadic::new(BigInt::from(1), -1).unwrap()).unwrap();
    let out = eval_to_precision(&t, &[CauchyReal::from_dyadic(x.clone())], 20, &EvalConfig::default()).unwrap();
    let err = out.sub(&x).unwrap().abs();
    assert!(err <= Dyadic::pow2(-20).unwrap(), "nat_id({x}) = {out}");
}

#[test]
fn nested_recursion_at_reals() {
    // ones(ident(x)) through translation, at non-integer points.
    let ident = BcTerm::rec(
        BcTerm::Zero,
        BcTerm::comp(BcTerm::S0, vec![], vec![BcTerm::proj(1, 1, 2)]),
        BcTerm::comp(BcTerm::S1, vec![], vec![BcTerm::proj(1, 1, 2)]),
    );
    let ones = BcTerm::rec(
        BcTerm::Zero,
        BcTerm::comp(BcTerm::S1, vec![], vec![BcTerm::proj(1, 1, 2)]),
        BcTerm::comp(BcTerm::S1, vec![], vec![BcTerm::proj(1, 1, 2)]),
    );
    let nested = BcTerm::comp(ones, vec![ident], vec![]);
    let t = CheckedTerm::new(&translate(&nested)).unwrap();
    for m in [5i64, 9, 14, 25] {
        let x = Dyadic::new(BigInt::from(2 * m + 1), -1).unwrap(); // m + 0.5
        let out = eval_to_precision(&t, &[CauchyReal::from_dyadic(x)], 16, &EvalConfig::default());
        assert!(out.is_ok(), "nested at {m}.5: {out:?}");
    }
}

#[test]
fn thousand_generated_terms() {
    let report = polyreal::suites::integers_suite(1000, 777).unwrap();
    assert!(report.pass, "{:?}", report.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
}

#[test]
fn interval_input_through_recursion() {
    // A genuinely wide recursion variable: hull across several pieces.
    let t = CheckedTerm::new(&builders::nat_id()).unwrap();
    let mut ctx = EvalContext::new(40);
    let x = Interval::new(Dyadic::new(BigInt::from(1), -1).unwrap(), Dyadic::new(BigInt::from(9), -1).unwrap());
    let v = polyreal::eval::eval_interval(&t, &PointBox::new(vec![x], vec![]), &mut ctx).unwrap();
    // nat_id over [0.5, 4.5] has range [0.5, 4.5].
    assert!(v.contains(&Dyadic::new(BigInt::from(1), -1).unwrap()));
    assert!(v.contains(&Dyadic::new(BigInt::from(9), -1).unwrap()));
}
