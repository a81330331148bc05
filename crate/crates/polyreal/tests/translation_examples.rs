//! Pointwise agreement between discrete evaluation and the translated
//! terms, on the published example grids.

use num_bigint::BigInt;

use polyreal::bc::{bc_eval, peaceful_wrap, translate, BcTerm};
use polyreal::builders;
use polyreal::creal::CauchyReal;
use polyreal::dyadic::{Dyadic, Round};
use polyreal::eval::{eval_to_precision, si_integer_values, EvalConfig, EvalContext, PointBox};
use polyreal::term::Term;
use polyreal::tier::CheckedTerm;

fn round_int(d: &Dyadic) -> BigInt {
    d.round_to_precision(0, Round::Nearest).to_bigint().expect("integer after rounding")
}

#[test]
fn translated_halving_agrees_up_to_100() {
    let translated = CheckedTerm::new(&translate(&BcTerm::Pr)).unwrap();
    let cfg = EvalConfig::default();
    for k in 0..=100i64 {
        let want = bc_eval(&BcTerm::Pr, &[BigInt::from(k)]).unwrap();
        let out =
            eval_to_precision(&translated, &[CauchyReal::from_i64(k)], 20, &cfg).unwrap();
        assert_eq!(round_int(&out), want, "pr({k})");
    }
}

#[test]
fn translated_conditional_agrees_on_cube() {
    let translated = CheckedTerm::new(&translate(&BcTerm::Cond)).unwrap();
    let cfg = EvalConfig::default();
    for x in 0..=15i64 {
        // The conditional only reads the parity of x, so sweep the full
        // x range and sample the other two coordinates.
        for y in [0i64, 3, 9, 15] {
            for z in [0i64, 5, 11, 15] {
                let want =
                    bc_eval(&BcTerm::Cond, &[BigInt::from(x), BigInt::from(y), BigInt::from(z)])
                        .unwrap();
                let point = [
                    CauchyReal::from_i64(x),
                    CauchyReal::from_i64(y),
                    CauchyReal::from_i64(z),
                ];
                let out = eval_to_precision(&translated, &point, 20, &cfg).unwrap();
                assert_eq!(round_int(&out), want, "cond({x},{y},{z})");
            }
        }
    }
}

#[test]
fn wrapped_terms_agree_on_naturals() {
    let cfg = EvalConfig::default();
    let nat = builders::nat_id();
    let wrapped = CheckedTerm::new(&peaceful_wrap(&nat)).unwrap();
    let plain = CheckedTerm::new(&nat).unwrap();
    for k in 0..=64i64 {
        let a = eval_to_precision(&wrapped, &[CauchyReal::from_i64(k)], 20, &cfg).unwrap();
        let b = eval_to_precision(&plain, &[CauchyReal::from_i64(k)], 20, &cfg).unwrap();
        assert_eq!(round_int(&a), round_int(&b), "wrap(nat_id)({k})");
        assert_eq!(round_int(&a), BigInt::from(k));
    }
}

#[test]
fn wrapping_a_constant_stays_constant() {
    // A unary constant: recursion whose steps ignore everything.
    let const7 = Term::si(Term::int_const(7), Term::proj(1, 1, 2), Term::proj(1, 1, 2));
    let wrapped = CheckedTerm::new(&peaceful_wrap(&const7)).unwrap();
    let cfg = EvalConfig::default();
    for k in [0i64, 1, 5, 31] {
        let out = eval_to_precision(&wrapped, &[CauchyReal::from_i64(k)], 20, &cfg).unwrap();
        assert_eq!(round_int(&out), BigInt::from(7), "wrap(const7)({k})");
    }
    // And between integers it still sits at the constant.
    let half = CauchyReal::from_dyadic(Dyadic::new(BigInt::from(7), -1).unwrap());
    let out = eval_to_precision(&wrapped, &[half], 20, &cfg).unwrap();
    assert_eq!(round_int(&out), BigInt::from(7));
}

#[test]
fn one_step_unfolding_matches_discrete_steps() {
    // For the translated identity, each recursion value f(k) matches the
    // discrete evaluation at k, checked through the integer-value entry
    // point rather than the full evaluator.
    let ident = BcTerm::rec(
        BcTerm::Zero,
        BcTerm::comp(BcTerm::S0, vec![], vec![BcTerm::proj(1, 1, 2)]),
        BcTerm::comp(BcTerm::S1, vec![], vec![BcTerm::proj(1, 1, 2)]),
    );
    let translated = CheckedTerm::new(&translate(&ident)).unwrap();
    let mut ctx = EvalContext::new(40);
    let params = PointBox::new(vec![], vec![]);
    for k in 0..=64u32 {
        let want = bc_eval(&ident, &[BigInt::from(k)]).unwrap();
        let enc = si_integer_values(&translated, &BigInt::from(k), &params, &mut ctx).unwrap();
        assert!(enc.contains(&Dyadic::from_bigint(want)), "k={k}: {enc}");
    }
}
