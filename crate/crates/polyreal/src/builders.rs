//! Derived functions and reference fixtures, assembled from the basic
//! functions with explicit projection plumbing.

use crate::term::{Signature, Term};

/// Named derived builders exposed through the concrete syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derived {
    PredShift,
    CondDiscrete,
    Succ0,
    Succ1,
    IntConst(u64),
}

pub fn derived(which: Derived) -> Term {
    match which {
        Derived::PredShift => pred_shift(),
        Derived::CondDiscrete => cond_discrete(),
        Derived::Succ0 => succ0(),
        Derived::Succ1 => succ1(),
        Derived::IntConst(k) => Term::int_const(k),
    }
}

/// `x + x` at `(0;1)`.
pub fn succ0() -> Term {
    let x = Term::proj(0, 1, 1);
    Term::comp(Term::Add, vec![], vec![x.clone(), x])
}

/// `2x + 1` at `(0;1)`.
pub fn succ1() -> Term {
    Term::comp(Term::Add, vec![], vec![succ0(), Term::One])
}

/// The shifted halving `p(x - 1) + 1` at `(0;1)`.
pub fn pred_shift() -> Term {
    let x = Term::proj(0, 1, 1);
    let x_minus_1 = Term::comp(Term::Sub, vec![], vec![x, Term::One]);
    let p = Term::comp(Term::Pred, vec![], vec![x_minus_1]);
    Term::comp(Term::Add, vec![], vec![p, Term::One])
}

/// Discrete conditional `(0;3)`: picks `y` when `x` is an even integer and
/// `z` when odd, built as `cond(x - 2 p(x), z, y)`.
pub fn cond_discrete() -> Term {
    let x = || Term::proj(0, 3, 1);
    let y = Term::proj(0, 3, 2);
    let z = Term::proj(0, 3, 3);
    let px = Term::comp(Term::Pred, vec![], vec![x()]);
    let two_px = Term::comp(Term::Add, vec![], vec![px.clone(), px]);
    let bit = Term::comp(Term::Sub, vec![], vec![x(), two_px]);
    Term::comp(Term::Cond, vec![], vec![bit, z, y])
}

/// The worked recursion fixture: `g = 0`, `h0(x;v) = 2v`, `h1(x;v) = 2v + 1`.
/// Restricted to the naturals this is the identity; between integers it
/// interpolates, so it exercises both recursion clauses and the closed form.
pub fn nat_id() -> Term {
    let v = Term::proj(1, 1, 2);
    let double = Term::comp(Term::Add, vec![], vec![v.clone(), v]);
    let h1 = Term::comp(Term::Add, vec![], vec![double.clone(), Term::One]);
    Term::si(Term::Zero, double, h1)
}

/// `f(k) = 2^len(k) - 1`: both step functions are `2v + 1`.
pub fn ones() -> Term {
    let v = Term::proj(1, 1, 2);
    let double = Term::comp(Term::Add, vec![], vec![v.clone(), v]);
    let h = Term::comp(Term::Add, vec![], vec![double, Term::One]);
    Term::si(Term::Zero, h.clone(), h)
}

/// `f(k) = 3 + popcount(k)`: `h1(x;v) = v + 1`, `h0(x;v) = v`.
pub fn popcount_plus_3() -> Term {
    let v = Term::proj(1, 1, 2);
    let h1 = Term::comp(Term::Add, vec![], vec![v.clone(), Term::One]);
    Term::si(Term::int_const(3), v, h1)
}

/// Explicit weakening of `t` from signature `from` to signature `to` via
/// projection wrappers. Requires `to.normal >= from.normal` and
/// `to.safe >= from.safe`. When `from.safe = 0` the result has signature
/// `(to.normal; 0)`, which fits any ambient safe count.
pub fn weaken(t: Term, from: Signature, to: Signature) -> Term {
    assert!(to.normal >= from.normal && to.safe >= from.safe, "weaken cannot shrink");
    if from == to {
        return t;
    }
    let normals = (1..=from.normal).map(|i| Term::proj(to.normal, 0, i)).collect();
    let safes = (1..=from.safe)
        .map(|j| Term::proj(to.normal, to.safe, to.normal + j))
        .collect();
    Term::comp(t, normals, safes)
}

/// Product of two safe arguments, `cond(x, y, 0) = x*y` at `(0;2)`.
pub fn mul_safe() -> Term {
    Term::comp(
        Term::Cond,
        vec![],
        vec![Term::proj(0, 2, 1), Term::proj(0, 2, 2), Term::Zero],
    )
}

/// `g(x, y, z) = floor(y*x / 2^(len(yz) - 1))` at `(3;0)`: the shifted
/// product that tracks `y * (x / 2^floor(log2 (yz)))` to within one.
///
/// The shift is a recursion on the length of `floor(yz / 2)`: each step
/// halves the accumulated product once. All three inputs arrive in normal
/// positions; the products are plumbed through safe slots of the
/// conditional, which keeps their signatures normal-only.
pub fn scaled_identity() -> Term {
    let y = || Term::proj(3, 0, 2);
    let z = || Term::proj(3, 0, 3);
    let x = || Term::proj(3, 0, 1);
    let prod_yz = Term::comp(Term::Cond, vec![], vec![y(), z(), Term::Zero]);
    let pred_yz = Term::comp(Term::Pred, vec![], vec![prod_yz]);
    let prod_yx = Term::comp(Term::Cond, vec![], vec![y(), x(), Term::Zero]);
    // shift(w; u) = floor(u / 2^len(w)).
    let shift = Term::si(
        Term::proj(0, 1, 1),
        Term::comp(Term::Pred, vec![], vec![Term::proj(1, 2, 3)]),
        Term::comp(Term::Pred, vec![], vec![Term::proj(1, 2, 3)]),
    );
    Term::comp(shift, vec![pred_yz], vec![prod_yx])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;
    use crate::tier::check_tiers;

    #[test]
    fn builders_are_well_tiered() {
        for (t, normal, safe) in [
            (succ0(), 0, 1),
            (succ1(), 0, 1),
            (pred_shift(), 0, 1),
            (cond_discrete(), 0, 3),
            (nat_id(), 1, 0),
            (ones(), 1, 0),
            (popcount_plus_3(), 1, 0),
            (mul_safe(), 0, 2),
            (scaled_identity(), 3, 0),
            (Term::int_const(37), 0, 0),
        ] {
            let report = check_tiers(&t);
            assert!(report.accepted, "{t}: {:?}", report.violations);
            assert_eq!(report.signature, Some(Signature::new(normal, safe)), "{t}");
        }
    }

    #[test]
    fn weaken_produces_requested_signature() {
        let t = weaken(succ1(), Signature::new(0, 1), Signature::new(2, 2));
        let report = check_tiers(&t);
        assert!(report.accepted, "{:?}", report.violations);
        assert_eq!(report.signature, Some(Signature::new(2, 2)));
    }

    #[test]
    fn syntax_names_match_builders() {
        assert_eq!(parse("(pred-shift)").unwrap(), pred_shift());
        assert_eq!(parse("(cond-discrete)").unwrap(), cond_discrete());
        assert_eq!(parse("(succ0)").unwrap(), succ0());
    }
}
