//! The discrete safe-recursion algebra over the naturals.
//!
//! Terms are built from `0`, projections, the binary successors
//! `s0(x) = 2x`, `s1(x) = 2x+1`, the halving predecessor `pr(x) = floor(x/2)`,
//! a parity-dispatching conditional `bcond(x,y,z)` (even picks `y`, odd
//! picks `z`), safe composition, and recursion on binary notation `srec`.
//! Evaluation is exact over arbitrary-precision naturals; negative inputs
//! are domain errors.
//!
//! [`translate`] maps every tier-checked discrete term to a term of the
//! real algebra with the same signature that agrees with it on the
//! naturals: `0 -> 0`, projections to projections, successors to their
//! arithmetic expansions, `pr` to the continuous halving, `bcond` to the
//! discrete conditional, composition to composition, `srec` to `si`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::builders;
use crate::error::{Error, Result};
use crate::sexpr::{err_at, parse_one, Sexpr};
use crate::term::{Signature, Term};
use crate::tier::{check_generic, CheckReport, NodeView, TierNode};

/// Abstract syntax of the discrete algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BcTerm {
    Zero,
    Proj { normal: u32, safe: u32, index: u32 },
    S0,
    S1,
    Pr,
    Cond,
    Comp { h: Box<BcTerm>, normals: Vec<BcTerm>, safes: Vec<BcTerm> },
    Rec { g: Box<BcTerm>, h0: Box<BcTerm>, h1: Box<BcTerm> },
}

impl BcTerm {
    pub fn comp(h: BcTerm, normals: Vec<BcTerm>, safes: Vec<BcTerm>) -> BcTerm {
        BcTerm::Comp { h: Box::new(h), normals, safes }
    }

    pub fn rec(g: BcTerm, h0: BcTerm, h1: BcTerm) -> BcTerm {
        BcTerm::Rec { g: Box::new(g), h0: Box::new(h0), h1: Box::new(h1) }
    }

    pub fn proj(normal: u32, safe: u32, index: u32) -> BcTerm {
        BcTerm::Proj { normal, safe, index }
    }

    /// The constant `k` written in binary notation with `s0`/`s1`.
    pub fn int_const(k: u64) -> BcTerm {
        if k == 0 {
            return BcTerm::Zero;
        }
        let head = if k % 2 == 1 { BcTerm::S1 } else { BcTerm::S0 };
        BcTerm::comp(head, vec![], vec![BcTerm::int_const(k / 2)])
    }
}

impl TierNode for BcTerm {
    fn view(&self) -> NodeView<'_, Self> {
        match self {
            BcTerm::Zero => NodeView::Leaf { sig: Signature::new(0, 0), proj_index: None },
            BcTerm::S0 | BcTerm::S1 | BcTerm::Pr => {
                NodeView::Leaf { sig: Signature::new(0, 1), proj_index: None }
            }
            BcTerm::Cond => NodeView::Leaf { sig: Signature::new(0, 3), proj_index: None },
            BcTerm::Proj { normal, safe, index } => NodeView::Leaf {
                sig: Signature::new(*normal, *safe),
                proj_index: Some(*index),
            },
            BcTerm::Comp { h, normals, safes } => NodeView::Comp { h, normals, safes },
            BcTerm::Rec { g, h0, h1 } => NodeView::Rec { g, h0, h1 },
        }
    }
}

/// Tier-checks a discrete term; same rules and rule names as the real
/// algebra.
pub fn check_bc_tiers(t: &BcTerm) -> CheckReport {
    check_generic(t).0
}

/// Exact evaluation over the naturals.
///
/// Arguments are positional (normals first). Negative arguments are domain
/// errors: the algebra is defined over the naturals and never leaves them.
pub fn bc_eval(t: &BcTerm, args: &[BigInt]) -> Result<BigInt> {
    for a in args {
        if a.is_negative() {
            return Err(Error::Domain { what: format!("negative argument {a}") });
        }
    }
    let report = check_bc_tiers(t);
    let sig = match (report.accepted, report.signature) {
        (true, Some(sig)) => sig,
        _ => return Err(Error::IllTiered { violations: report.violations.len() }),
    };
    if args.len() != sig.arity() as usize {
        return Err(Error::Arity { expected: sig.arity() as usize, got: args.len() });
    }
    eval_node(t, args)
}

fn eval_node(t: &BcTerm, args: &[BigInt]) -> Result<BigInt> {
    match t {
        BcTerm::Zero => Ok(BigInt::zero()),
        BcTerm::S0 => Ok(&args[0] << 1u8),
        BcTerm::S1 => Ok((&args[0] << 1u8) + 1),
        BcTerm::Pr => Ok(&args[0] >> 1u8),
        BcTerm::Cond => {
            if (&args[0] % 2u8).is_zero() {
                Ok(args[1].clone())
            } else {
                Ok(args[2].clone())
            }
        }
        BcTerm::Proj { index, .. } => Ok(args[*index as usize - 1].clone()),
        BcTerm::Comp { h, normals, safes } => {
            let mut values = Vec::with_capacity(normals.len() + safes.len());
            for g in normals.iter().chain(safes.iter()) {
                values.push(eval_sliced(g, args)?);
            }
            eval_node(h, &values)
        }
        BcTerm::Rec { g, h0, h1 } => {
            let recursion = args[0].clone();
            let rest = &args[1..];
            eval_rec(g, h0, h1, recursion, rest)
        }
    }
}

/// Evaluates an argument term against the ambient argument list, passing
/// only the slots its own signature consumes (closed terms consume none,
/// `(m;0)` terms consume the normals).
fn eval_sliced(g: &BcTerm, args: &[BigInt]) -> Result<BigInt> {
    let sig = match check_generic(g).0.signature {
        Some(sig) => sig,
        None => return Err(Error::IllTiered { violations: 1 }),
    };
    let take = sig.arity() as usize;
    if take <= args.len() {
        eval_node(g, &args[..take])
    } else {
        Err(Error::Arity { expected: take, got: args.len() })
    }
}

fn eval_rec(
    g: &BcTerm,
    h0: &BcTerm,
    h1: &BcTerm,
    k: BigInt,
    params: &[BigInt],
) -> Result<BigInt> {
    if k.is_zero() {
        return eval_sliced(g, params);
    }
    let half = &k >> 1u8;
    let prev = eval_rec(g, h0, h1, half.clone(), params)?;
    let step = if (&k % 2u8).is_zero() { h0 } else { h1 };
    // Step arguments: (floor(k/2), params...; safes..., previous value).
    let mut args = Vec::with_capacity(params.len() + 2);
    args.push(half);
    args.extend_from_slice(params);
    args.push(prev);
    eval_sliced_rec(step, &args)
}

/// Like `eval_sliced`, but for recursion steps the trailing safe slot is
/// the previous value: a step of signature `(1+p; 0)` takes the leading
/// normals, a step of signature `(1+p; q+1)` takes everything.
fn eval_sliced_rec(step: &BcTerm, args: &[BigInt]) -> Result<BigInt> {
    let sig = match check_generic(step).0.signature {
        Some(sig) => sig,
        None => return Err(Error::IllTiered { violations: 1 }),
    };
    let take = sig.arity() as usize;
    if take <= args.len() {
        eval_node(step, &args[..take])
    } else {
        Err(Error::Arity { expected: take, got: args.len() })
    }
}

/// Translation into the real algebra, signature-preserving and agreeing
/// with [`bc_eval`] at every natural point.
pub fn translate(t: &BcTerm) -> Term {
    match t {
        BcTerm::Zero => Term::Zero,
        BcTerm::Proj { normal, safe, index } => Term::proj(*normal, *safe, *index),
        BcTerm::S0 => builders::succ0(),
        BcTerm::S1 => builders::succ1(),
        BcTerm::Pr => Term::Pred,
        BcTerm::Cond => builders::cond_discrete(),
        BcTerm::Comp { h, normals, safes } => Term::comp(
            translate(h),
            normals.iter().map(translate).collect(),
            safes.iter().map(translate).collect(),
        ),
        BcTerm::Rec { g, h0, h1 } => Term::si(translate(g), translate(h0), translate(h1)),
    }
}

/// Wraps a unary `(1;0)` term of the real algebra into a recursion-built
/// term that agrees with it on the naturals and interpolates between
/// adjacent integer values elsewhere (so it is peaceful in its argument):
/// `g = t(0)`, `h0(x;y) = t(2x)`, `h1(x;y) = t(2x+1)`.
pub fn peaceful_wrap(t: &Term) -> Term {
    let x = Term::proj(1, 0, 1);
    let double = Term::comp(Term::Add, vec![], vec![x.clone(), x]);
    let double_plus_1 = Term::comp(Term::Add, vec![], vec![double.clone(), Term::One]);
    let g = Term::comp(t.clone(), vec![Term::Zero], vec![]);
    let h0 = Term::comp(t.clone(), vec![double], vec![]);
    let h1 = Term::comp(t.clone(), vec![double_plus_1], vec![]);
    Term::si(g, h0, h1)
}

impl fmt::Display for BcTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BcTerm::Zero => write!(f, "0"),
            BcTerm::S0 => write!(f, "(s0)"),
            BcTerm::S1 => write!(f, "(s1)"),
            BcTerm::Pr => write!(f, "(pr)"),
            BcTerm::Cond => write!(f, "(bcond)"),
            BcTerm::Proj { normal, safe, index } => write!(f, "(proj {normal} {safe} {index})"),
            BcTerm::Comp { h, normals, safes } => {
                write!(f, "(comp {h} (")?;
                for (i, t) in normals.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ") (")?;
                for (i, t) in safes.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "))")
            }
            BcTerm::Rec { g, h0, h1 } => write!(f, "(srec {g} {h0} {h1})"),
        }
    }
}

impl BcTerm {
    fn from_sexpr(e: &Sexpr) -> Result<BcTerm> {
        match e {
            Sexpr::Atom(text, pos) => match text.as_str() {
                "0" => Ok(BcTerm::Zero),
                other => Err(err_at(*pos, format!("unknown atom `{other}`"))),
            },
            Sexpr::List(items, pos) => {
                let head = match items.first() {
                    Some(Sexpr::Atom(h, _)) => h.as_str(),
                    Some(other) => return Err(err_at(other.pos(), "expected a head symbol")),
                    None => return Err(err_at(*pos, "empty list")),
                };
                let args = &items[1..];
                let expect_nullary = |kind: BcTerm| -> Result<BcTerm> {
                    if args.is_empty() {
                        Ok(kind)
                    } else {
                        Err(err_at(*pos, format!("`{head}` takes no arguments")))
                    }
                };
                match head {
                    "s0" => expect_nullary(BcTerm::S0),
                    "s1" => expect_nullary(BcTerm::S1),
                    "pr" => expect_nullary(BcTerm::Pr),
                    "bcond" => expect_nullary(BcTerm::Cond),
                    "proj" => {
                        if args.len() != 3 {
                            return Err(err_at(*pos, "`proj` takes m n i"));
                        }
                        let nums: Vec<u32> = args
                            .iter()
                            .map(|a| match a {
                                Sexpr::Atom(t, p) => t
                                    .parse::<u32>()
                                    .map_err(|_| err_at(*p, format!("bad integer `{t}`"))),
                                Sexpr::List(_, p) => Err(err_at(*p, "expected an integer")),
                            })
                            .collect::<Result<_>>()?;
                        Ok(BcTerm::proj(nums[0], nums[1], nums[2]))
                    }
                    "k" => {
                        if args.len() != 1 {
                            return Err(err_at(*pos, "`k` takes one integer"));
                        }
                        match &args[0] {
                            Sexpr::Atom(t, p) => {
                                let n = t
                                    .parse::<u64>()
                                    .map_err(|_| err_at(*p, format!("bad integer `{t}`")))?;
                                Ok(BcTerm::int_const(n))
                            }
                            Sexpr::List(_, p) => Err(err_at(*p, "expected an integer")),
                        }
                    }
                    "comp" => {
                        if args.len() != 3 {
                            return Err(err_at(*pos, "`comp` takes h (normals) (safes)"));
                        }
                        let h = BcTerm::from_sexpr(&args[0])?;
                        let normals = Self::parse_vector(&args[1])?;
                        let safes = Self::parse_vector(&args[2])?;
                        Ok(BcTerm::comp(h, normals, safes))
                    }
                    "srec" => {
                        if args.len() != 3 {
                            return Err(err_at(*pos, "`srec` takes g h0 h1"));
                        }
                        Ok(BcTerm::rec(
                            BcTerm::from_sexpr(&args[0])?,
                            BcTerm::from_sexpr(&args[1])?,
                            BcTerm::from_sexpr(&args[2])?,
                        ))
                    }
                    other => Err(err_at(*pos, format!("unknown head `{other}`"))),
                }
            }
        }
    }

    fn parse_vector(e: &Sexpr) -> Result<Vec<BcTerm>> {
        match e {
            Sexpr::List(items, _) => items.iter().map(BcTerm::from_sexpr).collect(),
            Sexpr::Atom(_, pos) => Err(err_at(*pos, "expected a parenthesized vector of terms")),
        }
    }
}

impl FromStr for BcTerm {
    type Err = Error;

    fn from_str(src: &str) -> Result<BcTerm> {
        BcTerm::from_sexpr(&parse_one(src)?)
    }
}

/// Parses one discrete term from the concrete syntax.
pub fn parse_bc(src: &str) -> Result<BcTerm> {
    src.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn basic_semantics() {
        assert_eq!(bc_eval(&BcTerm::S1, &[n(3)]).unwrap(), n(7));
        assert_eq!(bc_eval(&BcTerm::S0, &[n(3)]).unwrap(), n(6));
        assert_eq!(bc_eval(&BcTerm::Pr, &[n(5)]).unwrap(), n(2));
        assert_eq!(bc_eval(&BcTerm::Cond, &[n(6), n(4), n(9)]).unwrap(), n(4));
        assert_eq!(bc_eval(&BcTerm::Cond, &[n(7), n(4), n(9)]).unwrap(), n(9));
        assert!(matches!(
            bc_eval(&BcTerm::Pr, &[n(-1)]),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn int_const_in_binary() {
        for k in [0u64, 1, 2, 5, 12, 64, 100] {
            assert_eq!(bc_eval(&BcTerm::int_const(k), &[]).unwrap(), n(k as i64));
        }
    }

    #[test]
    fn srec_identity() {
        // g = 0, h_i(y; v) = s_i(v): recursion rebuilds its argument.
        let ident = BcTerm::rec(
            BcTerm::Zero,
            BcTerm::comp(BcTerm::S0, vec![], vec![BcTerm::proj(1, 1, 2)]),
            BcTerm::comp(BcTerm::S1, vec![], vec![BcTerm::proj(1, 1, 2)]),
        );
        let report = check_bc_tiers(&ident);
        assert!(report.accepted);
        assert_eq!(report.signature, Some(Signature::new(1, 0)));
        for k in 0..=64 {
            assert_eq!(bc_eval(&ident, &[n(k)]).unwrap(), n(k));
        }
    }

    #[test]
    fn srec_shift_right_by_length() {
        // shr(w; u) = floor(u / 2^len(w)).
        let shr = BcTerm::rec(
            BcTerm::proj(0, 1, 1),
            BcTerm::comp(BcTerm::Pr, vec![], vec![BcTerm::proj(1, 2, 3)]),
            BcTerm::comp(BcTerm::Pr, vec![], vec![BcTerm::proj(1, 2, 3)]),
        );
        let report = check_bc_tiers(&shr);
        assert!(report.accepted, "{:?}", report.violations);
        assert_eq!(report.signature, Some(Signature::new(1, 1)));
        for (w, u, expect) in [(0i64, 13i64, 13i64), (1, 13, 6), (2, 13, 3), (5, 200, 25)] {
            assert_eq!(bc_eval(&shr, &[n(w), n(u)]).unwrap(), n(expect), "shr({w},{u})");
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        let src = "(srec (proj 0 1 1) (comp (pr) () ((proj 1 2 3))) (comp (pr) () ((proj 1 2 3))))";
        let t = parse_bc(src).unwrap();
        assert_eq!(parse_bc(&t.to_string()).unwrap(), t);
        assert!(parse_bc("(si 0 0 0)").is_err());
        assert_eq!(parse_bc("(k 5)").unwrap(), BcTerm::int_const(5));
    }

    #[test]
    fn tier_rules_shared_with_real_algebra() {
        // Recursion result with a safe argument cannot enter a normal slot.
        let with_safe = BcTerm::rec(
            BcTerm::proj(0, 1, 1),
            BcTerm::proj(1, 2, 3),
            BcTerm::proj(1, 2, 3),
        );
        let bad = BcTerm::comp(BcTerm::proj(1, 0, 1), vec![with_safe], vec![]);
        let report = check_bc_tiers(&bad);
        assert!(!report.accepted);
        assert_eq!(report.violations[0].rule, "safe-into-normal");
    }

    #[test]
    fn translate_preserves_signature() {
        let ident = BcTerm::rec(
            BcTerm::Zero,
            BcTerm::comp(BcTerm::S0, vec![], vec![BcTerm::proj(1, 1, 2)]),
            BcTerm::comp(BcTerm::S1, vec![], vec![BcTerm::proj(1, 1, 2)]),
        );
        let translated = translate(&ident);
        let report = crate::tier::check_tiers(&translated);
        assert!(report.accepted, "{:?}", report.violations);
        assert_eq!(report.signature, Some(Signature::new(1, 0)));
        // Every fixture with arguments keeps its signature under translation.
        let cases = [BcTerm::S0, BcTerm::S1, BcTerm::Pr, BcTerm::Cond, BcTerm::int_const(9)];
        for t in cases {
            let want = check_bc_tiers(&t).signature.unwrap();
            let got = crate::tier::check_tiers(&translate(&t)).signature.unwrap();
            assert_eq!(want, got, "{t}");
        }
    }
}
