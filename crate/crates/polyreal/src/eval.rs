//! Guaranteed-precision evaluation of tier-checked terms.
//!
//! [`eval_interval`] maps a box of argument intervals to a sound enclosure
//! of the term's value set at a fixed working precision. [`eval_to_precision`]
//! wraps it in the standard refinement loop: query the argument reals at
//! precision `w`, evaluate, accept once the output width reaches `2^-n`,
//! otherwise double `w`.
//!
//! Recursion nodes are evaluated through their integer values: `f(0) = g`,
//! `f(2n+1) = h1(n, y; z, f(n))`, `f(2n+2) = h0(n+1, y; z, f(n+1))`, so
//! `f(k)` needs one step per bit of `k` (memoized per context). Between
//! adjacent integers the value is the interpolation
//!
//! ```text
//! x in [2n, 2n+1]:   f(x) = f(2n)   + [f(2n+1) - f(2n)]   * (1 - cos(pi x))/2
//! x in [2n+1, 2n+2]: f(x) = f(2n+1) + [f(2n+2) - f(2n+1)] * (1 + cos(pi x))/2
//! ```
//!
//! and the halving basic function has the matching piecewise form
//! `p(x) = n` on `[2n, 2n+1]` and `p(x) = n + (1 + cos(pi x))/2` on
//! `[2n+1, 2n+2]`. Adjacent pieces agree at the breakpoints, so an input
//! straddling finitely many breakpoints evaluates to the hull of its pieces.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::creal::CauchyReal;
use crate::dyadic::{floor_shr, Dyadic, Round};
use crate::error::{Error, Result};
use crate::interval::{cos_pi_point, cospi_enclosure, pi_enclosure, sinpi_enclosure, Interval};
use crate::term::Signature;
use crate::tier::{CheckedKind, CheckedNode, CheckedTerm};

/// Knobs for the refinement loop. These are configuration, not contract.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    /// Initial working precision is `n + initial_extra_bits`.
    pub initial_extra_bits: u32,
    /// Number of doubling rounds before giving up.
    pub budget_rounds: u32,
    /// Maximum number of unit intervals hulled when a recursion variable
    /// straddles breakpoints; wider inputs must be refined first.
    pub max_recursion_pieces: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { initial_extra_bits: 16, budget_rounds: 12, max_recursion_pieces: 8 }
    }
}

/// Argument intervals, normal positions first.
#[derive(Clone, Debug)]
pub struct PointBox {
    pub normals: Vec<Interval>,
    pub safes: Vec<Interval>,
}

impl PointBox {
    pub fn new(normals: Vec<Interval>, safes: Vec<Interval>) -> Self {
        Self { normals, safes }
    }

    /// Splits a flat argument list according to a signature.
    pub fn for_signature(sig: Signature, args: &[Interval]) -> Result<Self> {
        if args.len() != sig.arity() as usize {
            return Err(Error::Arity { expected: sig.arity() as usize, got: args.len() });
        }
        let (normals, safes) = args.split_at(sig.normal as usize);
        Ok(Self { normals: normals.to_vec(), safes: safes.to_vec() })
    }

    pub fn from_ints(sig: Signature, args: &[i64]) -> Result<Self> {
        let intervals: Vec<Interval> =
            args.iter().map(|&v| Interval::point(Dyadic::from_i64(v))).collect();
        Self::for_signature(sig, &intervals)
    }

    fn slice(&self, sig: Signature) -> Self {
        Self {
            normals: self.normals[..sig.normal as usize].to_vec(),
            safes: self.safes[..sig.safe as usize].to_vec(),
        }
    }

    fn round_out(&self, w: u32) -> Self {
        Self {
            normals: self.normals.iter().map(|x| x.round_out(w)).collect(),
            safes: self.safes.iter().map(|x| x.round_out(w)).collect(),
        }
    }

    fn fingerprint(&self) -> Vec<(Dyadic, Dyadic)> {
        self.normals
            .iter()
            .chain(self.safes.iter())
            .map(|x| (x.lo().clone(), x.hi().clone()))
            .collect()
    }
}

type MemoKey = (u32, BigInt, u32, Vec<(Dyadic, Dyadic)>);

/// One evaluation's working state: precision, the recursion memo, counters.
pub struct EvalContext {
    w: u32,
    config: EvalConfig,
    memo: HashMap<MemoKey, Interval>,
    /// Number of recursion-step expansions performed (for memo tests and
    /// complexity measurements).
    pub si_expansions: u64,
}

impl EvalContext {
    pub fn new(w: u32) -> Self {
        Self::with_config(w, EvalConfig::default())
    }

    pub fn with_config(w: u32, config: EvalConfig) -> Self {
        Self { w, config, memo: HashMap::new(), si_expansions: 0 }
    }

    pub fn working_precision(&self) -> u32 {
        self.w
    }

    fn set_precision(&mut self, w: u32) {
        self.w = w;
    }
}

/// Sound enclosure of the value set of `t` over the box.
pub fn eval_interval(t: &CheckedTerm, bx: &PointBox, ctx: &mut EvalContext) -> Result<Interval> {
    let sig = t.signature();
    if bx.normals.len() != sig.normal as usize || bx.safes.len() != sig.safe as usize {
        return Err(Error::Arity {
            expected: sig.arity() as usize,
            got: bx.normals.len() + bx.safes.len(),
        });
    }
    node_eval(t.root(), bx, ctx)
}

fn node_eval(node: &CheckedNode, bx: &PointBox, ctx: &mut EvalContext) -> Result<Interval> {
    let w = ctx.w;
    match &node.kind {
        CheckedKind::Zero => Ok(Interval::zero()),
        CheckedKind::One => Ok(Interval::point(Dyadic::one())),
        CheckedKind::Add => bx.safes[0].add(&bx.safes[1], w),
        CheckedKind::Sub => bx.safes[0].sub(&bx.safes[1], w),
        CheckedKind::Proj { index } => {
            let i = *index as usize - 1;
            let m = node.sig.normal as usize;
            Ok(if i < m { bx.normals[i].clone() } else { bx.safes[i - m].clone() })
        }
        CheckedKind::Cond => {
            let (x, y, z) = (&bx.safes[0], &bx.safes[1], &bx.safes[2]);
            let xy = x.mul(y, w)?;
            let one_minus_x = Interval::point(Dyadic::one()).sub(x, w)?;
            xy.add(&one_minus_x.mul(z, w)?, w)
        }
        CheckedKind::Parity => {
            let s = sinpi_enclosure(&bx.safes[0], w + 2)?;
            let half_pi = pi_enclosure(w + 2)?.shift(-1)?;
            let prod = half_pi.mul(&s, w)?;
            let zero = Dyadic::zero();
            Ok(Interval::new(prod.lo().max_of(&zero), prod.hi().max_of(&zero)))
        }
        CheckedKind::Pred => eval_pred(&bx.safes[0], w),
        CheckedKind::Comp { h, normals, safes } => {
            let mut normal_vals = Vec::with_capacity(normals.len());
            for g in normals {
                normal_vals.push(node_eval(g, &bx.slice(g.sig), ctx)?);
            }
            let mut safe_vals = Vec::with_capacity(safes.len());
            for g in safes {
                safe_vals.push(node_eval(g, &bx.slice(g.sig), ctx)?);
            }
            let hbox = PointBox::new(normal_vals, safe_vals);
            node_eval(h, &hbox, ctx)
        }
        CheckedKind::Si { .. } => si_real_eval(node, bx, ctx),
    }
}

/// Enclosure of the continuous halving `p`, monotone in its argument:
/// `[p(lo), p(hi)]` from the two point evaluations.
pub fn eval_pred(x: &Interval, w: u32) -> Result<Interval> {
    let lo = pred_point(x.lo(), w)?;
    let hi = if x.is_point() { lo.clone() } else { pred_point(x.hi(), w)? };
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone()).round_out(w))
}

fn pred_point(t: &Dyadic, w: u32) -> Result<Interval> {
    if t.is_integer() {
        let n = t.to_bigint().expect("integer dyadic");
        return Ok(Interval::point(Dyadic::from_bigint(floor_shr(&n, 1))));
    }
    let m = t.floor();
    if m.is_even() {
        // Flat on [2n, 2n+1]: exactly n.
        return Ok(Interval::point(Dyadic::from_bigint(m >> 1u8)));
    }
    // Rising on [2n+1, 2n+2]: n + (1 + cos(pi t)) / 2.
    let n = (&m - 1) >> 1u8;
    let c = cos_pi_point(t, w + 2)?;
    let weight = c.translate(&Dyadic::one())?.shift(-1)?;
    weight.translate(&Dyadic::from_bigint(n))
}

fn si_parts(node: &CheckedNode) -> (&CheckedNode, &CheckedNode, &CheckedNode) {
    match &node.kind {
        CheckedKind::Si { g, h0, h1 } => (g, h0, h1),
        _ => unreachable!("si_parts on a non-recursion node"),
    }
}

fn si_real_eval(node: &CheckedNode, bx: &PointBox, ctx: &mut EvalContext) -> Result<Interval> {
    let x = &bx.normals[0];
    let params = PointBox::new(bx.normals[1..].to_vec(), bx.safes.clone());
    if x.hi().is_negative() {
        return Err(Error::Domain {
            what: format!("recursion variable {x} is entirely negative"),
        });
    }
    // Values at negative points are undefined; the defined value set lives
    // on the nonnegative part of the box.
    let zero = Dyadic::zero();
    let lo = x.lo().max_of(&zero);
    let hi = x.hi().clone();
    let lo_int = lo.floor();
    let hi_int = hi.floor_ceil().1;
    if lo_int == hi_int {
        // The box is a single integer point.
        return si_values(node, &lo_int, &params, ctx);
    }
    let span = &hi_int - &lo_int;
    if span > BigInt::from(ctx.config.max_recursion_pieces) {
        return Err(Error::Resource {
            what: format!("recursion variable spans {span} unit intervals; refine the input"),
        });
    }
    let mut acc: Option<Interval> = None;
    let mut m = lo_int;
    while m < hi_int {
        let m_next: BigInt = &m + 1;
        let piece = Interval::new(
            lo.max_of(&Dyadic::from_bigint(m.clone())),
            hi.min_of(&Dyadic::from_bigint(m_next.clone())),
        );
        let val = closed_form_piece(node, &m, &piece, &params, ctx)?;
        acc = Some(match acc {
            Some(prev) => prev.hull(&val),
            None => val,
        });
        m = m_next;
    }
    Ok(acc.expect("at least one piece"))
}

/// Interpolation on one unit interval `[m, m+1]` with `x` contained in it.
fn closed_form_piece(
    node: &CheckedNode,
    m: &BigInt,
    x: &Interval,
    params: &PointBox,
    ctx: &mut EvalContext,
) -> Result<Interval> {
    let w = ctx.w;
    let f_m = si_values(node, m, params, ctx)?;
    let f_m1 = si_values(node, &(m + 1), params, ctx)?;
    let c = cospi_enclosure(x, w + 2)?;
    let one = Interval::point(Dyadic::one());
    let weight_raw = if m.is_even() {
        one.sub(&c, w + 2)?.shift(-1)?
    } else {
        one.add(&c, w + 2)?.shift(-1)?
    };
    // The exact weight lies in [0, 1]; intersecting is sound and keeps the
    // enclosure inside the hull of the two integer values.
    let unit = Interval::new(Dyadic::zero(), Dyadic::one());
    let weight = weight_raw.intersect(&unit).unwrap_or(weight_raw);
    let diff = f_m1.sub(&f_m, w)?;
    f_m.add(&diff.mul(&weight, w)?, w)
}

/// `f(k)` for a nonnegative integer recursion variable, by the halving
/// recursion with memoization: one step per bit of `k`.
fn si_values(
    node: &CheckedNode,
    k: &BigInt,
    params: &PointBox,
    ctx: &mut EvalContext,
) -> Result<Interval> {
    if k.is_negative() {
        return Err(Error::Domain { what: format!("recursion variable {k} is negative") });
    }
    let rounded = params.round_out(ctx.w);
    let key: MemoKey = (node.id, k.clone(), ctx.w, rounded.fingerprint());
    if let Some(hit) = ctx.memo.get(&key) {
        return Ok(hit.clone());
    }
    let (g, h0, h1) = si_parts(node);
    let value = if k.is_zero() {
        node_eval(g, &rounded.slice(g.sig), ctx)?
    } else {
        let half = k >> 1u8;
        let prev = si_values(node, &half, &rounded, ctx)?;
        let step = if k.is_even() { h0 } else { h1 };
        ctx.si_expansions += 1;
        let mut normals = Vec::with_capacity(rounded.normals.len() + 1);
        normals.push(Interval::point(Dyadic::from_bigint(half)));
        normals.extend_from_slice(&rounded.normals);
        let mut safes = Vec::with_capacity(rounded.safes.len() + 1);
        safes.extend_from_slice(&rounded.safes);
        safes.push(prev);
        let step_box = PointBox::new(normals, safes).slice(step.sig);
        node_eval(step, &step_box, ctx)?
    };
    ctx.memo.insert(key, value.clone());
    Ok(value)
}

/// Public wrapper: integer values of a recursion-rooted term.
pub fn si_integer_values(
    t: &CheckedTerm,
    k: &BigInt,
    params: &PointBox,
    ctx: &mut EvalContext,
) -> Result<Interval> {
    match &t.root().kind {
        CheckedKind::Si { .. } => si_values(t.root(), k, params, ctx),
        _ => Err(Error::Domain { what: "term is not recursion-rooted".into() }),
    }
}

/// Public wrapper: the interpolation closed form on one unit interval.
pub fn closed_form_si(
    t: &CheckedTerm,
    x: &Interval,
    params: &PointBox,
    ctx: &mut EvalContext,
) -> Result<Interval> {
    match &t.root().kind {
        CheckedKind::Si { .. } => {
            if x.lo().is_negative() {
                return Err(Error::Domain { what: "negative recursion variable".into() });
            }
            let m = x.lo().floor();
            let upper = Dyadic::from_bigint(&m + 1);
            if x.hi() > &upper {
                return Err(Error::Domain {
                    what: "input is not contained in one unit interval".into(),
                });
            }
            closed_form_piece(t.root(), &m, x, params, ctx)
        }
        _ => Err(Error::Domain { what: "term is not recursion-rooted".into() }),
    }
}

/// Statistics from a refinement run.
#[derive(Clone, Debug)]
pub struct EvalStats {
    pub rounds: u32,
    pub final_precision: u32,
    pub si_expansions: u64,
    pub output_width: Dyadic,
}

/// Evaluates `t` at the given reals to within `2^-n`.
pub fn eval_to_precision(
    t: &CheckedTerm,
    point: &[CauchyReal],
    n: u32,
    config: &EvalConfig,
) -> Result<Dyadic> {
    eval_to_precision_stats(t, point, n, config).map(|(d, _)| d)
}

/// Like [`eval_to_precision`], returning the refinement statistics too.
pub fn eval_to_precision_stats(
    t: &CheckedTerm,
    point: &[CauchyReal],
    n: u32,
    config: &EvalConfig,
) -> Result<(Dyadic, EvalStats)> {
    let sig = t.signature();
    if point.len() != sig.arity() as usize {
        return Err(Error::Arity { expected: sig.arity() as usize, got: point.len() });
    }
    let mut ctx = EvalContext::with_config(n + config.initial_extra_bits, config.clone());
    let target = Dyadic::pow2(-i64::from(n))?;
    let mut last_err = None;
    for round in 0..config.budget_rounds {
        let w = ctx.w;
        let mut args = Vec::with_capacity(point.len());
        for x in point {
            args.push(x.approx_interval(w)?);
        }
        let bx = PointBox::for_signature(sig, &args)?;
        match eval_interval(t, &bx, &mut ctx) {
            Ok(val) => {
                let width = val.width()?;
                if width <= target {
                    let mid = val.mid()?.round_to_precision(n + 2, Round::Nearest);
                    let stats = EvalStats {
                        rounds: round + 1,
                        final_precision: w,
                        si_expansions: ctx.si_expansions,
                        output_width: width,
                    };
                    return Ok((mid, stats));
                }
            }
            // Wide boxes surface as resource errors; refining may fix them.
            Err(err @ Error::Resource { .. }) => last_err = Some(err),
            Err(err) => return Err(err),
        }
        let next = w.checked_mul(2).ok_or(Error::Resource {
            what: "working precision overflow".into(),
        })?;
        ctx.set_precision(next);
    }
    Err(last_err.unwrap_or(Error::Resource {
        what: format!("refinement budget exhausted before width 2^-{n}"),
    }))
}
