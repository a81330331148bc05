//! Grid checks for the integer characterizations of real functions.
//!
//! Each check sweeps a finite grid (or a seeded sample) and reports
//! per-point residuals against a stated bound. A pass supports the
//! universally quantified claim on the sampled grid only; reports carry the
//! counts needed to see when a pass is vacuous.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bc::{bc_eval, BcTerm};
use crate::creal::CauchyReal;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::eval::{eval_interval, EvalContext, PointBox};
use crate::interval::Interval;
use crate::tier::CheckedTerm;

use super::reffn::{GridFn, GridSpec, RefFunction, SharpT};

/// Cap on the number of individual violations and errors kept in a report.
const REPORT_DETAIL_CAP: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct PointResidual {
    pub point: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointError {
    pub point: Vec<String>,
    pub error: String,
}

/// Outcome of one grid sweep.
#[derive(Clone, Debug, Serialize)]
pub struct GridReport {
    pub check: String,
    pub subject: String,
    pub pass: bool,
    /// True when no point was actually checked.
    pub vacuous: bool,
    pub points_checked: u64,
    /// Points skipped by a side condition.
    pub points_excluded: u64,
    pub bound: String,
    pub tolerance: String,
    pub max_residual: Option<String>,
    /// Residual for every point checked, in sweep order.
    pub residuals: Vec<PointResidual>,
    pub violation_count: u64,
    pub violations: Vec<PointResidual>,
    pub error_count: u64,
    pub errors: Vec<PointError>,
    pub seed: u64,
}

struct Sweep {
    report: GridReport,
    bound_plus_tol: Dyadic,
    max_residual: Option<Dyadic>,
}

impl Sweep {
    fn new(check: &str, subject: String, bound: Dyadic, tol: Dyadic, seed: u64) -> Result<Self> {
        let bound_plus_tol = bound.add(&tol)?;
        Ok(Self {
            report: GridReport {
                check: check.into(),
                subject,
                pass: true,
                vacuous: true,
                points_checked: 0,
                points_excluded: 0,
                bound: bound.decimal_string(),
                tolerance: tol.decimal_string(),
                max_residual: None,
                residuals: Vec::new(),
                violation_count: 0,
                violations: Vec::new(),
                error_count: 0,
                errors: Vec::new(),
                seed,
            },
            bound_plus_tol,
            max_residual: None,
        })
    }

    fn observe(&mut self, point: Vec<String>, residual: Dyadic) {
        self.report.points_checked += 1;
        self.report.vacuous = false;
        self.report
            .residuals
            .push(PointResidual { point: point.clone(), residual: residual.decimal_string() });
        let is_new_max = match &self.max_residual {
            Some(prev) => &residual > prev,
            None => true,
        };
        if is_new_max {
            self.max_residual = Some(residual.clone());
        }
        if residual > self.bound_plus_tol {
            self.report.pass = false;
            self.report.violation_count += 1;
            if self.report.violations.len() < REPORT_DETAIL_CAP {
                self.report
                    .violations
                    .push(PointResidual { point, residual: residual.decimal_string() });
            }
        }
    }

    fn exclude(&mut self) {
        self.report.points_excluded += 1;
    }

    fn fail_point(&mut self, point: Vec<String>, err: crate::error::Error) {
        self.report.pass = false;
        self.report.error_count += 1;
        if self.report.errors.len() < REPORT_DETAIL_CAP {
            self.report.errors.push(PointError { point, error: err.to_string() });
        }
    }

    fn finish(mut self) -> GridReport {
        self.report.max_residual = self.max_residual.map(|d| d.decimal_string());
        self.report
    }
}

fn point_strings(values: &[&Dyadic]) -> Vec<String> {
    values.iter().map(|d| d.decimal_string()).collect()
}

/// `y f(x / y)` to within `2^-n` for integer grid points, exactly scaled.
fn scaled_ref(f: &RefFunction, x: i64, y: i64, n: u32) -> Result<Dyadic> {
    let arg = CauchyReal::from_rational(BigInt::from(x), BigInt::from(y));
    let y_bits = 64 - (y as u64).leading_zeros();
    let fx = f.apply(&arg).query(n + y_bits)?;
    fx.mul(&Dyadic::from_i64(y))
}

/// Checks `|g(x, y) - y f(x/y)| <= bound` over the integer grid
/// `x in [x0, x1], y in [max(1,y0), y1]`.
pub fn check_definability(
    f: &RefFunction,
    g: &GridFn,
    bound: &Dyadic,
    grid: &GridSpec,
    n: u32,
) -> Result<GridReport> {
    let tol = Dyadic::pow2(-i64::from(n))?.shift(1)?;
    let mut sweep = Sweep::new(
        "definability",
        format!("f={}, g={}", f.name, g.name()),
        bound.clone(),
        tol,
        grid.seed,
    )?;
    for x in grid.xs() {
        for y in grid.ys() {
            let xd = Dyadic::from_i64(x);
            let yd = Dyadic::from_i64(y);
            let point = point_strings(&[&xd, &yd]);
            let lhs = match g.eval_at(&[xd.clone(), yd.clone()], n) {
                Ok(v) => v,
                Err(e) => {
                    sweep.fail_point(point, e);
                    continue;
                }
            };
            let rhs = match scaled_ref(f, x, y, n) {
                Ok(v) => v,
                Err(e) => {
                    sweep.fail_point(point, e);
                    continue;
                }
            };
            let residual = lhs.sub(&rhs)?.abs();
            sweep.observe(point, residual);
        }
    }
    Ok(sweep.finish())
}

/// Checks `|g~(args) - h(args)| <= bound` between a real term and a
/// discrete term over the nonnegative part of the grid. Supports unary
/// and binary pairs; the first argument sweeps the x range, the second
/// the y range.
pub fn check_approximation(
    g_tilde: &GridFn,
    h: &BcTerm,
    bound: &Dyadic,
    grid: &GridSpec,
    n: u32,
) -> Result<GridReport> {
    let tol = Dyadic::pow2(-i64::from(n))?;
    let mut sweep = Sweep::new(
        "approximation",
        format!("g~={}", g_tilde.name()),
        bound.clone(),
        tol,
        grid.seed,
    )?;
    let arity = g_tilde.arity();
    let tuples: Vec<Vec<i64>> = match arity {
        1 => grid.xs().filter(|&x| x >= 0).map(|x| vec![x]).collect(),
        2 => {
            let mut out = Vec::new();
            for x in grid.xs().filter(|&x| x >= 0) {
                for y in grid.ys() {
                    out.push(vec![x, y]);
                }
            }
            out
        }
        other => {
            return Err(Error::Arity { expected: 2, got: other });
        }
    };
    for tuple in tuples {
        let dyadics: Vec<Dyadic> = tuple.iter().map(|&v| Dyadic::from_i64(v)).collect();
        let refs: Vec<&Dyadic> = dyadics.iter().collect();
        let point = point_strings(&refs);
        let lhs = match g_tilde.eval_at(&dyadics, n) {
            Ok(v) => v,
            Err(e) => {
                sweep.fail_point(point, e);
                continue;
            }
        };
        let ints: Vec<BigInt> = tuple.iter().map(|&v| BigInt::from(v)).collect();
        let rhs = match bc_eval(h, &ints) {
            Ok(v) => Dyadic::from_bigint(v),
            Err(e) => {
                sweep.fail_point(point, e);
                continue;
            }
        };
        let residual = lhs.sub(&rhs)?.abs();
        sweep.observe(point, residual);
    }
    Ok(sweep.finish())
}

/// Checks `|g(x, y, z) - y f(x / s[yz])| <= bound` under the admissibility
/// condition `z > 4|x| / s[yz]`, reporting how many grid points the side
/// condition excluded.
pub fn check_t_definability(
    f: &RefFunction,
    g: &GridFn,
    scale: &SharpT,
    bound: &Dyadic,
    grid: &GridSpec,
    n: u32,
) -> Result<GridReport> {
    let tol = Dyadic::pow2(-i64::from(n))?.shift(1)?;
    let mut sweep = Sweep::new(
        "t-definability",
        format!("f={}, g={}", f.name, g.name()),
        bound.clone(),
        tol,
        grid.seed,
    )?;
    for x in grid.xs() {
        for y in grid.ys() {
            for z in grid.zs() {
                let s = scale.sharp(&Dyadic::from_i64(y * z))?;
                // z > 4|x| / s  <=>  z s > 4 |x|.
                let lhs_cond = Dyadic::from_i64(z).mul(&s)?;
                let rhs_cond = Dyadic::from_i64(x.abs() * 4);
                if lhs_cond <= rhs_cond {
                    sweep.exclude();
                    continue;
                }
                let xd = Dyadic::from_i64(x);
                let yd = Dyadic::from_i64(y);
                let zd = Dyadic::from_i64(z);
                let point = point_strings(&[&xd, &yd, &zd]);
                let lhs = match g.eval_at(&[xd.clone(), yd.clone(), zd.clone()], n) {
                    Ok(v) => v,
                    Err(e) => {
                        sweep.fail_point(point, e);
                        continue;
                    }
                };
                // x / s is an exact dyadic: s is a power of two.
                let scaled_x = xd.mul(&pow2_reciprocal(&s)?)?;
                let y_bits = 64 - (y as u64).leading_zeros();
                let rhs = match f.at_dyadic(&scaled_x, n + y_bits) {
                    Ok(v) => v.mul(&yd)?,
                    Err(e) => {
                        sweep.fail_point(point, e);
                        continue;
                    }
                };
                let residual = lhs.sub(&rhs)?.abs();
                sweep.observe(point, residual);
            }
        }
    }
    Ok(sweep.finish())
}

/// Reciprocal of a power of two (exact).
fn pow2_reciprocal(s: &Dyadic) -> Result<Dyadic> {
    debug_assert!(s.mantissa().bits() == 1, "not a power of two: {s}");
    Dyadic::pow2(-s.exponent())
}

/// Samples pairs `|x1 - x2| <= 1` and checks the scaled smoothness bound
/// `y |f(x1/s) - f(x2/s)| <= M` under the admissibility condition.
pub fn check_t_smooth(
    f: &RefFunction,
    scale: &SharpT,
    m_bound: u32,
    grid: &GridSpec,
    n: u32,
) -> Result<GridReport> {
    let tol = Dyadic::pow2(-i64::from(n))?.shift(2)?;
    let mut sweep = Sweep::new(
        "t-smooth",
        format!("f={}, M={m_bound}", f.name),
        Dyadic::from_i64(i64::from(m_bound)),
        tol,
        grid.seed,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    for _ in 0..grid.samples {
        let x1 = random_dyadic(&mut rng, grid.x_range);
        let delta = random_dyadic(&mut rng, (-1, 1));
        let x2 = x1.add(&delta)?;
        let y = rng.gen_range(grid.y_range.0.max(1)..=grid.y_range.1);
        let z = rng.gen_range(grid.z_range.0.max(1)..=grid.z_range.1);
        let s = scale.sharp(&Dyadic::from_i64(y * z))?;
        let cond_lhs = Dyadic::from_i64(z).mul(&s)?;
        let cond_rhs = x1.abs().shift(2)?;
        if cond_lhs <= cond_rhs {
            sweep.exclude();
            continue;
        }
        let recip = pow2_reciprocal(&s)?;
        let d1 = x1.mul(&recip)?;
        let d2 = x2.mul(&recip)?;
        let y_bits = 64 - (y as u64).leading_zeros();
        let point = point_strings(&[&x1, &x2, &Dyadic::from_i64(y), &Dyadic::from_i64(z)]);
        let v1 = match f.at_dyadic(&d1, n + y_bits) {
            Ok(v) => v,
            Err(e) => {
                sweep.fail_point(point, e);
                continue;
            }
        };
        let v2 = match f.at_dyadic(&d2, n + y_bits) {
            Ok(v) => v,
            Err(e) => {
                sweep.fail_point(point, e);
                continue;
            }
        };
        let deviation = v1.sub(&v2)?.abs().mul(&Dyadic::from_i64(y))?;
        sweep.observe(point, deviation);
    }
    Ok(sweep.finish())
}

/// Random dyadic with 8 fractional bits inside the closed range.
fn random_dyadic(rng: &mut ChaCha8Rng, range: (i64, i64)) -> Dyadic {
    let lo = range.0 * 256;
    let hi = range.1 * 256;
    let m = rng.gen_range(lo..=hi);
    Dyadic::new(BigInt::from(m), -8).expect("small dyadic")
}

/// Peacefulness: the enclosure at a real `x` must meet the hull of the
/// enclosures at `floor(x)` and `ceil(x)` (other arguments fixed at
/// sampled integers), widened by `2^-n`.
pub fn check_peaceful(g: &CheckedTerm, grid: &GridSpec, n: u32) -> Result<GridReport> {
    let tol = Dyadic::pow2(-i64::from(n))?;
    let mut sweep = Sweep::new(
        "peaceful",
        format!("term of signature {}", g.signature()),
        Dyadic::zero(),
        tol.clone(),
        grid.seed,
    )?;
    let sig = g.signature();
    let arity = sig.arity() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let w = n + 16;
    for _ in 0..grid.samples {
        // First argument ranges over nonnegative reals; the rest sit at
        // sampled integers >= 1.
        let x = random_dyadic(&mut rng, (0, grid.x_range.1.max(1)));
        let mut rest = Vec::with_capacity(arity.saturating_sub(1));
        for _ in 1..arity {
            rest.push(Dyadic::from_i64(rng.gen_range(1..=grid.y_range.1.max(1))));
        }
        let (floor_x, ceil_x) = x.floor_ceil();
        let mut ctx = EvalContext::new(w);
        let boxes = |first: Interval| -> Vec<Interval> {
            let mut v = vec![first];
            v.extend(rest.iter().map(|d| Interval::point(d.clone())));
            v
        };
        let point = point_strings(&[&x]);
        let run = |ctx: &mut EvalContext, first: Interval| -> Result<Interval> {
            let args = boxes(first);
            let bx = PointBox::for_signature(sig, &args)?;
            eval_interval(g, &bx, ctx)
        };
        let at_x = run(&mut ctx, Interval::point(x.clone()));
        let at_floor = run(&mut ctx, Interval::point(Dyadic::from_bigint(floor_x)));
        let at_ceil = run(&mut ctx, Interval::point(Dyadic::from_bigint(ceil_x)));
        match (at_x, at_floor, at_ceil) {
            (Ok(vx), Ok(v0), Ok(v1)) => {
                let hull = v0.hull(&v1);
                let widened =
                    Interval::new(hull.lo().sub(&tol)?, hull.hi().add(&tol)?);
                // Residual: how far the enclosure sits outside the hull.
                let above = vx.lo().sub(widened.hi())?;
                let below = widened.lo().sub(vx.hi())?;
                let zero = Dyadic::zero();
                let residual = above.max_of(&below).max_of(&zero);
                sweep.observe(point, residual);
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                sweep.fail_point(point, e);
            }
        }
    }
    Ok(sweep.finish())
}
