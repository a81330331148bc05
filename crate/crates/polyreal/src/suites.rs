//! Self-contained verification suites, runnable from the CLI and reused by
//! the acceptance tests.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bc::{bc_eval, check_bc_tiers, peaceful_wrap, translate, BcTerm};
use crate::builders;
use crate::creal::CauchyReal;
use crate::dyadic::{Dyadic, Round};
use crate::error::Result;
use crate::eval::{
    eval_interval, eval_pred, eval_to_precision, si_integer_values, EvalConfig, EvalContext,
    PointBox,
};
use crate::gen::TermGen;
use crate::harness::{check_peaceful, GridSpec};
use crate::interval::Interval;
use crate::oracle::{ode_fixtures, OdeSolution, ParityIntegral};
use crate::term::Term;
use crate::tier::CheckedTerm;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCase {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub seed: u64,
    pub samples: usize,
    pub cases: Vec<SuiteCase>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, samples: usize) -> Self {
        Self { suite: suite.into(), pass: true, seed, samples, cases: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.cases.push(SuiteCase { name: name.into(), pass, detail: detail.into() });
    }
}

fn within_pow2(a: &Dyadic, b: &Dyadic, n: u32) -> Result<bool> {
    Ok(a.sub(b)?.abs() <= Dyadic::pow2(-i64::from(n))?)
}

/// Integer preservation: generated terms at integer arguments evaluate to
/// within `2^-20` of an integer.
pub fn integers_suite(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("integers", seed, samples);
    let mut gen = TermGen::new(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let cfg = EvalConfig::default();
    let mut failures = 0usize;
    let mut checked = 0usize;
    for i in 0..samples {
        let g = gen.well_tiered();
        let term = CheckedTerm::new(&g.term)?;
        let sig = term.signature();
        let mut args = Vec::with_capacity(sig.arity() as usize);
        for pos in 0..sig.arity() {
            let v = if g.has_recursion && pos == 0 {
                rng.gen_range(0..=64i64)
            } else {
                rng.gen_range(-8..=8i64)
            };
            args.push(CauchyReal::from_i64(v));
        }
        checked += 1;
        match eval_to_precision(&term, &args, 20, &cfg) {
            Ok(out) => {
                let nearest = out.round_to_precision(0, Round::Nearest);
                if !within_pow2(&out, &nearest, 20)? {
                    failures += 1;
                    if failures <= 5 {
                        report.push(
                            format!("sample-{i}"),
                            false,
                            format!("{} at integer args gave {}", g.term, out.decimal_string()),
                        );
                    }
                }
            }
            Err(err) => {
                failures += 1;
                if failures <= 5 {
                    report.push(format!("sample-{i}"), false, format!("{}: {err}", g.term));
                }
            }
        }
    }
    report.push(
        "integer-preservation",
        failures == 0,
        format!("{checked} terms checked, {failures} failures"),
    );
    Ok(report)
}

/// Peacefulness: interpolation-built fixtures stay inside the hull of their
/// adjacent integer values; the parity bump is the counterexample.
pub fn peaceful_suite(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("peaceful", seed, samples);
    let grid = GridSpec { samples, seed, ..GridSpec::default() };
    let expected_pass: Vec<(&str, Term)> = vec![
        ("nat-id", builders::nat_id()),
        ("ones", builders::ones()),
        ("popcount-plus-3", builders::popcount_plus_3()),
        ("wrapped-nat-id", peaceful_wrap(&builders::nat_id())),
    ];
    for (name, t) in expected_pass {
        let checked = CheckedTerm::new(&t)?;
        let r = check_peaceful(&checked, &grid, 20)?;
        report.push(
            name,
            r.pass,
            format!("{} points, {} violations", r.points_checked, r.violation_count),
        );
    }
    let parity = CheckedTerm::new(&Term::Parity)?;
    let r = check_peaceful(&parity, &grid, 20)?;
    report.push(
        "parity-counterexample",
        !r.pass,
        format!("expected failure; {} violations observed", r.violation_count),
    );
    Ok(report)
}

/// Closed forms against the numeric integrators: the halving against
/// quadrature of the parity bump, unit mass per even interval, and the
/// recursion fixtures against dense integration of their defining ODE.
pub fn closed_form_suite(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("closed-form", seed, samples);
    let tol = 1e-6;

    // Halving vs quadrature on sampled points in [-8, 8].
    let table = ParityIntegral::new(-10, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut bad = 0usize;
    for _ in 0..samples {
        let m = rng.gen_range(-8 * 256..=8 * 256i64);
        let x = Dyadic::new(BigInt::from(m), -8)?;
        let enc = eval_pred(&Interval::point(x.clone()), 60)?;
        let reference = table.pred(x.to_f64());
        let lo = enc.lo().to_f64() - tol;
        let hi = enc.hi().to_f64() + tol;
        let err = (enc.mid()?.to_f64() - reference).abs();
        worst = worst.max(err);
        if reference < lo || reference > hi {
            bad += 1;
        }
    }
    report.push(
        "halving-vs-quadrature",
        bad == 0,
        format!("{samples} points, max deviation {worst:.2e}"),
    );

    // Unit mass: p(2n+2) - p(2n+1) encloses 1 for n in [-4, 4].
    let mut mass_ok = true;
    for n in -4i64..=4 {
        let hi = eval_pred(&Interval::point(Dyadic::from_i64(2 * n + 2)), 60)?;
        let lo = eval_pred(&Interval::point(Dyadic::from_i64(2 * n + 1)), 60)?;
        let diff = hi.sub(&lo, 60)?;
        if !diff.contains(&Dyadic::one()) {
            mass_ok = false;
        }
    }
    report.push("unit-mass-per-even-interval", mass_ok, "n in [-4, 4]");

    // Recursion fixtures against the ODE reference on [0, 8].
    let terms = [
        ("nat-id", builders::nat_id()),
        ("ones", builders::ones()),
        ("popcount-plus-3", builders::popcount_plus_3()),
    ];
    let references = ode_fixtures();
    for ((name, term), fixture) in terms.iter().zip(references.iter()) {
        let checked = CheckedTerm::new(term)?;
        let solution = OdeSolution::solve(fixture, 9.0);
        let mut ctx = EvalContext::new(60);
        let mut worst: f64 = 0.0;
        let mut bad = 0usize;
        // Dyadic grid with step 1/128 over [0, 8]: 1025 exact points.
        let grid_points = 8 * 128 + 1;
        for i in 0..grid_points {
            let x = Dyadic::new(BigInt::from(i), -7)?;
            let bx = PointBox::new(vec![Interval::point(x.clone())], vec![]);
            let enc = eval_interval(&checked, &bx, &mut ctx)?;
            let reference = solution.at(x.to_f64());
            let err = (enc.mid()?.to_f64() - reference).abs();
            worst = worst.max(err);
            if reference < enc.lo().to_f64() - tol || reference > enc.hi().to_f64() + tol {
                bad += 1;
            }
        }
        report.push(
            format!("ode-{name}"),
            bad == 0,
            format!("{grid_points} points on [0,8], max deviation {worst:.2e}"),
        );
    }
    Ok(report)
}

/// The discrete term corpus used by the agreement suite.
pub fn bc_corpus() -> Vec<(&'static str, BcTerm)> {
    let u1 = || BcTerm::proj(0, 1, 1);
    let v = || BcTerm::proj(1, 1, 2);
    let ident = BcTerm::rec(
        BcTerm::Zero,
        BcTerm::comp(BcTerm::S0, vec![], vec![v()]),
        BcTerm::comp(BcTerm::S1, vec![], vec![v()]),
    );
    let ones = BcTerm::rec(
        BcTerm::Zero,
        BcTerm::comp(BcTerm::S1, vec![], vec![v()]),
        BcTerm::comp(BcTerm::S1, vec![], vec![v()]),
    );
    let oddmask = BcTerm::rec(BcTerm::Zero, v(), BcTerm::comp(BcTerm::S1, vec![], vec![v()]));
    let const3 = BcTerm::rec(BcTerm::int_const(3), v(), v());
    let shr = BcTerm::rec(
        u1(),
        BcTerm::comp(BcTerm::Pr, vec![], vec![BcTerm::proj(1, 2, 3)]),
        BcTerm::comp(BcTerm::Pr, vec![], vec![BcTerm::proj(1, 2, 3)]),
    );
    let append = BcTerm::rec(
        u1(),
        BcTerm::comp(BcTerm::S0, vec![], vec![BcTerm::proj(1, 2, 3)]),
        BcTerm::comp(BcTerm::S1, vec![], vec![BcTerm::proj(1, 2, 3)]),
    );
    let pr_of = |t: BcTerm| BcTerm::comp(BcTerm::Pr, vec![], vec![t]);
    let s1_of = |t: BcTerm| BcTerm::comp(BcTerm::S1, vec![], vec![t]);
    let s0_of = |t: BcTerm| BcTerm::comp(BcTerm::S0, vec![], vec![t]);
    vec![
        ("zero", BcTerm::Zero),
        ("s0", BcTerm::S0),
        ("s1", BcTerm::S1),
        ("pr", BcTerm::Pr),
        ("bcond", BcTerm::Cond),
        ("k5", BcTerm::int_const(5)),
        ("k12", BcTerm::int_const(12)),
        ("k100", BcTerm::int_const(100)),
        ("double", s0_of(u1())),
        ("quad", s0_of(s0_of(u1()))),
        ("pr-pr", pr_of(pr_of(u1()))),
        ("s1-pr", s1_of(pr_of(u1()))),
        (
            "even-gate",
            BcTerm::comp(BcTerm::Cond, vec![], vec![u1(), s0_of(u1()), u1()]),
        ),
        (
            "cond-mix",
            BcTerm::comp(BcTerm::Cond, vec![], vec![pr_of(u1()), u1(), s1_of(u1())]),
        ),
        ("ident", ident.clone()),
        ("ones", ones.clone()),
        ("oddmask", oddmask),
        ("const3-rec", const3),
        ("shr", shr.clone()),
        ("append", append),
        (
            "ones-of-ident",
            BcTerm::comp(ones, vec![ident.clone()], vec![]),
        ),
        (
            "shr-self",
            BcTerm::comp(
                shr.clone(),
                vec![pr_of(BcTerm::proj(1, 0, 1))],
                vec![BcTerm::proj(1, 0, 1)],
            ),
        ),
        (
            "shr-two-normals",
            BcTerm::comp(shr, vec![BcTerm::proj(2, 0, 1)], vec![BcTerm::proj(2, 0, 2)]),
        ),
        (
            "double-ident",
            BcTerm::comp(BcTerm::S0, vec![], vec![ident]),
        ),
        (
            "rec-param",
            BcTerm::rec(
                BcTerm::comp(BcTerm::S1, vec![], vec![u1()]),
                BcTerm::comp(BcTerm::Pr, vec![], vec![BcTerm::proj(1, 2, 3)]),
                BcTerm::comp(BcTerm::Pr, vec![], vec![BcTerm::proj(1, 2, 3)]),
            ),
        ),
    ]
}

/// Argument tuples for a corpus fixture: the recursion-variable slot sweeps
/// `0..=max_k`, other slots take a few fixed values.
fn corpus_args(arity: usize, max_k: i64) -> Vec<Vec<i64>> {
    match arity {
        0 => vec![vec![]],
        1 => (0..=max_k).map(|k| vec![k]).collect(),
        2 => {
            let mut out = Vec::new();
            for k in 0..=max_k {
                out.push(vec![k, 5]);
            }
            for k in [0i64, 1, 7, 64] {
                for u in [0i64, 1, 9, 64] {
                    out.push(vec![k, u]);
                }
            }
            out
        }
        3 => {
            let mut out = Vec::new();
            for x in [0i64, 1, 2, 7, 13, 64] {
                for y in [0i64, 4] {
                    for z in [1i64, 9] {
                        out.push(vec![x, y, z]);
                    }
                }
            }
            out
        }
        _ => vec![],
    }
}

/// Extension agreement: every corpus term, translated into the real
/// algebra, reproduces the discrete evaluation exactly after rounding.
pub fn bc_agreement_suite(max_k: i64, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bc-agree", seed, max_k as usize);
    let cfg = EvalConfig::default();
    for (name, bc_term) in bc_corpus() {
        let bc_report = check_bc_tiers(&bc_term);
        if !bc_report.accepted {
            report.push(name, false, "fixture rejected by the tier checker");
            continue;
        }
        let sig = bc_report.signature.expect("accepted");
        let translated = translate(&bc_term);
        let checked = match CheckedTerm::new(&translated) {
            Ok(t) => t,
            Err(err) => {
                report.push(name, false, format!("translation rejected: {err}"));
                continue;
            }
        };
        if checked.signature() != sig {
            report.push(
                name,
                false,
                format!("signature changed: {} vs {}", checked.signature(), sig),
            );
            continue;
        }
        let mut mismatches = 0usize;
        let mut points = 0usize;
        let mut detail = String::new();
        for args in corpus_args(sig.arity() as usize, max_k) {
            let big: Vec<BigInt> = args.iter().map(|&v| BigInt::from(v)).collect();
            let want = bc_eval(&bc_term, &big)?;
            let reals: Vec<CauchyReal> = args.iter().map(|&v| CauchyReal::from_i64(v)).collect();
            points += 1;
            match eval_to_precision(&checked, &reals, 20, &cfg) {
                Ok(out) => {
                    let rounded = out.round_to_precision(0, Round::Nearest);
                    if rounded.to_bigint() != Some(want.clone()) {
                        mismatches += 1;
                        if detail.is_empty() {
                            detail = format!(
                                "first mismatch at {args:?}: {} vs {want}",
                                out.decimal_string()
                            );
                        }
                    }
                }
                Err(err) => {
                    mismatches += 1;
                    if detail.is_empty() {
                        detail = format!("evaluation failed at {args:?}: {err}");
                    }
                }
            }
        }
        if detail.is_empty() {
            detail = format!("{points} points agree");
        }
        report.push(name, mismatches == 0, detail);
    }

    // Step agreement: recursion values of the translated identity fixture
    // match the discrete unfolding at every k.
    let corpus = bc_corpus();
    let ident = &corpus.iter().find(|(name, _)| *name == "ident").expect("ident fixture").1;
    let translated = CheckedTerm::new(&translate(ident))?;
    let mut ctx = EvalContext::new(40);
    let params = PointBox::new(vec![], vec![]);
    let mut step_ok = true;
    for k in 0..=max_k {
        let enc = si_integer_values(&translated, &BigInt::from(k), &params, &mut ctx)?;
        let want = bc_eval(ident, &[BigInt::from(k)])?;
        if !enc.contains(&Dyadic::from_bigint(want)) {
            step_ok = false;
        }
    }
    report.push("per-step-agreement", step_ok, format!("identity fixture, k in [0, {max_k}]"));
    Ok(report)
}
