//! End-to-end acceptance suite. Each test prints one pass/fail line; run
//! with `cargo test -p polyreal --test acceptance -- --nocapture` to see
//! them all.

use num_bigint::BigInt;

use polyreal::builders;
use polyreal::creal::CauchyReal;
use polyreal::dyadic::Dyadic;
use polyreal::error::Result;
use polyreal::eval::EvalConfig;
use polyreal::harness::{
    bench_scaling, check_definability, check_t_definability, check_t_smooth,
    eval2_from_exact, floor_scaled_identity_approx, integer_approx_machine, lipschitz_machine,
    modulus_machine, scaling_machine, GridFn, GridSpec, RefFunction, SharpT,
};
use polyreal::suites;
use polyreal::term::{Signature, Term};
use polyreal::tier::{check_tiers, CheckedTerm};

fn report(number: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {number} ({name}): {verdict} - {detail}");
    assert!(pass, "acceptance {number} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_integer_preservation() {
    let suite = suites::integers_suite(200, 20260808).expect("suite runs");
    let detail = suite
        .cases
        .iter()
        .map(|c| c.detail.as_str())
        .next_back()
        .unwrap_or("")
        .to_string();
    report(1, "integer preservation", suite.pass, &detail);
}

#[test]
fn criterion_2_bc_extension() {
    let suite = suites::bc_agreement_suite(64, 20260808).expect("suite runs");
    let fixtures = suite.cases.len();
    let failing: Vec<&str> =
        suite.cases.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    report(
        2,
        "discrete extension agreement",
        suite.pass && fixtures >= 20,
        &format!("{fixtures} fixtures, failing: {failing:?}"),
    );
}

#[test]
fn criterion_3_halving_closed_form() {
    let suite = suites::closed_form_suite(1000, 20260808).expect("suite runs");
    let relevant: Vec<_> = suite
        .cases
        .iter()
        .filter(|c| c.name == "halving-vs-quadrature" || c.name == "unit-mass-per-even-interval")
        .collect();
    let pass = relevant.iter().all(|c| c.pass) && relevant.len() == 2;
    let detail =
        relevant.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join("; ");
    report(3, "halving vs quadrature", pass, &detail);
}

#[test]
fn criterion_4_recursion_closed_form_vs_ode() {
    let suite = suites::closed_form_suite(50, 20260808).expect("suite runs");
    let relevant: Vec<_> =
        suite.cases.iter().filter(|c| c.name.starts_with("ode-")).collect();
    let pass = relevant.iter().all(|c| c.pass) && relevant.len() == 3;
    let detail =
        relevant.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join("; ");
    report(4, "interpolation vs ODE reference", pass, &detail);
}

#[test]
fn criterion_5_peacefulness() {
    let suite = suites::peaceful_suite(1000, 20260808).expect("suite runs");
    let detail = suite
        .cases
        .iter()
        .map(|c| format!("{}: {}", c.name, if c.pass { "ok" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("; ");
    report(5, "peacefulness", suite.pass, &detail);
}

/// Test points shared by the machine criterion: at least ten, two
/// representatives each (exact/truncated for dyadics, two division modes
/// for rationals).
fn machine_points() -> Vec<(String, MachinePoint)> {
    let dyadics: Vec<(i64, i64)> = vec![
        (0, 0),
        (1, -1),
        (7, -2),
        (-9, -2),
        (13, -2),
        (-1, -3),
        (5, 0),
        (3, -1),
        (-4, 0),
        (1, -4),
    ];
    let mut points: Vec<(String, MachinePoint)> = dyadics
        .into_iter()
        .map(|(m, e)| {
            let d = Dyadic::new(BigInt::from(m), e).unwrap();
            (d.decimal_string(), MachinePoint::Dyadic(d))
        })
        .collect();
    points.push(("1/3".into(), MachinePoint::Rational(1, 3)));
    points.push(("-2/7".into(), MachinePoint::Rational(-2, 7)));
    // Length-boundary point: just below a power of two.
    let boundary = Dyadic::from_i64(2).sub(&Dyadic::pow2(-12).unwrap()).unwrap();
    points.push((boundary.decimal_string(), MachinePoint::Dyadic(boundary)));
    points
}

enum MachinePoint {
    Dyadic(Dyadic),
    Rational(i64, i64),
}

impl MachinePoint {
    fn representatives(&self) -> Vec<CauchyReal> {
        match self {
            Self::Dyadic(d) => vec![
                CauchyReal::from_dyadic(d.clone()),
                CauchyReal::from_dyadic_truncated(d.clone()),
            ],
            Self::Rational(p, q) => vec![
                CauchyReal::from_rational(BigInt::from(*p), BigInt::from(*q)),
                CauchyReal::from_rational_floor(BigInt::from(*p), BigInt::from(*q)),
            ],
        }
    }

    /// `|out - f(x)| <= bound`, decided exactly. `f` maps the rational
    /// `(p, q)` of the point to the exact expected rational.
    fn check(&self, out: &Dyadic, bound: &Dyadic, f: impl Fn(i64, i64) -> (BigInt, BigInt)) -> bool {
        let (p, q) = match self {
            Self::Dyadic(d) => {
                // d = m 2^e as a rational.
                let e = d.exponent();
                if e >= 0 {
                    (d.mantissa() << e as u64, BigInt::from(1))
                } else {
                    (d.mantissa().clone(), BigInt::from(1) << (-e) as u64)
                }
            }
            Self::Rational(p, q) => (BigInt::from(*p), BigInt::from(*q)),
        };
        // Silly but adequate: promote through i64-sized rationals only.
        let (ep, eq) = f(
            i64::try_from(&p).expect("small point"),
            i64::try_from(&q).expect("small point"),
        );
        // |out - ep/eq| <= bound  <=>  |eq*out - ep| <= eq*bound (eq > 0).
        let eq_d = Dyadic::from_bigint(eq.clone());
        let lhs = out.mul(&eq_d).unwrap().sub(&Dyadic::from_bigint(ep)).unwrap().abs();
        let rhs = bound.mul(&eq_d).unwrap();
        lhs <= rhs
    }
}

#[test]
fn criterion_6_machines() {
    let precisions = [5u32, 10, 20];
    let points = machine_points();
    let mut checked = 0usize;
    let mut failures: Vec<String> = Vec::new();

    // Reconstruction from modulus + approximation function, f = x^2.
    let modulus = |k: u32, n: u32| k + n + 1;
    let psi = |d: &Dyadic, j: u32| -> Result<Dyadic> {
        Ok(d.mul(d)?.round_to_precision(j + 2, polyreal::Round::Nearest))
    };
    for (label, point) in &points {
        for rep in point.representatives() {
            for n in precisions {
                let out = modulus_machine(&modulus, &psi, &rep, n).unwrap();
                let bound = Dyadic::pow2(-i64::from(n)).unwrap();
                checked += 1;
                if !point.check(&out, &bound, |p, q| (BigInt::from(p * p), BigInt::from(q * q))) {
                    failures.push(format!("modulus at {label}, n={n}"));
                }
            }
        }
    }

    // Reconstruction from the scaled product, f = identity; both the exact
    // g = yx and the offset g = yx + 1 satisfy the unit bound. The product
    // scales the x-query error by y, so query deep enough to honor the
    // evaluator contract.
    let scaled_product = |offset: bool| {
        move |x: &CauchyReal, y: &CauchyReal, n: u32| -> Result<Dyadic> {
            let y = match y.exact_value() {
                Some(d) => d.clone(),
                None => y.query(n + 2)?,
            };
            let bits = u32::try_from(y.int_bits()).unwrap_or(u32::MAX >> 2);
            let fx = x.query(n + bits + 1)?;
            let prod = fx.mul(&y)?;
            if offset {
                prod.add(&Dyadic::one())
            } else {
                Ok(prod)
            }
        }
    };
    let g_exact = scaled_product(false);
    let g_offset = scaled_product(true);
    for (label, point) in &points {
        for rep in point.representatives() {
            for n in precisions {
                let gs: [(&str, &polyreal::harness::RealEval2); 2] = [("exact", &g_exact), ("offset", &g_offset)];
                for (gname, g) in gs {
                    let out = scaling_machine(g, &rep, n).unwrap();
                    let bound = Dyadic::pow2(-i64::from(n)).unwrap();
                    checked += 1;
                    if !point.check(&out, &bound, |p, q| (BigInt::from(p), BigInt::from(q))) {
                        failures.push(format!("scaling/{gname} at {label}, n={n}"));
                    }
                }
            }
        }
    }

    // Lipschitz reconstruction, f = x/2 through g(x, y) = x/2, a = 0.
    let g_half = eval2_from_exact(|x, _, _| x.shift(-1));
    for (label, point) in &points {
        for rep in point.representatives() {
            for n in precisions {
                let out = lipschitz_machine(&g_half, 0, &rep, n).unwrap();
                let bound = Dyadic::pow2(-i64::from(n)).unwrap();
                checked += 1;
                if !point.check(&out, &bound, |p, q| (BigInt::from(p), BigInt::from(2 * q))) {
                    failures.push(format!("lipschitz at {label}, n={n}"));
                }
            }
        }
    }

    // Integer-approximation reconstruction, f = identity, degree 1, with
    // the stated bound (M + 2) 2^-(n-1) for the declared M = 4.
    let h = |a: &BigInt, b: &BigInt, c: &BigInt| floor_scaled_identity_approx(a, b, c);
    for (label, point) in &points {
        for rep in point.representatives() {
            for n in precisions {
                let out = integer_approx_machine(&h, 1, &rep, n).unwrap();
                let bound = Dyadic::from_i64(6).shift(-(i64::from(n) - 1)).unwrap();
                checked += 1;
                if !point.check(&out, &bound, |p, q| (BigInt::from(p), BigInt::from(q))) {
                    failures.push(format!("intapprox at {label}, n={n}"));
                }
            }
        }
    }

    report(
        6,
        "reconstruction machines",
        failures.is_empty() && points.len() >= 10,
        &format!("{checked} machine runs over {} points, failures: {failures:?}", points.len()),
    );
}

#[test]
fn criterion_7_definability_suite() {
    let f = RefFunction::identity();
    let grid = GridSpec::default();

    let first_proj = GridFn::from_term(CheckedTerm::new(&Term::proj(2, 0, 1)).unwrap());
    let def = check_definability(&f, &first_proj, &Dyadic::from_i64(3), &grid, 20).unwrap();

    let scaled = GridFn::from_term(CheckedTerm::new(&builders::scaled_identity()).unwrap());
    let tdef =
        check_t_definability(&f, &scaled, &SharpT::degree(1), &Dyadic::from_i64(2), &grid, 20)
            .unwrap();

    let smooth = check_t_smooth(&f, &SharpT::degree(1), 4, &grid, 20).unwrap();

    // The constant-0 counterexamples must fail on grids that expose them.
    let zero2 = Term::comp(Term::Sub, vec![], vec![Term::proj(2, 0, 1), Term::proj(2, 0, 1)]);
    let zero2 = GridFn::from_term(CheckedTerm::new(&zero2).unwrap());
    let zero_def = check_definability(&f, &zero2, &Dyadic::from_i64(3), &grid, 20).unwrap();

    let zero3 = Term::comp(Term::Sub, vec![], vec![Term::proj(3, 0, 1), Term::proj(3, 0, 1)]);
    let zero3 = GridFn::from_term(CheckedTerm::new(&zero3).unwrap());
    let wide = GridSpec { x_range: (-64, 64), ..grid.clone() };
    let zero_tdef =
        check_t_definability(&f, &zero3, &SharpT::degree(1), &Dyadic::from_i64(2), &wide, 20)
            .unwrap();

    let pass = def.pass
        && def.violation_count == 0
        && def.points_checked > 0
        && tdef.pass
        && tdef.violation_count == 0
        && tdef.points_checked > 0
        && tdef.points_excluded > 0
        && smooth.pass
        && !zero_def.pass
        && !zero_tdef.pass;
    report(
        7,
        "definability suite",
        pass,
        &format!(
            "definability {} pts; t-definability {} pts ({} excluded), max residual {:?}; \
             smooth {} pts; counterexamples fail: {}, {}",
            def.points_checked,
            tdef.points_checked,
            tdef.points_excluded,
            tdef.max_residual,
            smooth.points_checked,
            !zero_def.pass,
            !zero_tdef.pass
        ),
    );
}

#[test]
fn criterion_8_precision_scaling() {
    let term = CheckedTerm::new(&builders::nat_id()).unwrap();
    let make = || vec![CauchyReal::from_dyadic(Dyadic::new(BigInt::from(1), -1).unwrap())];
    let bench = bench_scaling(
        &term,
        make,
        &[8, 16, 32, 64, 128, 256],
        5,
        3.0,
        &EvalConfig::default(),
    )
    .unwrap();
    report(
        8,
        "precision scaling",
        bench.polynomial_trend,
        &format!(
            "log-log slope {:.3} over n in 8..=256 (limit 3.0), times {:?} ns",
            bench.log_log_slope,
            bench.precisions.iter().map(|e| e.median_nanos).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_9_tier_checker() {
    // The violating core: a recursion-built term with a safe argument,
    // placed in a normal position.
    let bad_core = || {
        let with_safe =
            Term::si(Term::proj(0, 1, 1), Term::proj(1, 2, 3), Term::proj(1, 2, 3));
        Term::comp(Term::proj(1, 0, 1), vec![with_safe], vec![])
    };
    let good_core = builders::nat_id;
    let wrap = |t: Term| Term::comp(Term::Add, vec![], vec![t, Term::Zero]);

    let mut pass = true;
    let mut details = Vec::new();
    for depth in 0..10u32 {
        let mut bad = bad_core();
        let mut good = good_core();
        for _ in 0..depth {
            bad = wrap(bad);
            good = wrap(good);
        }
        let bad_report = check_tiers(&bad);
        // The violation sits at one `safes[0]` hop per wrapper, then the
        // normal slot of the core composition.
        let expected_path: Vec<u32> = std::iter::repeat_n(1, depth as usize + 1).collect();
        let located = bad_report
            .violations
            .iter()
            .any(|v| v.rule == "safe-into-normal" && v.path == expected_path);
        if bad_report.accepted || !located {
            pass = false;
            details.push(format!(
                "depth {depth}: accepted={} violations={:?}",
                bad_report.accepted, bad_report.violations
            ));
        }
        let good_report = check_tiers(&good);
        if !good_report.accepted || good_report.signature != Some(Signature::new(1, 0)) {
            pass = false;
            details.push(format!("depth {depth}: sibling rejected"));
        }
    }
    report(
        9,
        "tier checker",
        pass,
        &format!("10 rejected with exact paths, 10 siblings accepted {details:?}"),
    );
}
