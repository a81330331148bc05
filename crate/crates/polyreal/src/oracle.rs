//! Floating-point reference integrators.
//!
//! These are deliberately *not* built on the interval machinery: they
//! integrate the defining formulas numerically in `f64` and serve as
//! independent cross-checks for the closed forms the evaluator uses.
//! Accuracy is far below the `1e-6` comparison tolerances used by the
//! verification suites.

/// `max(0, (pi/2) sin(pi x))` in `f64`.
pub fn parity_f64(x: f64) -> f64 {
    let v = std::f64::consts::FRAC_PI_2 * (std::f64::consts::PI * x).sin();
    v.max(0.0)
}

/// Cumulative integral of the parity bump, tabulated with Simpson panels
/// aligned to the integer grid (the integrand has corners exactly at the
/// integers, so panels stay smooth inside).
pub struct ParityIntegral {
    lo: f64,
    step: f64,
    /// `table[i]` = integral of parity from `lo` to `lo + i*step`.
    table: Vec<f64>,
}

/// Panels per unit interval.
const PANELS_PER_UNIT: usize = 1024;

impl ParityIntegral {
    /// Tabulates over `[lo, hi]` (integers, `lo < hi`).
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo < hi);
        let step = 1.0 / PANELS_PER_UNIT as f64;
        let panels = ((hi - lo) as usize) * PANELS_PER_UNIT;
        let mut table = Vec::with_capacity(panels + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for i in 0..panels {
            let a = lo as f64 + i as f64 * step;
            acc += simpson(a, a + step);
            table.push(acc);
        }
        Self { lo: lo as f64, step, table }
    }

    /// Integral of parity from `lo` to `x`.
    fn cumulative(&self, x: f64) -> f64 {
        let t = (x - self.lo) / self.step;
        assert!(t >= 0.0 && t <= (self.table.len() - 1) as f64, "x = {x} outside table");
        let i = (t.floor() as usize).min(self.table.len() - 2);
        let a = self.lo + i as f64 * self.step;
        self.table[i] + simpson(a, x.max(a))
    }

    /// The continuous halving by its definition: integral of parity from 0
    /// to `x - 1`.
    pub fn pred(&self, x: f64) -> f64 {
        self.cumulative(x - 1.0) - self.cumulative(0.0)
    }
}

fn simpson(a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (parity_f64(a) + 4.0 * parity_f64(m) + parity_f64(b))
}

/// A recursion fixture presented as plain closures for the reference
/// integrator: base value and the two step functions `(x, previous) -> value`.
pub struct OdeFixture {
    pub name: &'static str,
    pub base: f64,
    pub h0: fn(f64, f64) -> f64,
    pub h1: fn(f64, f64) -> f64,
}

/// The worked fixtures mirroring `builders::nat_id`, `builders::ones`,
/// `builders::popcount_plus_3`.
pub fn ode_fixtures() -> Vec<OdeFixture> {
    vec![
        OdeFixture { name: "nat-id", base: 0.0, h0: |_, v| 2.0 * v, h1: |_, v| 2.0 * v + 1.0 },
        OdeFixture { name: "ones", base: 0.0, h0: |_, v| 2.0 * v + 1.0, h1: |_, v| 2.0 * v + 1.0 },
        OdeFixture { name: "popcount-plus-3", base: 3.0, h0: |_, v| v, h1: |_, v| v + 1.0 },
    ]
}

/// Dense forward solution of the recursion ODE
///
/// ```text
/// f(0) = base
/// f'(x) = parity(x)   [h1(p(x), f(p(x)))  - f(2 p(x))]
///       + parity(x-1) [h0(p'(x), f(p'(x))) - f(2 p'(x) - 1)]
/// ```
///
/// where `p` comes from the quadrature table and `p'(x) = p(x-1) + 1`.
/// Because the right side never reads the solution at the current point
/// (only strictly earlier history), each step is a plain Simpson update.
pub struct OdeSolution {
    step: f64,
    values: Vec<f64>,
}

impl OdeSolution {
    pub fn solve(fixture: &OdeFixture, x_max: f64) -> Self {
        let steps_per_unit = 1024usize;
        let step = 1.0 / steps_per_unit as f64;
        let n = (x_max / step).ceil() as usize + 1;
        let parity_table = ParityIntegral::new(-2, x_max.ceil() as i64 + 2);
        let mut values = Vec::with_capacity(n + 1);
        values.push(fixture.base);
        for i in 0..n {
            let x = i as f64 * step;
            let sol = OdeView { step, values: &values };
            let f = |t: f64| rhs(fixture, &parity_table, &sol, t);
            let a = f(x);
            let m = f(x + 0.5 * step);
            let b = f(x + step);
            let delta = step / 6.0 * (a + 4.0 * m + b);
            let last = *values.last().expect("nonempty");
            values.push(last + delta);
        }
        Self { step, values }
    }

    /// Linear interpolation of the dense solution.
    pub fn at(&self, x: f64) -> f64 {
        OdeView { step: self.step, values: &self.values }.at(x)
    }
}

struct OdeView<'a> {
    step: f64,
    values: &'a [f64],
}

impl OdeView<'_> {
    fn at(&self, x: f64) -> f64 {
        assert!(x >= 0.0, "history read at negative {x}");
        let t = x / self.step;
        let i = t.floor() as usize;
        if i + 1 >= self.values.len() {
            return *self.values.last().expect("nonempty");
        }
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

fn rhs(fixture: &OdeFixture, parity_table: &ParityIntegral, sol: &OdeView<'_>, x: f64) -> f64 {
    let mut total = 0.0;
    let w1 = parity_f64(x);
    if w1 > 0.0 {
        let p = parity_table.pred(x).max(0.0);
        let feedback = (fixture.h1)(p, sol.at(p)) - sol.at(2.0 * p);
        total += w1 * feedback;
    }
    let w0 = parity_f64(x - 1.0);
    if w0 > 0.0 {
        let pp = (parity_table.pred(x - 1.0) + 1.0).max(0.0);
        let feedback = (fixture.h0)(pp, sol.at(pp)) - sol.at((2.0 * pp - 1.0).max(0.0));
        total += w0 * feedback;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_has_unit_mass_per_even_interval() {
        let table = ParityIntegral::new(-6, 8);
        for n in -3i64..=3 {
            let mass = table.cumulative(2.0 * n as f64 + 1.0) - table.cumulative(2.0 * n as f64);
            assert!((mass - 1.0).abs() < 1e-9, "mass over [{}, {}] = {mass}", 2 * n, 2 * n + 1);
        }
    }

    #[test]
    fn quadrature_pred_matches_floor_halving_at_integers() {
        let table = ParityIntegral::new(-10, 10);
        for k in -8i64..=8 {
            let want = (k as f64 / 2.0).floor();
            let got = table.pred(k as f64);
            assert!((got - want).abs() < 1e-8, "p({k}) = {got}, want {want}");
        }
    }

    #[test]
    fn ode_solution_hits_integer_recursion_values() {
        let fixtures = ode_fixtures();
        let sol = OdeSolution::solve(&fixtures[0], 9.0);
        for k in 0..=8 {
            let got = sol.at(k as f64);
            assert!((got - k as f64).abs() < 1e-6, "nat-id({k}) = {got}");
        }
        let sol = OdeSolution::solve(&fixtures[1], 9.0);
        for (k, want) in [(0.0, 0.0), (1.0, 1.0), (2.0, 3.0), (3.0, 3.0), (4.0, 7.0), (7.0, 7.0), (8.0, 15.0)] {
            let got = sol.at(k);
            assert!((got - want).abs() < 1e-6, "ones({k}) = {got}, want {want}");
        }
    }
}
