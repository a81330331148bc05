//! Outward-rounded interval arithmetic over dyadic endpoints.
//!
//! Every operation returns an interval that contains the exact image of its
//! inputs. Endpoints are rounded outward onto the `2^-w` grid for the working
//! precision `w`, which keeps mantissas from growing without bound during
//! long evaluations.
//!
//! The module also provides rigorous enclosures of `pi`, `sin(pi x)` and
//! `cos(pi x)`. `pi` comes from a Machin arctangent combination with an
//! explicit alternating-series tail bound. The sine and cosine enclosures
//! use the exact period-2 reduction of [`Dyadic::mod2_reduce`], symmetry
//! folds into `[0, 1/2]`, and an alternating Taylor series whose remainder
//! is bounded by the first omitted term. For interval inputs the range is
//! taken over monotone pieces: endpoint values plus the interior extrema.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::dyadic::{div_round, Dyadic, Round};
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Self { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn from_ints(lo: i64, hi: i64) -> Self {
        Self::new(Dyadic::from_i64(lo), Dyadic::from_i64(hi))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Result<Dyadic> {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Result<Dyadic> {
        self.lo.add(&self.hi)?.shift(-1)
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max_of(&other.lo);
        let hi = self.hi.min_of(&other.hi);
        if lo <= hi { Some(Self { lo, hi }) } else { None }
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self { lo: self.lo.min_of(&other.lo), hi: self.hi.max_of(&other.hi) }
    }

    /// Rounds the endpoints outward onto the `2^-w` grid.
    pub fn round_out(&self, w: u32) -> Self {
        Self {
            lo: self.lo.round_to_precision(w, Round::Down),
            hi: self.hi.round_to_precision(w, Round::Up),
        }
    }

    pub fn neg(&self) -> Self {
        Self { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &Self, w: u32) -> Result<Self> {
        let lo = self.lo.add(&other.lo)?;
        let hi = self.hi.add(&other.hi)?;
        Ok(Self { lo, hi }.round_out(w))
    }

    pub fn sub(&self, other: &Self, w: u32) -> Result<Self> {
        let lo = self.lo.sub(&other.hi)?;
        let hi = self.hi.sub(&other.lo)?;
        Ok(Self { lo, hi }.round_out(w))
    }

    pub fn mul(&self, other: &Self, w: u32) -> Result<Self> {
        let candidates = [
            self.lo.mul(&other.lo)?,
            self.lo.mul(&other.hi)?,
            self.hi.mul(&other.lo)?,
            self.hi.mul(&other.hi)?,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            lo = lo.min_of(c);
            hi = hi.max_of(c);
        }
        Ok(Self { lo, hi }.round_out(w))
    }

    /// Exact multiplication by a dyadic scalar, then outward rounding.
    pub fn scale(&self, c: &Dyadic, w: u32) -> Result<Self> {
        let a = self.lo.mul(c)?;
        let b = self.hi.mul(c)?;
        let (lo, hi) = if c.is_negative() { (b, a) } else { (a, b) };
        Ok(Self { lo, hi }.round_out(w))
    }

    /// Exact multiplication by `2^e`.
    pub fn shift(&self, e: i64) -> Result<Self> {
        Ok(Self { lo: self.lo.shift(e)?, hi: self.hi.shift(e)? })
    }

    /// Exact translation by a dyadic offset (no rounding).
    pub fn translate(&self, c: &Dyadic) -> Result<Self> {
        Ok(Self { lo: self.lo.add(c)?, hi: self.hi.add(c)? })
    }

    /// Intersects with `[-1, 1]`.
    fn clamp_unit(&self) -> Self {
        let one = Dyadic::one();
        let neg_one = one.neg();
        Self { lo: self.lo.max_of(&neg_one).min_of(&one), hi: self.hi.min_of(&one).max_of(&neg_one) }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `d / k` for a positive integer `k`, rounded onto the `2^-n` grid.
fn div_by_uint(d: &Dyadic, k: &BigInt, n: u32, mode: Round) -> Result<Dyadic> {
    let s = d.exponent();
    let (num, den) = if s >= 0 {
        if s > (1 << 26) {
            return Err(Error::Resource { what: "division scale".into() });
        }
        (d.mantissa() << s as u64, k.clone())
    } else {
        if -s > (1 << 26) {
            return Err(Error::Resource { what: "division scale".into() });
        }
        (d.mantissa().clone(), k << (-s) as u64)
    };
    div_round(&num, &den, n, mode)
}

/// Interval division by a positive integer with outward rounding.
fn div_interval_by_uint(x: &Interval, k: &BigInt, w: u32) -> Result<Interval> {
    Ok(Interval::new(
        div_by_uint(&x.lo, k, w, Round::Down)?,
        div_by_uint(&x.hi, k, w, Round::Up)?,
    ))
}

/// Enclosure of `arctan(1/m)` with width well below `2^-p`.
fn atan_inv(m: u64, p: u32) -> Result<Interval> {
    let mm = BigInt::from(m) * BigInt::from(m);
    let mut den_pow = BigInt::from(m);
    let mut sum = Interval::zero();
    let mut j: u64 = 0;
    let cutoff = Dyadic::pow2(-i64::from(p))?;
    loop {
        let denom = BigInt::from(2 * j + 1) * &den_pow;
        let lo = div_round(&BigInt::one(), &denom, p, Round::Down)?;
        let hi = div_round(&BigInt::one(), &denom, p, Round::Up)?;
        let term = Interval::new(lo, hi);
        if term.hi <= cutoff {
            // Alternating series with decreasing terms: the remainder is
            // bounded by the first omitted term.
            let widened = Interval::new(sum.lo.sub(&term.hi)?, sum.hi.add(&term.hi)?);
            return Ok(widened);
        }
        sum = if j.is_multiple_of(2) {
            Interval::new(sum.lo.add(&term.lo)?, sum.hi.add(&term.hi)?)
        } else {
            Interval::new(sum.lo.sub(&term.hi)?, sum.hi.sub(&term.lo)?)
        };
        j += 1;
        den_pow *= &mm;
        if j > u64::from(p) + 64 {
            return Err(Error::Resource { what: "arctan series did not converge".into() });
        }
    }
}

fn pi_cache() -> &'static Mutex<HashMap<u32, Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn machin_pi(w: u32) -> Result<Interval> {
    // pi = 16 arctan(1/5) - 4 arctan(1/239), evaluated with enough guard
    // bits that the final width stays below 2^-(w+2).
    let guard = 16 + 64 - u64::from(w + 16).leading_zeros();
    let p = w + guard;
    let a5 = atan_inv(5, p)?.shift(4)?;
    let a239 = atan_inv(239, p)?.shift(2)?;
    let raw = Interval::new(a5.lo.sub(&a239.hi)?, a5.hi.sub(&a239.lo)?);
    Ok(raw.round_out(w + 3))
}

/// Enclosure of pi with width at most `2^-w`, cached per precision.
/// Refinement is nested up to grid alignment: the result at `w` always lies
/// inside the result at `w-1` widened outward by one `2^-w` step.
pub fn pi_enclosure(w: u32) -> Result<Interval> {
    let mut cache = pi_cache().lock().expect("pi cache poisoned");
    if let Some(hit) = cache.get(&w) {
        return Ok(hit.clone());
    }
    let enclosure = machin_pi(w)?;
    cache.insert(w, enclosure.clone());
    Ok(enclosure)
}

/// Point enclosure of `sin(pi t)` for an exact dyadic `t`.
pub fn sin_pi_point(t: &Dyadic, w: u32) -> Result<Interval> {
    let wi = w + 10 + (64 - u64::from(w + 16).leading_zeros());
    // Period-2 reduction, then fold into [0, 1/2]:
    //   sin(pi (1+u)) = -sin(pi u),   sin(pi (1-u)) = sin(pi u).
    let (mut r, _) = t.mod2_reduce();
    let mut negate = false;
    if r >= Dyadic::one() {
        r = r.sub(&Dyadic::one())?;
        negate = true;
    }
    let half = Dyadic::pow2(-1)?;
    if r > half {
        r = Dyadic::one().sub(&r)?;
    }
    let u = pi_enclosure(wi)?.scale(&r, wi)?;
    let u2 = u.mul(&u, wi)?;
    // Alternating Taylor series: sum (-1)^j u^(2j+1) / (2j+1)!.
    let cutoff = Dyadic::pow2(-i64::from(w + 6))?;
    let mut term = u.clone();
    let mut sum = Interval::zero();
    let mut j: u64 = 0;
    loop {
        if term.hi <= cutoff {
            sum = Interval::new(sum.lo.sub(&term.hi)?, sum.hi.add(&term.hi)?);
            break;
        }
        sum = if j.is_multiple_of(2) {
            Interval::new(sum.lo.add(&term.lo)?, sum.hi.add(&term.hi)?)
        } else {
            Interval::new(sum.lo.sub(&term.hi)?, sum.hi.sub(&term.lo)?)
        };
        let divisor = BigInt::from((2 * j + 2) * (2 * j + 3));
        term = div_interval_by_uint(&term.mul(&u2, wi)?, &divisor, wi)?;
        j += 1;
        if j > u64::from(w) + 80 {
            return Err(Error::Resource { what: "sine series did not converge".into() });
        }
    }
    let signed = if negate { sum.neg() } else { sum };
    Ok(signed.clamp_unit().round_out(w))
}

/// Point enclosure of `cos(pi t)` via `cos(pi t) = sin(pi (1/2 - t))`.
pub fn cos_pi_point(t: &Dyadic, w: u32) -> Result<Interval> {
    let half = Dyadic::pow2(-1)?;
    sin_pi_point(&half.sub(t)?, w)
}

/// Reduces `x` by the exact period 2 so the lower endpoint lands in `[0, 2)`.
fn reduce_period2(x: &Interval) -> Result<(Dyadic, Dyadic)> {
    let (a, q) = x.lo.mod2_reduce();
    let two_q = Dyadic::from_bigint(q << 1u8);
    let b = x.hi.sub(&two_q)?;
    Ok((a, b))
}

fn unit_interval() -> Interval {
    Interval::new(Dyadic::one().neg(), Dyadic::one())
}

/// Sound enclosure of `{sin(pi t) : t in x}`.
///
/// After exact reduction the range over `[a, b]` is attained at the
/// endpoints or at interior critical points `t = k + 1/2`, so the enclosure
/// is the hull of two point evaluations plus exact `+-1` spikes.
pub fn sinpi_enclosure(x: &Interval, w: u32) -> Result<Interval> {
    if x.width()? >= Dyadic::from_i64(2) {
        return Ok(unit_interval());
    }
    let (a, b) = reduce_period2(x)?;
    let va = sin_pi_point(&a, w)?;
    let vb = if a == b { va.clone() } else { sin_pi_point(&b, w)? };
    let mut lo = va.lo.min_of(&vb.lo);
    let mut hi = va.hi.max_of(&vb.hi);
    // b < 4, so four critical points can occur: maxima at 1/2 and 5/2,
    // minima at 3/2 and 7/2.
    for (num, is_max) in [(1i64, true), (3, false), (5, true), (7, false)] {
        let c = Dyadic::new(BigInt::from(num), -1)?;
        if a <= c && c <= b {
            if is_max {
                hi = hi.max_of(&Dyadic::one());
            } else {
                lo = lo.min_of(&Dyadic::one().neg());
            }
        }
    }
    Ok(Interval::new(lo, hi).clamp_unit())
}

/// Sound enclosure of `{cos(pi t) : t in x}`.
pub fn cospi_enclosure(x: &Interval, w: u32) -> Result<Interval> {
    if x.width()? >= Dyadic::from_i64(2) {
        return Ok(unit_interval());
    }
    let (a, b) = reduce_period2(x)?;
    let va = cos_pi_point(&a, w)?;
    let vb = if a == b { va.clone() } else { cos_pi_point(&b, w)? };
    let mut lo = va.lo.min_of(&vb.lo);
    let mut hi = va.hi.max_of(&vb.hi);
    // Critical points of cos(pi t) are the integers: maxima at even
    // integers, minima at odd ones.
    for n in 0i64..=4 {
        let c = Dyadic::from_i64(n);
        if a <= c && c <= b {
            if n % 2 == 0 {
                hi = hi.max_of(&Dyadic::one());
            } else {
                lo = lo.min_of(&Dyadic::one().neg());
            }
        }
    }
    Ok(Interval::new(lo, hi).clamp_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e).unwrap()
    }

    #[test]
    fn degenerate_add_stays_exact() {
        let a = Interval::point(Dyadic::one());
        let b = Interval::point(d(2, 0));
        let s = a.add(&b, 30).unwrap();
        assert_eq!(s, Interval::point(d(3, 0)));
    }

    #[test]
    fn mul_sign_cases() {
        let x = Interval::from_ints(-1, 1);
        let p = x.mul(&x, 30).unwrap();
        assert!(p.contains_interval(&Interval::from_ints(-1, 1)));
        assert!(p.contains(&Dyadic::zero()));
    }

    #[test]
    fn sub_self_contains_zero() {
        let x = Interval::new(d(3, -2), d(9, -2));
        let s = x.sub(&x, 30).unwrap();
        assert!(s.contains(&Dyadic::zero()));
    }

    #[test]
    fn pi_width_and_coarse_bounds() {
        let p5 = pi_enclosure(5).unwrap();
        assert!(p5.width().unwrap() <= d(1, -5));
        let p2 = pi_enclosure(2).unwrap();
        let coarse = Interval::new(d(3, 0), d(7, -1)); // [3, 3.5]
        assert!(coarse.contains_interval(&p2));
    }

    #[test]
    fn pi_nested_refinement() {
        let mut prev = pi_enclosure(4).unwrap();
        for w in 5..=64 {
            let cur = pi_enclosure(w).unwrap();
            // Nested up to one step of the finer grid.
            let step = Dyadic::pow2(-i64::from(w)).unwrap();
            let widened = Interval::new(
                prev.lo().sub(&step).unwrap(),
                prev.hi().add(&step).unwrap(),
            );
            assert!(widened.contains_interval(&cur), "w={w}: {widened} does not contain {cur}");
            assert!(cur.width().unwrap() < prev.width().unwrap());
            prev = cur;
        }
    }

    #[test]
    fn sinpi_known_points() {
        let w = 40;
        let half = Interval::point(d(1, -1));
        assert!(sinpi_enclosure(&half, w).unwrap().contains(&Dyadic::one()));
        for k in -4i64..=4 {
            let at_k = Interval::point(d(k, 0));
            let enc = sinpi_enclosure(&at_k, w).unwrap();
            assert!(enc.contains(&Dyadic::zero()), "sin(pi*{k}) should enclose 0");
            assert!(enc.width().unwrap() <= d(1, -(w as i64 - 2)));
        }
        // sin(pi/6) = 1/2 : 1/6 is not dyadic, so box it tightly instead.
        let sixth_lo = div_round(&BigInt::one(), &BigInt::from(6), 48, Round::Down).unwrap();
        let sixth_hi = div_round(&BigInt::one(), &BigInt::from(6), 48, Round::Up).unwrap();
        let enc = sinpi_enclosure(&Interval::new(sixth_lo, sixth_hi), w).unwrap();
        assert!(enc.contains(&d(1, -1)));
    }

    #[test]
    fn cospi_known_points() {
        let w = 40;
        assert!(cospi_enclosure(&Interval::point(Dyadic::zero()), w)
            .unwrap()
            .contains(&Dyadic::one()));
        assert!(cospi_enclosure(&Interval::point(d(1, -1)), w)
            .unwrap()
            .contains(&Dyadic::zero()));
        let third_lo = div_round(&BigInt::one(), &BigInt::from(3), 48, Round::Down).unwrap();
        let third_hi = div_round(&BigInt::one(), &BigInt::from(3), 48, Round::Up).unwrap();
        let enc = cospi_enclosure(&Interval::new(third_lo, third_hi), w).unwrap();
        assert!(enc.contains(&d(1, -1)), "cos(pi/3) = 1/2 not enclosed: {enc}");
    }

    #[test]
    fn sinpi_periodicity_bit_exact() {
        let x = Interval::new(d(3, -3), d(5, -3));
        let shifted = x.translate(&d(2, 0)).unwrap();
        let a = sinpi_enclosure(&x, 36).unwrap();
        let b = sinpi_enclosure(&shifted, 36).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sinpi_wide_input_is_unit() {
        let x = Interval::from_ints(-10, 10);
        assert_eq!(sinpi_enclosure(&x, 20).unwrap(), unit_interval());
    }

    #[test]
    fn sinpi_extremum_inside() {
        // [0.25, 0.75] brackets the maximum at 1/2.
        let x = Interval::new(d(1, -2), d(3, -2));
        let enc = sinpi_enclosure(&x, 36).unwrap();
        assert_eq!(enc.hi, Dyadic::one());
        assert!(enc.lo < d(3, -2).mul(&d(3, 0)).unwrap()); // lo < ~0.7071
    }

    #[test]
    fn point_width_scales_with_precision() {
        let t = d(7, -4);
        for w in [8u32, 16, 32, 64, 128] {
            let enc = sin_pi_point(&t, w).unwrap();
            assert!(
                enc.width().unwrap() <= Dyadic::pow2(-i64::from(w) + 2).unwrap(),
                "width at w={w} too large: {}",
                enc.width().unwrap()
            );
        }
    }

    #[test]
    fn interval_display_parse() {
        let x = Interval::new(d(-3, -1), d(9, -2));
        assert_eq!(x.to_string(), "[-3*2^-1, 9*2^-2]");
        assert_eq!(Dyadic::from_str("-3*2^-1").unwrap(), d(-3, -1));
    }
}
