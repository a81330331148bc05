//! Exact arbitrary-precision dyadic arithmetic.
//!
//! A [`Dyadic`] is `mantissa * 2^exponent` with a canonical representation:
//! the mantissa is odd (or zero, in which case the exponent is zero too).
//! Canonical form makes structural equality coincide with value equality,
//! so dyadics work as memo keys and produce deterministic output.
//!
//! All ring operations are exact. Rounding only ever happens through
//! [`Dyadic::round_to_precision`] and the explicit division helpers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicI64, Ordering as AtomicOrdering};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default bound on the absolute value of the exponent.
pub const DEFAULT_EXPONENT_BOUND: i64 = 1 << 31;

/// Aligning two dyadics whose exponents differ by more than this many bits
/// is treated as a resource error instead of allocating a huge mantissa.
const MAX_ALIGN_SHIFT: i64 = 1 << 26;

/// Exact decimal rendering gives up beyond this many fractional bits.
const DECIMAL_RENDER_CAP: i64 = 1 << 14;

static EXPONENT_BOUND: AtomicI64 = AtomicI64::new(DEFAULT_EXPONENT_BOUND);

/// Overrides the global exponent bound. Smaller bounds make evaluation loops
/// fail earlier; the default is `2^31`.
pub fn set_exponent_bound(bound: i64) {
    EXPONENT_BOUND.store(bound.abs(), AtomicOrdering::Relaxed);
}

fn exponent_bound() -> i64 {
    EXPONENT_BOUND.load(AtomicOrdering::Relaxed)
}

/// Rounding directions for [`Dyadic::round_to_precision`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    /// To the closest grid point; ties go up.
    Nearest,
}

/// An exact dyadic rational `mantissa * 2^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    /// Builds a canonical dyadic from a raw mantissa/exponent pair.
    pub fn new(mantissa: BigInt, exponent: i64) -> Result<Self> {
        if mantissa.is_zero() {
            return Ok(Self { mantissa, exponent: 0 });
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        let tz_i64 = i64::try_from(tz).map_err(|_| Error::Resource {
            what: "mantissa trailing zero count".into(),
        })?;
        let exponent = exponent
            .checked_add(tz_i64)
            .ok_or(Error::ExponentOverflow { exponent })?;
        let bound = exponent_bound();
        if exponent.abs() > bound {
            return Err(Error::ExponentOverflow { exponent });
        }
        Ok(Self { mantissa: mantissa >> tz, exponent })
    }

    pub fn zero() -> Self {
        Self { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Self { mantissa: BigInt::one(), exponent: 0 }
    }

    /// `1 * 2^e`.
    pub fn pow2(e: i64) -> Result<Self> {
        Self::new(BigInt::one(), e)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        // Integers never overflow the exponent bound.
        Self::new(n, 0).expect("integer dyadic")
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    /// True when the value is an integer.
    pub fn is_integer(&self) -> bool {
        self.exponent >= 0
    }

    /// Exact integer value, if the dyadic is an integer.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(&self.mantissa << u64::try_from(self.exponent).ok()?)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    pub fn neg(&self) -> Self {
        Self { mantissa: -&self.mantissa, exponent: self.exponent }
    }

    fn align(&self, other: &Self) -> Result<(BigInt, BigInt, i64)> {
        if self.is_zero() {
            return Ok((BigInt::zero(), other.mantissa.clone(), other.exponent));
        }
        if other.is_zero() {
            return Ok((self.mantissa.clone(), BigInt::zero(), self.exponent));
        }
        let e = self.exponent.min(other.exponent);
        let sa = self.exponent - e;
        let sb = other.exponent - e;
        if sa > MAX_ALIGN_SHIFT || sb > MAX_ALIGN_SHIFT {
            return Err(Error::Resource { what: format!("exponent spread {} bits", sa.max(sb)) });
        }
        Ok((&self.mantissa << sa as u64, &other.mantissa << sb as u64, e))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b, e) = self.align(other)?;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let (a, b, e) = self.align(other)?;
        Self::new(a - b, e)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let exponent = self
            .exponent
            .checked_add(other.exponent)
            .ok_or(Error::ExponentOverflow { exponent: self.exponent })?;
        Self::new(&self.mantissa * &other.mantissa, exponent)
    }

    /// Exact multiplication by `2^e`.
    pub fn shift(&self, e: i64) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let exponent = self
            .exponent
            .checked_add(e)
            .ok_or(Error::ExponentOverflow { exponent: self.exponent })?;
        Self::new(self.mantissa.clone(), exponent)
    }

    /// Rounds onto the grid of multiples of `2^-n`.
    pub fn round_to_precision(&self, n: u32, mode: Round) -> Self {
        let shift = self.exponent + i64::from(n);
        if self.is_zero() || shift >= 0 {
            return self.clone();
        }
        let s = u64::try_from(-shift).expect("positive shift");
        let k = match mode {
            Round::Down => floor_shr(&self.mantissa, s),
            Round::Up => ceil_shr(&self.mantissa, s),
            Round::Nearest => nearest_shr(&self.mantissa, s),
        };
        Self::new(k, -i64::from(n)).expect("rounding shrinks the exponent")
    }

    /// `(floor(x), ceil(x))` as exact integers.
    pub fn floor_ceil(&self) -> (BigInt, BigInt) {
        if self.exponent >= 0 {
            let n = self.to_bigint().expect("integer");
            return (n.clone(), n);
        }
        let s = u64::try_from(-self.exponent).expect("positive shift");
        (floor_shr(&self.mantissa, s), ceil_shr(&self.mantissa, s))
    }

    pub fn floor(&self) -> BigInt {
        self.floor_ceil().0
    }

    /// Writes `x = 2q + r` with `r` in `[0, 2)`. Exact: no rounding occurs.
    pub fn mod2_reduce(&self) -> (Self, BigInt) {
        let half = Self { mantissa: self.mantissa.clone(), exponent: self.exponent - 1 };
        let q = half.floor();
        let two_q = Self::from_bigint(&q << 1u8);
        let r = self.sub(&two_q).expect("subtracting an even integer is exact");
        (r, q)
    }

    pub fn min_of(&self, other: &Self) -> Self {
        if self <= other { self.clone() } else { other.clone() }
    }

    pub fn max_of(&self, other: &Self) -> Self {
        if self >= other { self.clone() } else { other.clone() }
    }

    /// Approximate conversion for reporting and reference oracles only.
    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
        let e = self.exponent.clamp(-4000, 4000) as i32;
        m * 2f64.powi(e)
    }

    /// Number of bits of the integer part of `|x|`; 0 for `|x| < 1`.
    pub fn int_bits(&self) -> u64 {
        let floor_abs = self.abs().floor();
        floor_abs.bits()
    }

    /// Exact decimal rendering. Falls back to the `m*2^e` form when the
    /// fractional part is too long to expand.
    pub fn decimal_string(&self) -> String {
        if self.exponent >= 0 {
            match self.to_bigint() {
                Some(n) => n.to_string(),
                None => self.to_string(),
            }
        } else {
            let s = -self.exponent;
            if s > DECIMAL_RENDER_CAP {
                return self.to_string();
            }
            let s = s as u64;
            let sign = if self.is_negative() { "-" } else { "" };
            let scaled = self.mantissa.abs() * BigInt::from(5u8).pow(s as u32);
            let mut digits = scaled.to_string();
            let s = s as usize;
            if digits.len() <= s {
                digits = format!("{}{}", "0".repeat(s - digits.len() + 1), digits);
            }
            let split = digits.len() - s;
            let (int_part, frac_part) = digits.split_at(split);
            let frac_part = frac_part.trim_end_matches('0');
            if frac_part.is_empty() {
                format!("{sign}{int_part}")
            } else {
                format!("{sign}{int_part}.{frac_part}")
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = sign_i8(&self.mantissa);
        let sb = sign_i8(&other.mantissa);
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign. Compare magnitudes via the position of the
        // highest set bit before falling back to an aligned comparison.
        let ha = self.mantissa.bits() as i64 + self.exponent;
        let hb = other.mantissa.bits() as i64 + other.exponent;
        let mag = if ha != hb {
            ha.cmp(&hb)
        } else {
            // Exponent difference is bounded by the mantissa width here.
            let shift = self.exponent - other.exponent;
            if shift >= 0 {
                (self.mantissa.abs() << shift as u64).cmp(&other.mantissa.abs())
            } else {
                self.mantissa.abs().cmp(&(other.mantissa.abs() << (-shift) as u64))
            }
        };
        if sa > 0 { mag } else { mag.reverse() }
    }
}

fn sign_i8(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// `floor(m / 2^s)` for any sign of `m`.
pub(crate) fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if m.is_zero() || s == 0 {
        return m.clone();
    }
    if s > m.bits() {
        return if m.sign() == Sign::Minus { BigInt::from(-1) } else { BigInt::zero() };
    }
    if m.sign() == Sign::Minus {
        let mag = (-m) + ((BigInt::one() << s) - 1u8);
        -(mag >> s)
    } else {
        m >> s
    }
}

/// `ceil(m / 2^s)` for any sign of `m`.
pub(crate) fn ceil_shr(m: &BigInt, s: u64) -> BigInt {
    -floor_shr(&-m, s)
}

/// `round(m / 2^s)` to nearest, ties toward positive infinity.
pub(crate) fn nearest_shr(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if s >= m.bits() + 2 {
        return BigInt::zero();
    }
    floor_shr(&(m + (BigInt::one() << (s - 1))), s)
}

/// `num / den` rounded onto the `2^-n` grid in the requested direction.
/// `den` must be nonzero.
pub fn div_round(num: &BigInt, den: &BigInt, n: u32, mode: Round) -> Result<Dyadic> {
    assert!(!den.is_zero(), "division by zero");
    let (num, den) = if den.sign() == Sign::Minus { (-num, -den) } else { (num.clone(), den.clone()) };
    let scaled = num << u64::from(n);
    let (q, r) = num_integer::Integer::div_mod_floor(&scaled, &den);
    let k = match mode {
        Round::Down => q,
        Round::Up => {
            if r.is_zero() { q } else { q + 1 }
        }
        Round::Nearest => {
            // Compare the remainder against den/2; ties go up.
            if (&r << 1u8) >= den { q + 1 } else { q }
        }
    };
    Dyadic::new(k, -i64::from(n))
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `m*2^e` and plain integers. Exact round-trip with `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |msg: &str| Error::Parse { msg: msg.into(), line: 1, col: 1 };
        match s.split_once("*2^") {
            Some((m, e)) => {
                let mantissa =
                    BigInt::from_str(m.trim()).map_err(|_| parse_err("bad mantissa"))?;
                let exponent =
                    i64::from_str(e.trim()).map_err(|_| parse_err("bad exponent"))?;
                Self::new(mantissa, exponent)
            }
            None => {
                let mantissa =
                    BigInt::from_str(s.trim()).map_err(|_| parse_err("bad integer literal"))?;
                Ok(Self::from_bigint(mantissa))
            }
        }
    }
}
