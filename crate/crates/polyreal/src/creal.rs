//! Query-based computable reals.
//!
//! A [`CauchyReal`] answers precision queries: `query(x, n)` returns a dyadic
//! within `2^-n` of the represented value. This is the oracle interface the
//! evaluation machines consume. Queries and the maximum precision seen are
//! recorded so complexity measurements can read them back.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{div_round, Dyadic, Round};
use crate::error::{Error, Result};
use crate::interval::{pi_enclosure, Interval};

/// Precision queries beyond this many bits fail with a resource error.
const MAX_QUERY_PRECISION: u32 = 1 << 24;

type Source = dyn Fn(u32) -> Result<Dyadic> + Send + Sync;

struct Inner {
    source: Box<Source>,
    /// Set when the represented value is known to be exactly this dyadic.
    exact: Option<Dyadic>,
    cache: Mutex<CacheState>,
}

#[derive(Default)]
struct CacheState {
    best: Option<(u32, Dyadic)>,
    queries: u64,
    max_precision: u32,
}

/// A real number presented as a source of dyadic approximations converging
/// at binary rate: `|x - approx(n)| <= 2^-n`.
#[derive(Clone)]
pub struct CauchyReal {
    inner: Arc<Inner>,
}

impl fmt::Debug for CauchyReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.exact {
            Some(d) => write!(f, "CauchyReal(= {d})"),
            None => write!(f, "CauchyReal(..)"),
        }
    }
}

impl CauchyReal {
    fn from_parts(source: Box<Source>, exact: Option<Dyadic>) -> Self {
        Self {
            inner: Arc::new(Inner { source, exact, cache: Mutex::new(CacheState::default()) }),
        }
    }

    /// The representative that answers every query with `d` itself.
    pub fn from_dyadic(d: Dyadic) -> Self {
        let value = d.clone();
        Self::from_parts(Box::new(move |_| Ok(value.clone())), Some(d))
    }

    /// The truncation representative: `approx(n) = floor(2^n d) / 2^n`.
    pub fn from_dyadic_truncated(d: Dyadic) -> Self {
        Self::from_parts(
            Box::new(move |n| Ok(d.round_to_precision(n, Round::Down))),
            None,
        )
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_dyadic(Dyadic::from_i64(n))
    }

    /// `num / den` by long division to the queried precision.
    pub fn from_rational(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "rational with zero denominator");
        Self::from_parts(
            Box::new(move |n| div_round(&num, &den, n + 1, Round::Nearest)),
            None,
        )
    }

    /// A second rational representative that always rounds down; useful for
    /// representation-independence tests.
    pub fn from_rational_floor(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "rational with zero denominator");
        Self::from_parts(
            Box::new(move |n| div_round(&num, &den, n + 1, Round::Down)),
            None,
        )
    }

    /// The constant pi, read off the midpoints of the pi enclosure.
    pub fn pi() -> Self {
        Self::from_parts(
            Box::new(|n| {
                let enc = pi_enclosure(n + 2)?;
                Ok(enc.mid()?.round_to_precision(n + 2, Round::Nearest))
            }),
            None,
        )
    }

    /// A real backed by an arbitrary approximation source. The source must
    /// honor the binary rate contract.
    pub fn from_fn<F>(source: F) -> Self
    where
        F: Fn(u32) -> Result<Dyadic> + Send + Sync + 'static,
    {
        Self::from_parts(Box::new(source), None)
    }

    /// The exactly-known value, when there is one.
    pub fn exact_value(&self) -> Option<&Dyadic> {
        self.inner.exact.as_ref()
    }

    /// Returns a dyadic within `2^-n` of the value. Answers from the cache
    /// when a query at precision `>= n` was already made.
    pub fn query(&self, n: u32) -> Result<Dyadic> {
        if n > MAX_QUERY_PRECISION {
            return Err(Error::Resource { what: format!("query precision {n}") });
        }
        let mut cache = self.inner.cache.lock().expect("creal cache poisoned");
        cache.queries += 1;
        cache.max_precision = cache.max_precision.max(n);
        if let Some((m, d)) = &cache.best {
            if *m >= n {
                return Ok(d.clone());
            }
        }
        let d = (self.inner.source)(n)?;
        cache.best = Some((n, d.clone()));
        Ok(d)
    }

    /// A sound interval for the value at precision `n`. Exact sources give
    /// point intervals.
    pub fn approx_interval(&self, n: u32) -> Result<Interval> {
        if let Some(d) = &self.inner.exact {
            return Ok(Interval::point(d.clone()));
        }
        let d = self.query(n)?;
        let eps = Dyadic::pow2(-i64::from(n))?;
        Ok(Interval::new(d.sub(&eps)?, d.add(&eps)?))
    }

    /// `(queries, max precision argument seen)` since construction.
    pub fn stats(&self) -> (u64, u32) {
        let cache = self.inner.cache.lock().expect("creal cache poisoned");
        (cache.queries, cache.max_precision)
    }
}

/// A parsed point literal: an exact dyadic, or a rational realized as a
/// [`CauchyReal`] by long division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointLiteral {
    Exact(Dyadic),
    Rational { num: BigInt, den: BigInt },
}

impl PointLiteral {
    pub fn to_creal(&self) -> CauchyReal {
        match self {
            Self::Exact(d) => CauchyReal::from_dyadic(d.clone()),
            Self::Rational { num, den } => CauchyReal::from_rational(num.clone(), den.clone()),
        }
    }

    /// An alternative representative of the same point, for
    /// representation-independence checks.
    pub fn to_creal_alt(&self) -> CauchyReal {
        match self {
            Self::Exact(d) => CauchyReal::from_dyadic_truncated(d.clone()),
            Self::Rational { num, den } => {
                CauchyReal::from_rational_floor(num.clone(), den.clone())
            }
        }
    }

    fn from_ratio(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse { msg: "zero denominator".into(), line: 1, col: 1 });
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        let (num, den) = (num / &g, den / g);
        // A rational is dyadic exactly when the reduced denominator is a
        // power of two.
        let bits = den.bits();
        if den == (BigInt::one() << (bits - 1)) {
            let e = -i64::try_from(bits - 1).map_err(|_| Error::Resource {
                what: "denominator too large".into(),
            })?;
            Ok(Self::Exact(Dyadic::new(num, e)?))
        } else {
            Ok(Self::Rational { num, den })
        }
    }
}

impl FromStr for PointLiteral {
    type Err = Error;

    /// Accepts `m*2^e`, `p/q`, plain integers, and decimal literals.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_err = |msg: String| Error::Parse { msg, line: 1, col: 1 };
        if s.contains("*2^") {
            return Ok(Self::Exact(Dyadic::from_str(s)?));
        }
        if let Some((p, q)) = s.split_once('/') {
            let num = BigInt::from_str(p.trim())
                .map_err(|_| parse_err(format!("bad numerator `{p}`")))?;
            let den = BigInt::from_str(q.trim())
                .map_err(|_| parse_err(format!("bad denominator `{q}`")))?;
            return Self::from_ratio(num, den);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(parse_err(format!("bad decimal literal `{s}`")));
            }
            let digits = format!("{int_part}{frac_part}");
            let num = BigInt::from_str(&digits)
                .map_err(|_| parse_err(format!("bad decimal literal `{s}`")))?;
            let den = BigInt::from(10u8).pow(
                u32::try_from(frac_part.len())
                    .map_err(|_| parse_err("decimal literal too long".into()))?,
            );
            return Self::from_ratio(num, den);
        }
        let n = BigInt::from_str(s).map_err(|_| parse_err(format!("bad point literal `{s}`")))?;
        Ok(Self::Exact(Dyadic::from_bigint(n)))
    }
}
