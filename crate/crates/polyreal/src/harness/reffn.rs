//! Reference real functions and the function objects grid checks consume.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::creal::CauchyReal;
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::eval::{eval_to_precision, EvalConfig};
use crate::tier::CheckedTerm;

type RealMap = dyn Fn(&CauchyReal) -> CauchyReal + Send + Sync;

/// A real function under test, with whatever metadata its fixtures declare.
/// The metadata is tested by the checks, never trusted.
#[derive(Clone)]
pub struct RefFunction {
    pub name: String,
    eval: Arc<RealMap>,
    /// `a` with Lipschitz constant `K <= 2^a`.
    pub lipschitz_exp: Option<u32>,
    /// Declared modulus `m(k, n)`.
    pub modulus: Option<Arc<dyn Fn(u32, u32) -> u32 + Send + Sync>>,
    /// Declared smoothness bound `M` for scale functions of degree
    /// `smooth_degree`.
    pub smooth_degree: Option<u32>,
    pub smooth_bound: Option<u32>,
    /// Per-ball Lipschitz exponents: `j -> a_j` with `K_j <= 2^(a_j)`.
    pub lipschitz_seq: Option<Arc<dyn Fn(u32) -> u32 + Send + Sync>>,
}

impl RefFunction {
    pub fn apply(&self, x: &CauchyReal) -> CauchyReal {
        (self.eval)(x)
    }

    /// `f(d)` for an exact dyadic point, within `2^-n`.
    pub fn at_dyadic(&self, d: &Dyadic, n: u32) -> Result<Dyadic> {
        self.apply(&CauchyReal::from_dyadic(d.clone())).query(n)
    }

    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            eval: Arc::new(|x: &CauchyReal| x.clone()),
            lipschitz_exp: Some(0),
            modulus: Some(Arc::new(|_, n| n)),
            smooth_degree: Some(1),
            smooth_bound: Some(4),
            lipschitz_seq: Some(Arc::new(|_| 0)),
        }
    }

    /// `x / 2`.
    pub fn half() -> Self {
        Self {
            name: "half".into(),
            eval: Arc::new(|x: &CauchyReal| {
                let x = x.clone();
                CauchyReal::from_fn(move |n| x.query(n + 1)?.shift(-1))
            }),
            lipschitz_exp: Some(0),
            modulus: Some(Arc::new(|_, n| n)),
            smooth_degree: Some(1),
            smooth_bound: Some(4),
            lipschitz_seq: Some(Arc::new(|_| 0)),
        }
    }

    /// `x^2`: locally Lipschitz with `K <= 2^(j+1)` on `[-2^j, 2^j]`, with
    /// the matching polynomial modulus `m(k, n) = k + n + 1`.
    pub fn square() -> Self {
        Self {
            name: "square".into(),
            eval: Arc::new(|x: &CauchyReal| {
                let x = x.clone();
                CauchyReal::from_fn(move |n| {
                    let coarse = x.query(2)?;
                    let k = extension_exponent(&coarse)?;
                    let p = n + k + 2;
                    let d = x.query(p)?;
                    Ok(d.mul(&d)?.round_to_precision(n + 2, Round::Nearest))
                })
            }),
            lipschitz_exp: None,
            modulus: Some(Arc::new(|k, n| k + n + 1)),
            smooth_degree: Some(2),
            smooth_bound: Some(4),
            lipschitz_seq: Some(Arc::new(|j| j + 1)),
        }
    }

    pub fn constant(c: Dyadic) -> Self {
        let value = c.clone();
        Self {
            name: format!("const({})", c.decimal_string()),
            eval: Arc::new(move |_| CauchyReal::from_dyadic(value.clone())),
            lipschitz_exp: Some(0),
            modulus: Some(Arc::new(|_, n| n)),
            smooth_degree: Some(1),
            smooth_bound: Some(1),
            lipschitz_seq: Some(Arc::new(|_| 0)),
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(Self::identity()),
            "half" => Some(Self::half()),
            "square" => Some(Self::square()),
            _ => name.strip_prefix("const:").and_then(|v| {
                v.parse::<i64>().ok().map(|n| Self::constant(Dyadic::from_i64(n)))
            }),
        }
    }
}

/// Least `k >= 0` with the queried value's real guaranteed in `[-2^k, 2^k]`,
/// assuming the query was made at precision 2.
pub(crate) fn extension_exponent(coarse: &Dyadic) -> Result<u32> {
    let quarter = Dyadic::pow2(-2)?;
    let bound = coarse.abs().add(&quarter)?;
    let mut k = 0u32;
    while Dyadic::pow2(i64::from(k))? < bound {
        k += 1;
        if k > 1 << 20 {
            return Err(Error::Resource { what: "extension exponent".into() });
        }
    }
    Ok(k)
}

type NativeGrid = dyn Fn(&[Dyadic], u32) -> Result<Dyadic> + Send + Sync;

/// A candidate characterizing function for the grid checks: either a term
/// of the algebra or a native evaluator with the same contract
/// (`|eval(args, n) - g(args)| <= 2^-n`).
#[derive(Clone)]
pub enum GridFn {
    Term(Arc<CheckedTerm>, EvalConfig),
    Native { name: String, arity: usize, f: Arc<NativeGrid> },
}

impl GridFn {
    pub fn from_term(t: CheckedTerm) -> Self {
        Self::Term(Arc::new(t), EvalConfig::default())
    }

    pub fn native<F>(name: &str, arity: usize, f: F) -> Self
    where
        F: Fn(&[Dyadic], u32) -> Result<Dyadic> + Send + Sync + 'static,
    {
        Self::Native { name: name.into(), arity, f: Arc::new(f) }
    }

    pub fn arity(&self) -> usize {
        match self {
            Self::Term(t, _) => t.signature().arity() as usize,
            Self::Native { arity, .. } => *arity,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Term(..) => "term".into(),
            Self::Native { name, .. } => name.clone(),
        }
    }

    /// Evaluates within `2^-n` at exact dyadic arguments.
    pub fn eval_at(&self, args: &[Dyadic], n: u32) -> Result<Dyadic> {
        match self {
            Self::Term(t, cfg) => {
                let points: Vec<CauchyReal> =
                    args.iter().map(|d| CauchyReal::from_dyadic(d.clone())).collect();
                eval_to_precision(t, &points, n, cfg)
            }
            Self::Native { f, arity, .. } => {
                if args.len() != *arity {
                    return Err(Error::Arity { expected: *arity, got: args.len() });
                }
                f(args, n)
            }
        }
    }
}

/// Integer grid ranges plus sampling parameters for the randomized checks.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub x_range: (i64, i64),
    pub y_range: (i64, i64),
    pub z_range: (i64, i64),
    pub samples: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { x_range: (-8, 8), y_range: (1, 8), z_range: (1, 8), samples: 1000, seed: 42 }
    }
}

impl GridSpec {
    pub fn xs(&self) -> impl Iterator<Item = i64> {
        self.x_range.0..=self.x_range.1
    }

    pub fn ys(&self) -> impl Iterator<Item = i64> {
        self.y_range.0.max(1)..=self.y_range.1
    }

    pub fn zs(&self) -> impl Iterator<Item = i64> {
        self.z_range.0.max(1)..=self.z_range.1
    }
}

/// The scale family `x >= 1 -> 2^(T(floor(log2 x)))` for a monotone
/// polynomial `T` with nonnegative coefficients.
#[derive(Clone, Debug)]
pub struct SharpT {
    /// `T(n) = sum coeffs[i] * n^i`.
    pub coeffs: Vec<u64>,
}

impl SharpT {
    pub fn new(coeffs: Vec<u64>) -> Self {
        Self { coeffs }
    }

    /// `T(n) = n^k`.
    pub fn degree(k: u32) -> Self {
        let mut coeffs = vec![0; k as usize + 1];
        coeffs[k as usize] = 1;
        Self { coeffs }
    }

    pub fn t_of(&self, n: u64) -> u64 {
        let mut acc = 0u64;
        let mut pow = 1u64;
        for &c in &self.coeffs {
            acc = acc.saturating_add(c.saturating_mul(pow));
            pow = pow.saturating_mul(n);
        }
        acc
    }

    /// `2^(T(floor(log2 x)))`, exact for dyadic `x >= 1`.
    pub fn sharp(&self, x: &Dyadic) -> Result<Dyadic> {
        if x < &Dyadic::one() {
            return Err(Error::Domain { what: format!("scale argument {x} below 1") });
        }
        let log = x.int_bits() - 1;
        let t = self.t_of(log);
        Dyadic::pow2(i64::try_from(t).map_err(|_| Error::Resource {
            what: "scale exponent overflow".into(),
        })?)
    }

    /// `2^(T(floor(log2 x)))` for an integer `x >= 1`.
    pub fn sharp_int(&self, x: &BigInt) -> Result<BigInt> {
        let bits = x.bits();
        if bits == 0 || x.sign() == num_bigint::Sign::Minus {
            return Err(Error::Domain { what: format!("scale argument {x} below 1") });
        }
        let t = self.t_of(bits - 1);
        Ok(BigInt::from(1u8) << usize::try_from(t).map_err(|_| Error::Resource {
            what: "scale exponent overflow".into(),
        })?)
    }
}
