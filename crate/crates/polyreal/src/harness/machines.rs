//! Oracle-machine reconstruction procedures.
//!
//! Each machine rebuilds `f(x)` to a stated accuracy from a characterizing
//! object (a modulus plus approximation function, a scaled two-argument
//! function, or a polytime integer approximation), querying the input real
//! only through its approximation oracle. They follow the constructive
//! procedures behind the characterization results step by step.

use num_bigint::BigInt;

use crate::creal::CauchyReal;
use crate::dyadic::{nearest_shr, Dyadic, Round};
use crate::error::{Error, Result};

use super::reffn::extension_exponent;

/// A two-argument real evaluator with the contract
/// `|eval(x, y, n) - g(x, y)| <= 2^-n`.
pub type RealEval2 = dyn Fn(&CauchyReal, &CauchyReal, u32) -> Result<Dyadic> + Send + Sync;

/// A polytime integer approximation `h(x1, y, z)`.
pub type IntApprox = dyn Fn(&BigInt, &BigInt, &BigInt) -> Result<BigInt> + Send + Sync;

/// Reconstruction from a modulus and an approximation function:
///
/// 1. `d = phi(2)`;
/// 2. from `d`, the least `k` with `x` guaranteed in `[-2^k, 2^k]`;
/// 3. `alpha = m(k, n+1)`;
/// 4. `d' = phi(alpha)`;
/// 5. output `psi(d', n+1)`.
///
/// With `m` a modulus for `f` and `|psi(d, j) - f(d)| <= 2^-j`, the output
/// is within `2^-n` of `f(x)`.
pub fn modulus_machine(
    modulus: &dyn Fn(u32, u32) -> u32,
    psi: &dyn Fn(&Dyadic, u32) -> Result<Dyadic>,
    x: &CauchyReal,
    n: u32,
) -> Result<Dyadic> {
    let d = x.query(2)?;
    let k = extension_exponent(&d)?;
    let alpha = modulus(k, n + 1);
    let d_prime = x.query(alpha)?;
    psi(&d_prime, n + 1)
}

/// Reconstruction from `g` with `|g(x, y) - y f(x)| <= 1`: evaluate `g` at
/// `(x, 2^(n+1))` coarsely (the oracle for the second argument answers
/// `2^(n+1)` to every query) and scale the output back down.
pub fn scaling_machine(g: &RealEval2, x: &CauchyReal, n: u32) -> Result<Dyadic> {
    let y = CauchyReal::from_dyadic(Dyadic::pow2(i64::from(n) + 1)?);
    let e = g(x, &y, 0)?;
    e.shift(-(i64::from(n) + 1))
}

/// Reconstruction for a Lipschitz `f` (constant `K <= 2^a`) from `g`
/// satisfying `|g(x, y) - y f(x/y)| <= 1` at integer `x`:
///
/// 1. `n' = n + 2 + a`, `d = phi(n')`;
/// 2. snap `d` to `k1 / 2^(n')` with `k1` integer;
/// 3. evaluate `g` at the *integer* point `k1` with the scale oracle
///    answering `2^(n')`;
/// 4. output `2^(-n') e`.
pub fn lipschitz_machine(
    g: &RealEval2,
    lipschitz_exp: u32,
    x: &CauchyReal,
    n: u32,
) -> Result<Dyadic> {
    let n_prime = n + 2 + lipschitz_exp;
    let d = x.query(n_prime)?;
    let snapped = d.round_to_precision(n_prime, Round::Nearest);
    let k1 = snapped.shift(i64::from(n_prime))?;
    debug_assert!(k1.is_integer());
    let x_oracle = CauchyReal::from_dyadic(k1);
    let y_oracle = CauchyReal::from_dyadic(Dyadic::pow2(i64::from(n_prime))?);
    let e = g(&x_oracle, &y_oracle, 0)?;
    e.shift(-i64::from(n_prime))
}

/// The locally poly-Lipschitz variant: first find `j` with `4x` in
/// `[-2^j, 2^j]`, look up the ball's Lipschitz exponent, then run the
/// Lipschitz machine with it.
pub fn poly_lipschitz_machine(
    g: &RealEval2,
    lipschitz_seq: &dyn Fn(u32) -> u32,
    x: &CauchyReal,
    n: u32,
) -> Result<Dyadic> {
    let coarse = x.query(2)?;
    // |4x| <= 4(|d| + 1/4) = 4|d| + 1.
    let bound = coarse.abs().shift(2)?.add(&Dyadic::one())?;
    let mut j = 0u32;
    while Dyadic::pow2(i64::from(j))? < bound {
        j += 1;
        if j > 1 << 20 {
            return Err(Error::Resource { what: "ball index".into() });
        }
    }
    let a = lipschitz_seq(j);
    lipschitz_machine(g, a, x, n)
}

/// Reconstruction from a polytime integer approximation `h` of a scaled
/// characterizing function (scale degree `k`):
///
/// 1. `d' = phi(2)`; `len_d = len(floor(d' + 1))`;
/// 2. `d = phi((len_d + n + 4)^k + 1)`;
/// 3. `w = h(floor(2^((len_d + n + 4)^k) d), 2^n, 2^(len_d + 4))`;
/// 4. output `2^-n w`.
///
/// The output is within `(M + 2) 2^-(n-1)` of `f(x)` for the declared
/// smoothness bound `M`.
pub fn integer_approx_machine(
    h: &IntApprox,
    degree: u32,
    x: &CauchyReal,
    n: u32,
) -> Result<Dyadic> {
    let d_coarse = x.query(2)?;
    let floor_plus = d_coarse.add(&Dyadic::one())?.floor();
    let len_d = floor_plus.magnitude().bits();
    let base = len_d + u64::from(n) + 4;
    let exponent = base.checked_pow(degree).ok_or(Error::Resource {
        what: "scale exponent overflow".into(),
    })?;
    let query_precision = u32::try_from(exponent + 1).map_err(|_| Error::Resource {
        what: "query precision overflow".into(),
    })?;
    let d = x.query(query_precision)?;
    let x1 = d.shift(i64::try_from(exponent).expect("fits"))?.floor();
    let y = BigInt::from(1u8) << u64::from(n);
    let z = BigInt::from(1u8) << (len_d + 4);
    let w = h(&x1, &y, &z)?;
    Dyadic::from_bigint(w).shift(-i64::from(n))
}

/// The integer approximation used by the identity fixture:
/// `h(x1, y, z) = round(y * x1 / 2^(floor(log2 (y z))))` for scale degree 1.
pub fn floor_scaled_identity_approx(x1: &BigInt, y: &BigInt, z: &BigInt) -> Result<BigInt> {
    let yz = y * z;
    if yz.bits() == 0 {
        return Err(Error::Domain { what: "scale argument is zero".into() });
    }
    let log = yz.bits() - 1;
    Ok(nearest_shr(&(y * x1), log))
}

/// Builds a `RealEval2` from a closure on exact dyadics. Only machines that
/// drive both arguments at exactly-known points can use it (the Lipschitz
/// machines snap to integers first; the scaling machine passes its input
/// through, so it needs an evaluator that handles inexact arguments).
pub fn eval2_from_exact<F>(f: F) -> Box<RealEval2>
where
    F: Fn(&Dyadic, &Dyadic, u32) -> Result<Dyadic> + Send + Sync + 'static,
{
    Box::new(move |x: &CauchyReal, y: &CauchyReal, n: u32| {
        match (x.exact_value(), y.exact_value()) {
            (Some(dx), Some(dy)) => f(dx, dy, n),
            _ => Err(Error::Domain {
                what: "this evaluator requires exactly-known arguments".into(),
            }),
        }
    })
}
