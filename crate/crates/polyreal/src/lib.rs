//! Exact real computation over a tiered function algebra.
//!
//! The crate provides:
//!
//! - exact dyadic arithmetic ([`dyadic`]) and outward-rounded interval
//!   arithmetic with certified `pi`, `sin(pi x)`, `cos(pi x)` enclosures
//!   ([`interval`]);
//! - computable reals as precision-queryable approximation sources
//!   ([`creal`]);
//! - a small tiered function algebra over the reals: s-expression syntax
//!   ([`term`]), a static tier checker ([`tier`]), and a
//!   guaranteed-precision interval evaluator ([`eval`]);
//! - a discrete safe-recursion algebra over the naturals with an exact
//!   interpreter and a translation into the real algebra ([`bc`]);
//! - grid checks and reconstruction machines relating real functions to
//!   their integer characterizations ([`harness`]).

pub mod bc;
pub mod builders;
pub mod creal;
pub mod dyadic;
pub mod error;
pub mod eval;
pub mod gen;
pub mod harness;
pub mod interval;
pub mod oracle;
mod sexpr;
pub mod suites;
pub mod term;
pub mod tier;

pub use bc::{bc_eval, check_bc_tiers, parse_bc, peaceful_wrap, translate, BcTerm};
pub use creal::{CauchyReal, PointLiteral};
pub use dyadic::{Dyadic, Round};
pub use eval::{closed_form_si, eval_interval, eval_pred, eval_to_precision, eval_to_precision_stats, si_integer_values, EvalConfig, EvalContext, EvalStats, PointBox};
pub use error::{Error, Result};
pub use interval::Interval;
pub use term::{parse, Signature, Term};
pub use tier::{check_tiers, CheckReport, CheckedTerm};
