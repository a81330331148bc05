//! Executable characterization machinery: grid checks relating real
//! functions to integer-scaled characterizations, the oracle-machine
//! reconstruction procedures, and precision-scaling measurements.

mod bench;
mod checks;
mod machines;
mod reffn;

pub use bench::{bench_scaling, BenchEntry, BenchReport};
pub use checks::{
    check_approximation, check_definability, check_peaceful, check_t_definability,
    check_t_smooth, GridReport, PointError, PointResidual,
};
pub use machines::{
    eval2_from_exact, floor_scaled_identity_approx, integer_approx_machine, lipschitz_machine,
    modulus_machine, poly_lipschitz_machine, scaling_machine, IntApprox, RealEval2,
};
pub use reffn::{GridFn, GridSpec, RefFunction, SharpT};
