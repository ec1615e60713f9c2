//! Cache-aware D3Q19 lattice Boltzmann solvers on a single-copy field.
//!
//! The crate provides one lattice data model and five interchangeable time
//! steppers:
//!
//! * [`solvers::SolverKind::Oracle`] — a two-copy reference stepper used as
//!   ground truth;
//! * [`solvers::SolverKind::Fuse`] — fused collide + in-place swap
//!   streaming, boundary pre/post-processed so the bulk loop is check-free;
//! * [`solvers::SolverKind::FusePrism`] — the same update with the bulk
//!   visited in prism order for spatial locality;
//! * [`solvers::SolverKind::TwoStep`] / [`solvers::SolverKind::TwoStepPrism`]
//!   — two collision-streaming cycles merged into one sweep, computing time
//!   step `t+1` one diagonal behind step `t`;
//! * [`solvers::SolverKind::TwoStepPrismPar`] — the merged update on X-slabs
//!   with three barriers per two steps.
//!
//! All five produce matching velocity fields on the lid-driven cavity, which
//! `verify` (and the `acceptance` test suite) checks cell by cell.
//!
//! Start with the examples: `cargo run --release -p lbm-prism --example
//! lid_cavity`, or see `README.md` for the full tour.

pub mod cavity;
pub mod cli;
pub mod error;
pub mod kernels;
pub mod lattice;
pub mod solvers;
#[cfg(debug_assertions)]
pub mod trace;
pub mod traversal;

pub use cavity::{build_cavity, mflups, BenchRecord, CavityConfig};
pub use error::{Error, Result};
pub use kernels::KernelParams;
pub use lattice::{
    compute_moments, equilibrium, total_mass, velocity_norm_field, DistributionField, DomainSpec,
    FieldView,
};
pub use solvers::{run, RunParams, RunReport, SolverKind};
pub use traversal::PrismCursor;
