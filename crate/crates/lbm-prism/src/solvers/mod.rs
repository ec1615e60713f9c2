//! The five time steppers behind one stepping contract: a two-copy reference
//! stepper, the fused swap stepper with plain and prism bulk orders, the
//! merged two-step prism stepper, and its barrier-staged parallel variant.

mod fused;
mod oracle;
mod parallel;
mod two_step;

pub use fused::{fuse_swap_prism_step, fuse_swap_step};
pub use oracle::oracle_step;
pub use parallel::parallel_two_step_prism_cycle;
pub(crate) use parallel::run_parallel_cycles;
pub use two_step::two_step_prism_cycle;

use crate::error::{Error, Result};
use crate::kernels::KernelParams;
use crate::lattice::{total_mass, DistributionField, DomainSpec};
use std::fmt;
use std::time::Instant;

/// Which stepper advances the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Two-copy reference stepper; the ground truth the others are checked
    /// against.
    Oracle,
    /// Fused collide+swap-stream, plain ascending bulk order.
    Fuse,
    /// Fused collide+swap-stream, prism bulk order.
    FusePrism,
    /// Merged two-step update with a single degenerate prism (tile spans the
    /// whole domain).
    TwoStep,
    /// Merged two-step update under the prism traversal.
    TwoStepPrism,
    /// Merged two-step prism update on X-slabs with staged barriers.
    TwoStepPrismPar,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Oracle,
        SolverKind::Fuse,
        SolverKind::FusePrism,
        SolverKind::TwoStep,
        SolverKind::TwoStepPrism,
        SolverKind::TwoStepPrismPar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Oracle => "oracle",
            SolverKind::Fuse => "fuse",
            SolverKind::FusePrism => "fuse-prism",
            SolverKind::TwoStep => "two-step",
            SolverKind::TwoStepPrism => "two-step-prism",
            SolverKind::TwoStepPrismPar => "two-step-prism-par",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Two-step kinds advance two time steps per cycle and only accept even
    /// step counts.
    pub fn is_two_step(self) -> bool {
        matches!(
            self,
            SolverKind::TwoStep | SolverKind::TwoStepPrism | SolverKind::TwoStepPrismPar
        )
    }

    /// Everything except the two-copy reference streams by slot swaps.
    pub fn is_swap_based(self) -> bool {
        self != SolverKind::Oracle
    }

    pub fn uses_tile(self) -> bool {
        matches!(
            self,
            SolverKind::FusePrism | SolverKind::TwoStepPrism | SolverKind::TwoStepPrismPar
        )
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Step count, traversal stride, worker count, and kernel parameters for one
/// run.
#[derive(Clone, Copy, Debug)]
pub struct RunParams {
    /// Total time steps to advance (two-step kinds consume these two at a
    /// time).
    pub steps: usize,
    /// Prism stride for the prism kinds.
    pub tile: usize,
    /// Worker count for the parallel kind.
    pub workers: usize,
    pub kernel: KernelParams,
}

impl RunParams {
    pub fn new(steps: usize, kernel: KernelParams) -> Self {
        Self {
            steps,
            tile: 1,
            workers: 1,
            kernel,
        }
    }

    pub fn with_tile(mut self, tile: usize) -> Self {
        self.tile = tile;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Checks every precondition of `kind` on `spec` before any work starts.
    pub fn validate(&self, kind: SolverKind, spec: DomainSpec) -> Result<()> {
        if kind.is_swap_based() {
            require_min_dims(spec, 3)?;
        }
        if kind.is_two_step() && self.steps % 2 != 0 {
            return Err(Error::OddStepCount { steps: self.steps });
        }
        if kind.uses_tile() && self.tile == 0 {
            return Err(Error::Format {
                offset: 0,
                message: "prism stride must be at least 1".into(),
            });
        }
        if kind == SolverKind::TwoStepPrismPar {
            parallel::validate_split(spec, self.workers)?;
        }
        Ok(())
    }
}

/// Timing and conservation summary of one run.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub kind: SolverKind,
    pub steps: usize,
    /// Wall-clock seconds around the stepping loop only.
    pub seconds: f64,
    /// Million fluid lattice node updates per second.
    pub mflups: f64,
    /// Relative change of total mass over the run.
    pub mass_drift: f64,
    /// Largest per-cell velocity-norm deviation against the reference
    /// stepper; filled by the verifier, not by `run` itself.
    pub max_deviation: Option<f64>,
}

pub(crate) fn require_min_dims(spec: DomainSpec, min: usize) -> Result<()> {
    if spec.lx < min || spec.ly < min || spec.lz < min {
        return Err(Error::DomainTooSmall {
            lx: spec.lx,
            ly: spec.ly,
            lz: spec.lz,
            min,
        });
    }
    Ok(())
}

/// Advances `field` by exactly `params.steps` time steps with the chosen
/// stepper, timing the stepping loop only.
pub fn run(
    kind: SolverKind,
    field: &mut DistributionField,
    params: &RunParams,
) -> Result<RunReport> {
    let spec = field.spec();
    params.validate(kind, spec)?;

    let mass_before = total_mass(field);
    let kernel = &params.kernel;
    let steps = params.steps;
    let cycles = steps / 2;

    let start = Instant::now();
    let mut measured = None;
    match kind {
        SolverKind::Oracle => {
            for _ in 0..steps {
                oracle_step(field, kernel)?;
            }
        }
        SolverKind::Fuse => {
            for _ in 0..steps {
                fuse_swap_step(field, kernel)?;
            }
        }
        SolverKind::FusePrism => {
            for _ in 0..steps {
                fuse_swap_prism_step(field, kernel, params.tile)?;
            }
        }
        SolverKind::TwoStep => {
            // Degenerate single prism: one tile spans the whole domain.
            let tile = spec.lx + spec.ly + spec.lz;
            for _ in 0..cycles {
                two_step_prism_cycle(field, kernel, tile)?;
            }
        }
        SolverKind::TwoStepPrism => {
            for _ in 0..cycles {
                two_step_prism_cycle(field, kernel, params.tile)?;
            }
        }
        SolverKind::TwoStepPrismPar => {
            // One fork-join team for the whole run; the team reports the
            // cycle-loop time with spawn overhead excluded.
            measured = Some(run_parallel_cycles(
                field,
                kernel,
                params.tile,
                params.workers,
                cycles,
            )?);
        }
    }
    let seconds = measured.unwrap_or_else(|| start.elapsed()).as_secs_f64();

    let mass_after = total_mass(field);
    let mass_drift = if mass_before != 0.0 {
        ((mass_after - mass_before) / mass_before).abs()
    } else {
        mass_after.abs()
    };
    let mflups = if steps == 0 || seconds <= 0.0 {
        0.0
    } else {
        crate::cavity::mflups(spec.cells(), steps, seconds)?
    };

    Ok(RunReport {
        kind,
        steps,
        seconds,
        mflups,
        mass_drift,
        max_deviation: None,
    })
}
