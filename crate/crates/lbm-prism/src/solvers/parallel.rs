//! Barrier-staged parallel variant of the merged two-step stepper.
//!
//! The box is cut into equal X-slabs, one worker per slab; the top layer of
//! each slab (`my_end`) is its intersection with the slab above. Every cycle
//! runs three barrier-separated stages:
//!
//! * Stage I — first collide and revert on the intersection layer, without
//!   streaming: its stream needs the layer below, which is not yet collided,
//!   and the worker above needs the reverted data to stream its first layer.
//! * Stage II — the prism sweep of the slab, dispatching five cases. The
//!   first row and column of each non-intersection layer take the plain
//!   boundary path (case 0). Layer `my_start` runs only its first step
//!   (case 1). Layer `my_start + 1` additionally collides and reverts the
//!   lagged diagonal on `my_start` WITHOUT streaming (case 2): streaming
//!   there would write into the slab below before its intersection has
//!   advanced. The intersection layer streams what Stage I prepared and runs
//!   the second step one layer below (case 3). All other layers run the
//!   plain merged update (case 4).
//! * Stage III — the second collide and stream of the intersection layer;
//!   then, after one more barrier, the deferred second stream of layer
//!   `my_start`, whose downward swaps reach the slab below.
//!
//! Between barriers, workers write disjoint slot sets even on shared layers:
//! a cell's own swaps touch slots 10..=18, same-layer links touch slots
//! {2, 3, 8, 9} of earlier cells, and upward cross-slab swaps touch slots
//! {1, 4, 5, 6, 7} of the layer below. Identical inputs therefore produce
//! bitwise identical results for any worker count.

use crate::error::{Error, Result};
use crate::kernels::{
    adaptive_collide_stream, adaptive_stream, boundary_cell_comp, boundary_neighbor_collide_revert,
    boundary_neighbor_handler, collide_revert, KernelParams,
};
use crate::lattice::{DistributionField, FieldView};
use crate::solvers::require_min_dims;
use crate::traversal::PrismCursor;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Barrier, Mutex};
use std::thread;
use std::time::{Duration, Instant};

/// Checks the slab partition: `lx` divisible by the worker count, slabs at
/// least 3 layers tall. Returns the slab height.
pub(crate) fn validate_split(spec: crate::lattice::DomainSpec, workers: usize) -> Result<usize> {
    if workers == 0 || spec.lx % workers != 0 || spec.lx / workers < 3 {
        return Err(Error::BadWorkerSplit {
            lx: spec.lx,
            workers,
        });
    }
    Ok(spec.lx / workers)
}

/// Wrapper that lets the worker team share one field view.
///
/// SAFETY: the staged protocol above guarantees that between any two
/// barriers every slot is written by at most one worker, and that
/// cross-stage readers are ordered by the barriers. The wrapper is private
/// to this module; safe code cannot obtain a shared view.
struct SharedView<'a>(FieldView<'a>);
unsafe impl Send for SharedView<'_> {}
unsafe impl Sync for SharedView<'_> {}

struct Team<'a> {
    view: SharedView<'a>,
    barrier: Barrier,
    params: KernelParams,
    tile: usize,
    sub_h: usize,
    cycles: usize,
    failed: AtomicBool,
    error: Mutex<Option<Error>>,
    /// Cycle-loop wall time measured by worker 0, spawn excluded.
    elapsed: Mutex<Duration>,
}

impl Team<'_> {
    fn fail(&self, e: Error) {
        let mut slot = self.error.lock().unwrap_or_else(|p| p.into_inner());
        slot.get_or_insert(e);
        self.failed.store(true, Ordering::Release);
    }

    fn ok(&self) -> bool {
        !self.failed.load(Ordering::Acquire)
    }
}

/// Runs `cycles` two-step cycles with a fork-join team created once for the
/// whole run. Each cycle costs three intra-cycle barriers plus the cycle-end
/// join. Returns the wall time of the cycle loop, team spawn excluded.
pub(crate) fn run_parallel_cycles(
    field: &mut DistributionField,
    params: &KernelParams,
    tile: usize,
    workers: usize,
    cycles: usize,
) -> Result<Duration> {
    let spec = field.spec();
    require_min_dims(spec, 3)?;
    let sub_h = validate_split(spec, workers)?;
    if tile == 0 {
        return Err(Error::Format {
            offset: 0,
            message: "prism stride must be at least 1".into(),
        });
    }
    if cycles == 0 {
        return Ok(Duration::ZERO);
    }

    let team = Team {
        view: SharedView(field.view_mut()),
        barrier: Barrier::new(workers),
        params: *params,
        tile,
        sub_h,
        cycles,
        failed: AtomicBool::new(false),
        error: Mutex::new(None),
        elapsed: Mutex::new(Duration::ZERO),
    };

    thread::scope(|scope| {
        for worker in 0..workers {
            let team = &team;
            scope.spawn(move || worker_loop(team, worker));
        }
    });

    match team.error.into_inner().unwrap_or_else(|p| p.into_inner()) {
        Some(e) => Err(e),
        None => Ok(team.elapsed.into_inner().unwrap_or_else(|p| p.into_inner())),
    }
}

/// One two-step cycle; convenience form of [`run_parallel_cycles`].
pub fn parallel_two_step_prism_cycle(
    field: &mut DistributionField,
    params: &KernelParams,
    tile: usize,
    workers: usize,
) -> Result<()> {
    run_parallel_cycles(field, params, tile, workers, 1).map(|_| ())
}

fn worker_loop(team: &Team<'_>, worker: usize) {
    let view = team.view.0;
    let spec = view.spec();
    let my_start = 1 + worker * team.sub_h;
    let my_end = (worker + 1) * team.sub_h;
    let cursor = PrismCursor::new(spec, team.tile, my_start, my_end)
        .expect("slab cursor parameters were validated before spawning");
    let params = &team.params;

    // Align the team before measuring so spawn overhead stays out of the
    // reported cycle time.
    team.barrier.wait();
    let start = (worker == 0).then(Instant::now);

    // A worker that has seen a failure keeps hitting every barrier so the
    // rest of the team cannot deadlock.
    for _ in 0..team.cycles {
        if team.ok() {
            if let Err(e) = intersection_first_collide(&view, my_end, params) {
                team.fail(e);
            }
        }
        team.barrier.wait();
        #[cfg(debug_assertions)]
        crate::trace::marker(
            view.key(),
            worker,
            crate::trace::StageTag::IntersectionPrepared,
        );

        if team.ok() {
            if let Err(e) = slab_sweep(&view, &cursor, my_start, my_end, params) {
                team.fail(e);
            }
        }
        team.barrier.wait();
        #[cfg(debug_assertions)]
        crate::trace::marker(view.key(), worker, crate::trace::StageTag::SweepDone);

        if team.ok() {
            if let Err(e) = intersection_second_step(&view, my_end, params) {
                team.fail(e);
            }
        }
        team.barrier.wait();
        #[cfg(debug_assertions)]
        crate::trace::marker(
            view.key(),
            worker,
            crate::trace::StageTag::IntersectionAdvanced,
        );

        if team.ok() {
            first_layer_deferred_stream(&view, my_start);
        }
        team.barrier.wait(); // cycle-end join
    }

    if let Some(start) = start {
        *team.elapsed.lock().unwrap_or_else(|p| p.into_inner()) = start.elapsed();
    }
}

/// Stage I: first collide and revert of the intersection layer. The lid
/// correction lands here for the topmost slab.
fn intersection_first_collide(
    view: &FieldView<'_>,
    my_end: usize,
    params: &KernelParams,
) -> Result<()> {
    let spec = view.spec();
    for iy in 1..=spec.ly {
        for iz in 1..=spec.lz {
            collide_revert(view, my_end, iy, iz, params)?;
        }
    }
    Ok(())
}

/// Stage II: the five-case sweep of one slab.
fn slab_sweep(
    view: &FieldView<'_>,
    cursor: &PrismCursor,
    my_start: usize,
    my_end: usize,
    params: &KernelParams,
) -> Result<()> {
    cursor.try_for_each(|x, y, z| {
        // Case 0: first row and column of each layer except the
        // intersection; first computation only.
        if x != my_end && (x == 1 || y == 1 || z == 1) {
            return boundary_cell_comp(view, x, y, z, params);
        }
        if x == my_start {
            // Case 1: first computation on the slab's first layer.
            adaptive_collide_stream(view, x, y, z, params)
        } else if x == my_start + 1 {
            // Case 2: first computation here; the lagged diagonal on
            // `my_start` collides and reverts but must not stream yet.
            adaptive_collide_stream(view, x, y, z, params)?;
            if y > 1 && z > 1 {
                collide_revert(view, x - 1, y - 1, z - 1, params)?;
            }
            boundary_neighbor_collide_revert(view, x, y, z, params)
        } else if x == my_end {
            // Case 3: Stage I already collided this layer; stream it, then
            // run the second step one layer below.
            adaptive_stream(view, x, y, z);
            if y > 1 && z > 1 {
                adaptive_collide_stream(view, x - 1, y - 1, z - 1, params)?;
            }
            boundary_neighbor_handler(view, x, y, z, params)
        } else {
            // Case 4: plain merged update.
            adaptive_collide_stream(view, x, y, z, params)?;
            if y > 1 && z > 1 {
                adaptive_collide_stream(view, x - 1, y - 1, z - 1, params)?;
            }
            boundary_neighbor_handler(view, x, y, z, params)
        }
    })
}

/// Stage III, first half: second collide and stream of the intersection
/// layer.
fn intersection_second_step(
    view: &FieldView<'_>,
    my_end: usize,
    params: &KernelParams,
) -> Result<()> {
    let spec = view.spec();
    for iy in 1..=spec.ly {
        for iz in 1..=spec.lz {
            adaptive_collide_stream(view, my_end, iy, iz, params)?;
        }
    }
    Ok(())
}

/// Stage III, second half: the deferred second stream of layer `my_start`;
/// its downward swaps reach the intersection layer of the slab below.
fn first_layer_deferred_stream(view: &FieldView<'_>, my_start: usize) {
    let spec = view.spec();
    for iy in 1..=spec.ly {
        for iz in 1..=spec.lz {
            adaptive_stream(view, my_start, iy, iz);
        }
    }
}
