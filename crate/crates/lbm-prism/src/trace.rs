//! Debug-build event tracing for the swap kernels.
//!
//! When a capture is active, every collide/revert/lid/stream kernel records
//! an event tagged with the field it touched, and the parallel solver emits
//! stage markers after each barrier. Tests use the log to check the link-once
//! discipline (each interior link exchanged exactly once per time step, wall
//! links never) and the staging of the parallel protocol.
//!
//! The module only exists in builds with debug assertions; release binaries
//! carry no tracing code.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Mutex, MutexGuard, PoisonError};

/// One recorded kernel event. `field` keys the lattice the event touched
/// (the base address of its slot storage), letting concurrent tests filter
/// out each other's activity; `thread` identifies the worker that performed
/// it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Event {
    pub field: usize,
    pub thread: std::thread::ThreadId,
    pub kind: EventKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// BGK relaxation applied to a cell.
    Collide { cell: usize },
    /// Local opposite-slot exchange applied to a cell.
    Revert { cell: usize },
    /// Moving-lid momentum correction applied to a cell.
    LidCorrection { cell: usize },
    /// A streaming kernel ran on a cell (whether or not any link exchanged).
    Stream { cell: usize },
    /// One executed link exchange: `cell` swapped with its neighbor in
    /// direction `dir` (1..=9).
    LinkSwap { cell: usize, dir: usize },
    /// Stage boundary reached by a parallel worker (emitted after the
    /// corresponding barrier).
    Marker { worker: usize, tag: StageTag },
}

/// Barrier-aligned progress points of the parallel two-step cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageTag {
    /// Intersection layers collided and reverted.
    IntersectionPrepared,
    /// Sub-domain sweep finished.
    SweepDone,
    /// Second collide and stream on the intersection layers finished.
    IntersectionAdvanced,
}

static ENABLED: AtomicBool = AtomicBool::new(false);
static LOG: Mutex<Vec<Event>> = Mutex::new(Vec::new());
static SESSION: Mutex<()> = Mutex::new(());

fn unpoison<'a, T>(
    r: Result<MutexGuard<'a, T>, PoisonError<MutexGuard<'a, T>>>,
) -> MutexGuard<'a, T> {
    r.unwrap_or_else(PoisonError::into_inner)
}

/// Runs `f` with event recording enabled and returns the captured log.
///
/// Captures are serialized process-wide; events produced by unrelated fields
/// during the capture are still logged and should be filtered by field key.
pub fn capture<R>(f: impl FnOnce() -> R) -> (R, Vec<Event>) {
    let _session = unpoison(SESSION.lock());
    unpoison(LOG.lock()).clear();
    ENABLED.store(true, Ordering::SeqCst);
    let out = f();
    ENABLED.store(false, Ordering::SeqCst);
    let log = std::mem::take(&mut *unpoison(LOG.lock()));
    (out, log)
}

#[inline]
pub(crate) fn record(field: usize, kind: EventKind) {
    if ENABLED.load(Ordering::Relaxed) {
        let thread = std::thread::current().id();
        unpoison(LOG.lock()).push(Event {
            field,
            thread,
            kind,
        });
    }
}

/// Emits a stage marker from a parallel worker.
pub(crate) fn marker(field: usize, worker: usize, tag: StageTag) {
    record(field, EventKind::Marker { worker, tag });
}

/// Events touching one field, in global log order, with their log positions.
pub fn events_for(log: &[Event], field_key: usize) -> Vec<(usize, EventKind)> {
    log.iter()
        .enumerate()
        .filter(|(_, e)| e.field == field_key)
        .map(|(i, e)| (i, e.kind))
        .collect()
}
