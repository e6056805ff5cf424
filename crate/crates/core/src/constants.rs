//! Shared numerical tolerances and process-wide knobs.

use std::sync::atomic::AtomicUsize;

/// Compact-support proxy: fields entering kernel operations should satisfy
/// |u| < DECAY_TOL on the outermost ring of nodes. Violations are flagged,
/// not rejected (the Moser function touches zero exactly at |x| = 1 ≪ L).
pub const DECAY_TOL: f64 = 1e-10;

/// Maximum relative symmetry defect accepted by operations that require
/// group-invariant inputs.
pub const SYM_TOL: f64 = 1e-8;

/// Guard against division by zero when normalizing symmetry defects.
pub const DEFECT_EPS: f64 = 1e-300;

/// Absolute slack absorbed by quadrature when certifying sign conditions.
pub const QUAD_TOL: f64 = 1e-9;

/// Worker cap for row-parallel loops; see `crate::set_max_threads`.
pub static MAX_THREADS: AtomicUsize = AtomicUsize::new(1);
