//! Gröbner bases, ideal and module arithmetic, syzygies and elimination.

pub mod engine;
pub mod hilbert;
mod ideal;
mod kernel;
pub mod module;
mod submodule;

use std::sync::atomic::{AtomicUsize, Ordering};

pub use engine::{groebner, Gb, GbConfig, DEFAULT_MAX_PAIRS};
pub use hilbert::{monomial_ideal_numerator, HilbertSeries, Laurent};
pub use ideal::Ideal;
pub use kernel::kernel_of_ring_map;
pub use module::{top_order, FreeModule, ModuleOrder, ModuleOrderKind, Term, VecOps, Vector};
pub use submodule::{quotient_series, Lifter, ModuleGens};

static MAX_PAIRS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_PAIRS);

/// Process-wide cap on the S-pair queue used by default configurations.
pub fn max_pairs() -> usize {
    MAX_PAIRS.load(Ordering::Relaxed)
}

pub fn set_max_pairs(n: usize) {
    MAX_PAIRS.store(n, Ordering::Relaxed);
}
