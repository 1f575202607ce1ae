//! The Rauzy graph of the gaps with its Lebesgue weights, and the slot
//! forest that rebuilds every gap length from the slots next to the
//! discontinuities.

mod fgaps;
mod ggaps;
mod ghost;

pub use fgaps::{
    fgaps_build, gap_lengths_from_forest, verify_forest, verify_glue, ForestLength, ForestNode,
    ForestNodeKind, GapForest, GapRole, Slot,
};
pub use ggaps::{
    boshernitzan_bound_check, ggaps_build, ggaps_build_tol, outdegree_identity_check, GapEdge,
    GapGraph, GapVertex,
};
pub use ghost::{classify_ghost, verify_ghost_bound, GhostCase, GhostClassification};

use crate::gaps::orbit;
use crate::iet::Iet;

/// Index of the gap `[points[k], points[k+1])` containing `x`.
fn containing_gap(points: &[f64], x: f64) -> usize {
    points.partition_point(|&p| p <= x).max(1) - 1
}

/// `T^N 0`.
fn ghost_point(t: &Iet, n: usize) -> f64 {
    orbit(t, n + 1)[n]
}

fn interior(x: f64, lo: f64, hi: f64, tol: f64) -> bool {
    x > lo + tol && x < hi - tol
}
