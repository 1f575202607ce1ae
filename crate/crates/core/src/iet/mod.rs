//! Interval exchange transformations.

mod keane;
mod map;
mod permutation;
mod spec;
mod surface;

pub use keane::{keane_check, KeaneOutcome};
pub use map::{Iet, DEFAULT_PIECE_TOL};
pub use permutation::Permutation;
pub use spec::{IetSpec, Notation};
pub use surface::{
    dplus1_condition, is_arc_exchange, singularity_at_origin, surface_invariants, SurfaceInvariants,
};
