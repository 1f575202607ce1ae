//! Gap distributions: finite-level averages, their limit, and the Farey
//! sum against the integral over the region `x + y > 1`.

mod curve;
mod exact;
mod farey_sum;
mod limit;
mod verify;

pub use curve::{parse_z_grid, CurveKind, DistributionCurve};
pub use exact::{
    avg_gap_iet, avg_gap_iet_at, avg_gap_iet_many, avg_gap_rotation_exact,
    avg_gap_rotation_exact_many, gap_counting,
};
pub use farey_sum::{
    f_from_f, f_from_f_checked, farey_arc_sum, omega_integral, omega_integral_tol,
};
pub use limit::{limit_g, LimitValue};
pub use verify::verify_dist_convergence;
