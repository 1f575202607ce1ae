//! Orbit gaps, the three gap predictor and the gap-count verification
//! suites.

mod predict;
mod report;
mod verify;

pub use predict::{sigma_recursion, three_gap_predict, ThreeGapPrediction};
pub use report::{cluster_lengths, default_eps, gap_report, orbit, Cluster, GapReport};
pub use verify::{verify_dplus2, verify_three_gap, VerificationOutcome, VerificationStatus};
