use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{containing_gap, ghost_point, interior};
use crate::error::{Error, Result};
use crate::gaps::{gap_report, orbit, VerificationOutcome};
use crate::iet::{dplus1_condition, keane_check, Iet, KeaneOutcome, DEFAULT_PIECE_TOL};

/// Where the next orbit point `T^N 0` falls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GhostCase {
    /// A gap `(T^a 0, T^b 0)` with `a, b != 1` and no `alpha_i` inside.
    I,
    /// A gap ending at `T^1 0`.
    II,
    /// A gap starting at `T^1 0`.
    III,
    /// A gap containing some `alpha_i`.
    IV,
    /// The first gap.
    V,
    /// The last gap.
    VI,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhostClassification {
    pub case: GhostCase,
    pub ghost: f64,
    /// Index of the gap holding the ghost point.
    pub gap: usize,
    /// `pi^{-1}(pi(1) - 1) = d`.
    pub sharp: bool,
    /// No gap holds more than one discontinuity of the inverse.
    pub separated: bool,
    /// Upper bound on the number of distinct gap lengths for this case.
    pub bound: usize,
}

impl GhostCase {
    pub fn bound(self, d: usize, sharp: bool) -> usize {
        use GhostCase::*;
        match (self, sharp) {
            (I | II | III, true) => d + 1,
            (II, false) => d + 1,
            (I | III, false) => d + 2,
            (IV | V | VI, true) => d,
            (IV | V | VI, false) => d + 1,
        }
    }
}

pub fn classify_ghost(t: &Iet, n: usize) -> Result<GhostClassification> {
    let d = t.d();
    if d < 2 || n < 2 {
        return Err(Error::domain("ghost cases need d >= 2 and N >= 2"));
    }
    let tol = DEFAULT_PIECE_TOL;
    let pts = orbit(t, n);
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.sort_by(|&a, &b| pts[a].total_cmp(&pts[b]));
    let sorted: Vec<f64> = sigma.iter().map(|&k| pts[k]).collect();
    let right = |k: usize| if k + 1 < n { sorted[k + 1] } else { 1.0 };
    let ghost = ghost_point(t, n);
    let k = containing_gap(&sorted, ghost);
    if !interior(ghost, sorted[k], right(k), tol) {
        return Err(Error::domain("T^N 0 coincides with an orbit point"));
    }
    let pi = t.pi();
    let alphas: Vec<f64> = (1..d)
        .filter(|&k| pi.preimage(k + 1) != pi.preimage(k) + 1)
        .map(|k| t.alpha()[k])
        .collect();
    let inside = |g: usize| {
        alphas
            .iter()
            .filter(|&&a| interior(a, sorted[g], right(g), tol))
            .count()
    };
    let separated = (0..n).all(|g| inside(g) <= 1);
    let case = if k == 0 {
        GhostCase::V
    } else if k == n - 1 {
        GhostCase::VI
    } else if inside(k) > 0 {
        GhostCase::IV
    } else if sigma[k + 1] == 1 {
        GhostCase::II
    } else if sigma[k] == 1 {
        GhostCase::III
    } else {
        GhostCase::I
    };
    let sharp = dplus1_condition(t.pi());
    Ok(GhostClassification {
        case,
        ghost,
        gap: k,
        sharp,
        separated,
        bound: case.bound(d, sharp),
    })
}

/// Checks the distinct-length count against the bound of the detected case.
/// Not applicable unless the discontinuities are separated and minimality
/// is certified.
pub fn verify_ghost_bound(t: &Iet, n: usize, eps: f64) -> Result<VerificationOutcome> {
    if t.d() < 2 {
        return Ok(VerificationOutcome::not_applicable(
            "ghost",
            "identity map is not minimal",
        ));
    }
    if let KeaneOutcome::Violated { .. } = keane_check(t, n.max(1000), 1e-10 / t.d() as f64) {
        return Ok(VerificationOutcome::not_applicable(
            "ghost",
            "Keane condition fails",
        ));
    }
    let c = classify_ghost(t, n)?;
    if !c.separated {
        return Ok(VerificationOutcome {
            observed: json!({"classification": c}),
            ..VerificationOutcome::not_applicable("ghost", "discontinuities are not yet separated")
        });
    }
    let count = gap_report(t, n, eps, false)?.clusters.len();
    let ok = count <= c.bound;
    Ok(VerificationOutcome::new(
        "ghost",
        ok,
        json!({"bound": c.bound}),
        json!({"distinct_lengths": count, "classification": c}),
        if ok {
            String::new()
        } else {
            format!("{count} distinct lengths exceed {}", c.bound)
        },
    ))
}
