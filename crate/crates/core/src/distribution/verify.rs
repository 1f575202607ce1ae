use serde_json::json;

use super::exact::avg_gap_rotation_exact_many;
use super::limit::limit_g;
use crate::error::{Error, Result};
use crate::gaps::VerificationOutcome;

const CONTINUITY_TOL: f64 = 1e-4;

/// Checks that `|avg_gap_rotation_exact(0, 1, z, N) - limit_g(z)|` does not
/// grow along the increasing levels `ns`, ends below `tol`, and that the
/// limit is continuous across `z = 1` and `z = 2`.
pub fn verify_dist_convergence(zs: &[f64], ns: &[u64], tol: f64) -> Result<VerificationOutcome> {
    if zs.is_empty() || ns.is_empty() {
        return Err(Error::domain("need at least one z and one N"));
    }
    if zs.iter().any(|&z| !(z > 0.0)) {
        return Err(Error::domain("cut-offs must be positive"));
    }
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let limits = zs
        .iter()
        .map(|&z| limit_g(z).map(|v| v.value))
        .collect::<Result<Vec<_>>>()?;
    // errors[k][i]: level ns[k], cut-off zs[i]
    let errors = ns
        .iter()
        .map(|&n| {
            let v = avg_gap_rotation_exact_many(0.0, 1.0, zs, n)?;
            Ok(v.iter()
                .zip(&limits)
                .map(|(a, b)| (a - b).abs())
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let monotone = errors
        .windows(2)
        .all(|w| w[1].iter().zip(&w[0]).all(|(b, a)| b <= a));
    let last = errors.last().expect("ns is nonempty");
    let small = last.iter().all(|&e| e <= tol);
    let h = 1e-9;
    let jump =
        |z: f64| -> Result<f64> { Ok((limit_g(z - h)?.value - limit_g(z + h)?.value).abs()) };
    let jumps = [jump(1.0)?, jump(2.0)?];
    let continuous = jumps.iter().all(|&j| j <= CONTINUITY_TOL);
    let ok = monotone && small && continuous;
    let mut problems = Vec::new();
    if !monotone {
        problems.push("error grows with N");
    }
    if !small {
        problems.push("final error exceeds the tolerance");
    }
    if !continuous {
        problems.push("limit jumps at a branch point");
    }
    Ok(VerificationOutcome::new(
        "dist-convergence",
        ok,
        json!({"tolerance": tol, "continuity_tolerance": CONTINUITY_TOL}),
        json!({"z": zs, "N": ns, "errors": errors, "jumps": jumps}),
        problems.join("; "),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_on_the_small_cutoffs() {
        let out = verify_dist_convergence(&[0.25, 0.5, 0.75], &[50, 200, 800], 0.01).unwrap();
        assert!(out.passed(), "{out:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(verify_dist_convergence(&[], &[10], 0.1).is_err());
        assert!(verify_dist_convergence(&[0.0], &[10], 0.1).is_err());
    }
}
