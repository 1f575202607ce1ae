use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iet::Iet;

/// `[T^0 0, ..., T^{n-1} 0]`.
///
/// Rotations are evaluated as fractional parts of `k * theta` with one
/// rounding each, instead of by iteration.
pub fn orbit(t: &Iet, n: usize) -> Vec<f64> {
    if let Some(theta) = t.rotation_angle() {
        return (0..n).map(|k| frac_mul(k as f64, theta)).collect();
    }
    let mut out = Vec::with_capacity(n);
    let mut x = 0.0;
    for _ in 0..n {
        out.push(x);
        x = t.map(x);
    }
    out
}

fn frac_mul(k: f64, theta: f64) -> f64 {
    let f = (k * theta).floor();
    let mut r = k.mul_add(theta, -f);
    if r < 0.0 {
        r += 1.0;
    }
    if r >= 1.0 {
        r -= 1.0;
    }
    r
}

/// A distinct gap length and how many gaps have it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub length: f64,
    pub count: usize,
}

/// Sorted orbit, sorting permutation, gaps and gap-length clusters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub n: usize,
    pub eps: f64,
    /// Distinct orbit points in increasing order (all `n` when raw).
    pub points: Vec<f64>,
    /// `sigma[i]` is the exponent of the `i`-th smallest orbit point; ties
    /// are broken by exponent.
    pub sigma: Vec<usize>,
    /// `gaps[i]` follows `points[i]`; the last one wraps around to 1.
    pub gaps: Vec<f64>,
    /// Distinct lengths in increasing order.
    pub clusters: Vec<Cluster>,
    pub raw: bool,
}

/// Default clustering tolerance `1e-9 / n`.
pub fn default_eps(n: usize) -> f64 {
    1e-9 / n.max(1) as f64
}

/// Builds the gap report of the orbit of 0 of length `n`.
///
/// Points closer than `eps` (including across 1 = 0) are merged unless
/// `raw` is set, in which case all `n` points are kept and zero gaps may
/// appear.
pub fn gap_report(t: &Iet, n: usize, eps: f64, raw: bool) -> Result<GapReport> {
    if n == 0 {
        return Err(Error::domain("orbit length must be at least 1"));
    }
    if !(eps > 0.0) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    let pts = orbit(t, n);
    Ok(report_from_orbit(&pts, eps, raw))
}

pub(crate) fn report_from_orbit(pts: &[f64], eps: f64, raw: bool) -> GapReport {
    let n = pts.len();
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.sort_by(|&a, &b| pts[a].total_cmp(&pts[b]).then(a.cmp(&b)));
    let mut points: Vec<f64> = Vec::with_capacity(n);
    for &k in &sigma {
        let x = pts[k];
        if raw {
            points.push(x);
            continue;
        }
        match points.last() {
            Some(&prev) if x - prev < eps => {}
            _ => points.push(x),
        }
    }
    if !raw {
        // a point just below 1 coincides with 0 on the circle
        while points.len() > 1 && 1.0 - points[points.len() - 1] + points[0] < eps {
            points.pop();
        }
    }
    let mut gaps: Vec<f64> = points.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(1.0 - points[points.len() - 1] + points[0]);
    let clusters = cluster_lengths(&gaps, eps);
    GapReport {
        n,
        eps,
        points,
        sigma,
        gaps,
        clusters,
        raw,
    }
}

/// Groups lengths whose sorted neighbors differ by less than `eps`; each
/// cluster is represented by the mean of its members.
pub fn cluster_lengths(lengths: &[f64], eps: f64) -> Vec<Cluster> {
    let mut sorted = lengths.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for x in sorted {
        match out.last_mut() {
            Some(c) if x - last < eps => {
                c.0 += x;
                c.1 += 1;
            }
            _ => out.push((x, 1, x)),
        }
        last = x;
    }
    out.into_iter()
        .map(|(sum, count, _)| Cluster {
            length: sum / count as f64,
            count,
        })
        .collect()
}

impl GapReport {
    pub fn distinct_lengths(&self) -> usize {
        self.clusters.len()
    }

    pub fn gap_sum(&self) -> f64 {
        crate::numerics::KahanSum::from_iter(self.gaps.iter().copied()).value()
    }

    /// The clusters as CSV with header `length,count`.
    pub fn clusters_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.clusters {
            w.serialize(c)
                .map_err(|e| Error::validation(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::validation(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::root_three_iet;

    #[test]
    fn orbit_examples() {
        let o = orbit(&root_three_iet(), 8);
        let want = [
            0.0, 0.42265, 0.845299, 0.138193, 0.560842, 0.983492, 0.276385, 0.699035,
        ];
        for (a, b) in o.iter().zip(want) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        assert_eq!(orbit(&Iet::identity(), 5), vec![0.0; 5]);
        let r = Iet::rotation(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let o = orbit(&r, 3);
        assert!((o[2] - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn golden_rotation_clusters() {
        let r = Iet::rotation(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let rep = gap_report(&r, 9, 1e-10, false).unwrap();
        let s2 = 2f64.sqrt();
        let want = [
            (5.0 - 7.0 / s2, 2),
            (3.0 / s2 - 2.0, 6),
            (3.0 - 4.0 / s2, 1),
        ];
        assert_eq!(rep.clusters.len(), 3);
        for (c, (l, m)) in rep.clusters.iter().zip(want) {
            assert_eq!(c.count, m);
            assert!((c.length - l).abs() < 1e-12);
        }
        assert!((rep.gap_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rational_rotation_deduplicates() {
        let r = Iet::rotation(1.0 / 3.0).unwrap();
        let rep = gap_report(&r, 7, default_eps(7), false).unwrap();
        assert_eq!(rep.points.len(), 3);
        assert_eq!(rep.clusters.len(), 1);
        assert_eq!(rep.clusters[0].count, 3);
        assert!((rep.clusters[0].length - 1.0 / 3.0).abs() < 1e-12);
        let raw = gap_report(&r, 7, default_eps(7), true).unwrap();
        assert_eq!(raw.gaps.len(), 7);
        assert_eq!(raw.sigma.len(), 7);
    }

    #[test]
    fn root_three_clusters() {
        let rep = gap_report(&root_three_iet(), 8, default_eps(8), false).unwrap();
        let got: Vec<(f64, usize)> = rep.clusters.iter().map(|c| (c.length, c.count)).collect();
        let want = [(0.016508, 1), (0.138193, 5), (0.146265, 2)];
        for (g, w) in got.iter().zip(want) {
            assert!((g.0 - w.0).abs() < 1e-6);
            assert_eq!(g.1, w.1);
        }
    }

    #[test]
    fn identity_orbit_collapses() {
        let rep = gap_report(&Iet::identity(), 4, 1e-9, false).unwrap();
        assert_eq!(rep.points, vec![0.0]);
        assert_eq!(rep.gaps, vec![1.0]);
        assert!(gap_report(&Iet::identity(), 0, 1e-9, false).is_err());
        assert!(gap_report(&Iet::identity(), 3, 0.0, false).is_err());
    }

    #[test]
    fn csv_export() {
        let r = Iet::rotation(0.25).unwrap();
        let rep = gap_report(&r, 8, 1e-9, false).unwrap();
        assert_eq!(rep.clusters_csv().unwrap(), "length,count\n0.25,4\n");
    }
}
