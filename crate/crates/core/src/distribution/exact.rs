use crate::error::{Error, Result};
use crate::gaps::{default_eps, gap_report};
use crate::iet::{Iet, DEFAULT_PIECE_TOL};
use crate::numerics::{FareySequence, KahanSum};

/// Number of gaps whose normalized length `N * gap` is at least `z`.
pub fn gap_counting(t: &Iet, n: usize, z: f64) -> Result<usize> {
    let rep = gap_report(t, n, default_eps(n), false)?;
    Ok(count_at_least(&rep.gaps, n, z))
}

fn count_at_least(gaps: &[f64], n: usize, z: f64) -> usize {
    let nf = n as f64;
    gaps.iter().filter(|&&g| nf * g >= z).count()
}

/// Measure of `{t in [lo, hi] : c0 + c1 t >= z}`.
fn affine_measure(c0: f64, c1: f64, z: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    if c1 == 0.0 {
        return if c0 >= z { hi - lo } else { 0.0 };
    }
    let root = (z - c0) / c1;
    let (a, b) = if c1 > 0.0 {
        (root.max(lo), hi)
    } else {
        (lo, root.min(hi))
    };
    (b - a).max(0.0)
}

/// `sum_i width_i * |{t in [lo, hi] : h_i(t) >= z}|` for the three
/// rectangles over the Farey arc with denominators `(q1, q2)` at level `n`,
/// parametrized by `t`.
pub(crate) fn arc_integral(q1: f64, q2: f64, n: f64, z: f64, lo: f64, hi: f64) -> f64 {
    let (a, b) = (n / q2, n / q1);
    let widths = [1.0 - q1 / n, (q1 + q2) / n - 1.0, 1.0 - q2 / n];
    // h1 = a t, h2 = (a - b) t + b, h3 = b (1 - t)
    let coeffs = [(0.0, a), (b, a - b), (b, -b)];
    widths
        .iter()
        .zip(coeffs)
        .map(|(&w, (c0, c1))| {
            if w > 0.0 {
                w * affine_measure(c0, c1, z, lo, hi)
            } else {
                0.0
            }
        })
        .sum()
}

fn check_range(a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::domain(format!(
            "need 0 <= a < b <= 1, got [{a}, {b}]"
        )));
    }
    Ok(())
}

/// The average over `alpha` in `[a, b]` of the proportion of gaps of
/// normalized length at least `z`, for rotations by `alpha` at level `n`.
///
/// Integrates exactly arc by arc: on each Farey arc the rectangle heights
/// are affine in the arc parameter, so each bracket integrates in closed
/// form.
pub fn avg_gap_rotation_exact(a: f64, b: f64, z: f64, n: u64) -> Result<f64> {
    Ok(avg_gap_rotation_exact_many(a, b, &[z], n)?[0])
}

/// [`avg_gap_rotation_exact`] for several `z` at once.
pub fn avg_gap_rotation_exact_many(a: f64, b: f64, zs: &[f64], n: u64) -> Result<Vec<f64>> {
    check_range(a, b)?;
    if zs.iter().any(|z| !(*z >= 0.0)) {
        return Err(Error::domain("z must be nonnegative"));
    }
    let mut sums = vec![KahanSum::new(); zs.len()];
    let nf = n as f64;
    for (l, r) in FareySequence::new(n)?.arcs() {
        if r.to_f64() <= a {
            continue;
        }
        if l.to_f64() >= b {
            break;
        }
        let (q1, q2) = (l.q as f64, r.q as f64);
        // alpha = a1/q1 + t/(q1 q2)  <=>  t = (alpha q1 - a1) q2
        let lo = ((a.mul_add(q1, -(l.a as f64))) * q2).clamp(0.0, 1.0);
        let hi = ((b.mul_add(q1, -(l.a as f64))) * q2).clamp(0.0, 1.0);
        let scale = 1.0 / (q1 * q2);
        for (s, &z) in sums.iter_mut().zip(zs) {
            s.add(arc_integral(q1, q2, nf, z, lo, hi) * scale);
        }
    }
    Ok(sums.iter().map(|s| s.value() / (b - a)).collect())
}

/// Midpoint-rule average over `grid` values of `alpha` in `[a, b]` of
/// `G(T o R_alpha, N, z) / N`; parameters where the composition fails are
/// skipped.
pub fn avg_gap_iet(t: &Iet, a: f64, b: f64, z: f64, n: usize, grid: usize) -> Result<f64> {
    Ok(avg_gap_iet_many(t, a, b, &[z], n, grid)?[0])
}

pub fn avg_gap_iet_many(
    t: &Iet,
    a: f64,
    b: f64,
    zs: &[f64],
    n: usize,
    grid: usize,
) -> Result<Vec<f64>> {
    check_range(a, b)?;
    if grid == 0 {
        return Err(Error::domain("grid must be at least 1"));
    }
    let h = (b - a) / grid as f64;
    let alphas: Vec<f64> = (0..grid).map(|k| a + (k as f64 + 0.5) * h).collect();
    avg_gap_iet_at(t, &alphas, zs, n)
}

/// Average of `G(T o R_alpha, N, z) / N` over the given parameters; those
/// outside `(0, 1)` or where the composition fails are skipped.
pub fn avg_gap_iet_at(t: &Iet, alphas: &[f64], zs: &[f64], n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("N must be at least 1"));
    }
    let mut sums = vec![KahanSum::new(); zs.len()];
    let mut used = 0usize;
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 1.0) {
            continue;
        }
        let Ok(c) = t.compose_rotation(alpha, DEFAULT_PIECE_TOL) else {
            continue;
        };
        let rep = gap_report(&c, n, default_eps(n), false)?;
        for (s, &z) in sums.iter_mut().zip(zs) {
            s.add(count_at_least(&rep.gaps, n, z) as f64 / n as f64);
        }
        used += 1;
    }
    if used == 0 {
        return Err(Error::domain("no usable sample points"));
    }
    Ok(sums.iter().map(|s| s.value() / used as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::root_three_iet;
    use crate::numerics::RealValue;
    use crate::zipper::{cutoff_f, zipper_torus};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counting_examples() {
        let r = Iet::rotation(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert_eq!(gap_counting(&r, 9, 0.0).unwrap(), 9);
        assert_eq!(gap_counting(&r, 9, 1.2).unwrap(), 1);
        assert_eq!(gap_counting(&r, 9, 1.0).unwrap(), 7);
    }

    #[test]
    fn exact_average_at_zero_is_one() {
        for n in [1, 5, 37] {
            for (a, b) in [(0.0, 1.0), (0.1, 0.35), (0.5, 0.5001)] {
                let v = avg_gap_rotation_exact(a, b, 0.0, n).unwrap();
                assert!((v - 1.0).abs() < 1e-12, "n={n} [{a},{b}] {v}");
            }
        }
        assert!(avg_gap_rotation_exact(0.5, 0.5, 1.0, 3).is_err());
    }

    #[test]
    fn exact_average_monotone() {
        let zs: Vec<f64> = (0..60).map(|k| k as f64 * 0.05).collect();
        let v = avg_gap_rotation_exact_many(0.0, 1.0, &zs, 40).unwrap();
        for w in v.windows(2) {
            assert!(w[1] <= w[0] + 1e-14);
        }
        assert!(v.iter().all(|x| (0.0..=1.0 + 1e-12).contains(x)));
    }

    #[test]
    fn exact_average_matches_monte_carlo() {
        let n = 50;
        let z = 1.5;
        let exact = avg_gap_rotation_exact(0.0, 1.0, z, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = 100_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..m {
            let alpha = RealValue::from_f64(rng.random_range(1e-9..1.0)).unwrap();
            let Ok(zr) = zipper_torus(&alpha, n) else {
                continue;
            };
            let f = cutoff_f(&zr, z);
            s += f;
            s2 += f * f;
        }
        let mean = s / m as f64;
        let se = ((s2 / m as f64 - mean * mean) / m as f64).sqrt();
        assert!(
            (mean - exact).abs() < 3.0 * se,
            "mean={mean} exact={exact} se={se}"
        );
    }

    #[test]
    fn empirical_average_for_identity_tracks_exact() {
        let t = Iet::identity();
        let n = 20;
        let grid = 4000;
        for z in [0.5, 1.0, 1.5] {
            let e = avg_gap_rotation_exact(0.0, 1.0, z, n as u64).unwrap();
            let m = avg_gap_iet(&t, 0.0, 1.0, z, n, grid).unwrap();
            // O(1/grid) times the number of Farey arcs crossed
            assert!((e - m).abs() < 0.01, "z={z} exact={e} midpoint={m}");
        }
    }

    #[test]
    fn empirical_average_root_three() {
        let t = root_three_iet();
        let zs = [0.0, 0.5, 1.0, 1.5, 2.0];
        let v = avg_gap_iet_many(&t, 0.1, 0.9, &zs, 100, 200).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-9);
        for w in v.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));
    }
}
