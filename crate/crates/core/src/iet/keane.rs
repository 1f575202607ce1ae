use serde::{Deserialize, Serialize};

use super::map::Iet;

/// Result of a bounded search for coincidences among backward orbits of the
/// discontinuities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum KeaneOutcome {
    SatisfiedUpToDepth {
        depth: usize,
    },
    /// `T^{-n} alpha_i` and `T^{-m} alpha_j` agree within the tolerance.
    Violated {
        i: usize,
        n: usize,
        j: usize,
        m: usize,
        distance: f64,
    },
}

impl KeaneOutcome {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, KeaneOutcome::SatisfiedUpToDepth { .. })
    }
}

/// Iterates the inverse map `depth` times on each interior discontinuity
/// `alpha_1 .. alpha_{d-1}` and looks for two orbit points within `tol`.
///
/// This certifies nothing beyond `depth`. For `d = 1` there are no
/// discontinuities and the check is vacuous.
pub fn keane_check(t: &Iet, depth: usize, tol: f64) -> KeaneOutcome {
    let inv = t.inverse();
    let d = t.d();
    let mut pts: Vec<(f64, usize, usize)> = Vec::with_capacity(depth * d.saturating_sub(1));
    for i in 1..d {
        let mut x = t.alpha()[i];
        for n in 1..=depth {
            x = inv.map(x);
            pts.push((x, i, n));
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<KeaneOutcome> = None;
    let mut check = |a: &(f64, usize, usize), b: &(f64, usize, usize), dist: f64| {
        if dist <= tol {
            let cand = KeaneOutcome::Violated {
                i: a.1,
                n: a.2,
                j: b.1,
                m: b.2,
                distance: dist,
            };
            // report the earliest collision
            let key = |o: &KeaneOutcome| match o {
                KeaneOutcome::Violated { n, m, .. } => (*n).max(*m),
                _ => usize::MAX,
            };
            if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                best = Some(cand);
            }
        }
    };
    for w in pts.windows(2) {
        check(&w[0], &w[1], w[1].0 - w[0].0);
    }
    // the circle closes up: 0 and a point just below 1 are close too
    if let (Some(first), Some(last)) = (pts.first(), pts.last()) {
        if pts.len() > 1 {
            check(first, last, first.0 + (1.0 - last.0));
        }
    }
    best.unwrap_or(KeaneOutcome::SatisfiedUpToDepth { depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::root_three_iet;

    #[test]
    fn periodic_rotation_fails() {
        let r = Iet::rotation(0.5).unwrap();
        match keane_check(&r, 10, 1e-10) {
            KeaneOutcome::Violated {
                i: 1, j: 1, n, m, ..
            } => {
                assert_ne!(n, m);
                assert_eq!(n.abs_diff(m) % 2, 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn irrational_examples_pass() {
        let r = Iet::rotation(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!(keane_check(&r, 1000, 1e-10).is_satisfied());
        assert!(keane_check(&root_three_iet(), 1000, 1e-10 / 3.0).is_satisfied());
        assert!(keane_check(&Iet::identity(), 10, 1e-10).is_satisfied());
    }
}
