use serde::{Deserialize, Serialize};

use super::report::{cluster_lengths, Cluster};
use crate::error::{Error, Result};
use crate::numerics::{farey_neighbors, FareyFraction, FareyLocation, RealValue};

/// Gap structure of the first `n` points of the orbit of 0 under rotation
/// by `alpha`, as given by the three gap theorem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum ThreeGapPrediction {
    /// `alpha = a/q` with `q <= n`: `q` gaps of length `1/q`.
    Rational { a: u64, q: u64, length: f64 },
    /// `a1/q1 < alpha < a2/q2` consecutive in the Farey sequence of order `n`.
    Generic {
        left: FareyFraction,
        right: FareyFraction,
        count_a: u64,
        count_b: u64,
        count_c: u64,
        /// `q1 alpha - a1`
        a: f64,
        /// `a + c`
        b: f64,
        /// `a2 - q2 alpha`
        c: f64,
    },
}

pub fn three_gap_predict(alpha: &RealValue, n: u64) -> Result<ThreeGapPrediction> {
    match farey_neighbors(alpha, n)? {
        FareyLocation::Exact { fraction } => Ok(ThreeGapPrediction::Rational {
            a: fraction.a,
            q: fraction.q,
            length: 1.0 / fraction.q as f64,
        }),
        FareyLocation::Between { left, right } => {
            let a = alpha.affine(left.q as i64, left.a as i64);
            let c = -alpha.affine(right.q as i64, right.a as i64);
            Ok(ThreeGapPrediction::Generic {
                left,
                right,
                count_a: n - left.q,
                count_b: left.q + right.q - n,
                count_c: n - right.q,
                a,
                b: a + c,
                c,
            })
        }
    }
}

impl ThreeGapPrediction {
    /// Predicted clusters in increasing length, with zero counts dropped and
    /// lengths closer than `eps` merged.
    pub fn expected_clusters(&self, eps: f64) -> Vec<Cluster> {
        let parts: Vec<(f64, u64)> = match *self {
            ThreeGapPrediction::Rational { q, length, .. } => vec![(length, q)],
            ThreeGapPrediction::Generic {
                count_a,
                count_b,
                count_c,
                a,
                b,
                c,
                ..
            } => vec![(a, count_a), (b, count_b), (c, count_c)],
        };
        let mut lengths = Vec::new();
        for (l, m) in parts {
            lengths.extend(std::iter::repeat_n(l, m as usize));
        }
        cluster_lengths(&lengths, eps)
    }

    /// `sum count * length`, which should be 1.
    pub fn total_length(&self) -> f64 {
        match *self {
            ThreeGapPrediction::Rational { q, length, .. } => q as f64 * length,
            ThreeGapPrediction::Generic {
                count_a,
                count_b,
                count_c,
                a,
                b,
                c,
                ..
            } => count_a as f64 * a + count_b as f64 * b + count_c as f64 * c,
        }
    }
}

/// The order in which the orbit points of a generic rotation appear on the
/// circle, from the denominators alone.
pub fn sigma_recursion(n: usize, q1: usize, q2: usize) -> Result<Vec<usize>> {
    if n == 0 || q1 == 0 || q2 == 0 || q1 > n || q2 > n || q1 + q2 <= n {
        return Err(Error::domain(format!(
            "({q1}, {q2}) is not a Farey denominator pair for order {n}"
        )));
    }
    let mut sigma = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut s = 0usize;
    for _ in 0..n {
        if s >= n || seen[s] {
            return Err(Error::consistency(format!(
                "recursion with q1={q1}, q2={q2} left 0..{n} or repeated {s}"
            )));
        }
        seen[s] = true;
        sigma.push(s);
        s = if s < n - q1 {
            s + q1
        } else if s < q2 {
            // n - q1 <= s < q2
            (s + q1).wrapping_sub(q2)
        } else {
            s.wrapping_sub(q2)
        };
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_prediction() {
        let x = RealValue::parse("sqrt(1/2)").unwrap();
        let p = three_gap_predict(&x, 9).unwrap();
        let s2 = 2f64.sqrt();
        match p {
            ThreeGapPrediction::Generic {
                count_a,
                count_b,
                count_c,
                a,
                b,
                c,
                ..
            } => {
                assert_eq!((count_a, count_b, count_c), (6, 1, 2));
                assert!((a - (3.0 / s2 - 2.0)).abs() < 1e-15);
                assert!((b - (3.0 - 4.0 / s2)).abs() < 1e-15);
                assert!((c - (5.0 - 7.0 / s2)).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert!((p.total_length() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rational_and_edge_arcs() {
        let x = RealValue::parse("1/3").unwrap();
        assert_eq!(
            three_gap_predict(&x, 7).unwrap(),
            ThreeGapPrediction::Rational {
                a: 1,
                q: 3,
                length: 1.0 / 3.0
            }
        );
        let x = RealValue::parse("0.05").unwrap();
        match three_gap_predict(&x, 10).unwrap() {
            ThreeGapPrediction::Generic {
                left,
                right,
                count_a,
                count_b,
                count_c,
                ..
            } => {
                assert_eq!((left.a, left.q, right.a, right.q), (0, 1, 1, 10));
                assert_eq!((count_a, count_b, count_c), (9, 1, 0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(
            sigma_recursion(9, 3, 7).unwrap(),
            vec![0, 3, 6, 2, 5, 8, 1, 4, 7]
        );
        assert_eq!(sigma_recursion(2, 1, 2).unwrap(), vec![0, 1]);
        assert_eq!(
            sigma_recursion(10, 1, 10).unwrap(),
            (0..10).collect::<Vec<_>>()
        );
        assert!(sigma_recursion(4, 2, 2).is_err());
        assert!(sigma_recursion(5, 6, 1).is_err());
    }

    #[test]
    fn sigma_matches_sorting_oracle() {
        let x = 1.0 / 2f64.sqrt();
        let mut idx: Vec<usize> = (0..9).collect();
        idx.sort_by(|&a, &b| ((a as f64 * x) % 1.0).total_cmp(&((b as f64 * x) % 1.0)));
        assert_eq!(sigma_recursion(9, 3, 7).unwrap(), idx);
    }
}
