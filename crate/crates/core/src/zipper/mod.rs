//! Zippered-rectangle data of sheared unimodular tori.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::gaps::{gap_report, three_gap_predict, ThreeGapPrediction, VerificationOutcome};
use crate::iet::{Iet, Permutation};
use crate::numerics::{mod_inverse, RealValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZipperCase {
    Rational,
    Generic,
}

/// Widths, heights and combinatorics of a decomposition into rectangles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZipperedRectangles {
    pub widths: Vec<f64>,
    pub heights: Vec<f64>,
    pub pi: Permutation,
    pub case: ZipperCase,
}

impl ZipperedRectangles {
    /// `sum widths[i] * heights[i]`.
    pub fn area(&self) -> f64 {
        self.widths
            .iter()
            .zip(&self.heights)
            .map(|(w, h)| w * h)
            .sum()
    }

    pub fn total_width(&self) -> f64 {
        self.widths.iter().sum()
    }

    fn generic(widths: [f64; 3], heights: [f64; 3]) -> Self {
        Self {
            widths: widths.to_vec(),
            heights: heights.to_vec(),
            pi: Permutation::from_images(vec![3, 2, 1]).expect("valid"),
            case: ZipperCase::Generic,
        }
    }
}

fn generic_widths(q1: u64, q2: u64, n: u64) -> [f64; 3] {
    let nf = n as f64;
    [
        (n - q1) as f64 / nf,
        (q1 + q2 - n) as f64 / nf,
        (n - q2) as f64 / nf,
    ]
}

/// The rectangles of the torus `g_{log N} h_alpha Z^2`.
pub fn zipper_torus(alpha: &RealValue, n: u64) -> Result<ZipperedRectangles> {
    match three_gap_predict(alpha, n)? {
        ThreeGapPrediction::Rational { a, q, .. } => {
            let n1 = mod_inverse(a as i64, q as i64)? as u64;
            let nf = n as f64;
            let h = nf / q as f64;
            Ok(ZipperedRectangles {
                widths: vec![(q - n1) as f64 / nf, n1 as f64 / nf],
                heights: vec![h, h],
                pi: Permutation::from_images(vec![2, 1]).expect("valid"),
                case: ZipperCase::Rational,
            })
        }
        ThreeGapPrediction::Generic {
            left, right, a, c, ..
        } => {
            let nf = n as f64;
            let (h1, h3) = (nf * a, nf * c);
            Ok(ZipperedRectangles::generic(
                generic_widths(left.q, right.q, n),
                [h1, h1 + h3, h3],
            ))
        }
    }
}

fn check_arc(q1: u64, q2: u64, n: u64) -> Result<()> {
    if q1 == 0 || q2 == 0 || q1 > n || q2 > n || q1 + q2 <= n || q1.gcd(&q2) != 1 {
        return Err(Error::domain(format!(
            "({q1}, {q2}) are not consecutive Farey denominators of order {n}"
        )));
    }
    Ok(())
}

/// Heights along the Farey arc with denominators `(q1, q2)`, where
/// `alpha = a1/q1 + t/(q1 q2)`. Each height is affine in `t`.
pub fn zipper_arc_param(q1: u64, q2: u64, n: u64, t: f64) -> Result<ZipperedRectangles> {
    check_arc(q1, q2, n)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("arc parameter {t} not in (0, 1)")));
    }
    let (a, b) = (n as f64 / q2 as f64, n as f64 / q1 as f64);
    Ok(ZipperedRectangles::generic(
        generic_widths(q1, q2, n),
        [a * t, (a - b) * t + b, b * (1.0 - t)],
    ))
}

/// `x` when `y >= z`, else 0.
pub fn cutoff_d(x: f64, y: f64, z: f64) -> f64 {
    if y >= z {
        x
    } else {
        0.0
    }
}

/// Total width of the rectangles of height at least `z`.
pub fn cutoff_f(zr: &ZipperedRectangles, z: f64) -> f64 {
    zr.widths
        .iter()
        .zip(&zr.heights)
        .map(|(&w, &h)| cutoff_d(w, h, z))
        .sum()
}

/// Merges entries of equal height (within `tol`), dropping zero widths.
fn merge_by_height(mut pairs: Vec<(f64, f64)>, tol: f64) -> Vec<(f64, f64)> {
    pairs.retain(|p| p.0 > 0.0);
    pairs.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (w, h) in pairs {
        match out.last_mut() {
            Some(last) if (h - last.1).abs() <= tol => last.0 += w,
            _ => out.push((w, h)),
        }
    }
    out
}

/// Checks that the gaps of the rotation, as pairs `(count/N, N*length)`,
/// are the rectangles `(width, height)` of the torus.
///
/// Widths are compared within `eps`, heights within `N * eps` (a length
/// error of `eps` scaled by `N`).
pub fn check_gap_zipper_correspondence(
    alpha: &RealValue,
    n: u64,
    eps: f64,
) -> Result<VerificationOutcome> {
    let zr = zipper_torus(alpha, n)?;
    let rep = gap_report(&Iet::rotation(alpha.value())?, n as usize, eps, false)?;
    let nf = n as f64;
    let htol = nf * eps;
    let from_gaps = merge_by_height(
        rep.clusters
            .iter()
            .map(|c| (c.count as f64 / nf, nf * c.length))
            .collect(),
        htol,
    );
    let from_zipper = merge_by_height(
        zr.widths
            .iter()
            .copied()
            .zip(zr.heights.iter().copied())
            .collect(),
        htol,
    );
    let ok = from_gaps.len() == from_zipper.len()
        && from_gaps
            .iter()
            .zip(&from_zipper)
            .all(|(g, z)| (g.0 - z.0).abs() <= eps && (g.1 - z.1).abs() <= htol);
    let pairs = |v: &[(f64, f64)]| {
        v.iter()
            .map(|(w, h)| json!({"width": w, "height": h}))
            .collect::<Vec<_>>()
    };
    Ok(VerificationOutcome::new(
        "zipper",
        ok,
        json!({"rectangles": pairs(&from_zipper), "zipper": zr}),
        json!({"rectangles": pairs(&from_gaps)}),
        if ok {
            ""
        } else {
            "gap data and rectangles differ"
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{golden_conjugate, inverse_root_two};

    #[test]
    fn golden_torus() {
        let zr = zipper_torus(&inverse_root_two(), 9).unwrap();
        let want_w = [2.0 / 3.0, 1.0 / 9.0, 2.0 / 9.0];
        let want_h = [1.091_883, 1.544_156, 0.452_273];
        for k in 0..3 {
            assert!((zr.widths[k] - want_w[k]).abs() < 1e-15);
            assert!((zr.heights[k] - want_h[k]).abs() < 1e-6);
        }
        assert!((zr.area() - 1.0).abs() < 1e-12);
        assert!((cutoff_f(&zr, 1.2) - 1.0 / 9.0).abs() < 1e-15);
        assert!((cutoff_f(&zr, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rational_torus() {
        let zr = zipper_torus(&RealValue::parse("1/2").unwrap(), 4).unwrap();
        assert_eq!(zr.widths, vec![0.25, 0.25]);
        assert_eq!(zr.heights, vec![2.0, 2.0]);
        assert_eq!(zr.case, ZipperCase::Rational);
    }

    #[test]
    fn arc_parametrization_agrees() {
        let s2 = 2f64.sqrt();
        let t = 21.0 * (1.0 / s2 - 2.0 / 3.0);
        assert!((t - 0.849_242).abs() < 1e-6);
        let a = zipper_arc_param(3, 7, 9, t).unwrap();
        let b = zipper_torus(&inverse_root_two(), 9).unwrap();
        for k in 0..3 {
            assert!((a.heights[k] - b.heights[k]).abs() < 1e-12);
        }
        let c = zipper_arc_param(1, 1, 1, 0.5).unwrap();
        assert_eq!(c.heights, vec![0.5, 1.0, 0.5]);
        assert_eq!(c.widths, vec![0.0, 1.0, 0.0]);
        assert!(zipper_arc_param(2, 2, 2, 0.5).is_err());
        assert!(zipper_arc_param(3, 7, 9, 1.0).is_err());
        // endpoint limit: h1 -> 0, h3 -> N/q1
        let e = zipper_arc_param(3, 7, 9, 1e-12).unwrap();
        assert!(e.heights[0] < 1e-11 && (e.heights[2] - 3.0).abs() < 1e-11);
    }

    #[test]
    fn cutoff_basics() {
        assert_eq!(cutoff_d(0.3, 5.0, 0.0), 0.3);
        assert_eq!(cutoff_d(0.3, 0.5, 1.0), 0.0);
    }

    #[test]
    fn correspondence_examples() {
        assert!(
            check_gap_zipper_correspondence(&inverse_root_two(), 9, 1e-10)
                .unwrap()
                .passed()
        );
        assert!(
            check_gap_zipper_correspondence(&RealValue::parse("1/3").unwrap(), 7, 1e-10)
                .unwrap()
                .passed()
        );
        assert!(
            check_gap_zipper_correspondence(&golden_conjugate(), 13, 1e-10)
                .unwrap()
                .passed()
        );
    }
}
