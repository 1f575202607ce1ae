use std::f64::consts::PI;

use super::exact::arc_integral;
use crate::error::{Error, Result};
use crate::numerics::{FareySequence, KahanSum};

/// `F(x, y) = (1/(xy)) * integral over t in [0,1] of f_z` for the three
/// rectangles with widths `(1-x, x+y-1, 1-y)` and heights
/// `(t/y, (1/y - 1/x) t + 1/x, (1-t)/x)`, evaluated in closed form.
pub fn f_from_f_checked(x: f64, y: f64, z: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0 && y > 0.0 && y <= 1.0 && x + y > 1.0) {
        return Err(Error::domain(format!(
            "({x}, {y}) is outside x + y > 1 in (0,1]^2"
        )));
    }
    Ok(kernel(x, y, z))
}

fn kernel(x: f64, y: f64, z: f64) -> f64 {
    // the arc integral with q1/N = x, q2/N = y at unit level
    arc_integral(x, y, 1.0, z, 0.0, 1.0) / (x * y)
}

/// The kernel at cut-off `z` as a closure on the region `x + y > 1`.
pub fn f_from_f(z: f64) -> impl Fn(f64, f64) -> f64 + Copy {
    move |x, y| kernel(x, y, z)
}

/// `(1/(b-a)) * sum F(q1/N, q2/N) / N^2` over consecutive Farey fractions
/// `a1/q1 < a2/q2` of order `n` with both ends in `[a, b]`.
pub fn farey_arc_sum(f: impl Fn(f64, f64) -> f64, n: u64, a: f64, b: f64) -> Result<f64> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::domain(format!(
            "need 0 <= a < b <= 1, got [{a}, {b}]"
        )));
    }
    let nf = n as f64;
    let mut acc = KahanSum::new();
    for (l, r) in FareySequence::new(n)?.arcs() {
        if l.to_f64() < a {
            continue;
        }
        if r.to_f64() > b {
            break;
        }
        let v = f(l.q as f64 / nf, r.q as f64 / nf);
        if !v.is_finite() {
            return Err(Error::domain(format!("F({}, {}) = {v}", l.q, r.q)));
        }
        acc.add(v);
    }
    Ok(acc.value() / (nf * nf) / (b - a))
}

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// `(6/pi^2) * double integral of F over x + y > 1` in the unit square.
///
/// The region is mapped onto the unit square by `y = 1 - x + x s`
/// (Jacobian `x`) and integrated by 5-point Gauss-Legendre tensor rules
/// with recursive bisection to an absolute tolerance of `1e-6`.
pub fn omega_integral(f: impl Fn(f64, f64) -> f64) -> Result<f64> {
    omega_integral_tol(f, 1e-6)
}

pub fn omega_integral_tol(f: impl Fn(f64, f64) -> f64, tol: f64) -> Result<f64> {
    let g = |x: f64, s: f64| x * f(x, 1.0 - x + x * s);
    let rule = |x0: f64, x1: f64, s0: f64, s1: f64| -> Result<f64> {
        let (hx, hs) = (0.5 * (x1 - x0), 0.5 * (s1 - s0));
        let (cx, cs) = (0.5 * (x0 + x1), 0.5 * (s0 + s1));
        let mut sum = 0.0;
        for (u, wu) in GL5 {
            for (v, wv) in GL5 {
                let val = g(cx + hx * u, cs + hs * v);
                if !val.is_finite() {
                    return Err(Error::domain("integrand is not finite"));
                }
                sum += wu * wv * val;
            }
        }
        Ok(sum * hx * hs)
    };
    let halves = |c: (f64, f64, f64, f64)| {
        let (x0, x1, s0, s1) = c;
        let (xm, sm) = (0.5 * (x0 + x1), 0.5 * (s0 + s1));
        [
            (x0, xm, s0, sm),
            (xm, x1, s0, sm),
            (x0, xm, sm, s1),
            (xm, x1, sm, s1),
        ]
    };
    let mut acc = KahanSum::new();
    let mut stack = vec![((0.0, 1.0, 0.0, 1.0), rule(0.0, 1.0, 0.0, 1.0)?, 0u32)];
    let mut evaluations = 0usize;
    while let Some((cell, coarse, depth)) = stack.pop() {
        let kids = halves(cell);
        let mut vals = [0.0; 4];
        for (v, k) in vals.iter_mut().zip(kids) {
            *v = rule(k.0, k.1, k.2, k.3)?;
        }
        evaluations += 4;
        let fine: f64 = vals.iter().sum();
        let area = (cell.1 - cell.0) * (cell.3 - cell.2);
        if (fine - coarse).abs() <= tol * area || depth >= 14 || evaluations > 4_000_000 {
            acc.add(fine);
        } else {
            for (v, k) in vals.into_iter().zip(kids) {
                stack.push((k, v, depth + 1));
            }
        }
    }
    Ok(6.0 / (PI * PI) * acc.value())
}
