use std::f64::consts::PI;

use crate::error::{Error, Result};

/// The dilogarithm `Li2(x) = sum x^n / n^2` on `[0, 1]`.
///
/// Sums the series directly for `x <= 1/2` and uses
/// `Li2(x) = pi^2/6 - ln(x) ln(1-x) - Li2(1-x)` above that.
pub fn dilog(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("dilog argument {x} outside [0, 1]")));
    }
    if x == 1.0 {
        return Ok(PI * PI / 6.0);
    }
    if x <= 0.5 {
        Ok(series(x))
    } else {
        Ok(PI * PI / 6.0 - x.ln() * (1.0 - x).ln() - series(1.0 - x))
    }
}

fn series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut pow = x;
    let mut sum = 0.0;
    let mut n = 1.0f64;
    loop {
        let term = pow / (n * n);
        sum += term;
        // remaining tail is below x^(n+1)/((n+1)^2 (1-x))
        if pow * x / ((n + 1.0) * (n + 1.0) * (1.0 - x)) < 1e-17 {
            return sum;
        }
        pow *= x;
        n += 1.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(dilog(0.0).unwrap(), 0.0);
        assert!((dilog(1.0).unwrap() - 1.644_934_066_848_226_4).abs() < 1e-15);
        // pi^2/12 - ln(2)^2/2
        let half = PI * PI / 12.0 - 2f64.ln().powi(2) / 2.0;
        assert!((dilog(0.5).unwrap() - half).abs() < 1e-14);
        assert!((dilog(0.5).unwrap() - 0.582_240_526_465_012_5).abs() < 1e-14);
    }

    #[test]
    fn domain() {
        assert!(dilog(-0.1).is_err());
        assert!(dilog(1.0 + 1e-12).is_err());
        assert!(dilog(f64::NAN).is_err());
    }

    #[test]
    fn brute_force_series_agrees_below_half() {
        for i in 0..=50 {
            let x = i as f64 / 100.0;
            let brute: f64 = (1..2000).map(|n| x.powi(n) / (n as f64).powi(2)).sum();
            assert!((dilog(x).unwrap() - brute).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn near_one_is_smooth() {
        let a = dilog(1.0 - 1e-12).unwrap();
        assert!((a - PI * PI / 6.0).abs() < 1e-9);
    }
}
