use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::dilog;

/// A value of the limiting gap distribution; `one_sided` marks the branch
/// points `z = 1` and `z = 2`, where the right-hand limit is returned.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitValue {
    pub z: f64,
    pub value: f64,
    pub one_sided: bool,
}

/// `c * ln(x)`, taken as 0 when `c` is 0.
fn xlog(c: f64, x: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * x.ln()
    }
}

/// The limit of the average gap distribution of rotations as `N` grows.
pub fn limit_g(z: f64) -> Result<LimitValue> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(format!(
            "limit distribution needs z > 0, got {z}"
        )));
    }
    let pre = 6.0 / (PI * PI);
    let ln2 = 2f64.ln();
    let value = if z < 1.0 {
        pre * (PI * PI / 6.0 - z)
    } else if z < 2.0 {
        let common = ln2 * ln2 - 2.0 * PI * PI / 3.0 - 1.0 - (4.0 / z).ln() * z.ln()
            + 4.0 * dilog(1.0 / z)?
            + 2.0 * dilog(z / 2.0)?;
        let logs = if z == 1.0 {
            // the ln(z - 1) terms carry the coefficient 2/z - 2z, zero here
            xlog(z / 2.0 - 2.0 / z, 2.0 - z) + xlog(2.0 / z - 2.0 * z, z - 1.0) + 1.5 * z * z.ln()
        } else {
            (z / 2.0 - 2.0 / z) * ((2.0 - z) / (z - 1.0)).ln() + 1.5 * z * (z / (z - 1.0)).ln()
        };
        pre * (common + logs)
    } else {
        let common = -1.0 + 4.0 * dilog(1.0 / z)? - 2.0 * dilog(2.0 / z)?;
        let logs = if z == 2.0 {
            xlog(z / 2.0 - 2.0 / z, z - 2.0)
                + (2.0 / z - 2.0 * z) * (z - 1.0).ln()
                + 1.5 * z * z.ln()
        } else {
            let r = 1.0 / (z - 1.0);
            (z / 2.0 - 2.0 / z) * (-r).ln_1p() + 1.5 * z * r.ln_1p()
        };
        pre * (common + logs)
    };
    Ok(LimitValue {
        z,
        value,
        one_sided: z == 1.0 || z == 2.0,
    })
}
