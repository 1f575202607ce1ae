use crate::error::{Error, Result};

/// The inverse of `a` modulo `q`, in `1..q`.
pub fn mod_inverse(a: i64, q: i64) -> Result<i64> {
    if q < 2 {
        return Err(Error::domain(format!(
            "modulus must be at least 2, got {q}"
        )));
    }
    let (mut r0, mut r1) = (q as i128, (a as i128).rem_euclid(q as i128));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 {
        return Err(Error::NoInverse { a, q });
    }
    Ok(s0.rem_euclid(q as i128) as i64)
}
