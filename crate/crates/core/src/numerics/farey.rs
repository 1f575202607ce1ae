use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::real::RealValue;
use crate::error::{Error, Result};

/// A reduced fraction `a/q` in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FareyFraction {
    pub a: u64,
    pub q: u64,
}

impl FareyFraction {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::validation("denominator must be positive"));
        }
        if a > q {
            return Err(Error::validation(format!("{a}/{q} exceeds 1")));
        }
        if a.gcd(&q) != 1 {
            return Err(Error::validation(format!("{a}/{q} is not reduced")));
        }
        Ok(Self { a, q })
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 / self.q as f64
    }
}

impl PartialOrd for FareyFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FareyFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a as u128 * other.q as u128).cmp(&(other.a as u128 * self.q as u128))
    }
}

impl fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

/// Where a real number sits in the Farey sequence of some order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FareyLocation {
    Exact {
        fraction: FareyFraction,
    },
    Between {
        left: FareyFraction,
        right: FareyFraction,
    },
}

/// Locates `x` in the Farey sequence of order `n`.
///
/// Stern-Brocot descent in which runs of moves in the same direction are
/// taken in one batch (exponential then binary search over the run length),
/// so the cost is logarithmic in `n`. Every comparison is exact.
pub fn farey_neighbors(x: &RealValue, n: u64) -> Result<FareyLocation> {
    if n == 0 {
        return Err(Error::domain("order must be at least 1"));
    }
    if x.cmp_ratio(0, 1) != Ordering::Greater || x.cmp_ratio(1, 1) != Ordering::Less {
        return Err(Error::domain(format!("{x} is not in (0, 1)")));
    }
    let n = n as u128;
    let (mut la, mut lq) = (0u128, 1u128);
    let (mut ra, mut rq) = (1u128, 1u128);
    let cmp = |a: u128, q: u128| x.cmp_ratio(a as u64, q as u64);

    loop {
        let (ma, mq) = (la + ra, lq + rq);
        if mq > n {
            break;
        }
        match cmp(ma, mq) {
            Ordering::Equal => return Ok(exact(ma, mq)),
            Ordering::Less => {
                // right endpoint walks toward the left: (ra + k la)/(rq + k lq)
                let step = |k: u128| (ra + k * la, rq + k * lq);
                let k = batch(n, |k| {
                    let (a, q) = step(k);
                    q <= n && cmp(a, q) != Ordering::Greater
                });
                let (a, q) = step(k);
                if cmp(a, q) == Ordering::Equal {
                    return Ok(exact(a, q));
                }
                (ra, rq) = (a, q);
            }
            Ordering::Greater => {
                let step = |k: u128| (la + k * ra, lq + k * rq);
                let k = batch(n, |k| {
                    let (a, q) = step(k);
                    q <= n && cmp(a, q) != Ordering::Less
                });
                let (a, q) = step(k);
                if cmp(a, q) == Ordering::Equal {
                    return Ok(exact(a, q));
                }
                (la, lq) = (a, q);
            }
        }
    }
    debug_assert_eq!(ra * lq - la * rq, 1);
    let left = FareyFraction {
        a: la as u64,
        q: lq as u64,
    };
    let right = FareyFraction {
        a: ra as u64,
        q: rq as u64,
    };
    check_ambiguity(x, left, right)?;
    Ok(FareyLocation::Between { left, right })
}

fn exact(a: u128, q: u128) -> FareyLocation {
    FareyLocation::Exact {
        fraction: FareyFraction {
            a: a as u64,
            q: q as u64,
        },
    }
}

/// Largest `k >= 1` with `pred(k)`, given `pred(1)` and monotonicity.
fn batch(limit: u128, pred: impl Fn(u128) -> bool) -> u128 {
    let mut lo = 1u128;
    let mut hi = 2u128;
    while hi <= limit && pred(hi) {
        lo = hi;
        hi *= 2;
    }
    // pred(lo) holds, pred(hi) fails (or hi is past the limit)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// An inexact input closer to a Farey endpoint than its precision can
/// resolve is rejected rather than silently placed on one side.
fn check_ambiguity(x: &RealValue, left: FareyFraction, right: FareyFraction) -> Result<()> {
    if x.is_exact() {
        return Ok(());
    }
    let tol = 2f64.powi(-(x.precision() as i32 - 8));
    let v = x.value();
    for f in [left, right] {
        let d = x.distance_to(f.a, f.q);
        if d < tol {
            return Err(Error::Ambiguous {
                x: v,
                a: f.a,
                q: f.q,
                distance: d,
                precision: x.precision(),
            });
        }
    }
    Ok(())
}

/// The Farey sequence of order `n` in increasing order, from `0/1` to `1/1`.
#[derive(Clone, Debug)]
pub struct FareySequence {
    n: u64,
    cur: Option<(u64, u64)>,
    next: (u64, u64),
}

impl FareySequence {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("order must be at least 1"));
        }
        Ok(Self {
            n,
            cur: Some((0, 1)),
            next: (1, n),
        })
    }

    /// Consecutive pairs `(left, right)`, i.e. the Farey arcs.
    pub fn arcs(self) -> impl Iterator<Item = (FareyFraction, FareyFraction)> {
        let mut it = self.peekable();
        std::iter::from_fn(move || {
            let l = it.next()?;
            let r = *it.peek()?;
            Some((l, r))
        })
    }
}

impl Iterator for FareySequence {
    type Item = FareyFraction;

    fn next(&mut self) -> Option<FareyFraction> {
        let (a, b) = self.cur?;
        let (c, d) = self.next;
        if a == 1 && b == 1 {
            self.cur = None;
        } else {
            let k = (self.n + b) / d;
            self.cur = Some((c, d));
            self.next = (k * c - a, k * d - b);
        }
        Some(FareyFraction { a, q: b })
    }
}

/// `|F(n)|`, via a totient sieve.
pub fn farey_len(n: u64) -> u64 {
    let n = n as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    1 + phi.iter().skip(1).sum::<u64>()
}
