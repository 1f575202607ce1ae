use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::permutation::Permutation;
use crate::error::{Error, Result};
use crate::numerics::SurdExpr;

/// Pieces of a composed map shorter than this are treated as rounding
/// artifacts and dropped.
pub const DEFAULT_PIECE_TOL: f64 = 1.0 / (1u64 << 45) as f64;

/// An interval exchange transformation of `[0, 1)`.
///
/// Interval `i` is `[beta[i-1], beta[i])` and is translated onto
/// `[alpha[pi(i)-1], alpha[pi(i)])`. All intervals are half-open.
#[derive(Clone, Debug, PartialEq)]
pub struct Iet {
    lambda: Vec<f64>,
    pi: Permutation,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    rotation: Option<f64>,
}

impl Iet {
    /// Lengths must be positive and sum to one up to `1e-12 * d`; they are
    /// rescaled to an exact unit sum.
    pub fn new(lambda: Vec<f64>, pi: Permutation) -> Result<Self> {
        let d = lambda.len();
        if d != pi.len() {
            return Err(Error::validation(format!(
                "{d} lengths but permutation of {}",
                pi.len()
            )));
        }
        for (i, &l) in lambda.iter().enumerate() {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::validation(format!(
                    "length {} is {l}, must be positive",
                    i + 1
                )));
            }
        }
        let total: f64 = crate::numerics::KahanSum::from_iter(lambda.iter().copied()).value();
        if (total - 1.0).abs() > 1e-12 * d as f64 {
            return Err(Error::validation(format!(
                "lengths sum to {total}, expected 1"
            )));
        }
        let lambda: Vec<f64> = lambda.iter().map(|l| l / total).collect();
        let beta = prefix_sums(lambda.iter().copied());
        let alpha = prefix_sums((1..=d).map(|j| lambda[pi.preimage(j) - 1]));
        Ok(Self::assemble(lambda, pi, alpha, beta))
    }

    /// Lengths given as exact expressions; breakpoints are formed from exact
    /// partial sums and rounded once.
    pub fn from_exprs(lengths: &[SurdExpr], pi: Permutation) -> Result<Self> {
        let d = lengths.len();
        if d != pi.len() {
            return Err(Error::validation(format!(
                "{d} lengths but permutation of {}",
                pi.len()
            )));
        }
        let mut beta = vec![0.0];
        let mut acc = SurdExpr::zero();
        for (i, l) in lengths.iter().enumerate() {
            if l.to_f64() <= 0.0 || l.is_nonpositive() {
                return Err(Error::validation(format!(
                    "length {} ({l}) must be positive",
                    i + 1
                )));
            }
            acc = acc.add(l);
            beta.push(acc.to_f64());
        }
        let total = acc.to_f64();
        if (total - 1.0).abs() > 1e-12 * d as f64 {
            return Err(Error::validation(format!(
                "lengths sum to {total}, expected 1"
            )));
        }
        *beta.last_mut().expect("nonempty") = 1.0;
        let mut alpha = vec![0.0];
        let mut acc = SurdExpr::zero();
        for j in 1..=d {
            acc = acc.add(&lengths[pi.preimage(j) - 1]);
            alpha.push(acc.to_f64());
        }
        *alpha.last_mut().expect("nonempty") = 1.0;
        check_increasing(&alpha, "alpha")?;
        check_increasing(&beta, "beta")?;
        let lambda = lengths.iter().map(SurdExpr::to_f64).collect();
        Ok(Self::assemble(lambda, pi, alpha, beta))
    }

    fn assemble(lambda: Vec<f64>, pi: Permutation, alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        let rotation = (pi.images() == [2, 1]).then(|| alpha[1]);
        Self {
            lambda,
            pi,
            alpha,
            beta,
            rotation,
        }
    }

    /// The rotation `x -> x + theta mod 1` as the 2-IET with lengths
    /// `(1 - theta, theta)` and `pi = (2, 1)`.
    pub fn rotation(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::domain(format!(
                "rotation angle {theta} not in (0, 1)"
            )));
        }
        let pi = Permutation::from_images(vec![2, 1]).expect("valid");
        let lambda = vec![1.0 - theta, theta];
        let alpha = vec![0.0, theta, 1.0];
        let beta = vec![0.0, 1.0 - theta, 1.0];
        Ok(Self::assemble(lambda, pi, alpha, beta))
    }

    pub fn identity() -> Self {
        Self::assemble(
            vec![1.0],
            Permutation::identity(1),
            vec![0.0, 1.0],
            vec![0.0, 1.0],
        )
    }

    pub fn d(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    /// Discontinuities of the inverse, `alpha[0] = 0 < ... < alpha[d] = 1`.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Discontinuities of the map, `beta[0] = 0 < ... < beta[d] = 1`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// The angle when this is a rotation (`d = 2`, `pi = (2,1)`).
    pub fn rotation_angle(&self) -> Option<f64> {
        self.rotation
    }

    pub fn is_identity(&self) -> bool {
        self.d() == 1
    }

    /// 0-based index of the interval containing `x`.
    pub fn interval_of(&self, x: f64) -> usize {
        let inner = &self.beta[1..self.d()];
        inner.partition_point(|&b| b <= x)
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("{x} not in [0, 1)")));
        }
        Ok(self.map(x))
    }

    /// `apply` without the domain check.
    pub(crate) fn map(&self, x: f64) -> f64 {
        let i = self.interval_of(x);
        let j = self.pi.images()[i];
        let lo = self.alpha[j - 1];
        let hi = self.alpha[j];
        let y = lo + (x - self.beta[i]);
        // keep the image inside its target interval despite rounding
        if y >= hi {
            next_down(hi)
        } else if y < lo {
            lo
        } else {
            y
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.pi.inverse();
        let lambda = (1..=self.d())
            .map(|j| self.lambda[self.pi.preimage(j) - 1])
            .collect();
        Self::assemble(lambda, inv, self.beta.clone(), self.alpha.clone())
    }

    /// `T o R_theta`, i.e. `x -> T(x + theta mod 1)`, with pieces shorter
    /// than `tol` dropped and adjacent pieces with equal translation merged.
    pub fn compose_rotation(&self, theta: f64, tol: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::domain(format!(
                "rotation angle {theta} not in (0, 1)"
            )));
        }
        let rot = |x: f64| {
            let y = x + theta;
            if y >= 1.0 {
                y - 1.0
            } else {
                y
            }
        };
        let mut cuts = vec![0.0, 1.0, 1.0 - theta];
        for &b in &self.beta[1..self.d()] {
            let c = b - theta;
            cuts.push(if c < 0.0 { c + 1.0 } else { c });
        }
        cuts.sort_by(f64::total_cmp);

        // (start, end, translation) per surviving piece
        let mut pieces: Vec<(f64, f64, f64)> = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi - lo < tol {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            let shift = self.map(rot(mid)) - mid;
            match pieces.last_mut() {
                Some(last) if (last.2 - shift).abs() < tol => last.1 = hi,
                _ => pieces.push((lo, hi, shift)),
            }
        }
        // close the holes left by dropped slivers
        for k in 1..pieces.len() {
            pieces[k].0 = pieces[k - 1].1;
        }
        if let Some(first) = pieces.first_mut() {
            first.0 = 0.0;
        }
        if let Some(last) = pieces.last_mut() {
            last.1 = 1.0;
        }
        let lambda: Vec<f64> = pieces.iter().map(|p| p.1 - p.0).collect();
        let mut order: Vec<usize> = (0..pieces.len()).collect();
        order.sort_by(|&a, &b| (pieces[a].0 + pieces[a].2).total_cmp(&(pieces[b].0 + pieces[b].2)));
        let mut images = vec![0; pieces.len()];
        for (rank, &k) in order.iter().enumerate() {
            images[k] = rank + 1;
        }
        Self::new(lambda, Permutation::from_images(images)?)
    }
}

fn prefix_sums(it: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut acc = crate::numerics::KahanSum::new();
    for x in it {
        acc.add(x);
        out.push(acc.value());
    }
    *out.last_mut().expect("nonempty") = 1.0;
    out
}

fn check_increasing(v: &[f64], name: &str) -> Result<()> {
    if v.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "{name} breakpoints not strictly increasing"
        )))
    }
}

pub(crate) fn next_down(x: f64) -> f64 {
    if x > 0.0 {
        f64::from_bits(x.to_bits() - 1)
    } else {
        x
    }
}

impl Serialize for Iet {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("Iet", 4)?;
        st.serialize_field("lengths", &self.lambda)?;
        st.serialize_field("permutation", &self.pi)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("beta", &self.beta)?;
        st.end()
    }
}
