//! Number backends and Farey machinery.

mod dilog;
mod farey;
mod modular;
mod real;
mod surd;

pub use dilog::dilog;
pub use farey::{farey_len, farey_neighbors, FareyFraction, FareyLocation, FareySequence};
pub use modular::mod_inverse;
pub use real::{RealValue, DEFAULT_PRECISION};
pub use surd::{parse_surd, QuadSurd, SurdExpr, SurdKind};

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
