#![allow(dead_code)]

use gapscope::iet::{keane_check, Iet, Permutation};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random irreducible permutation of `1..=d`.
pub fn random_irreducible<R: Rng>(rng: &mut R, d: usize) -> Permutation {
    loop {
        let mut images: Vec<usize> = (1..=d).collect();
        images.shuffle(rng);
        let p = Permutation::from_images(images).unwrap();
        if p.is_irreducible() {
            return p;
        }
    }
}

/// Uniform lengths on the simplex.
pub fn random_lengths<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..d)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

pub fn random_iet<R: Rng>(rng: &mut R, d: usize) -> Iet {
    let pi = random_irreducible(rng, d);
    Iet::new(random_lengths(rng, d), pi).unwrap()
}

/// A random IET that passes a Keane check of the given depth.
pub fn random_keane_iet<R: Rng>(rng: &mut R, d: usize, depth: usize) -> Iet {
    loop {
        let t = random_iet(rng, d);
        if keane_check(&t, depth, 1e-10 / d as f64).is_satisfied() {
            return t;
        }
    }
}
