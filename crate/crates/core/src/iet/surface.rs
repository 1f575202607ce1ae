use serde::{Deserialize, Serialize};

use super::permutation::Permutation;
use crate::error::Result;

/// Combinatorial invariants of the translation surface obtained from the
/// square construction of an IET.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    /// Cone angles as multiples of `2 pi`, in decreasing order.
    pub cone_angles: Vec<u32>,
    pub genus: u32,
    pub num_vertices: u32,
    /// `2g + s - 1` with `s` the number of vertices.
    pub d_s: u32,
}

impl SurfaceInvariants {
    /// Sum of the cone excesses `k_i`, where an angle is `2 pi (k_i + 1)`.
    pub fn excess(&self) -> u32 {
        self.cone_angles.iter().map(|a| a - 1).sum()
    }

    /// Vertices with angle greater than `2 pi`.
    pub fn singularities(&self) -> usize {
        self.cone_angles.iter().filter(|&&a| a > 1).count()
    }
}

/// `pi^{-1}(1) - pi^{-1}(d) = 1`; the origin is then a regular point.
pub fn is_arc_exchange(pi: &Permutation) -> Result<bool> {
    pi.require_irreducible()?;
    let d = pi.len();
    if d == 1 {
        return Ok(true);
    }
    Ok(pi.preimage(1) as i64 - pi.preimage(d) as i64 == 1)
}

pub fn singularity_at_origin(pi: &Permutation) -> Result<bool> {
    is_arc_exchange(pi).map(|a| !a)
}

/// `pi^{-1}(pi(1) - 1) = d`, the hypothesis of the sharper `d + 1` bound on
/// distinct gap lengths.
pub fn dplus1_condition(pi: &Permutation) -> bool {
    let d = pi.len();
    let p1 = pi.image(1);
    p1 >= 2 && pi.preimage(p1 - 1) == d
}

/// Vertex classes of the square with `d` left and `d` right segments, where
/// right segment `i` is glued to left segment `pi(i)` and top is glued to
/// bottom.
///
/// Left endpoints `L_0..L_d` and right endpoints `R_0..R_d` are merged by
/// union-find; corners carry angle `pi/2`, interior points `pi`.
pub fn surface_invariants(pi: &Permutation) -> Result<SurfaceInvariants> {
    pi.require_irreducible()?;
    let d = pi.len();
    let left = |j: usize| j;
    let right = |j: usize| d + 1 + j;
    let mut uf = UnionFind::new(2 * (d + 1));
    uf.union(left(0), left(d));
    uf.union(right(0), right(d));
    for i in 1..=d {
        let p = pi.image(i);
        uf.union(right(i - 1), left(p - 1));
        uf.union(right(i), left(p));
    }
    // angles in units of pi/2
    let mut quarter = std::collections::BTreeMap::<usize, u32>::new();
    for j in 0..=d {
        let w = if j == 0 || j == d { 1 } else { 2 };
        *quarter.entry(uf.find(left(j))).or_default() += w;
        *quarter.entry(uf.find(right(j))).or_default() += w;
    }
    let mut cone_angles: Vec<u32> = quarter.values().map(|q| q / 4).collect();
    cone_angles.sort_unstable_by(|a, b| b.cmp(a));
    let s = cone_angles.len() as u32;
    let excess: u32 = cone_angles.iter().map(|a| a - 1).sum();
    let genus = (excess + 2) / 2;
    Ok(SurfaceInvariants {
        cone_angles,
        genus,
        num_vertices: s,
        d_s: 2 * genus + s - 1,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
