use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{1, ..., d}` stored by its images `pi(1), ..., pi(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// From one-line notation, 1-based.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(Error::validation("permutation must be nonempty"));
        }
        let mut seen = vec![false; d + 1];
        for &v in &images {
            if v == 0 || v > d {
                return Err(Error::validation(format!(
                    "image {v} outside 1..={d} in permutation {images:?}"
                )));
            }
            if seen[v] {
                return Err(Error::validation(format!(
                    "image {v} repeated in permutation {images:?}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            images: (1..=d).collect(),
        }
    }

    /// From disjoint cycles on `{1, ..., d}`; points not mentioned are fixed.
    pub fn from_cycles(cycles: &[Vec<usize>], d: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=d).collect();
        let mut used = vec![false; d + 1];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a == 0 || a > d {
                    return Err(Error::validation(format!(
                        "cycle entry {a} outside 1..={d}"
                    )));
                }
                if used[a] {
                    return Err(Error::validation(format!("{a} appears in two cycles")));
                }
                used[a] = true;
                images[a - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// Parses cycle notation such as `(1 5 2 3 4)` or `(1,2)(3 4)`. When `d`
    /// is `None` the largest entry is used.
    pub fn parse_cycles(text: &str, d: Option<usize>) -> Result<Self> {
        let mut cycles = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && (bytes[*i] as char).is_whitespace() {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        while i < bytes.len() {
            if bytes[i] != b'(' {
                return Err(Error::parse(i, "expected '('"));
            }
            i += 1;
            let mut cycle = Vec::new();
            loop {
                while i < bytes.len() && (bytes[i] == b',' || (bytes[i] as char).is_whitespace()) {
                    i += 1;
                }
                if i >= bytes.len() {
                    return Err(Error::parse(i, "unterminated cycle"));
                }
                if bytes[i] == b')' {
                    i += 1;
                    break;
                }
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(Error::parse(i, "expected an integer"));
                }
                let v: usize = text[start..i]
                    .parse()
                    .map_err(|_| Error::parse(start, "integer out of range"))?;
                cycle.push(v);
            }
            cycles.push(cycle);
            skip_ws(&mut i);
        }
        if cycles.is_empty() {
            return Err(Error::parse(0, "empty cycle notation"));
        }
        let max = cycles.iter().flatten().copied().max().unwrap_or(1);
        let d = d.unwrap_or(max);
        Self::from_cycles(&cycles, d)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `pi(i)`, 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `pi^{-1}(j)`, 1-based.
    pub fn preimage(&self, j: usize) -> usize {
        self.images
            .iter()
            .position(|&v| v == j)
            .expect("valid permutation")
            + 1
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { images: inv }
    }

    /// No proper prefix `{1..k}` is mapped to itself.
    pub fn is_irreducible(&self) -> bool {
        let mut max = 0;
        for (k, &v) in self.images.iter().enumerate() {
            max = max.max(v);
            if max == k + 1 && k + 1 < self.len() {
                return false;
            }
        }
        true
    }

    pub(crate) fn require_irreducible(&self) -> Result<()> {
        if self.is_irreducible() {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "permutation {self} is reducible"
            )))
        }
    }

    /// Disjoint cycles, each starting at its smallest element; fixed points
    /// included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len() + 1];
        let mut out = Vec::new();
        for start in 1..=self.len() {
            if seen[start] {
                continue;
            }
            let mut c = vec![];
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.image(x);
            }
            out.push(c);
        }
        out
    }

    /// All permutations of `{1..d}` in lexicographic order of images.
    pub fn all(d: usize) -> impl Iterator<Item = Permutation> {
        let mut cur: Option<Vec<usize>> = Some((1..=d).collect());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            cur = next_lex(out.clone());
            Some(Permutation { images: out })
        })
    }
}

fn next_lex(mut v: Vec<usize>) -> Option<Vec<usize>> {
    let n = v.len();
    if n < 2 {
        return None;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return None;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    Some(v)
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::from_images(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_matches_images() {
        let p = Permutation::parse_cycles("(1 5 2 3 4)", None).unwrap();
        assert_eq!(p.images(), &[5, 3, 4, 1, 2]);
        assert_eq!(p.cycles(), vec![vec![1, 5, 2, 3, 4]]);
        let q = Permutation::parse_cycles("(1,3)", Some(3)).unwrap();
        assert_eq!(q.images(), &[3, 2, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![1, 1]).is_err());
        assert!(Permutation::from_images(vec![0]).is_err());
        assert!(Permutation::from_images(vec![]).is_err());
        assert!(Permutation::parse_cycles("(1 2", None).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", None).is_err());
        assert!(matches!(
            Permutation::parse_cycles("1 2", None),
            Err(Error::Parse { pos: 0, .. })
        ));
    }

    #[test]
    fn irreducibility() {
        assert!(Permutation::identity(1).is_irreducible());
        assert!(!Permutation::identity(2).is_irreducible());
        assert!(Permutation::from_images(vec![3, 2, 1])
            .unwrap()
            .is_irreducible());
        assert!(!Permutation::from_images(vec![2, 1, 3])
            .unwrap()
            .is_irreducible());
        assert!(Permutation::from_images(vec![2, 3, 1])
            .unwrap()
            .is_irreducible());
    }

    #[test]
    fn inverse_and_enumeration() {
        let p = Permutation::from_images(vec![2, 3, 1]).unwrap();
        assert_eq!(p.inverse().images(), &[3, 1, 2]);
        assert_eq!(p.preimage(1), 3);
        assert_eq!(Permutation::all(4).count(), 24);
        assert_eq!(Permutation::all(1).count(), 1);
    }

    #[test]
    fn json_is_image_list() {
        let p = Permutation::from_images(vec![3, 2, 1]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[3,2,1]");
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }
}
