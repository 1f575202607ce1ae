use serde::{Deserialize, Serialize};

use super::map::Iet;
use super::permutation::Permutation;
use crate::error::{Error, Result};
use crate::numerics::{parse_surd, SurdExpr};

/// How the `permutation` field of an IET file is written.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notation {
    /// One-line notation `[pi(1), ..., pi(d)]`.
    #[default]
    Images,
    /// Cycle notation, either `"(1 5 2 3 4)"` or `[[1, 5, 2, 3, 4]]`.
    Cycles,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthEntry {
    Text(String),
    Number(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermutationEntry {
    Images(Vec<usize>),
    CycleList(Vec<Vec<usize>>),
    Text(String),
}

/// The JSON description of an IET:
/// `{"lengths": ["1/sqrt(3)", ...], "permutation": [3, 2, 1]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IetSpec {
    pub lengths: Vec<LengthEntry>,
    pub permutation: PermutationEntry,
    #[serde(default)]
    pub notation: Notation,
}

impl IetSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::parse(byte_offset(text, e.line(), e.column()), e.to_string()))
    }

    pub fn permutation(&self) -> Result<Permutation> {
        let d = self.lengths.len();
        match (&self.permutation, self.notation) {
            (PermutationEntry::Images(v), Notation::Images) => Permutation::from_images(v.clone()),
            (PermutationEntry::Text(t), Notation::Images) => {
                let v = t
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|_| Error::validation(format!("bad image {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Permutation::from_images(v)
            }
            (PermutationEntry::Text(t), Notation::Cycles) => Permutation::parse_cycles(t, Some(d)),
            (PermutationEntry::CycleList(c), Notation::Cycles) => Permutation::from_cycles(c, d),
            // a flat list under cycle notation is a single cycle
            (PermutationEntry::Images(v), Notation::Cycles) => {
                Permutation::from_cycles(std::slice::from_ref(v), d)
            }
            (PermutationEntry::CycleList(_), Notation::Images) => Err(Error::validation(
                "nested permutation lists need \"notation\": \"cycles\"",
            )),
        }
    }

    pub fn length_exprs(&self) -> Result<Vec<SurdExpr>> {
        self.lengths
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let text = match l {
                    LengthEntry::Text(t) => t.clone(),
                    LengthEntry::Number(x) => format!("{x:e}"),
                };
                parse_surd(&text).map_err(|e| match e {
                    Error::Parse { pos, message } => {
                        Error::validation(format!("length {}: {message} at position {pos}", i + 1))
                    }
                    other => other,
                })
            })
            .collect()
    }

    pub fn to_iet(&self) -> Result<Iet> {
        let pi = self.permutation()?;
        Iet::from_exprs(&self.length_exprs()?, pi)
    }

    pub fn from_iet(t: &Iet) -> Self {
        Self {
            lengths: t.lambda().iter().map(|&x| LengthEntry::Number(x)).collect(),
            permutation: PermutationEntry::Images(t.pi().images().to_vec()),
            notation: Notation::Images,
        }
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut off = 0;
    for (k, l) in text.split_inclusive('\n').enumerate() {
        if k + 1 == line {
            return off + column.saturating_sub(1).min(l.len());
        }
        off += l.len();
    }
    text.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_notations() {
        let a = IetSpec::from_json(
            r#"{"lengths": ["1/sqrt(3)", "1/sqrt(2) - 1/sqrt(3)", "1 - 1/sqrt(2)"], "permutation": [3,2,1]}"#,
        )
        .unwrap();
        let t = a.to_iet().unwrap();
        assert_eq!(t.pi().images(), &[3, 2, 1]);

        let b = IetSpec::from_json(
            r#"{"lengths": [0.2, 0.2, 0.2, 0.2, 0.2], "permutation": "(1 5 2 3 4)", "notation": "cycles"}"#,
        )
        .unwrap();
        assert_eq!(b.permutation().unwrap().images(), &[5, 3, 4, 1, 2]);
        let c = IetSpec::from_json(
            r#"{"lengths": [0.5, 0.5], "permutation": [[1, 2]], "notation": "cycles"}"#,
        )
        .unwrap();
        assert_eq!(c.to_iet().unwrap().pi().images(), &[2, 1]);
    }

    #[test]
    fn errors_are_reported() {
        assert!(matches!(
            IetSpec::from_json(r#"{"lengths": [0.5, 0.5], "permutation": }"#),
            Err(Error::Parse { pos: 39..=41, .. })
        ));
        let bad =
            IetSpec::from_json(r#"{"lengths": ["1/", "1/2"], "permutation": [2,1]}"#).unwrap();
        assert!(bad.to_iet().is_err());
        let bad = IetSpec::from_json(r#"{"lengths": [0.5, 0.5], "permutation": [1,1]}"#).unwrap();
        assert!(bad.to_iet().is_err());
    }

    #[test]
    fn round_trips() {
        let t = crate::examples::root_three_iet();
        let spec = IetSpec::from_iet(&t);
        let text = serde_json::to_string(&spec).unwrap();
        let back = IetSpec::from_json(&text).unwrap().to_iet().unwrap();
        for (a, b) in back.lambda().iter().zip(t.lambda()) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
