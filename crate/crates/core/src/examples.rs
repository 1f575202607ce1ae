//! Reference instances used by tests, the CLI and the C ABI.

use crate::iet::{Iet, Permutation};
use crate::numerics::{parse_surd, RealValue, SurdExpr};

/// Lengths of [`root_three_iet`].
pub const ROOT_THREE_LENGTHS: [&str; 3] = ["1/sqrt(3)", "1/sqrt(2) - 1/sqrt(3)", "1 - 1/sqrt(2)"];

/// The 3-IET with lengths `(1/sqrt3, 1/sqrt2 - 1/sqrt3, 1 - 1/sqrt2)` and
/// `pi = (3,2,1)`.
pub fn root_three_iet() -> Iet {
    let lengths: Vec<SurdExpr> = ROOT_THREE_LENGTHS
        .iter()
        .map(|s| parse_surd(s).expect("valid literal"))
        .collect();
    Iet::from_exprs(
        &lengths,
        Permutation::from_images(vec![3, 2, 1]).expect("valid"),
    )
    .expect("valid example")
}

/// `1/sqrt 2` as an exact value.
pub fn inverse_root_two() -> RealValue {
    RealValue::parse("sqrt(1/2)").expect("valid literal")
}

/// `(sqrt 5 - 1)/2`.
pub fn golden_conjugate() -> RealValue {
    RealValue::parse("(-1 + 1*sqrt(5))/2").expect("valid literal")
}
