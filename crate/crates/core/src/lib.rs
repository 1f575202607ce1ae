//! Gap structures of circle rotations and interval exchange
//! transformations: exact three-gap predictions, zippered rectangles, gap
//! distributions and their limit, and the gap graphs that bound the number
//! of distinct gap lengths.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod numerics;

pub use error::{Error, Result};
pub mod cli;
pub mod distribution;
pub mod examples;
pub mod gaps;
pub mod graphs;
pub mod iet;
pub mod zipper;
