//! Exact rationals, heights, primitive vectors and enumeration of
//! denominator-bounded and height-bounded rationals.

mod farey;
mod interval;
mod primitive;
mod rational;

pub(crate) use farey::lattice_numerators;
pub use farey::{farey_neighbors, lattice_x_values, rationals_of_height, HeightFractions};
pub use interval::IntervalQ;
pub use primitive::{enumerate_s, primitivize, s_count_and_sum, PrimVec, SxStats};
pub use rational::{common_denominator, Rational};

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// `H(a) = max(|p|, q)`.
pub fn height(a: &Rational) -> BigInt {
    a.height()
}
