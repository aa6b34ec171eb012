//! Exact scalars, linear combinations, truncated series, and emitters.

pub mod emit;
pub mod linalg;
pub mod lincomb;
pub mod rational;
pub mod series;

pub use emit::{lincomb_from_json, lincomb_to_json, series_to_json, ParseBasis};
pub use linalg::matrix_rank;
pub use lincomb::{bilinear, tensor_flip, tensor_product, BasisElem, LinComb, Pair, Triple};
pub use rational::{binomial, factorial, rat, rat_int, rat_latex, rat_parse, rat_str, Rational};
pub use series::TruncatedSeries;
