//! Exact scalars, matrices, lattices and truncated series.

mod gaussian;
mod matrix;
mod rational;
mod series;
mod snf;

pub use gaussian::GaussianRational;
pub use matrix::{mat_det, mat_kernel, mat_rank, rational_rows, ExactMatrix, RowEchelon};
pub use rational::Rational;
pub use series::{series_product, series_reciprocal, BivariateSeries, GradedSeries};
pub use snf::{smith_normal_form, IntMatrix, SmithForm};
