//! Rank and left nullspace bases of univariate polynomial matrices over a
//! prime field.
//!
//! The main entry point is [`nullspace::nullspace`], a Las Vegas algorithm:
//! it either returns a certified rank with a nullspace basis that has been
//! checked exactly, or reports a [`Failure`] after exhausting its retries.
//! The [`oracle`] module provides slow, independent reference computations.

pub mod error;
pub mod field;
pub mod nullspace;
pub mod oracle;
pub mod orderbasis;
pub mod poly;
pub mod polymat;
pub mod series;

pub use error::{Error, Failure, Result};
pub use field::{FieldElement, PrimeField, DEFAULT_PRIME};
pub use nullspace::{
    nullspace, nullspace_2n, nullspace_minimal_vectors, MinimalVectorsResult, NullspaceResult, RandomPlan, TwoNResult,
};
pub use orderbasis::{sigma_basis, SigmaBasis};
pub use poly::{Degree, Poly};
pub use polymat::{mul_with, tdeg_row, ConstMatrix, MulStrategy, PolyMatrix, Shift};
pub use series::{left_quotient_series, series_inverse, SeriesMatrix};
