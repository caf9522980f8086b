//! Exact computation of the loop-reversal involution on the S¹-equivariant
//! cohomology of free loop spaces, starting from Sullivan minimal models,
//! and of the resulting eigenspace dimensions for the rational homotopy of
//! stable pseudoisotopy spaces and of `A(M)`.
//!
//! The pipeline is
//! [`models::parse_model`] → [`models::borel_model`] →
//! [`cohomology::eigen_table`] → [`pseudoisotopy::pseudoisotopy_table`],
//! with [`series`] for comparing results to closed forms and [`bfk`] for the
//! application to metrics of nonnegative curvature.

pub mod algebra;
pub mod bfk;
pub mod cli;
pub mod cohomology;
pub mod linalg;
pub mod models;
pub mod pseudoisotopy;
pub mod series;

pub use algebra::{AlgebraMap, Derivation, Generator, GradedAlgebra, Monomial, Polynomial};
pub use cohomology::{betti, eigen_table, induced_involution, DegreeSlice, EigenTable};
pub use linalg::{QMatrix, Rational};
pub use models::{borel_model, loop_model, parse_model, point_borel_model, DgaModel, MinimalModel, Space};
pub use pseudoisotopy::{pseudoisotopy_table, PseudoisotopyTable};
pub use series::{RationalExpr, TruncatedSeries};
