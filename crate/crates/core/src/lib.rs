//! Finite-field laboratory for the dimension theory of rational curves on
//! general hypersurfaces.
//!
//! The crate has two halves. [`formulas`] evaluates the closed-form counts
//! (expected dimensions, threshold degree, codimension bounds and their
//! recursion). [`curvespace`] samples pairs (curve, hypersurface) over a prime
//! field and certifies local dimensions by exact Jacobian rank, with
//! [`oracle`] providing brute-force and dual-number cross-checks.

pub mod cli;
pub mod curvespace;
pub mod error;
pub mod field;
pub mod formulas;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod seed;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField, DEFAULT_PRIME};
pub use formulas::{dim_report, DimReport, ProblemInstance};
pub use linalg::Matrix;
pub use poly::{BinaryForm, MapParam, MultiPoly};
