//! Exact computations in the Kontsevich graph complex: canonical forms,
//! basis generation, connectivity filtrations, cohomology, the dual
//! operators and the SPQR-tree homotopy.

pub mod canon;
pub mod complex;
pub mod connectivity;
pub mod dual;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod formal;
pub mod graph;
pub mod graph6;
pub mod homotopy;
pub mod linalg;
pub mod sample;
pub mod spqr;

pub use canon::{canonical_form, CanonKey, CanonicalClass};
pub use error::*;
pub use graph::{Contraction, Edge, Grading, Insertion, SimpleGraph};
pub use formal::FormalSum;
pub use spqr::{ContractionCase, NodeKind, SpqrTree};
pub use enumerate::{build_basis, generate, Basis, Variant};
pub use linalg::{exact_rank, RankMethod, SparseRationalMatrix};
pub use complex::{cohomology_dims, verify_quasi_isomorphism, CohomologyReport};
pub use dual::{identity_suite, GraphSum, Identity, IdentityReport};
pub use homotopy::{homotopy_check, n_value, to_labeled, HomotopyReport, LabeledGraph};
