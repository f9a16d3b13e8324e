//! Exact real and floating complex linear algebra.

pub mod complex;
pub mod real;
pub mod text;

pub use complex::{complex_minor_det, dft_matrix, unity_root, ComplexMatrix, MinorDet};
pub use real::{nullspace_basis, Entries, NullspaceBasis, RealMatrix};
