//! Which sparse supports does l1-minimization always recover?
//!
//! A support `S` is recovered for every signal supported in it exactly when
//! every extreme point `z` of `null(Φ) ∩ B₁` puts less than half of its `ℓ1`
//! mass on `S`. The family of such supports is closed under subsets, the
//! maximal abstract simplicial complex (MASC) of `Φ`.
//!
//! - [`masc`] decides membership for any matrix from exact extreme points.
//! - [`graph`] does the same for incidence matrices using simple cycles.
//! - [`dft`] handles partial DFT measurements at prime length.
//! - [`recovery`] solves basis pursuit and runs Monte Carlo recovery trials.
//! - [`experiment`] and [`plot`] drive the config-based sweeps behind the CLI.

pub mod cli;
pub mod dft;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod linalg;
pub mod masc;
pub mod plot;
pub mod recovery;
pub mod rng;
pub mod support;

pub use error::{MascError, Result};
pub use support::{SimplicialComplexSummary, SupportSet};
