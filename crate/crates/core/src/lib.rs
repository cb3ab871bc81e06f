//! Local/nonlocal (EPR2) decompositions of the joint outcome statistics of
//! local projective measurements on two-qubit states.
//!
//! Every state admits a local model carrying weight `1 − C(ρ)`, where `C` is
//! the concurrence. This crate builds those models explicitly: for pure
//! states, for Werner, generalized Werner and Bell-plus-diagonal families,
//! and for arbitrary states through an optimal pure-state ensemble.
//!
//! ```
//! use epr2::{localmodels, states, entanglement, correlations::Setting};
//!
//! let rho = states::werner(0.6).unwrap();
//! assert!((entanglement::concurrence(&rho) - 0.4).abs() < 1e-12);
//!
//! let split = localmodels::model_werner(0.6).unwrap();
//! let a = Setting::new([0.0, 0.0, 1.0]).unwrap();
//! let b = Setting::new([1.0, 0.0, 0.0]).unwrap();
//! assert!(split.remainder(&a, &b).unwrap() >= 0.0);
//! ```

pub mod correlations;
pub mod entanglement;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod localmodels;
pub mod states;

pub use correlations::{JointTable, Setting};
pub use entanglement::{concurrence, WoottersDecomposition};
pub use error::{Error, Result};
pub use localmodels::{Epr2Split, LhvModel, ResponseFn};
pub use states::{BdParams, DensityMatrix, PureState};
