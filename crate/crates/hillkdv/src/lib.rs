//! Spectral invariants of Hill operators −∂² + q with periodic potential.
//!
//! The pipeline: a Fourier potential, its periodic and Dirichlet spectra,
//! the Floquet discriminant and its product representations, contour-based
//! KdV action variables, the spectral reconstruction of the KdV Hamiltonian,
//! and finite-dimensional reduction of the eigenvalue problem near each gap.

pub mod actions;
pub mod analysis;
pub mod cli;
pub mod discriminant;
pub mod error;
pub mod potential;
pub mod reduction;
pub mod spectrum;

pub use error::{Error, Result};
pub use potential::{FourierPotential, PotentialSpec, SeqWeight};
pub use spectrum::{compute_spectra, GalerkinConfig, HillSpectra};
