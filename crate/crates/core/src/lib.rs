//! Gaussian wave packet under a constant force.
//!
//! The crate evaluates the exact Feynman kernel of the linear potential, the
//! closed-form evolved packet and its position and momentum densities, and the
//! time-dependent joint (Leipnik) entropy
//! `S_j = S_x + S_p - ln(2πħ)`.
//! Every closed form has an independent numerical route next to it:
//! kernel quadrature for the evolution, a continuum-normalized FFT for the
//! momentum representation, and trapezoid quadrature for the entropies.
//!
//! Modules:
//! - [`model`]: parameters, grids, sampled fields and densities.
//! - [`classical`]: classical path, action, Van Vleck prefactor and kernel.
//! - [`quantum`]: closed-form wave function, densities, Fourier transform,
//!   kernel propagation and the consistency checks built on them.
//! - [`entropy`]: differential and joint entropies, the lower bound.
//! - [`cli`]: run configuration, sweeps, validation report and CSV output.

pub mod classical;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod model;
pub mod quantum;

pub use error::{Error, Result};
pub use model::{
    ComplexField, DensityProfile, EntropyRecord, Lattice, MomentumGrid, PacketSpec, SpaceGrid,
    UniformGrid,
};
