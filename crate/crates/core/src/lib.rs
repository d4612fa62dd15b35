//! Optimal N→M symmetric Gaussian cloning of coherent states.
//!
//! * [`quadrature`] fixes the phase-space conventions and state descriptors.
//! * [`cloner`] holds the closed forms: optimal noise, fidelity, cascades and
//!   the squeezed-state variant.
//! * [`estimation`] derives the same noise bound from joint-measurement limits
//!   and checks it with seeded Monte Carlo runs.
//! * [`fock`] rebuilds the clone's density matrix in a truncated Fock basis as
//!   an independent numerical oracle.
//! * [`verify`] bundles these checks into reports; [`cli`] exposes everything
//!   on the command line.

pub mod cli;
pub mod cloner;
pub mod error;
pub mod estimation;
pub mod fock;
pub mod quadrature;
pub mod verify;

pub use cloner::{ClonerSpec, CopyCount, Fidelity, Rational};
pub use error::{Error, Result};
pub use quadrature::{
    CenterState, CoherentState, ComplexAmplitude, GaussianMixtureState, NoiseCovariance,
    SqueezedState,
};
