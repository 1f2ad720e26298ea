//! Numerical classification of `Ψ = Φ ∘ E` against the E-N, E-Young,
//! E-strong-Young and E-Orlicz function classes, plus E-Luxemburg and
//! E-Orlicz-Sobolev norms over desk-scale measure spaces.
//!
//! The pieces, bottom up:
//!
//! * [`exprlang`]: the expression language `Φ` and `E` are written in,
//!   extended-real evaluation, and composition.
//! * [`measure`]: discrete and quadrature measure spaces and integration.
//! * [`classify`]: tri-state condition checkers and the class report.
//! * [`norms`]: modular, Luxemburg norm, membership, `L^p` closed form.
//! * [`sobolev`]: finite-difference derivatives and Sobolev-type norms.
//! * [`catalog`]: worked-example fixtures, closure and lattice suites.
//! * [`cli`]: the `eorlicz` command-line surface.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod exprlang;
pub mod measure;
pub mod norms;
pub mod sobolev;

use thiserror::Error;

pub use exprlang::{ExtReal, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] exprlang::ParseError),
    #[error(transparent)]
    Compose(#[from] exprlang::ComposeError),
    #[error(transparent)]
    Config(#[from] classify::ConfigError),
    #[error(transparent)]
    Measure(#[from] measure::MeasureError),
    #[error(transparent)]
    Norm(#[from] norms::NormError),
    #[error(transparent)]
    Sobolev(#[from] sobolev::SobolevError),
    #[error(transparent)]
    Catalog(#[from] catalog::CatalogError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
