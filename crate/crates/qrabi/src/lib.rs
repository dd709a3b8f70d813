//! Spectra and dynamics of the biased qubit-oscillator (quantum Rabi) system.
//!
//! The Hamiltonian treated throughout, in units where ħ = 1, is
//!
//! ```text
//! H = -(Δ/2) σx - (ε/2) σz + ω a†a + g (a† + a) σz
//! ```
//!
//! with qubit tunneling Δ, static bias ε, oscillator frequency ω and
//! coupling g. Three engines compute its spectrum:
//!
//! * [`bgrwa`] — closed-form eigenvalues and eigenvectors from a
//!   generalized rotating-wave approximation carried out after a polaron
//!   (displaced-oscillator) transformation, extended to nonzero bias.
//! * [`vvp`] — second-order Van Vleck perturbation theory, kept as a
//!   comparison baseline including its known weak-coupling pathology.
//! * [`exact`] — numerically exact diagonalization in a truncated Fock
//!   basis, the oracle the other engines are judged against.
//!
//! [`dynamics`] propagates ⟨σz(t)⟩ from |↑⟩|0⟩ by BGRWA eigen-expansion or
//! by the exact spectral propagator, and [`experiment`] maps flux-qubit
//! circuit parameters (GHz, nA) onto the dimensionless model to produce
//! spectroscopy-style transition scans.

pub mod bgrwa;
pub mod cli;
pub mod dynamics;
pub mod exact;
pub mod experiment;
pub mod model;
pub mod specfun;
pub mod vvp;

pub use model::{Branch, Method, ModelParams, SpectrumTable, StateVector};

/// Errors shared by all engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("oscillator frequency must be positive, got {0}")]
    NonPositiveOmega(f64),
    #[error("coupling must be non-negative, got {0}")]
    NegativeCoupling(f64),
    #[error("non-finite model parameter: {0}")]
    NonFiniteInput(&'static str),
    #[error("table holds {have} levels, {want} requested")]
    InsufficientLevels { have: usize, want: usize },
    #[error("epsilon = delta = 0 leaves the qubit norm degenerate; the system is a free oscillator")]
    DegenerateNorm,
    #[error("Fock truncation too small: tail mass {tail:.3e} exceeds {limit:.1e}")]
    TruncationTooSmall { tail: f64, limit: f64 },
    #[error("matrix element requires n >= m, got m={m}, n={n}")]
    IndexOrder { m: usize, n: usize },
    #[error("resonant denominator at k={k}: |{value:.3e}| below 1e-9")]
    ResonantDenominator { k: usize, value: f64 },
    #[error("symmetric eigensolver failed to converge")]
    EigensolverFailure,
    #[error("level convergence not reached below truncation N={0}")]
    NoConvergence(usize),
    #[error("eigenbasis completeness {0:.6} below 1 - 1e-4; raise n_modes or truncation")]
    IncompleteBasis(f64),
    #[error("invalid flux-qubit parameters: {0}")]
    InvalidFluxParams(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
