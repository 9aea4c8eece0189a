//! Macroscopic coherence of quantum states.
//!
//! Coherence alone does not make a state macroscopically quantum: a product of
//! single-spin superpositions carries as much coherence as a GHZ state, but
//! none of it is collective. This crate quantifies the *macroscopic* part by
//! weighting each coherence element `ρ_ij` of a density matrix with the
//! spectral distance `|a_i − a_j|` of the measured observable `A` and
//! averaging:
//!
//! ```text
//! M(ρ) = Σ_ij d_A(i,j) |ρ_ij|  /  Σ_ij |ρ_ij|,      d_A(i,j) = |a_i − a_j|
//! ```
//!
//! `M` is the mean of the distance distribution `P(δ)` over the matrix
//! elements of `ρ`, grows like `N/2` for GHZ and NOON states, stays at `1/2`
//! for a single excited superposition, and vanishes for any state diagonal in
//! the eigenbasis of `A`.
//!
//! The crate provides:
//!
//! - [`types`]: sparse pure states and density matrices over an observable's
//!   eigenbasis, plus the eigenvalue-class grouping behind the fast path;
//! - [`measure`]: the measure `M`, the distance distribution `P(δ)`, spectrum
//!   binning, and the effective size `N_eff`;
//! - [`states`]: spin and photonic example states (GHZ, W, uniform, NOON,
//!   coherent, cat, thermal);
//! - [`analytic`]: exact combinatorics for the uniform state at any `N`;
//! - [`mmqs`]: maximum macroscopic quantum states and a numerical check that
//!   `(a_max − a_min)/2` bounds `M` over all states;
//! - [`quadrature`]: cat states evaluated in the quadrature eigenbasis of a
//!   truncated Fock space;
//! - [`oracle`]: a dense, unoptimized reference implementation and seeded
//!   random-instance generators.
//!
//! # Quick start
//!
//! ```
//! use macrocoh::measure::measure_m_pure;
//! use macrocoh::states::{ghz, magnetization_z, SpinBasisConvention};
//!
//! let psi = ghz(10);
//! let obs = magnetization_z(10, SpinBasisConvention::default()).unwrap();
//! let report = measure_m_pure(&psi, &obs).unwrap();
//! assert_eq!(report.m, 5.0);
//! assert_eq!(report.n_eff, 10);
//! ```

#![forbid(unsafe_code)]

use thiserror::Error;

pub mod analytic;
mod eigen;
pub mod measure;
pub mod mmqs;
pub mod oracle;
pub mod quadrature;
pub mod rng;
pub mod states;
pub mod types;

pub use num_complex::Complex64;

/// Errors reported by state construction, validation, and evaluation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: state dimension {state} vs observable dimension {observable}")]
    DimensionMismatch { state: u128, observable: u128 },

    #[error("state is not normalized: squared norm / trace = {value}")]
    NonNormalized { value: f64 },

    #[error("matrix is not Hermitian at entry ({i}, {j})")]
    NonHermitian { i: u128, j: u128 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {eigenvalue:e}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("basis index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: u128, dimension: u128 },

    #[error("{what} = {value} exceeds the supported limit {limit}")]
    TooLarge {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("Fock cutoff {cutoff} too small: {reason}")]
    CutoffTooSmall { cutoff: usize, reason: String },

    #[error("observable spectrum is flat: maximum and minimum eigenvalues coincide")]
    FlatSpectrum,

    #[error("all weights are zero")]
    AllZeroWeights,

    #[error("unit MMQS measure must be positive, got {0}")]
    NonPositiveUnit(f64),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("eigenvalue iteration did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("sampled state exceeds the theoretical bound: M = {m} > {bound}")]
    CounterexampleFound { m: f64, bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

// Book chapters double as doc-tests so the guide stays in sync with the API.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(measure, "../../../book/src/measure.md");
    chapter!(states, "../../../book/src/states.md");
    chapter!(mmqs, "../../../book/src/mmqs.md");
    chapter!(uniform, "../../../book/src/uniform.md");
    chapter!(cat_states, "../../../book/src/cat-states.md");
    chapter!(cli, "../../../book/src/cli.md");
}
