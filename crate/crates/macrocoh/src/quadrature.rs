//! The quadrature observable `X_θ = (a e^(−iθ) + a† e^(iθ))/2` on a truncated
//! Fock space, its spectral decomposition, and cat-state measures evaluated
//! in the quadrature eigenbasis — the full-numerics counterpart of the
//! two-level cat idealization in [`crate::states::scs_idealized`].
//!
//! With the normalization `X = (a + a†)/2` the vacuum variance is 1/4 and the
//! packets of a cat state sit at `±|α|`, so the idealized measure is `|α|`
//! and the full numerics approach it from above as `|α|` grows.
//!
//! In the Fock basis `X_θ` couples neighbouring levels with
//! `⟨n|X_θ|n+1⟩ = e^(−iθ)√(n+1)/2`. The diagonal gauge `|n⟩ → e^(−inθ)|n⟩`
//! makes the matrix real symmetric tridiagonal with off-diagonal
//! `√(n+1)/2` — independent of `θ`, which enters again only when state
//! amplitudes are rotated into the gauged basis.

use num_complex::Complex64;

use crate::eigen::tridiagonal_ql;
use crate::measure::{bin_observable, measure_m, measure_m_pure, BinSpec, MeasureReport};
use crate::states::{coherent, coherent_cutoff, scs};
use crate::types::{DensityMatrix, Observable, PureState};
use crate::{Error, Result};

/// Real symmetric tridiagonal form of `X_θ` in the phase gauge, carrying the
/// gauge angle for later state transforms.
#[derive(Debug, Clone)]
pub struct TridiagonalMatrix {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
    gauge_theta: f64,
}

impl TridiagonalMatrix {
    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }
}

/// The `cutoff × cutoff` matrix of `X_θ` over Fock levels `0..cutoff`, in
/// the standard phase gauge: zero diagonal, off-diagonal `√(n+1)/2`. The
/// eigenvalues are the same for every `θ` (the gauge is unitary).
pub fn quadrature_matrix(theta: f64, cutoff: usize) -> Result<TridiagonalMatrix> {
    if cutoff < 2 {
        return Err(Error::CutoffTooSmall {
            cutoff,
            reason: "the quadrature needs at least two Fock levels".into(),
        });
    }
    Ok(TridiagonalMatrix {
        diagonal: vec![0.0; cutoff],
        off_diagonal: (0..cutoff - 1)
            .map(|n| ((n + 1) as f64).sqrt() / 2.0)
            .collect(),
        gauge_theta: theta,
    })
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric
/// tridiagonal matrix over Fock indices.
#[derive(Debug, Clone)]
pub struct TridiagonalSpectrum {
    eigenvalues: Vec<f64>,
    /// `vectors[n][k]` is Fock component `n` of eigenvector `k`.
    vectors: Vec<Vec<f64>>,
    gauge_theta: f64,
}

impl TridiagonalSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Fock components of eigenvector `k`.
    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.vectors.iter().map(|row| row[k]).collect()
    }

    /// The eigenvalues as a dense [`Observable`].
    pub fn observable(&self, name: impl Into<String>) -> Result<Observable> {
        Observable::new(name, self.eigenvalues.clone())
    }

    /// Rotate a Fock-basis state into this eigenbasis, applying the phase
    /// gauge `c_n → e^(−inθ) c_n` first. States over fewer Fock levels than
    /// the basis are zero-padded.
    pub fn to_eigenbasis(&self, psi: &PureState) -> Result<PureState> {
        let dim = self.dimension();
        if psi.dimension() > dim as u128 {
            return Err(Error::DimensionMismatch {
                state: psi.dimension(),
                observable: dim as u128,
            });
        }
        let gauged = self.gauged_dense(psi);
        let entries: Vec<(u128, Complex64)> = (0..dim)
            .map(|k| {
                let amp = (0..dim)
                    .map(|n| self.vectors[n][k] * gauged[n])
                    .sum::<Complex64>();
                (k as u128, amp)
            })
            .collect();
        PureState::normalized(dim as u128, entries)
    }

    fn gauged_dense(&self, psi: &PureState) -> Vec<Complex64> {
        let mut dense = vec![Complex64::new(0.0, 0.0); self.dimension()];
        for &(n, c) in psi.amplitudes() {
            let phase = Complex64::from_polar(1.0, -(n as f64) * self.gauge_theta);
            dense[n as usize] = phase * c;
        }
        dense
    }
}

/// Full spectrum of a symmetric tridiagonal matrix via implicit-shift QL.
pub fn eigendecompose(matrix: &TridiagonalMatrix) -> Result<TridiagonalSpectrum> {
    let dim = matrix.dimension();
    let mut d = matrix.diagonal.clone();
    let mut e = matrix.off_diagonal.clone();
    e.push(0.0);
    let mut vectors: Vec<Vec<f64>> = (0..dim)
        .map(|r| (0..dim).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();
    tridiagonal_ql(&mut d, &mut e, Some(&mut vectors))?;
    Ok(TridiagonalSpectrum {
        eigenvalues: d,
        vectors,
        gauge_theta: matrix.gauge_theta,
    })
}

/// Minimum number of Fock levels in the eigenbasis used by the full-numerics
/// cat evaluations. Keeping the node grid at least this dense — and
/// independent of the state truncation — makes the measure stable under
/// cutoff increases: a larger cutoff only extends a state whose tail is
/// already below the truncation budget.
pub const QUADRATURE_GRID_LEVELS: usize = 160;

fn check_full_numerics_inputs(alpha: Complex64, cutoff: usize, bins: &BinSpec) -> Result<f64> {
    let rule = coherent_cutoff(alpha);
    if cutoff < rule {
        return Err(Error::CutoffTooSmall {
            cutoff,
            reason: format!("the cutoff rule for |α| = {} requires {rule}", alpha.norm()),
        });
    }
    if bins.width() > 0.25 {
        return Err(Error::InvalidParameter(format!(
            "bin width {} too coarse for the quadrature packets (max 0.25)",
            bins.width()
        )));
    }
    Ok(alpha.im.atan2(alpha.re))
}

fn grid_levels(cutoff: usize) -> usize {
    QUADRATURE_GRID_LEVELS.max(cutoff + 1)
}

/// Measure of the cat state `(|α⟩ + |−α⟩)/z` in the binned eigenbasis of the
/// quadrature `X_θ` with `tan θ = Im α / Re α`. Approaches `|α|` from above
/// as `|α|` grows; the excess is the intra-packet spread.
pub fn scs_full_report(alpha: Complex64, cutoff: usize, bins: &BinSpec) -> Result<MeasureReport> {
    let theta = check_full_numerics_inputs(alpha, cutoff, bins)?;
    let state = scs(alpha, cutoff)?;
    let spectrum = eigendecompose(&quadrature_matrix(theta, grid_levels(cutoff))?)?;
    let observable = bin_observable(&spectrum.observable("quadrature")?, bins);
    let rotated = spectrum.to_eigenbasis(&state)?;
    measure_m_pure(&rotated, &observable)
}

/// The measure value of [`scs_full_report`].
pub fn scs_full_measure(alpha: Complex64, cutoff: usize, bins: &BinSpec) -> Result<f64> {
    Ok(scs_full_report(alpha, cutoff, bins)?.m)
}

/// Full-numerics analog of the idealized incoherent cat mixture: the
/// diagonal-in-packets state `(|α⟩⟨α| + |−α⟩⟨−α|)/2` in the binned
/// quadrature eigenbasis. Only the intra-packet spread survives, so the
/// value is far below `|α|`.
pub fn mixed_scs_full_report(
    alpha: Complex64,
    cutoff: usize,
    bins: &BinSpec,
) -> Result<MeasureReport> {
    let theta = check_full_numerics_inputs(alpha, cutoff, bins)?;
    let spectrum = eigendecompose(&quadrature_matrix(theta, grid_levels(cutoff))?)?;
    let observable = bin_observable(&spectrum.observable("quadrature")?, bins);

    let dim = spectrum.dimension();
    let plus = spectrum.to_eigenbasis(&coherent(alpha, cutoff)?)?;
    let minus = spectrum.to_eigenbasis(&coherent(-alpha, cutoff)?)?;
    let mut entries = Vec::new();
    for i in 0..dim as u128 {
        let (pi, mi) = (plus.amplitude(i), minus.amplitude(i));
        for j in i..dim as u128 {
            let v = 0.5 * (pi * plus.amplitude(j).conj() + mi * minus.amplitude(j).conj());
            entries.push(((i, j), v));
        }
    }
    let rho = DensityMatrix::new_psd_by_construction(dim as u128, entries)?;
    measure_m(&rho, &observable)
}
