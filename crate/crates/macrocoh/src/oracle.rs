//! Dense, unoptimized reference implementation of the measure, plus seeded
//! random-instance generators. Every fast path in the crate is arbitrated
//! against [`dense_measure`]; nothing here shares code with the sparse or
//! grouped evaluations.

use num_complex::Complex64;

use crate::rng::SplitMix64;
use crate::types::{DensityMatrix, Observable, PureState};
use crate::{Error, Result};

/// Largest dimension the dense matrix oracle will evaluate.
pub const DENSE_LIMIT: usize = 4096;

/// Largest dimension for the dense pure-state oracle (a vector, so a higher
/// cap is affordable).
pub const DENSE_PURE_LIMIT: usize = 16384;

/// Compensated (Kahan) accumulator: the dense loops sum millions of terms
/// and are compared against exact rationals at 1e-12.
#[derive(Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// A dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    dimension: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(dimension: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dimension * dimension);
        Self { dimension, entries }
    }

    pub fn zeros(dimension: usize) -> Self {
        Self {
            dimension,
            entries: vec![Complex64::new(0.0, 0.0); dimension * dimension],
        }
    }

    /// The maximally mixed state `I / D`.
    pub fn maximally_mixed(dimension: usize) -> Self {
        let mut m = Self::zeros(dimension);
        for i in 0..dimension {
            m[(i, i)] = Complex64::new(1.0 / dimension as f64, 0.0);
        }
        m
    }

    /// Expand a sparse density matrix.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let dimension = usize::try_from(rho.dimension()).map_err(|_| Error::TooLarge {
            what: "dense dimension",
            value: rho.dimension(),
            limit: DENSE_LIMIT as u128,
        })?;
        let mut m = Self::zeros(dimension);
        for &((i, j), v) in rho.entries() {
            m[(i as usize, j as usize)] = v;
            m[(j as usize, i as usize)] = v.conj();
        }
        Ok(m)
    }

    /// Expand the outer product `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &PureState) -> Result<Self> {
        let dimension = usize::try_from(psi.dimension()).map_err(|_| Error::TooLarge {
            what: "dense dimension",
            value: psi.dimension(),
            limit: DENSE_LIMIT as u128,
        })?;
        let mut m = Self::zeros(dimension);
        for &(i, ci) in psi.amplitudes() {
            for &(j, cj) in psi.amplitudes() {
                m[(i as usize, j as usize)] = ci * cj.conj();
            }
        }
        Ok(m)
    }

    /// Convert to the validated sparse representation.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let mut entries = Vec::new();
        for i in 0..self.dimension {
            for j in i..self.dimension {
                let v = self[(i, j)];
                entries.push(((i as u128, j as u128), v));
            }
        }
        DensityMatrix::new(self.dimension as u128, entries)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dimension).map(|i| self[(i, i)]).sum()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dimension + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dimension + j]
    }
}

/// The textbook evaluation of the measure: a literal double loop over all
/// ordered index pairs, no sparsity, no grouping.
pub fn dense_measure(rho: &DenseMatrix, obs: &Observable) -> Result<f64> {
    let dim = rho.dimension();
    if dim > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "dense-oracle dimension",
            value: dim as u128,
            limit: DENSE_LIMIT as u128,
        });
    }
    if obs.dimension() != dim as u128 {
        return Err(Error::DimensionMismatch {
            state: dim as u128,
            observable: obs.dimension(),
        });
    }
    let eigenvalues: Vec<f64> = (0..dim).map(|i| obs.value(i as u128)).collect();
    let mut numerator = KahanSum::default();
    let mut denominator = KahanSum::default();
    for i in 0..dim {
        for j in 0..dim {
            let w = rho[(i, j)].norm();
            numerator.add((eigenvalues[i] - eigenvalues[j]).abs() * w);
            denominator.add(w);
        }
    }
    Ok(numerator.value() / denominator.value())
}

/// The same literal double loop for a pure state, using
/// `|ρ_ij| = |c_i||c_j|` on the densified amplitude vector.
pub fn dense_measure_pure(psi: &PureState, obs: &Observable) -> Result<f64> {
    let dim = usize::try_from(psi.dimension()).unwrap_or(usize::MAX);
    if dim > DENSE_PURE_LIMIT {
        return Err(Error::TooLarge {
            what: "dense-oracle dimension",
            value: psi.dimension(),
            limit: DENSE_PURE_LIMIT as u128,
        });
    }
    if obs.dimension() != psi.dimension() {
        return Err(Error::DimensionMismatch {
            state: psi.dimension(),
            observable: obs.dimension(),
        });
    }
    let mut magnitudes = vec![0.0f64; dim];
    for &(i, c) in psi.amplitudes() {
        magnitudes[i as usize] = c.norm();
    }
    let eigenvalues: Vec<f64> = (0..dim).map(|i| obs.value(i as u128)).collect();
    let mut numerator = KahanSum::default();
    let mut denominator = KahanSum::default();
    for i in 0..dim {
        if magnitudes[i] == 0.0 {
            continue;
        }
        for j in 0..dim {
            let w = magnitudes[i] * magnitudes[j];
            numerator.add((eigenvalues[i] - eigenvalues[j]).abs() * w);
            denominator.add(w);
        }
    }
    Ok(numerator.value() / denominator.value())
}

/// Hilbert–Schmidt random density matrix: `G·G† / tr(G·G†)` with `G` a
/// complex Gaussian matrix.
pub fn random_density(dim: usize, seed: u64) -> DenseMatrix {
    assert!(dim >= 1);
    let mut rng = SplitMix64::new(seed);
    let g: Vec<Complex64> = (0..dim * dim)
        .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
        .collect();
    let mut rho = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                sum += g[i * dim + k] * g[j * dim + k].conj();
            }
            rho[(i, j)] = sum;
        }
    }
    let trace = rho.trace().re;
    for v in &mut rho.entries {
        *v /= trace;
    }
    // exact Hermiticity: fold the two halves
    for i in 0..dim {
        rho[(i, i)] = Complex64::new(rho[(i, i)].re, 0.0);
        for j in (i + 1)..dim {
            let avg = (rho[(i, j)] + rho[(j, i)].conj()) / 2.0;
            rho[(i, j)] = avg;
            rho[(j, i)] = avg.conj();
        }
    }
    rho
}

/// Normalized complex Gaussian vector.
pub fn random_pure(dim: usize, seed: u64) -> PureState {
    assert!(dim >= 1);
    let mut rng = SplitMix64::new(seed);
    let entries: Vec<(u128, Complex64)> = (0..dim)
        .map(|i| {
            (
                i as u128,
                Complex64::new(rng.standard_normal(), rng.standard_normal()),
            )
        })
        .collect();
    PureState::normalized(dim as u128, entries).expect("Gaussian vector has positive norm")
}

/// Sorted uniform spectrum on `[-1, 1]`; when `non_degenerate` is set, draws
/// are rejected until every gap is at least 1e-3.
pub fn random_spectrum(dim: usize, seed: u64, non_degenerate: bool) -> Observable {
    assert!(dim >= 1);
    let mut rng = SplitMix64::new(seed);
    loop {
        let mut values: Vec<f64> = (0..dim).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        values.sort_by(f64::total_cmp);
        if non_degenerate && values.windows(2).any(|w| w[1] - w[0] < 1e-3) {
            continue;
        }
        return Observable::new("random_spectrum", values).expect("uniform draws are finite");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{measure_m, measure_m_pure};
    use crate::states::{ghz, magnetization_z, uniform, SpinBasisConvention};

    fn mz(n: u32) -> Observable {
        magnetization_z(n, SpinBasisConvention::default()).unwrap()
    }

    #[test]
    fn dense_ghz_eight_spins() {
        let rho = DenseMatrix::from_pure(&ghz(8)).unwrap();
        assert!((dense_measure(&rho, &mz(8)).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn dense_maximally_mixed_vanishes() {
        let rho = DenseMatrix::maximally_mixed(16);
        let obs = Observable::new("a", (0..16).map(|i| i as f64).collect()).unwrap();
        assert_eq!(dense_measure(&rho, &obs).unwrap(), 0.0);
    }

    #[test]
    fn dense_uniform_two_spins() {
        let rho = DenseMatrix::from_pure(&uniform(2).unwrap()).unwrap();
        assert!((dense_measure(&rho, &mz(2)).unwrap() - 0.75).abs() < 1e-14);
    }

    #[test]
    fn dense_rejects_oversized_input() {
        let rho = DenseMatrix::maximally_mixed(DENSE_LIMIT + 1);
        let obs = Observable::new("a", vec![0.0; DENSE_LIMIT + 1]).unwrap();
        assert!(matches!(
            dense_measure(&rho, &obs),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn random_density_is_a_state() {
        let rho = random_density(4, 7);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.trace().im.abs() < 1e-15);
        // sparse conversion passes the full validation including PSD
        assert!(rho.to_density().is_ok());
    }

    #[test]
    fn random_pure_is_normalized() {
        let psi = random_pure(8, 1);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_spectrum_gap_control() {
        let obs = random_spectrum(5, 3, true);
        let classes = obs.distinct_classes();
        assert_eq!(classes.len(), 5);
        for w in classes.windows(2) {
            assert!(w[1] - w[0] >= 1e-3);
        }
    }

    #[test]
    fn oracle_agrees_with_fast_paths_smoke() {
        for seed in 0..20u64 {
            let dim = 2 + (seed % 7) as usize;
            let obs = random_spectrum(dim, seed ^ 0xABCD, false);

            let psi = random_pure(dim, seed);
            let grouped = measure_m_pure(&psi, &obs).unwrap().m;
            let reference = dense_measure_pure(&psi, &obs).unwrap();
            assert!(
                (grouped - reference).abs() < 1e-12,
                "pure seed {seed}: {grouped} vs {reference}"
            );

            let rho = random_density(dim, seed.wrapping_add(1000));
            let sparse = measure_m(&rho.to_density().unwrap(), &obs).unwrap().m;
            let reference = dense_measure(&rho, &obs).unwrap();
            assert!(
                (sparse - reference).abs() < 1e-12,
                "density seed {seed}: {sparse} vs {reference}"
            );
        }
    }
}
