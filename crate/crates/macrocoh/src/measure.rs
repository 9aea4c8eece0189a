//! The macroscopic-coherence measure `M`, the distance distribution `P(δ)`,
//! spectrum binning, and the effective size.
//!
//! Two conventions are fixed here and pinned by tests:
//!
//! - Both sums of `M(ρ) = Σ d_A(i,j)|ρ_ij| / Σ|ρ_ij|` run over **all** ordered
//!   pairs including the diagonal. Diagonal terms contribute nothing to the
//!   numerator (`d_A(i,i) = 0`) but do enlarge the denominator, so the value
//!   depends on this choice.
//! - `(i,j)` and `(j,i)` are both counted. This cancels in the ratio but
//!   fixes the bookkeeping of the distance distribution.

use crate::types::{
    group_by_eigenvalue, validate_pair, DensityMatrix, Observable, PureState, same_class,
};
use crate::{Error, Result};

/// Measure of a one-particle maximum macroscopic quantum state in spin-1/2
/// magnetization units; divides `M` when converting to an effective size.
pub const SPIN_HALF_UNIT: f64 = 0.5;

/// Uniform binning of a continuous spectrum: half-open bins of the given
/// width anchored at `origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSpec {
    width: f64,
    origin: f64,
}

impl BinSpec {
    pub fn new(width: f64, origin: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bin width must be positive and finite, got {width}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidParameter("bin origin must be finite".into()));
        }
        Ok(Self { width, origin })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Center of the bin containing `a`. Bins are `[origin + k·width,
    /// origin + (k+1)·width)`.
    pub fn center_of(&self, a: f64) -> f64 {
        let k = ((a - self.origin) / self.width).floor();
        self.origin + (k + 0.5) * self.width
    }
}

/// The distribution `P(δ)`: total absolute matrix-element weight at each
/// spectral gap `δ`, normalized to unit probability.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceDistribution {
    points: Vec<(f64, f64)>,
}

impl DistanceDistribution {
    /// Build from raw `(δ, weight)` pairs: gaps equal within the class
    /// tolerance merge (the representative is the weight-averaged gap) and
    /// weights are normalized to probabilities.
    pub fn from_weighted(mut raw: Vec<(f64, f64)>) -> Result<Self> {
        raw.retain(|&(_, w)| w > 0.0);
        if raw.is_empty() {
            return Err(Error::AllZeroWeights);
        }
        raw.sort_by(|x, y| f64::total_cmp(&x.0, &y.0));
        // Gap classes whose members are all the same float keep that value
        // exactly; genuinely spread classes take the weighted mean.
        let mut merged: Vec<(f64, f64)> = Vec::new();
        let mut anchor = raw[0].0;
        let mut spread = false;
        let mut delta_sum = 0.0;
        let mut weight_sum = 0.0;
        for (delta, w) in raw {
            if weight_sum > 0.0 && !same_class(anchor, delta) {
                let representative = if spread { delta_sum / weight_sum } else { anchor };
                merged.push((representative, weight_sum));
                delta_sum = 0.0;
                weight_sum = 0.0;
                anchor = delta;
                spread = false;
            }
            spread = spread || delta != anchor;
            delta_sum += delta * w;
            weight_sum += w;
        }
        let representative = if spread { delta_sum / weight_sum } else { anchor };
        merged.push((representative, weight_sum));
        let total: f64 = merged.iter().map(|(_, w)| w).sum();
        for (_, w) in &mut merged {
            *w /= total;
        }
        Ok(Self { points: merged })
    }

    /// `(δ, p)` pairs, ascending by `δ`.
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Mean gap `Σ_δ P(δ)·δ`, which equals the measure.
    pub fn mean(&self) -> f64 {
        self.points.iter().map(|(delta, p)| delta * p).sum()
    }

    /// Probability mass at gap `δ` (class-tolerant lookup).
    pub fn probability_at(&self, delta: f64) -> f64 {
        self.points
            .iter()
            .find(|(d, _)| same_class(*d, delta))
            .map(|(_, p)| *p)
            .unwrap_or(0.0)
    }
}

/// Which evaluation route produced a [`MeasureReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluationPath {
    /// Pure-state evaluation over aggregated eigenvalue classes.
    Grouped,
    /// Direct sum over the stored matrix elements.
    Dense,
    /// Exact combinatorial evaluation (see [`crate::analytic`]).
    Analytic,
}

impl std::fmt::Display for EvaluationPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EvaluationPath::Grouped => "grouped",
            EvaluationPath::Dense => "dense",
            EvaluationPath::Analytic => "analytic",
        })
    }
}

/// The measure together with its distribution, effective size, and the
/// evaluation route that produced it.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    /// The measure `M(ρ) ≥ 0`.
    pub m: f64,
    /// Effective size in spin-1/2 magnetization units (`N_eff = ⌈M / (1/2)⌉`).
    pub n_eff: u64,
    /// The distance distribution `P(δ)` whose mean is `m`.
    pub distribution: DistanceDistribution,
    pub path: EvaluationPath,
}

/// Spectral distance `d_A(i,j) = |a_i − a_j|`.
pub fn distance(obs: &Observable, i: u128, j: u128) -> Result<f64> {
    Ok((obs.eigenvalue(i)? - obs.eigenvalue(j)?).abs())
}

/// The plain coherence sum `Σ_{i≠j} |ρ_ij|` (diagonal excluded).
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    rho.entries()
        .iter()
        .filter(|((i, j), _)| i != j)
        .map(|(_, v)| 2.0 * v.norm())
        .sum()
}

/// The unnormalized distance-weighted sum `Σ_{i,j} d_A(i,j)|ρ_ij|` over all
/// ordered pairs (the diagonal contributes zero).
pub fn raw_weighted_sum(rho: &DensityMatrix, obs: &Observable) -> Result<f64> {
    validate_pair(rho, obs)?;
    Ok(rho
        .entries()
        .iter()
        .filter(|((i, j), _)| i != j)
        .map(|&((i, j), v)| 2.0 * (obs.value(i) - obs.value(j)).abs() * v.norm())
        .sum())
}

/// The measure `M(ρ)` evaluated directly over the stored matrix elements.
pub fn measure_m(rho: &DensityMatrix, obs: &Observable) -> Result<MeasureReport> {
    validate_pair(rho, obs)?;
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for &((i, j), v) in rho.entries() {
        let w = v.norm();
        if i == j {
            denominator += w;
        } else {
            numerator += 2.0 * (obs.value(i) - obs.value(j)).abs() * w;
            denominator += 2.0 * w;
        }
    }
    let m = numerator / denominator;
    let distribution = distance_distribution(rho, obs)?;
    Ok(MeasureReport {
        m,
        n_eff: effective_size(m, SPIN_HALF_UNIT)?,
        distribution,
        path: EvaluationPath::Dense,
    })
}

/// The measure of a pure state via eigenvalue-class grouping:
/// `M = Σ_{a,b} w_a w_b |a−b| / (Σ_a w_a)²`.
///
/// Identical (within 1e-10) to [`measure_m`] of the outer product
/// `|ψ⟩⟨ψ|`, at a cost of `O(classes²)` instead of `O(support²)`.
pub fn measure_m_pure(psi: &PureState, obs: &Observable) -> Result<MeasureReport> {
    let weights = group_by_eigenvalue(psi, obs)?;
    let classes = weights.normalized();
    if classes.is_empty() {
        return Err(Error::AllZeroWeights);
    }

    let mut numerator = 0.0;
    let mut denominator = 0.0;
    let mut raw: Vec<(f64, f64)> = Vec::with_capacity(classes.len() * (classes.len() + 1) / 2);
    let mut diagonal_weight = 0.0;
    for (row, &(a, wa)) in classes.iter().enumerate() {
        diagonal_weight += wa * wa;
        for &(b, wb) in &classes[row + 1..] {
            let d = (b - a).abs();
            let w = 2.0 * wa * wb;
            numerator += d * w;
            denominator += w;
            raw.push((d, w));
        }
    }
    denominator += diagonal_weight;
    raw.push((0.0, diagonal_weight));

    let m = numerator / denominator;
    let distribution = DistanceDistribution::from_weighted(raw)?;
    Ok(MeasureReport {
        m,
        n_eff: effective_size(m, SPIN_HALF_UNIT)?,
        distribution,
        path: EvaluationPath::Grouped,
    })
}

/// The distribution `P(δ)` of a density matrix: the absolute weight of the
/// elements at each spectral gap, including the `δ = 0` class.
pub fn distance_distribution(rho: &DensityMatrix, obs: &Observable) -> Result<DistanceDistribution> {
    validate_pair(rho, obs)?;
    let mut raw: Vec<(f64, f64)> = Vec::with_capacity(rho.entries().len() + 1);
    let mut diagonal_weight = 0.0;
    for &((i, j), v) in rho.entries() {
        if i == j {
            diagonal_weight += v.norm();
        } else {
            raw.push(((obs.value(i) - obs.value(j)).abs(), 2.0 * v.norm()));
        }
    }
    if diagonal_weight > 0.0 {
        raw.push((0.0, diagonal_weight));
    }
    DistanceDistribution::from_weighted(raw)
}

/// Mean of a distance distribution, `Σ_δ P(δ)·δ`.
pub fn mean_of_distribution(distribution: &DistanceDistribution) -> f64 {
    distribution.mean()
}

/// Effective size: the smallest `n` such that `m ≤ n · unit_mmqs_value`,
/// where `unit_mmqs_value` is the measure of a one-particle maximum state
/// (1/2 for spin-1/2 magnetization units). Zero measure gives zero size.
pub fn effective_size(m: f64, unit_mmqs_value: f64) -> Result<u64> {
    if unit_mmqs_value.is_nan() || unit_mmqs_value <= 0.0 {
        return Err(Error::NonPositiveUnit(unit_mmqs_value));
    }
    if m < 0.0 || !m.is_finite() {
        return Err(Error::OutOfRange(format!(
            "measure must be finite and nonnegative, got {m}"
        )));
    }
    if m == 0.0 {
        return Ok(0);
    }
    // Slack of 1e-9 keeps path noise from bumping an exact multiple up.
    let n = (m / unit_mmqs_value - 1e-9).ceil();
    Ok(n.max(0.0) as u64)
}

/// Replace every eigenvalue by the center of its bin; the dimension is
/// unchanged. Widths at or above the spectral span collapse the whole
/// spectrum into a single class and force `M = 0`.
pub fn bin_observable(obs: &Observable, bins: &BinSpec) -> Observable {
    obs.binned(*bins)
}
