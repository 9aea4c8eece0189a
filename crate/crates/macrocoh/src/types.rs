//! Domain types: observables, sparse states, and eigenvalue-class grouping.
//!
//! Everything here is immutable after construction and validated on entry, so
//! the evaluation paths in [`crate::measure`] can assume well-formed inputs.
//! The spectrum of an [`Observable`] is stored either as an explicit
//! eigenvalue table or as a closed form (one value per spin configuration),
//! which keeps `2^N`-dimensional spin registers tractable without ever
//! materializing `2^N` numbers.

use num_complex::Complex64;

use crate::measure::BinSpec;
use crate::{Error, Result};

/// States are normalized (pure) or unit-trace (density) within this bound.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Stored amplitudes and matrix entries must exceed this magnitude; anything
/// smaller is dropped and treated as exactly zero.
pub const SPARSITY_FLOOR: f64 = 1e-12;

/// Relative tolerance for merging floating-point eigenvalues into one class.
pub const CLASS_MERGE_REL: f64 = 1e-9;

/// Absolute tolerance for class merging near zero.
pub const CLASS_MERGE_ABS: f64 = 1e-12;

/// Do two spectral values fall into the same eigenvalue class?
pub fn same_class(a: f64, b: f64) -> bool {
    (a - b).abs() <= CLASS_MERGE_ABS.max(CLASS_MERGE_REL * a.abs().max(b.abs()))
}

/// A position in an observable's eigenbasis, optionally carrying a
/// human-readable tag such as a spin bitstring `"0110"` or a Fock level
/// `"n=3"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    pub index: u128,
    pub tag: Option<String>,
}

impl BasisLabel {
    pub fn new(index: u128) -> Self {
        Self { index, tag: None }
    }

    pub fn tagged(index: u128, tag: impl Into<String>) -> Self {
        Self {
            index,
            tag: Some(tag.into()),
        }
    }
}

/// Closed-form or tabulated eigenvalues of an observable.
#[derive(Debug, Clone)]
enum Primitive {
    /// One explicit eigenvalue per basis index.
    Dense(Vec<f64>),
    /// `sites` spin-1/2 particles; basis index `b` is a bit pattern and the
    /// eigenvalue is `up` per 0-bit plus `down` per 1-bit.
    Spin { sites: u32, up: f64, down: f64 },
}

/// A value transformation applied on top of the primitive spectrum.
#[derive(Debug, Clone)]
enum ValueMap {
    Affine { scale: f64, offset: f64 },
    Bin(BinSpec),
}

impl ValueMap {
    fn apply(&self, a: f64) -> f64 {
        match self {
            ValueMap::Affine { scale, offset } => scale * a + offset,
            ValueMap::Bin(spec) => spec.center_of(a),
        }
    }
}

/// A measured observable, given in its own eigenbasis: a real spectrum
/// indexed by basis labels.
#[derive(Debug, Clone)]
pub struct Observable {
    name: String,
    primitive: Primitive,
    maps: Vec<ValueMap>,
    labels: Option<Vec<BasisLabel>>,
}

impl Observable {
    /// Observable with an explicit eigenvalue table.
    pub fn new(name: impl Into<String>, eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidParameter(
                "observable needs at least one eigenvalue".into(),
            ));
        }
        if let Some(bad) = eigenvalues.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eigenvalues must be finite, got {bad}"
            )));
        }
        Ok(Self {
            name: name.into(),
            primitive: Primitive::Dense(eigenvalues),
            maps: Vec::new(),
            labels: None,
        })
    }

    /// Spin-register observable: the eigenvalue of bit pattern `b` is the sum
    /// of `up` over 0-bits and `down` over 1-bits. Dimension is `2^sites`.
    pub(crate) fn spin_sum(name: impl Into<String>, sites: u32, up: f64, down: f64) -> Result<Self> {
        if sites == 0 || sites > 127 {
            return Err(Error::TooLarge {
                what: "spin count",
                value: sites as u128,
                limit: 127,
            });
        }
        if !up.is_finite() || !down.is_finite() {
            return Err(Error::InvalidParameter(
                "per-spin eigenvalues must be finite".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            primitive: Primitive::Spin { sites, up, down },
            maps: Vec::new(),
            labels: None,
        })
    }

    /// Attach basis labels. Indices must be in range and tags unique.
    pub fn with_labels(mut self, mut labels: Vec<BasisLabel>) -> Result<Self> {
        labels.sort_by_key(|l| l.index);
        for label in &labels {
            if label.index >= self.dimension() {
                return Err(Error::IndexOutOfRange {
                    index: label.index,
                    dimension: self.dimension(),
                });
            }
        }
        let mut tags: Vec<&str> = labels
            .iter()
            .filter_map(|l| l.tag.as_deref())
            .collect();
        tags.sort_unstable();
        if tags.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "basis tags must be unique within one basis".into(),
            ));
        }
        if labels.windows(2).any(|w| w[0].index == w[1].index) {
            return Err(Error::InvalidParameter(
                "at most one label per basis index".into(),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> u128 {
        match &self.primitive {
            Primitive::Dense(values) => values.len() as u128,
            Primitive::Spin { sites, .. } => 1u128 << sites,
        }
    }

    /// Eigenvalue at `index`, without range checking.
    pub(crate) fn value(&self, index: u128) -> f64 {
        let mut a = match &self.primitive {
            Primitive::Dense(values) => values[index as usize],
            Primitive::Spin { sites, up, down } => {
                let ones = index.count_ones() as f64;
                (*sites as f64 - ones) * up + ones * down
            }
        };
        for map in &self.maps {
            a = map.apply(a);
        }
        a
    }

    /// Eigenvalue at `index`.
    pub fn eigenvalue(&self, index: u128) -> Result<f64> {
        if index >= self.dimension() {
            return Err(Error::IndexOutOfRange {
                index,
                dimension: self.dimension(),
            });
        }
        Ok(self.value(index))
    }

    /// Label attached to `index`, if any.
    pub fn label(&self, index: u128) -> Option<&BasisLabel> {
        let labels = self.labels.as_ref()?;
        labels
            .binary_search_by_key(&index, |l| l.index)
            .ok()
            .map(|pos| &labels[pos])
    }

    /// Distinct eigenvalue classes of the whole spectrum, ascending, merged
    /// with the class tolerance.
    pub fn distinct_classes(&self) -> Vec<f64> {
        let mut values = match &self.primitive {
            Primitive::Dense(values) => values.clone(),
            Primitive::Spin { sites, up, down } => (0..=*sites)
                .map(|ones| (*sites - ones) as f64 * up + ones as f64 * down)
                .collect(),
        };
        for map in &self.maps {
            for v in &mut values {
                *v = map.apply(*v);
            }
        }
        values.sort_by(f64::total_cmp);
        merge_sorted_classes(&values)
    }

    /// Smallest and largest eigenvalue.
    pub fn spectral_range(&self) -> (f64, f64) {
        let classes = self.distinct_classes();
        (classes[0], *classes.last().unwrap())
    }

    /// Lowest basis indices attaining the minimum and maximum eigenvalue
    /// (in that order). Fails on a flat spectrum.
    pub fn extreme_indices(&self) -> Result<(u128, u128)> {
        let (lo, hi) = self.spectral_range();
        if lo == hi {
            return Err(Error::FlatSpectrum);
        }
        match &self.primitive {
            Primitive::Dense(values) => {
                let mut i_min = 0u128;
                let mut i_max = 0u128;
                let mut v_min = f64::INFINITY;
                let mut v_max = f64::NEG_INFINITY;
                for raw in 0..values.len() {
                    let v = self.value(raw as u128);
                    if v < v_min {
                        v_min = v;
                        i_min = raw as u128;
                    }
                    if v > v_max {
                        v_max = v;
                        i_max = raw as u128;
                    }
                }
                Ok((i_min, i_max))
            }
            Primitive::Spin { sites, up, down } => {
                // The lowest index with k set bits is 2^k - 1, so the lowest
                // index attaining an extreme belongs to the smallest
                // attaining bit count.
                let value_of = |ones: u32| -> f64 {
                    let mut a = (*sites - ones) as f64 * up + ones as f64 * down;
                    for map in &self.maps {
                        a = map.apply(a);
                    }
                    a
                };
                let mut k_min = 0u32;
                let mut k_max = 0u32;
                let mut v_min = f64::INFINITY;
                let mut v_max = f64::NEG_INFINITY;
                for ones in 0..=*sites {
                    let v = value_of(ones);
                    if v < v_min {
                        v_min = v;
                        k_min = ones;
                    }
                    if v > v_max {
                        v_max = v;
                        k_max = ones;
                    }
                }
                let lowest_index = |ones: u32| -> u128 {
                    if ones == 0 {
                        0
                    } else {
                        (1u128 << ones) - 1
                    }
                };
                Ok((lowest_index(k_min), lowest_index(k_max)))
            }
        }
    }

    /// Shift the whole spectrum by `offset`.
    pub fn shifted(&self, offset: f64) -> Observable {
        self.mapped(1.0, offset)
    }

    /// Scale the whole spectrum by `scale`.
    pub fn scaled(&self, scale: f64) -> Observable {
        self.mapped(scale, 0.0)
    }

    fn mapped(&self, scale: f64, offset: f64) -> Observable {
        let mut out = self.clone();
        out.maps.push(ValueMap::Affine { scale, offset });
        out
    }

    /// Replace every eigenvalue by the center of its bin.
    pub(crate) fn binned(&self, spec: BinSpec) -> Observable {
        let mut out = self.clone();
        out.maps.push(ValueMap::Bin(spec));
        out
    }
}

/// Cluster a sorted slice of spectral values, anchored at the first member of
/// each class. Returns one representative (the weighted mean is not needed
/// here; class membership only) per class.
fn merge_sorted_classes(sorted: &[f64]) -> Vec<f64> {
    let mut classes: Vec<f64> = Vec::new();
    for &v in sorted {
        match classes.last() {
            Some(&anchor) if same_class(anchor, v) => {}
            _ => classes.push(v),
        }
    }
    classes
}

/// A sparse pure state: complex amplitudes over basis indices.
#[derive(Debug, Clone)]
pub struct PureState {
    dimension: u128,
    amplitudes: Vec<(u128, Complex64)>,
}

impl PureState {
    /// Build from amplitudes, which must already be normalized within
    /// [`NORM_TOLERANCE`]. Entries below [`SPARSITY_FLOOR`] are dropped.
    pub fn new(dimension: u128, entries: Vec<(u128, Complex64)>) -> Result<Self> {
        let amplitudes = Self::prepare(dimension, entries)?;
        let norm_sq: f64 = amplitudes.iter().map(|(_, c)| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NonNormalized { value: norm_sq });
        }
        Ok(Self {
            dimension,
            amplitudes,
        })
    }

    /// Build from unnormalized amplitudes, scaling to unit norm first.
    pub fn normalized(dimension: u128, entries: Vec<(u128, Complex64)>) -> Result<Self> {
        let mut amplitudes = Self::prepare(dimension, entries)?;
        let norm_sq: f64 = amplitudes.iter().map(|(_, c)| c.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::NonNormalized { value: norm_sq });
        }
        let inv = 1.0 / norm_sq.sqrt();
        for (_, c) in &mut amplitudes {
            *c *= inv;
        }
        amplitudes.retain(|(_, c)| c.norm() > SPARSITY_FLOOR);
        Ok(Self {
            dimension,
            amplitudes,
        })
    }

    fn prepare(dimension: u128, mut entries: Vec<(u128, Complex64)>) -> Result<Vec<(u128, Complex64)>> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        entries.sort_by_key(|(i, _)| *i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter(format!(
                    "duplicate amplitude at basis index {}",
                    w[0].0
                )));
            }
        }
        if let Some(&(index, _)) = entries.iter().find(|(i, _)| *i >= dimension) {
            return Err(Error::IndexOutOfRange { index, dimension });
        }
        entries.retain(|(_, c)| c.norm() > SPARSITY_FLOOR);
        Ok(entries)
    }

    pub fn dimension(&self) -> u128 {
        self.dimension
    }

    /// Stored (index, amplitude) pairs, ascending by index.
    pub fn amplitudes(&self) -> &[(u128, Complex64)] {
        &self.amplitudes
    }

    /// Amplitude at `index`; exactly zero when absent.
    pub fn amplitude(&self, index: u128) -> Complex64 {
        self.amplitudes
            .binary_search_by_key(&index, |(i, _)| *i)
            .map(|pos| self.amplitudes[pos].1)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }
}

/// A sparse density matrix, stored as the upper triangle (`i <= j`) of a
/// Hermitian, unit-trace matrix. The lower triangle is implied.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dimension: u128,
    entries: Vec<((u128, u128), Complex64)>,
}

impl DensityMatrix {
    /// Largest dimension at which positive semidefiniteness is verified
    /// exhaustively; beyond it, PSD is asserted by construction.
    pub const PSD_CHECK_LIMIT: u128 = 64;

    /// Build from matrix entries in any order. Lower-triangle entries are
    /// folded onto the upper triangle via conjugation; if both halves are
    /// given they must agree. The matrix must have unit trace and, for
    /// dimensions up to [`Self::PSD_CHECK_LIMIT`], be positive semidefinite.
    pub fn new(dimension: u128, entries: Vec<((u128, u128), Complex64)>) -> Result<Self> {
        let matrix = Self::assemble(dimension, entries, true)?;
        matrix.check_psd()?;
        Ok(matrix)
    }

    /// Build without the eigenvalue-based PSD check, for matrices that are
    /// positive semidefinite by construction (outer products, convex
    /// mixtures of them). Hermiticity and the unit trace are still verified.
    pub fn new_psd_by_construction(
        dimension: u128,
        entries: Vec<((u128, u128), Complex64)>,
    ) -> Result<Self> {
        Self::assemble(dimension, entries, true)
    }

    fn assemble(
        dimension: u128,
        entries: Vec<((u128, u128), Complex64)>,
        check_trace: bool,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let mut upper: Vec<((u128, u128), Complex64)> = Vec::with_capacity(entries.len());
        for ((i, j), v) in entries {
            if i >= dimension || j >= dimension {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    dimension,
                });
            }
            if i <= j {
                upper.push(((i, j), v));
            } else {
                upper.push(((j, i), v.conj()));
            }
        }
        upper.sort_by_key(|(ij, _)| *ij);
        // Duplicates arise when both halves of a Hermitian pair were given;
        // they must agree after conjugate folding.
        let mut dedup: Vec<((u128, u128), Complex64)> = Vec::with_capacity(upper.len());
        for (ij, v) in upper {
            match dedup.last() {
                Some(&(last_ij, last_v)) if last_ij == ij => {
                    if (last_v - v).norm() > 1e-12 {
                        return Err(Error::NonHermitian { i: ij.0, j: ij.1 });
                    }
                }
                _ => dedup.push((ij, v)),
            }
        }
        for &((i, j), v) in &dedup {
            if i == j && v.im.abs() > 1e-12 {
                return Err(Error::NonHermitian { i, j });
            }
        }
        dedup.retain(|(_, v)| v.norm() > SPARSITY_FLOOR);
        let matrix = Self {
            dimension,
            entries: dedup,
        };
        if check_trace {
            let trace = matrix.trace();
            if (trace - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::NonNormalized { value: trace });
            }
        }
        Ok(matrix)
    }

    /// Outer product `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &PureState) -> Self {
        let amps = psi.amplitudes();
        let mut entries = Vec::with_capacity(amps.len() * (amps.len() + 1) / 2);
        for (row, &(i, ci)) in amps.iter().enumerate() {
            for &(j, cj) in &amps[row..] {
                let v = ci * cj.conj();
                if v.norm() > SPARSITY_FLOOR {
                    entries.push(((i, j), v));
                }
            }
        }
        Self {
            dimension: psi.dimension(),
            entries,
        }
    }

    /// Diagonal density matrix from probabilities; renormalized after entries
    /// below the sparsity floor are dropped.
    pub fn diagonal(dimension: u128, probabilities: Vec<(u128, f64)>) -> Result<Self> {
        for &(_, p) in &probabilities {
            if p < 0.0 || !p.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "probabilities must be finite and nonnegative, got {p}"
                )));
            }
        }
        let total: f64 = probabilities.iter().map(|(_, p)| p).sum();
        if total <= 0.0 {
            return Err(Error::NonNormalized { value: total });
        }
        let kept: Vec<((u128, u128), Complex64)> = probabilities
            .iter()
            .filter(|(_, p)| p / total > SPARSITY_FLOOR)
            .map(|&(i, p)| ((i, i), Complex64::new(p, 0.0)))
            .collect();
        let kept_total: f64 = kept.iter().map(|(_, v)| v.re).sum();
        let entries = kept
            .into_iter()
            .map(|(ij, v)| (ij, v / kept_total))
            .collect();
        Self::assemble(dimension, entries, true)
    }

    pub fn dimension(&self) -> u128 {
        self.dimension
    }

    /// Stored upper-triangle entries, ascending by (i, j).
    pub fn entries(&self) -> &[((u128, u128), Complex64)] {
        &self.entries
    }

    /// Entry at (i, j), resolving the implied lower triangle.
    pub fn entry(&self, i: u128, j: u128) -> Complex64 {
        let (key, conjugate) = if i <= j { ((i, j), false) } else { ((j, i), true) };
        let v = self
            .entries
            .binary_search_by_key(&key, |(ij, _)| *ij)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(Complex64::new(0.0, 0.0));
        if conjugate {
            v.conj()
        } else {
            v
        }
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|((i, j), _)| i == j)
            .map(|(_, v)| v.re)
            .sum()
    }

    fn check_psd(&self) -> Result<()> {
        if self.dimension > Self::PSD_CHECK_LIMIT {
            return Ok(());
        }
        let dim = self.dimension as usize;
        let mut dense = vec![Complex64::new(0.0, 0.0); dim * dim];
        for &((i, j), v) in &self.entries {
            dense[i as usize * dim + j as usize] = v;
            dense[j as usize * dim + i as usize] = v.conj();
        }
        let smallest = crate::eigen::hermitian_min_eigenvalue(&dense, dim)?;
        if smallest < -1e-9 {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: smallest,
            });
        }
        Ok(())
    }
}

/// Common surface of [`PureState`] and [`DensityMatrix`] used by validation.
pub trait State {
    fn dimension(&self) -> u128;
    /// Re-check the cheap construction invariants.
    fn check(&self) -> Result<()>;
}

impl State for PureState {
    fn dimension(&self) -> u128 {
        self.dimension
    }

    fn check(&self) -> Result<()> {
        let norm_sq = self.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NonNormalized { value: norm_sq });
        }
        Ok(())
    }
}

impl State for DensityMatrix {
    fn dimension(&self) -> u128 {
        self.dimension
    }

    fn check(&self) -> Result<()> {
        let trace = self.trace();
        if (trace - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NonNormalized { value: trace });
        }
        Ok(())
    }
}

/// Check that a state and an observable live in the same space and that the
/// state's construction invariants hold.
pub fn validate_pair<S: State>(state: &S, obs: &Observable) -> Result<()> {
    state.check()?;
    if state.dimension() != obs.dimension() {
        return Err(Error::DimensionMismatch {
            state: state.dimension(),
            observable: obs.dimension(),
        });
    }
    Ok(())
}

/// Aggregated amplitude magnitudes per distinct eigenvalue class:
/// `w_a = Σ_{i: a_i = a} |c_i|`, ascending by eigenvalue.
#[derive(Debug, Clone)]
pub struct SpectralWeights {
    classes: Vec<(f64, f64)>,
}

impl SpectralWeights {
    /// (eigenvalue, weight) pairs, ascending by eigenvalue.
    pub fn classes(&self) -> &[(f64, f64)] {
        &self.classes
    }

    pub fn total_weight(&self) -> f64 {
        self.classes.iter().map(|(_, w)| w).sum()
    }

    /// Class weights rescaled to unit total.
    pub fn normalized(&self) -> Vec<(f64, f64)> {
        let total = self.total_weight();
        self.classes.iter().map(|&(a, w)| (a, w / total)).collect()
    }
}

/// Group a pure state's amplitude magnitudes by the eigenvalue class of their
/// basis index. Eigenvalues equal within the class tolerance merge; the class
/// representative is the weight-averaged eigenvalue.
pub fn group_by_eigenvalue(psi: &PureState, obs: &Observable) -> Result<SpectralWeights> {
    validate_pair(psi, obs)?;
    let mut pairs: Vec<(f64, f64)> = psi
        .amplitudes()
        .iter()
        .map(|&(i, c)| (obs.value(i), c.norm()))
        .collect();
    pairs.sort_by(|x, y| f64::total_cmp(&x.0, &y.0));

    // Classes whose members are all the same float keep that value exactly;
    // only genuinely spread classes take the weighted mean.
    let mut classes: Vec<(f64, f64)> = Vec::new();
    let mut anchor = f64::NAN;
    let mut spread = false;
    let mut value_sum = 0.0;
    let mut weight_sum = 0.0;
    let push = |anchor: f64, spread: bool, value_sum: f64, weight_sum: f64| {
        let representative = if spread { value_sum / weight_sum } else { anchor };
        (representative, weight_sum)
    };
    for (a, w) in pairs {
        if weight_sum > 0.0 && same_class(anchor, a) {
            spread = spread || a != anchor;
            value_sum += a * w;
            weight_sum += w;
        } else {
            if weight_sum > 0.0 {
                classes.push(push(anchor, spread, value_sum, weight_sum));
            }
            anchor = a;
            spread = false;
            value_sum = a * w;
            weight_sum = w;
        }
    }
    if weight_sum > 0.0 {
        classes.push(push(anchor, spread, value_sum, weight_sum));
    }
    Ok(SpectralWeights { classes })
}
