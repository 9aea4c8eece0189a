//! Constructors for the spin and photonic states used throughout the guide
//! and the regression suite: GHZ, single-excitation, uniform, W, generalized
//! GHZ, NOON, coherent, cat (SCS), and thermal states, plus their natural
//! observables.
//!
//! Spin registers use the convention that basis index `b` is the bit pattern
//! of the spins with the **first spin as the most significant bit**, so
//! `|10…0⟩` is index `2^(n-1)`. Two-mode Fock states at cutoff `c` use the
//! flat index `n1 · (c + 1) + n2`.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::types::{BasisLabel, DensityMatrix, Observable, PureState};
use crate::{Error, Result};

/// Spin registers are capped so that basis indices fit in `u128`.
pub const MAX_SPINS: u32 = 127;

/// Per-spin eigenvalues assigned to `|0⟩` (up) and `|1⟩` (down).
///
/// The default is ±1/2, under which one spin flip moves the total
/// magnetization by one unit and a GHZ state measures exactly `N/2`. Using
/// ±1 instead scales every measure and distance by 2 (scale covariance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinBasisConvention {
    pub up: f64,
    pub down: f64,
}

impl SpinBasisConvention {
    pub fn new(up: f64, down: f64) -> Result<Self> {
        if !up.is_finite() || !down.is_finite() || up == down {
            return Err(Error::InvalidParameter(
                "per-spin eigenvalues must be finite and distinct".into(),
            ));
        }
        Ok(Self { up, down })
    }
}

impl Default for SpinBasisConvention {
    fn default() -> Self {
        Self {
            up: 0.5,
            down: -0.5,
        }
    }
}

/// Total z-magnetization of `n` spins: the eigenvalue of bit pattern `b` is
/// the sum of the per-spin values. Dimension `2^n`; the spectrum is stored in
/// closed form, never materialized.
pub fn magnetization_z(n: u32, convention: SpinBasisConvention) -> Result<Observable> {
    Observable::spin_sum("magnetization_z", n, convention.up, convention.down)
}

fn assert_spin_count(n: u32) {
    assert!(
        (1..=MAX_SPINS).contains(&n),
        "spin count must be in 1..={MAX_SPINS}, got {n}"
    );
}

/// The GHZ state `(|0⟩^⊗n + |1⟩^⊗n)/√2`.
pub fn ghz(n: u32) -> PureState {
    assert_spin_count(n);
    let dim = 1u128 << n;
    let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(dim, vec![(0, amp), (dim - 1, amp)]).expect("GHZ amplitudes are normalized")
}

/// One excited superposition: `((|0⟩ + |1⟩)/√2) ⊗ |0⟩^⊗(n−1)`.
pub fn single_excitation(n: u32) -> PureState {
    assert_spin_count(n);
    let dim = 1u128 << n;
    let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(dim, vec![(0, amp), (1u128 << (n - 1), amp)])
        .expect("amplitudes are normalized")
}

/// How many spins the explicit uniform-state constructor supports; larger
/// registers are served exactly by [`crate::analytic`].
pub const MAX_UNIFORM_SPINS: u32 = 12;

/// The uniform state `((|0⟩ + |1⟩)/√2)^⊗n`: every bit pattern with amplitude
/// `2^(−n/2)`.
pub fn uniform(n: u32) -> Result<PureState> {
    assert_spin_count(n);
    if n > MAX_UNIFORM_SPINS {
        return Err(Error::TooLarge {
            what: "uniform-state spin count",
            value: n as u128,
            limit: MAX_UNIFORM_SPINS as u128,
        });
    }
    let dim = 1u128 << n;
    let amp = Complex64::new((1.0 / 2f64.powi(n as i32)).sqrt(), 0.0);
    let entries = (0..dim).map(|b| (b, amp)).collect();
    PureState::new(dim, entries)
}

/// The W state: the equal superposition of all `n` single-excitation bit
/// patterns, with amplitude `1/√n` each.
pub fn w_state(n: u32) -> PureState {
    assert_spin_count(n);
    let dim = 1u128 << n;
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let entries = (0..n).map(|k| (1u128 << k, amp)).collect();
    PureState::new(dim, entries).expect("amplitudes are normalized")
}

/// Largest register for the explicit generalized-GHZ expansion.
pub const MAX_GENERALIZED_GHZ_SPINS: u32 = 20;

/// The generalized GHZ state `|0⟩^⊗n + (cos ε |0⟩ + sin ε |1⟩)^⊗n`, expanded
/// over all bit patterns and normalized numerically. `ε = 0` degenerates to
/// `|0…0⟩`; `ε = π/2` recovers the GHZ state.
pub fn generalized_ghz(n: u32, eps: f64) -> Result<PureState> {
    assert_spin_count(n);
    if n > MAX_GENERALIZED_GHZ_SPINS {
        return Err(Error::TooLarge {
            what: "generalized-GHZ spin count",
            value: n as u128,
            limit: MAX_GENERALIZED_GHZ_SPINS as u128,
        });
    }
    if !eps.is_finite() {
        return Err(Error::InvalidParameter("ε must be finite".into()));
    }
    let dim = 1u128 << n;
    let (sin, cos) = eps.sin_cos();
    // branch amplitude by number of flipped spins
    let mut cos_pow = vec![1.0; n as usize + 1];
    let mut sin_pow = vec![1.0; n as usize + 1];
    for k in 1..=n as usize {
        cos_pow[k] = cos_pow[k - 1] * cos;
        sin_pow[k] = sin_pow[k - 1] * sin;
    }
    let entries: Vec<(u128, Complex64)> = (0..dim)
        .map(|b| {
            let ones = b.count_ones() as usize;
            let mut amp = cos_pow[n as usize - ones] * sin_pow[ones];
            if b == 0 {
                amp += 1.0;
            }
            (b, Complex64::new(amp, 0.0))
        })
        .collect();
    PureState::normalized(dim, entries)
}

fn check_two_mode_cutoff(cutoff: usize) -> Result<()> {
    if cutoff > 1023 {
        return Err(Error::TooLarge {
            what: "two-mode Fock cutoff",
            value: cutoff as u128,
            limit: 1023,
        });
    }
    Ok(())
}

/// Flat basis index of the two-mode Fock state `|n1, n2⟩` at the given
/// cutoff.
pub fn two_mode_index(n1: usize, n2: usize, cutoff: usize) -> u128 {
    (n1 * (cutoff + 1) + n2) as u128
}

/// The NOON state `(|n⟩|0⟩ + |0⟩|n⟩)/√2` on a two-mode Fock basis truncated
/// at `cutoff` photons per mode.
pub fn noon(n: usize, cutoff: usize) -> Result<PureState> {
    check_two_mode_cutoff(cutoff)?;
    if n > cutoff {
        return Err(Error::CutoffTooSmall {
            cutoff,
            reason: format!("NOON state needs {n} photons per mode"),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "NOON state needs at least one photon".into(),
        ));
    }
    let dim = ((cutoff + 1) * (cutoff + 1)) as u128;
    let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut entries = vec![
        (two_mode_index(0, n, cutoff), amp),
        (two_mode_index(n, 0, cutoff), amp),
    ];
    entries.sort_by_key(|(i, _)| *i);
    PureState::new(dim, entries)
}

/// Photon number of the first mode on the two-mode basis.
pub fn mode_photon_number(cutoff: usize) -> Result<Observable> {
    check_two_mode_cutoff(cutoff)?;
    let per_mode = cutoff + 1;
    let eigenvalues = (0..per_mode * per_mode)
        .map(|i| (i / per_mode) as f64)
        .collect();
    Observable::new("mode_photon_number", eigenvalues)
}

/// Total photon number on the two-mode basis.
pub fn total_photon_number(cutoff: usize) -> Result<Observable> {
    check_two_mode_cutoff(cutoff)?;
    let per_mode = cutoff + 1;
    let eigenvalues = (0..per_mode * per_mode)
        .map(|i| (i / per_mode + i % per_mode) as f64)
        .collect();
    Observable::new("total_photon_number", eigenvalues)
}

/// Single-mode photon number `0, 1, …, cutoff`, with Fock-level tags.
pub fn photon_number(cutoff: usize) -> Result<Observable> {
    if cutoff > (1 << 20) {
        return Err(Error::TooLarge {
            what: "Fock cutoff",
            value: cutoff as u128,
            limit: 1 << 20,
        });
    }
    let eigenvalues = (0..=cutoff).map(|n| n as f64).collect();
    let labels = (0..=cutoff)
        .map(|n| BasisLabel::tagged(n as u128, format!("n={n}")))
        .collect();
    Observable::new("photon_number", eigenvalues)?.with_labels(labels)
}

/// Cutoff rule for truncating coherent states: `max(20, ⌈|α|² + 10|α|⌉)`
/// leaves a Poisson tail below 1e-12 for `|α| ≤ 6`, well under the 1e-10
/// truncation budget even after the cat-state renormalization.
pub fn coherent_cutoff(alpha: Complex64) -> usize {
    let a = alpha.norm();
    20usize.max((a * a + 10.0 * a).ceil() as usize)
}

/// Unnormalized coherent amplitudes `e^(−|α|²/2) αⁿ/√n!` for `n ≤ cutoff`.
fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 0..cutoff {
        c = c * alpha / ((n + 1) as f64).sqrt();
        amps.push(c);
    }
    amps
}

fn check_tail(kept_norm_sqr: f64, cutoff: usize) -> Result<()> {
    let tail = 1.0 - kept_norm_sqr;
    if tail >= 1e-10 {
        return Err(Error::CutoffTooSmall {
            cutoff,
            reason: format!("truncated tail norm {tail:.3e} ≥ 1e-10"),
        });
    }
    Ok(())
}

/// The coherent state `|α⟩` truncated at `cutoff` photons and renormalized.
/// Fails if the truncated tail carries 1e-10 or more of the norm.
pub fn coherent(alpha: Complex64, cutoff: usize) -> Result<PureState> {
    let amps = coherent_amplitudes(alpha, cutoff);
    let norm_sqr: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    check_tail(norm_sqr, cutoff)?;
    let entries = amps
        .into_iter()
        .enumerate()
        .map(|(n, c)| (n as u128, c))
        .collect();
    PureState::normalized((cutoff + 1) as u128, entries)
}

/// The even cat state `(|α⟩ + |−α⟩)/z` with the exact normalization
/// `z = √(2 + 2 Re⟨α|−α⟩)`, truncated at `cutoff` photons.
pub fn scs(alpha: Complex64, cutoff: usize) -> Result<PureState> {
    let plus = coherent_amplitudes(alpha, cutoff);
    let minus = coherent_amplitudes(-alpha, cutoff);
    let overlap = (-2.0 * alpha.norm_sqr()).exp(); // ⟨α|−α⟩ is real
    let z = (2.0 + 2.0 * overlap).sqrt();
    let amps: Vec<Complex64> = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| (p + m) / z)
        .collect();
    let norm_sqr: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    check_tail(norm_sqr, cutoff)?;
    let entries = amps
        .into_iter()
        .enumerate()
        .map(|(n, c)| (n as u128, c))
        .collect();
    PureState::normalized((cutoff + 1) as u128, entries)
}

/// The two-level idealization of a large-`|α|` cat state: an equal
/// superposition of two packets at quadrature positions `±|α|`. Returns the
/// state together with its two-point observable; the measure is exactly
/// `|α|`.
pub fn scs_idealized(alpha: Complex64) -> Result<(PureState, Observable)> {
    let a = alpha.norm();
    let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let state = PureState::new(2, vec![(0, amp), (1, amp)])?;
    let obs = Observable::new("quadrature_packets", vec![a, -a])?;
    Ok((state, obs))
}

/// The idealized incoherent mixture of the two packets: a diagonal 2×2
/// density matrix on the same two-point observable. Its measure is zero.
pub fn mixed_scs_idealized(alpha: Complex64) -> Result<(DensityMatrix, Observable)> {
    let a = alpha.norm();
    let rho = DensityMatrix::diagonal(2, vec![(0, 0.5), (1, 0.5)])?;
    let obs = Observable::new("quadrature_packets", vec![a, -a])?;
    Ok((rho, obs))
}

/// The thermal state `Σ e^(−βn) |n⟩⟨n| / Z` on the truncated Fock basis.
pub fn thermal(beta: f64, cutoff: usize) -> Result<DensityMatrix> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    let probabilities = (0..=cutoff)
        .map(|n| (n as u128, (-beta * n as f64).exp()))
        .collect();
    DensityMatrix::diagonal((cutoff + 1) as u128, probabilities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{distance_distribution, measure_m, measure_m_pure};

    fn mz(n: u32) -> Observable {
        magnetization_z(n, SpinBasisConvention::default()).unwrap()
    }

    #[test]
    fn magnetization_eigenvalues() {
        let obs = mz(1);
        assert_eq!(obs.eigenvalue(0).unwrap(), 0.5);
        assert_eq!(obs.eigenvalue(1).unwrap(), -0.5);
        let obs = mz(3);
        assert_eq!(obs.eigenvalue(0).unwrap(), 1.5);
        assert_eq!(obs.eigenvalue(7).unwrap(), -1.5);
    }

    #[test]
    fn spin_convention_must_be_distinct() {
        assert!(SpinBasisConvention::new(0.5, 0.5).is_err());
        let doubled = SpinBasisConvention::new(1.0, -1.0).unwrap();
        let obs = magnetization_z(4, doubled).unwrap();
        assert_eq!(obs.eigenvalue(0).unwrap(), 4.0);
    }

    #[test]
    fn ghz_measure_and_distribution() {
        assert_eq!(measure_m_pure(&ghz(10), &mz(10)).unwrap().m, 5.0);
        assert_eq!(measure_m_pure(&ghz(1), &mz(1)).unwrap().m, 0.5);
        let dist =
            distance_distribution(&DensityMatrix::from_pure(&ghz(8)), &mz(8)).unwrap();
        assert_eq!(dist.points(), &[(0.0, 0.5), (8.0, 0.5)]);
    }

    #[test]
    fn ghz_grouped_path_handles_huge_registers() {
        // dimension 2^100; only two amplitudes are ever stored
        let report = measure_m_pure(&ghz(100), &mz(100)).unwrap();
        assert_eq!(report.m, 50.0);
        assert_eq!(report.n_eff, 100);
    }

    #[test]
    fn single_excitation_examples() {
        for n in [1u32, 3, 10, 25] {
            let report = measure_m_pure(&single_excitation(n), &mz(n)).unwrap();
            assert_eq!(report.m, 0.5);
            assert_eq!(report.n_eff, 1);
        }
        assert_eq!(
            single_excitation(1).amplitudes(),
            ghz(1).amplitudes(),
            "for one spin the definitions coincide"
        );
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(measure_m_pure(&uniform(1).unwrap(), &mz(1)).unwrap().m, 0.5);
        let report = measure_m_pure(&uniform(2).unwrap(), &mz(2)).unwrap();
        assert!((report.m - 0.75).abs() < 1e-14);
        assert!(matches!(uniform(13), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn w_state_examples() {
        assert_eq!(measure_m_pure(&w_state(5), &mz(5)).unwrap().m, 0.0);
        let w1 = w_state(1);
        assert_eq!(w1.amplitudes().len(), 1);
        assert_eq!(w1.amplitudes()[0].0, 1);
        let dist = distance_distribution(&DensityMatrix::from_pure(&w_state(6)), &mz(6)).unwrap();
        assert_eq!(dist.points(), &[(0.0, 1.0)]);
    }

    #[test]
    fn generalized_ghz_limits() {
        // ε = 0 collapses both branches onto |0…0⟩
        let psi = generalized_ghz(6, 0.0).unwrap();
        assert_eq!(psi.support_len(), 1);
        assert_eq!(measure_m_pure(&psi, &mz(6)).unwrap().m, 0.0);

        // ε = π/2 reproduces the GHZ state
        let psi = generalized_ghz(10, std::f64::consts::FRAC_PI_2).unwrap();
        let reference = ghz(10);
        assert_eq!(psi.support_len(), 2);
        for (&(i, a), &(j, b)) in psi.amplitudes().iter().zip(reference.amplitudes()) {
            assert_eq!(i, j);
            assert!((a - b).norm() < 1e-12);
        }
        assert_eq!(measure_m_pure(&psi, &mz(10)).unwrap().m, 5.0);

        assert!(matches!(
            generalized_ghz(21, 0.1),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn generalized_ghz_interpolates() {
        let psi = generalized_ghz(10, 0.3).unwrap();
        let m = measure_m_pure(&psi, &mz(10)).unwrap().m;
        assert!(m > 0.0 && m < 5.0);
    }

    #[test]
    fn noon_examples() {
        let report = measure_m_pure(&noon(4, 4).unwrap(), &mode_photon_number(4).unwrap()).unwrap();
        assert_eq!(report.m, 2.0);

        let report =
            measure_m_pure(&noon(4, 4).unwrap(), &total_photon_number(4).unwrap()).unwrap();
        assert_eq!(report.m, 0.0);

        let report = measure_m_pure(&noon(1, 1).unwrap(), &mode_photon_number(1).unwrap()).unwrap();
        assert_eq!(report.m, 0.5);

        assert!(matches!(
            noon(5, 4),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn coherent_state_sanity() {
        // α = 0 is the vacuum
        let vac = coherent(Complex64::new(0.0, 0.0), 20).unwrap();
        assert_eq!(vac.support_len(), 1);
        assert_eq!(vac.amplitude(0).re, 1.0);

        // mean photon number ⟨n⟩ = |α|²
        for a in [0.7, 2.0, 4.0] {
            let alpha = Complex64::new(a, 0.0);
            let cutoff = coherent_cutoff(alpha);
            let psi = coherent(alpha, cutoff).unwrap();
            let mean_n: f64 = psi
                .amplitudes()
                .iter()
                .map(|(n, c)| *n as f64 * c.norm_sqr())
                .sum();
            assert!(
                (mean_n - a * a).abs() < 1e-8,
                "⟨n⟩ = {mean_n} for |α|² = {}",
                a * a
            );
        }

        // too small a cutoff is rejected
        assert!(matches!(
            coherent(Complex64::new(4.0, 0.0), 16),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn scs_is_even_and_normalized() {
        let alpha = Complex64::new(3.0, 0.0);
        let cat = scs(alpha, coherent_cutoff(alpha)).unwrap();
        assert!((cat.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(cat.amplitudes().iter().all(|(n, _)| n % 2 == 0));
    }

    #[test]
    fn idealized_cat_measures() {
        let (cat, obs) = scs_idealized(Complex64::new(3.0, 0.0)).unwrap();
        assert_eq!(measure_m_pure(&cat, &obs).unwrap().m, 3.0);

        let (mixture, obs) = mixed_scs_idealized(Complex64::new(3.0, 0.0)).unwrap();
        assert_eq!(measure_m(&mixture, &obs).unwrap().m, 0.0);
    }

    #[test]
    fn thermal_state_has_zero_measure() {
        for beta in [0.1, 1.0, 3.0] {
            let rho = thermal(beta, 60).unwrap();
            let obs = photon_number(60).unwrap();
            assert_eq!(measure_m(&rho, &obs).unwrap().m, 0.0);
        }
        assert!(thermal(0.0, 10).is_err());
        assert!(thermal(-1.0, 10).is_err());
    }

    #[test]
    fn photon_number_labels() {
        let obs = photon_number(3).unwrap();
        assert_eq!(obs.label(3).unwrap().tag.as_deref(), Some("n=3"));
        assert_eq!(obs.label(2).unwrap().tag.as_deref(), Some("n=2"));
    }
}
