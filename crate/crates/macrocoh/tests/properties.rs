//! Property tests over randomly generated states and spectra.

use proptest::prelude::*;

use macrocoh::measure::{bin_observable, distance, effective_size, measure_m_pure, BinSpec};
use macrocoh::oracle::dense_measure_pure;
use macrocoh::types::{group_by_eigenvalue, Observable, PureState};
use macrocoh::Complex64;

fn spectrum_strategy(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim)
}

fn amplitude_strategy(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
}

fn build_state(dim: usize, raw: &[(f64, f64)]) -> Option<PureState> {
    let entries: Vec<(u128, Complex64)> = raw
        .iter()
        .enumerate()
        .map(|(i, &(re, im))| (i as u128, Complex64::new(re, im)))
        .collect();
    PureState::normalized(dim as u128, entries).ok()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]

    #[test]
    fn distance_is_a_symmetric_pseudometric(
        eigenvalues in spectrum_strategy(6),
        i in 0u128..6,
        j in 0u128..6,
    ) {
        let obs = Observable::new("a", eigenvalues).unwrap();
        let dij = distance(&obs, i, j).unwrap();
        let dji = distance(&obs, j, i).unwrap();
        prop_assert_eq!(dij, dji);
        prop_assert!(dij >= 0.0);
        if i == j {
            prop_assert_eq!(dij, 0.0);
        }
    }

    #[test]
    fn grouping_is_permutation_invariant(
        eigenvalues in spectrum_strategy(7),
        raw in amplitude_strategy(7),
        permutation_seed in 0u64..1000,
    ) {
        let dim = eigenvalues.len();
        let Some(psi) = build_state(dim, &raw) else { return Ok(()); };
        let obs = Observable::new("a", eigenvalues.clone()).unwrap();

        // Fisher-Yates over the basis indices, simultaneously permuting the
        // spectrum and the amplitudes.
        let mut order: Vec<usize> = (0..dim).collect();
        let mut state = permutation_seed.wrapping_mul(2862933555777941757).wrapping_add(3037);
        for k in (1..dim).rev() {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037);
            order.swap(k, (state % (k as u64 + 1)) as usize);
        }
        let permuted_spectrum: Vec<f64> = (0..dim).map(|k| eigenvalues[order[k]]).collect();
        let permuted_entries: Vec<(u128, Complex64)> = (0..dim)
            .map(|k| (k as u128, psi.amplitude(order[k] as u128)))
            .collect();
        let permuted_psi = PureState::new(dim as u128, permuted_entries).unwrap();
        let permuted_obs = Observable::new("a", permuted_spectrum).unwrap();

        let base = group_by_eigenvalue(&psi, &obs).unwrap();
        let moved = group_by_eigenvalue(&permuted_psi, &permuted_obs).unwrap();
        prop_assert_eq!(base.classes().len(), moved.classes().len());
        for (&(a0, w0), &(a1, w1)) in base.classes().iter().zip(moved.classes()) {
            prop_assert!((a0 - a1).abs() < 1e-12);
            prop_assert!((w0 - w1).abs() < 1e-12);
        }
    }

    #[test]
    fn grouped_path_matches_dense_oracle(
        eigenvalues in spectrum_strategy(8),
        raw in amplitude_strategy(8),
    ) {
        let Some(psi) = build_state(eigenvalues.len(), &raw) else { return Ok(()); };
        let obs = Observable::new("a", eigenvalues).unwrap();
        let grouped = measure_m_pure(&psi, &obs).unwrap();
        let reference = dense_measure_pure(&psi, &obs).unwrap();
        prop_assert!((grouped.m - reference).abs() < 1e-10);
        prop_assert!((grouped.m - grouped.distribution.mean()).abs() < 1e-10);
        let total: f64 = grouped.distribution.points().iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn binning_keeps_values_within_half_a_bin(
        eigenvalues in spectrum_strategy(5),
        width in 0.01f64..4.0,
        origin in -2.0f64..2.0,
    ) {
        let obs = Observable::new("a", eigenvalues.clone()).unwrap();
        let binned = bin_observable(&obs, &BinSpec::new(width, origin).unwrap());
        for (i, &a) in eigenvalues.iter().enumerate() {
            let c = binned.eigenvalue(i as u128).unwrap();
            prop_assert!((c - a).abs() <= width * 0.5000001, "|{c} - {a}| > {width}/2");
        }
    }

    #[test]
    fn effective_size_is_minimal(m in 0.0f64..40.0, unit in 0.05f64..3.0) {
        let n = effective_size(m, unit).unwrap();
        // n covers m (up to the documented 1e-9 slack)...
        prop_assert!(n as f64 * unit >= m - 1e-9 * unit);
        // ...and n-1 does not
        if n > 0 {
            prop_assert!((n - 1) as f64 * unit < m);
        }
    }
}
