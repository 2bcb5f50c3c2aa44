//! Property tests for the free-fermion chain and the fractional-noise layer.

use nalgebra::{DMatrix, SymmetricEigen};
use paragrade::fracnoise::{
    arfima_coeffs, fgn_autocovariance, fractional_laplacian, quantum_potential, QuantumUnits,
};
use paragrade::linalg::{c, CMat};
use paragrade::spin_chain::{
    correlation_spectrum_ok, correlations_from_hopping, cyclic_spectrum, diagonalize_bilinear, entanglement_entropy,
    exact_ground_state, ground_state_correlations, Boundary, BilinearHamiltonian, XYChain,
};
use proptest::prelude::*;

fn sym_matrix(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
        let m = DMatrix::from_vec(n, n, v);
        (&m + m.transpose()) * 0.5
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let m = CMat::from_iterator(n, n, v.into_iter().map(|(a, b)| c(a, b)));
        (&m + m.adjoint()) * c(0.5, 0.0)
    })
}

/// Fourth-order central second derivative of `f` at `x`.
fn fd2(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// Largest gap between the spectral `H = 1` potential and `f'' / 2f` on `|x| < 4`.
fn potential_gap(amp: &dyn Fn(f64) -> f64) -> f64 {
    let (n, half) = (2048usize, 20.0);
    let dx = 2.0 * half / n as f64;
    let xs: Vec<f64> = (0..n).map(|i| -half + i as f64 * dx).collect();
    let rho: Vec<f64> = xs.iter().map(|&x| amp(x).powi(2)).collect();
    let q = quantum_potential(&rho, 1.0, dx, QuantumUnits::default()).unwrap();
    xs.iter()
        .zip(&q)
        .filter(|(x, _)| x.abs() < 4.0)
        .map(|(&x, &qv)| (qv - fd2(amp, x, 1e-3) / (2.0 * amp(x))).abs())
        .fold(0.0, f64::max)
}

#[test]
fn entropies_match_exact_diagonalization() {
    let mut compared = 0;
    for n in [4usize, 6, 8, 10] {
        for boundary in [Boundary::Open, Boundary::Periodic] {
            let chain = XYChain::new(n, 1.0, boundary).unwrap();
            let (corr, ed) = match (ground_state_correlations(&chain), exact_ground_state(&chain)) {
                (Ok(a), Ok(b)) => (a, b),
                // a degenerate Fermi level leaves no unique state to compare
                (Err(_), _) | (_, Err(_)) => continue,
            };
            for l in 1..n {
                let s = entanglement_entropy(&corr, l).unwrap();
                assert!((s - ed.entropy(l)).abs() < 1e-8, "N={n} {boundary:?} l={l}: {s} vs {}", ed.entropy(l));
            }
            compared += 1;
        }
    }
    assert!(compared >= 6, "only {compared} chains compared");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn correlation_eigenvalues_lie_in_unit_interval(t in sym_matrix(8)) {
        if let Ok(corr) = correlations_from_hopping(&t) {
            prop_assert!(correlation_spectrum_ok(&corr, 1e-10));
            prop_assert!((corr.trace() - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cyclic_spectrum_matches_dense_solver(omega in -5.0f64..5.0, g in -3.0f64..3.0) {
        let m = DMatrix::from_fn(4, 4, |i, j| {
            let ring = (i + 1) % 4 == j || (j + 1) % 4 == i;
            f64::from(u8::from(i == j)) * omega + f64::from(u8::from(ring)) * g
        });
        let mut want: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().cloned().collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in cyclic_spectrum(omega, g).iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn bilinear_diagonalization_conserves_trace(h in hermitian(6)) {
        let modes = diagonalize_bilinear(&BilinearHamiltonian::new(h.clone())).unwrap();
        prop_assert!((modes.energies.iter().sum::<f64>() - h.trace().re).abs() < 1e-10);
        let back = &modes.transform * CMat::from_diagonal(&nalgebra::DVector::from_iterator(6, modes.energies.iter().map(|&e| c(e, 0.0)))) * modes.transform.adjoint();
        prop_assert!((back - h).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn fgn_autocovariance_even_and_white_at_half(k in -200i64..200, h in 0.05f64..0.95) {
        prop_assert_eq!(fgn_autocovariance(k, h), fgn_autocovariance(-k, h));
        let white = fgn_autocovariance(k, 0.5);
        let want = f64::from(u8::from(k == 0));
        prop_assert!((white - want).abs() < 1e-12);
    }

    #[test]
    fn fractional_laplacian_linear_and_shift_equivariant(
        f in prop::collection::vec(-1.0f64..1.0, 64),
        g in prop::collection::vec(-1.0f64..1.0, 64),
        (a, b) in (-3.0f64..3.0, -3.0f64..3.0),
        h in 0.1f64..1.0,
        shift in 0usize..64,
    ) {
        let dx = 0.1;
        let mix: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let (lf, lg, lm) = (
            fractional_laplacian(&f, h, dx).unwrap(),
            fractional_laplacian(&g, h, dx).unwrap(),
            fractional_laplacian(&mix, h, dx).unwrap(),
        );
        let scale = lf.iter().chain(&lg).fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..64 {
            prop_assert!((lm[i] - (a * lf[i] + b * lg[i])).abs() < 1e-11 * scale * (a.abs() + b.abs() + 1.0));
        }
        let mut rolled = f.clone();
        rolled.rotate_right(shift);
        let mut want = lf.clone();
        want.rotate_right(shift);
        for (x, y) in fractional_laplacian(&rolled, h, dx).unwrap().iter().zip(&want) {
            prop_assert!((x - y).abs() < 1e-11 * scale);
        }
    }

    #[test]
    fn arfima_lag_correlation_is_its_own_and_not_fgn(h in 0.55f64..0.95) {
        let coeffs = arfima_coeffs(h, 1024).unwrap();
        // oracle: the same sum written with explicit indices
        let direct: f64 = (0..coeffs.psi.len() - 1).map(|j| coeffs.psi[j] * coeffs.psi[j + 1]).sum();
        prop_assert!((coeffs.autocovariance(1) - direct).abs() < 1e-12);
        let rho_arfima = coeffs.autocovariance(1) / coeffs.autocovariance(0);
        let rho_fgn = fgn_autocovariance(1, h) / fgn_autocovariance(0, h);
        // the truncated moving average under-correlates against fGn at every H > 1/2
        prop_assert!(rho_arfima < rho_fgn - 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn unit_hurst_potential_matches_finite_differences(
        s in 0.7f64..1.5,
        a in 0.8f64..1.6,
        (m1, m2, w) in (-1.5f64..0.0, 0.5f64..1.5, 0.2f64..0.8),
    ) {
        let gauss = move |x: f64| (-x * x / (4.0 * s * s)).exp();
        let sech = move |x: f64| 1.0 / (a * x).cosh();
        let mixture = move |x: f64| {
            (w * (-(x - m1).powi(2) / 2.0).exp() + (1.0 - w) * (-(x - m2).powi(2) / 1.5).exp()).sqrt()
        };
        prop_assert!(potential_gap(&gauss) < 1e-5);
        prop_assert!(potential_gap(&sech) < 1e-5);
        prop_assert!(potential_gap(&mixture) < 1e-5);
    }
}
