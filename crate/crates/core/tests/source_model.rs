use num_complex::Complex64;
use proptest::prelude::*;

use stellar_qec::qcore::{inner, tensor, ComplexMatrix};
use stellar_qec::source::{
    annihilation, conditioned_state, covariance_matrix, diagonalize_source, fock_expansion, psi, rho_star_family,
    truncated_fock_state, ParamDerivativeFamily, SourceParams,
};

fn central_difference(f: impl Fn(f64) -> ComplexMatrix, x: f64, h: f64) -> ComplexMatrix {
    (&f(x + h) - &f(x - h)).scale_real(0.5 / h)
}

fn check_derivatives(build: impl Fn(&SourceParams) -> ParamDerivativeFamily, g: f64, phi: f64) {
    let h = 1e-6;
    let fam = build(&SourceParams::new(0.02, g, phi).unwrap());
    let by_phi = central_difference(|x| build(&SourceParams::new(0.02, g, x).unwrap()).state.into_matrix(), phi, h);
    let by_gamma = central_difference(|x| build(&SourceParams::new(0.02, x, phi).unwrap()).state.into_matrix(), g, h);
    assert!(fam.d_phi.max_abs_diff(&by_phi) <= 1e-6);
    assert!(fam.d_gamma.max_abs_diff(&by_gamma) <= 1e-6);
    for d in [&fam.d_phi, &fam.d_gamma] {
        assert!(d.hermitian_deviation() <= 1e-12);
        assert!(d.trace().norm() <= 1e-12);
    }
}

#[test]
fn fock_weight_deficit_is_third_order() {
    for k in 1..=50 {
        let eps = 0.001 * k as f64;
        for g in [0.0, 0.5, 1.0] {
            let dec = fock_expansion(&SourceParams::new(eps, g, 0.3).unwrap()).unwrap();
            let deficit = 1.0 - dec.total_weight();
            assert!(deficit >= 0.0 && deficit <= 2.0 * eps.powi(3), "eps {eps}: deficit {deficit}");
        }
    }
}

#[test]
fn cross_moment_matches_covariance() {
    let a = tensor(&annihilation(3), &ComplexMatrix::identity(3));
    let b = tensor(&ComplexMatrix::identity(3), &annihilation(3));
    for eps in [0.001, 0.005, 0.01] {
        for (g, phi) in [(0.4, 0.0), (0.9, 1.3), (1.0, -2.0)] {
            let rho = truncated_fock_state(&SourceParams::new(eps, g, phi).unwrap()).unwrap();
            let moment = rho.trace_product(&a.adjoint().matmul(&b));
            let want = Complex64::from_polar(g * eps / 2.0, -phi);
            assert!((moment - want).norm() <= 5.0 * eps * eps, "{moment} vs {want}");
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    for (g, phi) in [(0.2, 0.1), (0.7, 2.0), (0.95, -1.0)] {
        check_derivatives(|p| conditioned_state(p).unwrap(), g, phi);
        check_derivatives(|p| rho_star_family(p).unwrap(), g, phi);
    }
}

proptest! {
    #[test]
    fn psi_pair_is_orthogonal(phi in -10.0f64..10.0) {
        prop_assert!(inner(&psi(1.0, phi), &psi(-1.0, phi)).norm() <= 1e-14);
    }

    #[test]
    fn source_diagonalization(eps in 0.0f64..2.0, g in 0.0f64..=1.0, phi in -4.0f64..4.0) {
        let params = SourceParams::new(eps, g, phi).unwrap();
        let (s, sigma_diag) = diagonalize_source(&params);
        let rotated = s.matmul(&covariance_matrix(&params)).matmul(&s.transpose());
        prop_assert!(rotated.max_abs_diff(&sigma_diag) <= 1e-12);
    }

    #[test]
    fn sector_weights_are_nonnegative(eps in 0.0f64..0.099, g in 0.0f64..=1.0, phi in -4.0f64..4.0) {
        let dec = fock_expansion(&SourceParams::new(eps, g, phi).unwrap()).unwrap();
        let weights = [dec.p00, dec.one_photon.weight, dec.two_photon.weight];
        prop_assert!(weights.iter().all(|&w| w >= 0.0));
        prop_assert!(dec.total_weight() <= 1.0 + 1e-15);
    }
}
