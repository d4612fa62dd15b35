use cvclone::cloner::{optimal_fidelity, optimal_noise_variance, squeezed_variant};
use cvclone::fock::{
    center_fock_vector, coherent_fock_vector, default_cutoff_for, fidelity_against,
    mixture_density_matrix, quadrature_moments, QuadratureGrid, DEFAULT_TRUNCATION_TOLERANCE,
};
use cvclone::quadrature::{
    CoherentState, ComplexAmplitude, GaussianMixtureState, NoiseCovariance, SqueezedState,
};
use cvclone::verify::{oracle_centers, ORACLE_SCENARIOS};
use cvclone::CopyCount;

const TOL: f64 = DEFAULT_TRUNCATION_TOLERANCE;

fn fidelity(mix: &GaussianMixtureState, cutoff: usize, nodes: usize) -> f64 {
    let grid = QuadratureGrid::new(nodes).unwrap();
    let rho = mixture_density_matrix(mix, cutoff, &grid, TOL).unwrap();
    let psi = center_fock_vector(mix.center, cutoff, TOL).unwrap();
    fidelity_against(&psi, &rho).unwrap()
}

#[test]
fn fidelity_converges_in_nodes_and_cutoff() {
    let alpha = ComplexAmplitude::new(1.0, -0.5);
    for (n, m) in [(1, 2), (2, 3), (3, 5)] {
        let noise = optimal_noise_variance(n, m).unwrap();
        let mix = GaussianMixtureState::new(CoherentState::new(alpha), noise);
        let cutoff = default_cutoff_for(&mix);
        let base = fidelity(&mix, cutoff, 41);
        let refined = fidelity(&mix, (2 * cutoff).min(256), 81);
        assert!(
            (base - refined).abs() < 1e-7,
            "({n},{m}): {base} vs {refined}"
        );
    }
}

#[test]
fn mixtures_are_physical() {
    let grid = QuadratureGrid::default();
    for (n, m) in ORACLE_SCENARIOS {
        let noise = optimal_noise_variance(n, m).unwrap();
        for alpha in oracle_centers() {
            let mix = GaussianMixtureState::new(CoherentState::new(alpha), noise);
            let rho = mixture_density_matrix(&mix, default_cutoff_for(&mix), &grid, TOL).unwrap();
            let ph = rho.physicality();
            assert!(ph.is_physical(TOL), "({n},{m}) at {alpha}: {ph:?}");
        }
    }
}

#[test]
fn moments_match_mixture_covariance() {
    let grid = QuadratureGrid::default();
    let alpha = ComplexAmplitude::new(-0.75, 1.25);
    let noise = NoiseCovariance::new(0.2, 0.7).unwrap();
    let mix = GaussianMixtureState::new(CoherentState::new(alpha), noise);
    let rho = mixture_density_matrix(&mix, default_cutoff_for(&mix), &grid, TOL).unwrap();
    let q = quadrature_moments(&rho);
    assert!((q.mean_x - alpha.x()).abs() < 1e-9, "{q:?}");
    assert!((q.mean_p - alpha.p()).abs() < 1e-9, "{q:?}");
    assert!((q.var_x - 0.7).abs() < 1e-9, "{q:?}");
    assert!((q.var_p - 1.2).abs() < 1e-9, "{q:?}");
}

#[test]
fn squeezed_clone_moments_and_fidelity() {
    let r = 0.4;
    let cloner = squeezed_variant(1, 3, r).unwrap();
    let center = SqueezedState::new(ComplexAmplitude::new(0.5, 0.25), r);
    let mix = GaussianMixtureState::new(center, cloner.noise);
    let cutoff = default_cutoff_for(&mix);
    let grid = QuadratureGrid::default();
    let rho = mixture_density_matrix(&mix, cutoff, &grid, TOL).unwrap();
    let (vx, vp) = mix.total_variances();
    let q = quadrature_moments(&rho);
    assert!((q.var_x - vx).abs() < 1e-6, "{q:?} vs ({vx}, {vp})");
    assert!((q.var_p - vp).abs() < 1e-6, "{q:?} vs ({vx}, {vp})");
    let psi = center_fock_vector(mix.center, cutoff, TOL).unwrap();
    let f = fidelity_against(&psi, &rho).unwrap();
    let expected = optimal_fidelity(1, 3).unwrap().value();
    assert!((f - expected).abs() < 1e-6, "{f} vs {expected}");
}

#[test]
fn unbounded_output_fidelity_for_several_inputs() {
    for n in [1, 2, 4] {
        let noise = optimal_noise_variance(n, CopyCount::Unbounded).unwrap();
        let mix = GaussianMixtureState::new(CoherentState::VACUUM, noise);
        let f = fidelity(&mix, default_cutoff_for(&mix), 41);
        let expected = f64::from(n) / f64::from(n + 1);
        assert!((f - expected).abs() < 1e-9, "N={n}: {f}");
    }
}

#[test]
fn too_small_cutoff_is_reported() {
    let err = coherent_fock_vector(ComplexAmplitude::new(4.0, 0.0), 10, TOL).unwrap_err();
    assert!(matches!(err, cvclone::Error::Truncation { .. }), "{err}");
}
