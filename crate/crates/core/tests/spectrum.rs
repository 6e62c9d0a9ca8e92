use nhqubit::spectrum::{classify_phase, phase_at, SpectrumResult, DEFAULT_PHASE_EPSILON};
use nhqubit::{
    basis_state, build_total_h, evolve_pure, expand_initial_state, normalize, sweep_phase_diagram, Complex64 as C64,
    Linspace, Method, StateVector, SystemParams, TimeGrid,
};

fn ff() -> StateVector {
    StateVector::new(basis_state("ff").unwrap())
}

#[test]
fn eigen_expansion_matches_direct_propagation() {
    for g in [0.5, 1.5, 2.5] {
        let p = SystemParams::reference(g);
        let grid = TimeGrid::default();
        let direct = evolve_pure(&build_total_h(&p).unwrap(), &ff(), &grid, Method::Exact).unwrap();
        let e = expand_initial_state(&p, &ff()).unwrap();
        assert!(e.condition < 1e4);
        for (psi, reference) in e.evolve(&grid).iter().zip(direct.density_matrices()) {
            let rho = normalize(psi).unwrap().to_density();
            assert!(rho.entries().max_abs_diff(reference.entries()) < 1e-6, "γ={g} t={}", psi.time);
        }
    }
}

#[test]
fn expansion_reconstructs_ground_state_below_the_ep() {
    let e = expand_initial_state(&SystemParams::reference(0.5), &ff()).unwrap();
    for (a, b) in e.reconstruct().iter().zip(&ff().amplitudes) {
        assert!((a - b).norm() < 1e-8);
    }
}

#[test]
fn expansion_degrades_toward_and_refuses_the_exceptional_point() {
    let template = SystemParams::reference(0.0);
    let ep = nhqubit::find_ep(&template, 0.1, 3.0).unwrap();
    let far = expand_initial_state(&template.with_gamma(0.5), &ff()).unwrap().condition;
    let near = expand_initial_state(&template.with_gamma(ep.gamma), &ff()).unwrap().condition;
    assert!(near > 100.0 * far, "{near} vs {far}");

    // exactly defective: a Jordan block has a single eigenvector
    let z = C64::new(0.0, 0.0);
    let mut m = nhqubit::ComplexMat::from_diag(&[C64::new(1.0, -0.5), C64::new(1.0, -0.5), C64::new(2.0, 0.0), z]);
    m = &m + &nhqubit::ComplexMat::from_fn(4, |i, j| if (i, j) == (0, 1) { C64::new(1.0, 0.0) } else { z });
    let err = nhqubit::SpectralExpansion::from_hamiltonian(template, &m, &ff()).unwrap_err();
    assert!(matches!(err, nhqubit::Error::NearExceptionalPoint { .. }), "{err:?}");
}

#[test]
fn boundary_samples_separate_the_phases() {
    let d = sweep_phase_diagram(
        &SystemParams::reference(0.0),
        Linspace::new(0.5, 3.0, 6).unwrap(),
        Linspace::new(0.1, 5.0, 25).unwrap(),
    )
    .unwrap();
    assert_eq!(d.labels.len(), 6 * 25);
    assert!(d.labels.iter().all(Option::is_some));
    assert!(d.ep_boundary.len() >= 5);
    let mut last = 0.0;
    for &(w, g) in &d.ep_boundary {
        let t = SystemParams::reference(0.0).with_omega(w);
        let below = phase_at(&t, g - 1e-3, DEFAULT_PHASE_EPSILON).unwrap().phase;
        let above = phase_at(&t, g + 1e-3, DEFAULT_PHASE_EPSILON).unwrap().phase;
        assert_ne!(below, above, "Ω={w}, γ_EP={g}");
        assert!(g > last);
        last = g;
    }
}

#[test]
fn real_energy_offset_keeps_labels() {
    for g in [0.0, 0.5, 0.9, 1.1, 1.5, 3.0] {
        let p = SystemParams::reference(g);
        let h = build_total_h(&p).unwrap();
        let a = SpectrumResult::from_hamiltonian(p, &h).unwrap();
        let b = SpectrumResult::from_hamiltonian(p, &h.shift_diag(C64::new(7.5, 0.0))).unwrap();
        assert_eq!(classify_phase(&a, DEFAULT_PHASE_EPSILON).phase, classify_phase(&b, DEFAULT_PHASE_EPSILON).phase);
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((y.re - x.re - 7.5).abs() < 1e-9 && (y.im - x.im).abs() < 1e-9);
        }
    }
}

#[test]
fn steady_state_matches_trajectory_plateau() {
    let p = SystemParams::reference(1.5);
    let tr = evolve_pure(&build_total_h(&p).unwrap(), &ff(), &TimeGrid::default(), Method::Exact).unwrap();
    let plateau = nhqubit::dynamics::tail_mean(&tr.concurrence, 0.25);
    let steady = nhqubit::steady_state_concurrence(&p, &ff()).unwrap().value;
    assert!((plateau - steady).abs() < 0.02, "{plateau} vs {steady}");
}
