mod common;

use nalgebra::{DMatrix, SymmetricEigen};
use nhqubit::dynamics::Populations;
use nhqubit::entanglement::concurrence_mixed;
use nhqubit::linalg::{eig, expm, ComplexMat};
use nhqubit::spectrum::steady_state_concurrence_of;
use nhqubit::{
    build_jump_ops, build_total_h, concurrence_pure, evolve_master, evolve_pure, normalize, Complex64 as C64,
    DensityMatrix, Method, StateVector, SystemParams, TimeGrid,
};
use proptest::prelude::*;

fn amplitudes() -> impl Strategy<Value = [C64; 4]> {
    prop::array::uniform4((-1.0f64..1.0, -1.0f64..1.0))
        .prop_filter("non-zero", |a| a.iter().map(|(x, y)| x * x + y * y).sum::<f64>() > 1e-3)
        .prop_map(|a| a.map(|(x, y)| C64::new(x, y)))
}

fn unit_state() -> impl Strategy<Value = StateVector> {
    amplitudes().prop_map(|a| {
        let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        StateVector::new(a.map(|z| z / n))
    })
}

fn matrix(n: usize, scale: f64) -> impl Strategy<Value = ComplexMat> {
    prop::collection::vec((-scale..scale, -scale..scale), n * n)
        .prop_map(move |v| ComplexMat::from_fn(n, |i, j| C64::new(v[i * n + j].0, v[i * n + j].1)))
}

fn params() -> impl Strategy<Value = SystemParams> {
    (0.0f64..3.0, 0.0f64..3.0, 0.0f64..4.0, 0.0f64..4.0, 0.0f64..12.0, -1.0f64..1.0).prop_map(
        |(g1, g2, w1, w2, j, d)| SystemParams {
            delta1: d,
            delta2: -0.5 * d,
            gamma1: g1,
            gamma2: g2,
            omega1: w1,
            omega2: w2,
            j,
            alpha1: 0.0,
            alpha2: 0.0,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_formula_reduces_to_pure(psi in unit_state()) {
        let s = normalize(&psi).unwrap();
        let a = concurrence_pure(&s).value;
        let b = concurrence_mixed(&s.to_density()).unwrap().value;
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn concurrence_agrees_with_hermitian_oracle(seed in any::<u64>()) {
        let rho = common::random_density(&mut common::rng(seed));
        let c = concurrence_mixed(&rho).unwrap().value;
        prop_assert!((c - common::oracle_concurrence(rho.entries())).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn local_unitaries_leave_concurrence_unchanged(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let rho = common::random_density(&mut r);
        let u = common::random_local_unitary(&mut r);
        let rotated = DensityMatrix::new(&(&u * rho.entries()) * &u.adjoint(), 0.0).unwrap();
        let (a, b) = (concurrence_mixed(&rho).unwrap().value, concurrence_mixed(&rotated).unwrap().value);
        prop_assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn werner_family_closed_form(p in 0.0f64..=1.0) {
        let w = common::werner(p);
        let c = concurrence_mixed(&DensityMatrix::new(w.clone(), 0.0).unwrap()).unwrap().value;
        let closed = (0.0f64).max((3.0 * p - 1.0) / 2.0);
        prop_assert!((c - closed).abs() < 1e-9, "p={p}: {c} vs {closed}");
        prop_assert!((c - common::oracle_concurrence(&w)).abs() < 1e-9);
    }

    #[test]
    fn populations_sum_to_one(seed in any::<u64>(), psi in unit_state()) {
        let rho = common::random_density(&mut common::rng(seed));
        prop_assert!((rho.populations().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let s = normalize(&psi).unwrap();
        prop_assert!((s.populations().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn expm_matches_taylor_series(a in matrix(4, 2.0), t in 0.0f64..3.0) {
        let e = expm(&a, t).unwrap();
        let reference = common::taylor_expm(&a, t);
        prop_assert!(e.max_abs_diff(&reference) <= 1e-10 * reference.max_abs().max(1.0));
    }

    #[test]
    fn expm_is_a_semigroup(a in matrix(4, 1.5), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let lhs = expm(&a, s + t).unwrap();
        let rhs = &expm(&a, s).unwrap() * &expm(&a, t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn eig_residuals_are_small(a in matrix(4, 5.0)) {
        let d = eig(&a).unwrap();
        prop_assert!(d.max_residual() <= 1e-9, "{}", d.max_residual());
        let sum: C64 = d.eigenvalues.iter().sum();
        prop_assert!((sum - a.trace()).norm() < 1e-9 * a.norm_fro().max(1.0));
    }

    #[test]
    fn eig_of_hermitian_matches_symmetric_solver(a in matrix(4, 3.0)) {
        let h = (&a + &a.adjoint()).scale_real(0.5);
        let ours = eig(&h).unwrap();
        let mut mine: Vec<f64> = ours.eigenvalues.iter().map(|l| l.re).collect();
        mine.sort_by(f64::total_cmp);
        let na = DMatrix::from_fn(4, 4, |i, j| h[(i, j)]);
        let mut theirs: Vec<f64> = SymmetricEigen::new(na).eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (x, y) in mine.iter().zip(&theirs) {
            prop_assert!((x - y).abs() < 1e-10, "{mine:?} vs {theirs:?}");
        }
    }

    #[test]
    fn eig_shift_invariance(a in matrix(4, 3.0), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let c = C64::new(re, im);
        let base = eig(&a).unwrap();
        let shifted = eig(&a.shift_diag(c)).unwrap();
        for (x, y) in base.eigenvalues.iter().zip(&shifted.eigenvalues) {
            prop_assert!((x + c - y).norm() < 1e-9, "{x} + {c} vs {y}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn norm_never_grows(p in params(), psi in unit_state()) {
        let h = build_total_h(&p).unwrap();
        let tr = evolve_pure(&h, &psi, &TimeGrid::uniform(5.0, 201).unwrap(), Method::Exact).unwrap();
        for w in tr.survival.windows(2) {
            prop_assert!(w[1].sqrt() <= w[0].sqrt() + 1e-8);
        }
    }

    #[test]
    fn rk_agrees_with_propagator(p in params(), psi in unit_state()) {
        let h = build_total_h(&p).unwrap();
        let grid = TimeGrid::uniform(4.0, 81).unwrap();
        let a = evolve_pure(&h, &psi, &grid, Method::Exact).unwrap();
        let b = evolve_pure(&h, &psi, &grid, Method::Rk).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.density_matrices().iter().zip(b.density_matrices()) {
            prop_assert!(x.entries().max_abs_diff(y.entries()) < 1e-7);
        }
    }

    #[test]
    fn master_routes_agree(g in 0.0f64..2.5, alpha in 0.0f64..1.0, w in 0.5f64..3.0) {
        let p = SystemParams::symmetric(g, w, 10.0).with_alpha(alpha);
        let h = build_total_h(&p).unwrap();
        let jumps = build_jump_ops(&p).unwrap();
        let rho0 = normalize(&StateVector::new(nhqubit::basis_state("ff").unwrap())).unwrap().to_density();
        let grid = TimeGrid::uniform(3.0, 31).unwrap();
        let a = evolve_master(&h, &jumps, &rho0, &grid, Method::Exact).unwrap();
        let b = evolve_master(&h, &jumps, &rho0, &grid, Method::Rk).unwrap();
        for (x, y) in a.survival.iter().zip(&b.survival) {
            prop_assert!((x - y).abs() < 1e-7);
        }
        for w in a.survival.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-8);
        }
        for (x, y) in a.density_matrices().iter().zip(b.density_matrices()) {
            prop_assert!(x.entries().max_abs_diff(y.entries()) < 1e-7);
        }
    }

    #[test]
    fn symmetric_qubits_keep_single_excitations_equal(g in 0.0f64..3.0, w in 0.1f64..4.0, j in 0.0f64..12.0) {
        let h = build_total_h(&SystemParams::symmetric(g, w, j)).unwrap();
        let psi = StateVector::new(nhqubit::basis_state("ff").unwrap());
        let tr = evolve_pure(&h, &psi, &TimeGrid::uniform(10.0, 501).unwrap(), Method::Exact).unwrap();
        for p in &tr.populations {
            prop_assert!((p[1] - p[2]).abs() < 1e-8);
        }
    }

    #[test]
    fn steady_state_ignores_real_energy_offset(g in 1.2f64..3.0, shift in -20.0f64..20.0) {
        let p = SystemParams::reference(g);
        let h = build_total_h(&p).unwrap();
        let psi = StateVector::new(nhqubit::basis_state("ff").unwrap());
        let a = steady_state_concurrence_of(p, &h, &psi).unwrap().value;
        let b = steady_state_concurrence_of(p, &h.shift_diag(C64::new(shift, 0.0)), &psi).unwrap().value;
        prop_assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn hermitian_master_evolution_stays_pure() {
    let p = SystemParams::reference(0.0);
    let rho0 = normalize(&StateVector::new(nhqubit::basis_state("ff").unwrap())).unwrap().to_density();
    let tr = evolve_master(&build_total_h(&p).unwrap(), &[], &rho0, &TimeGrid::uniform(5.0, 101).unwrap(), Method::Exact)
        .unwrap();
    for (s, rho) in tr.survival.iter().zip(tr.density_matrices()) {
        assert!((s - 1.0).abs() < 1e-7);
        assert!((rho.purity() - 1.0).abs() < 1e-7);
    }
}
