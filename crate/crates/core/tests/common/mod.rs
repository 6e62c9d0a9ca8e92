//! Random inputs and independent reference implementations shared by the
//! integration suites.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use nhqubit::linalg::{kron, ComplexMat};
use nhqubit::{Complex64 as C64, DensityMatrix, StateVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gaussian(r: &mut StdRng) -> f64 {
    // Box–Muller
    let u1: f64 = r.gen_range(f64::EPSILON..1.0);
    let u2: f64 = r.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn gaussian_c(r: &mut StdRng) -> C64 {
    C64::new(gaussian(r), gaussian(r))
}

/// Haar-distributed unit vector in ℂ⁴.
pub fn random_state(r: &mut StdRng) -> StateVector {
    let mut a = [C64::new(0.0, 0.0); 4];
    for z in &mut a {
        *z = gaussian_c(r);
    }
    let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::new(a.map(|z| z / n))
}

/// `AA†/Tr(AA†)` with Gaussian `A`.
pub fn random_density(r: &mut StdRng) -> DensityMatrix {
    let a = ComplexMat::from_fn(4, |_, _| gaussian_c(r));
    let m = &a * &a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr), 0.0).unwrap()
}

/// Random SU(2)-ish element from a random unit quaternion.
pub fn random_unitary2(r: &mut StdRng) -> ComplexMat {
    let q: Vec<f64> = (0..4).map(|_| gaussian(r)).collect();
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (C64::new(q[0], q[1]) / n, C64::new(q[2], q[3]) / n);
    let phase = C64::from_polar(1.0, r.gen_range(0.0..std::f64::consts::TAU));
    ComplexMat::from_row_slice(2, &[a * phase, -b.conj() * phase, b * phase, a.conj() * phase]).unwrap()
}

pub fn random_local_unitary(r: &mut StdRng) -> ComplexMat {
    kron(&random_unitary2(r), &random_unitary2(r)).unwrap()
}

fn to_na(m: &ComplexMat) -> DMatrix<C64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

/// Concurrence through a Hermitian eigensolver: the eigenvalues of
/// `ρ ρ̃` coincide with those of `√ρ ρ̃ √ρ`, which is Hermitian PSD.
pub fn oracle_concurrence(rho: &ComplexMat) -> f64 {
    let r = to_na(rho);
    let e = SymmetricEigen::new(r.clone());
    let sqrt_vals = e.eigenvalues.map(|l| l.max(0.0).sqrt());
    let u = &e.eigenvectors;
    let sqrt_rho = u * DMatrix::from_diagonal(&sqrt_vals.map(|x| C64::new(x, 0.0))) * u.adjoint();

    let y = DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
    let yy = y.kronecker(&y);
    let tilde = &yy * r.map(|z| z.conj()) * &yy;
    let m = &sqrt_rho * tilde * &sqrt_rho;
    let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut lam: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

/// `e^{At}` by a truncated Taylor series with scaling and squaring.
pub fn taylor_expm(a: &ComplexMat, t: f64) -> ComplexMat {
    let at = a.scale_real(t);
    let s = (at.norm_one().max(1e-300).log2().ceil() as i32 + 4).max(0);
    let x = at.scale_real(0.5f64.powi(s));
    let n = a.dim();
    let mut sum = ComplexMat::identity(n);
    let mut term = ComplexMat::identity(n);
    for k in 1..=30 {
        term = (&term * &x).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Werner state `p|Φ⁺⟩⟨Φ⁺| + (1−p)I/4` with `Φ⁺ = (|ff⟩+|ee⟩)/√2`.
pub fn werner(p: f64) -> ComplexMat {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let bell = [C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)];
    let proj = ComplexMat::outer(&bell, &bell);
    &proj.scale_real(p) + &ComplexMat::identity(4).scale_real((1.0 - p) / 4.0)
}
