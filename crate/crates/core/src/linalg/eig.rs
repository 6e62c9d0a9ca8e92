//! Eigendecomposition of small dense complex matrices.
//!
//! Householder reduction to Hessenberg form, then shifted complex QR sweeps
//! (Wilkinson shift, Givens rotations) down to a Schur form `A = Z T Z†`.
//! Eigenvectors come from back-substitution on `T`, refined by inverse
//! iteration on `A` when the residual is above target. Near an exceptional
//! point the matrix is nearly defective and the residual target may not be
//! reachable; the best achieved residual is then reported, not an error.

use std::cmp::Ordering;

use num_complex::Complex64 as C64;

use super::lu::{self, Lu};
use super::matrix::{vec_norm, ComplexMat};
use super::LinalgError;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// QR sweeps allowed per eigenvalue before giving up.
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Residual target relative to `‖A‖_F`.
pub const RESIDUAL_TARGET: f64 = 1e-9;

const INVERSE_ITERATION_STEPS: usize = 3;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Sorted ascending by real part, then imaginary part.
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors; `eigenvectors[k]` pairs with `eigenvalues[k]`.
    /// Phase is fixed so the largest-modulus component is real and positive.
    pub eigenvectors: Vec<Vec<C64>>,
    /// `‖A·v − λ·v‖₂` for each pair.
    pub residuals: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Matrix whose columns are the eigenvectors.
    pub fn eigenvector_matrix(&self) -> ComplexMat {
        ComplexMat::from_fn(self.dim(), |i, j| self.eigenvectors[j][i])
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// `V·diag(λ)·V⁻¹`.
    pub fn reconstruct(&self) -> Result<ComplexMat, LinalgError> {
        let v = self.eigenvector_matrix();
        let vinv = lu::inverse(&v)?;
        let vd = ComplexMat::from_fn(self.dim(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        Ok(&vd * &vinv)
    }
}

/// Full eigendecomposition of a square complex matrix.
pub fn eig(a: &ComplexMat) -> Result<EigenDecomposition, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.dim();
    let anorm = a.norm_fro();
    if anorm == 0.0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![ZERO; n],
            eigenvectors: (0..n).map(|k| unit(n, k)).collect(),
            residuals: vec![0.0; n],
        });
    }

    let (mut t, mut z) = hessenberg(a);
    schur_qr(&mut t, &mut z, anorm)?;

    let tol = RESIDUAL_TARGET * anorm;
    let mut pairs: Vec<(C64, Vec<C64>, f64)> = (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let x = triangular_eigenvector(&t, k, anorm);
            let mut v = z.mul_vec(&x);
            normalize(&mut v);
            let mut res = residual(a, lambda, &v);
            if res > tol {
                let (v2, r2) = inverse_iteration(a, lambda, v.clone(), res, anorm, tol);
                v = v2;
                res = r2;
            }
            fix_phase(&mut v);
            (lambda, v, res)
        })
        .collect();

    pairs.sort_by(|x, y| cmp_complex(&x.0, &y.0));

    let mut out = EigenDecomposition {
        eigenvalues: Vec::with_capacity(n),
        eigenvectors: Vec::with_capacity(n),
        residuals: Vec::with_capacity(n),
    };
    for (l, v, r) in pairs {
        out.eigenvalues.push(l);
        out.eigenvectors.push(v);
        out.residuals.push(r);
    }
    Ok(out)
}

/// Lexicographic (Re, Im) ordering.
pub fn cmp_complex(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn unit(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[k] = C64::new(1.0, 0.0);
    v
}

fn normalize(v: &mut [C64]) {
    let nrm = vec_norm(v);
    if nrm > 0.0 {
        v.iter_mut().for_each(|z| *z /= nrm);
    }
}

fn fix_phase(v: &mut [C64]) {
    let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // first component within rounding of the maximum, so ties resolve by index
    if let Some(p) = v.iter().find(|z| z.norm() >= big * (1.0 - 1e-12)) {
        let phase = p.conj() / p.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

fn residual(a: &ComplexMat, lambda: C64, v: &[C64]) -> f64 {
    let av = a.mul_vec(v);
    av.iter().zip(v).map(|(x, y)| (x - lambda * y).norm_sqr()).sum::<f64>().sqrt()
}

/// Householder reduction `A = Q H Q†`; returns `(H, Q)`.
fn hessenberg(a: &ComplexMat) -> (ComplexMat, ComplexMat) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = ComplexMat::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // H ← P H with P = I − 2vv†, acting on rows k+1..n
        for j in 0..n {
            let s: C64 = (k + 1..n).map(|i| v[i - k - 1].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                h[(i, j)] -= 2.0 * v[i - k - 1] * s;
            }
        }
        // H ← H P and Q ← Q P, acting on columns k+1..n
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let s: C64 = (k + 1..n).map(|j| m[(i, j)] * v[j - k - 1]).sum();
                for j in k + 1..n {
                    m[(i, j)] -= 2.0 * s * v[j - k - 1].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Rotation `[[c, s], [−s̄, c]]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let rho = an.hypot(bn);
    let c = an / rho;
    let s = c * b.conj() / a.conj();
    (c, s)
}

fn wilkinson_shift(t: &ComplexMat, hi: usize) -> C64 {
    let a = t[(hi - 1, hi - 1)];
    let b = t[(hi - 1, hi)];
    let c = t[(hi, hi - 1)];
    let d = t[(hi, hi)];
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Drives the Hessenberg matrix `t` to upper-triangular form in place,
/// accumulating the rotations into `z`.
fn schur_qr(t: &mut ComplexMat, z: &mut ComplexMat, anorm: f64) -> Result<(), LinalgError> {
    let n = t.dim();
    if n == 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE / eps;
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(n);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)].norm();
            let mut scale = t[(lo, lo)].norm() + t[(lo - 1, lo - 1)].norm();
            if scale == 0.0 {
                scale = anorm;
            }
            if sub <= eps * scale || sub <= tiny {
                t[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            sweeps = 0;
            continue;
        }

        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(LinalgError::NoConvergence {
                iterations: sweeps,
                residual: t[(hi, hi - 1)].norm(),
            });
        }
        let shift = if sweeps.is_multiple_of(10) {
            // exceptional shift to break cycles
            t[(hi, hi)] + C64::new(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(t, hi)
        };

        for i in lo..=hi {
            t[(i, i)] -= shift;
        }
        rots.clear();
        for k in lo..hi {
            let (c, s) = givens(t[(k, k)], t[(k + 1, k)]);
            for j in k..n {
                let x = t[(k, j)];
                let y = t[(k + 1, j)];
                t[(k, j)] = c * x + s * y;
                t[(k + 1, j)] = -s.conj() * x + c * y;
            }
            t[(k + 1, k)] = ZERO;
            rots.push((c, s));
        }
        for (off, &(c, s)) in rots.iter().enumerate() {
            let k = lo + off;
            for i in 0..=(k + 1) {
                let x = t[(i, k)];
                let y = t[(i, k + 1)];
                t[(i, k)] = x * c + y * s.conj();
                t[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = x * c + y * s.conj();
                z[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            t[(i, i)] += shift;
        }
    }
    Ok(())
}

/// Eigenvector of upper-triangular `t` for the diagonal entry `k`.
fn triangular_eigenvector(t: &ComplexMat, k: usize, anorm: f64) -> Vec<C64> {
    let n = t.dim();
    let lambda = t[(k, k)];
    let small = f64::EPSILON * anorm;
    let mut x = vec![ZERO; n];
    x[k] = C64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let rhs: C64 = (i + 1..=k).map(|j| t[(i, j)] * x[j]).sum();
        let mut d = t[(i, i)] - lambda;
        if d.norm() < small {
            d = C64::new(small, 0.0);
        }
        x[i] = -rhs / d;
        // rescale on growth to stay finite for nearly defective blocks
        let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m > 1e100 {
            x.iter_mut().for_each(|z| *z /= m);
        }
    }
    x
}

fn inverse_iteration(
    a: &ComplexMat,
    lambda: C64,
    start: Vec<C64>,
    start_res: f64,
    anorm: f64,
    tol: f64,
) -> (Vec<C64>, f64) {
    let mut best = (start.clone(), start_res);
    let mut v = start;
    let mut delta = f64::EPSILON * anorm;
    let factor = loop {
        let shifted = a.shift_diag(-(lambda + C64::new(delta, delta)));
        match Lu::new(&shifted) {
            Ok(f) => break Some(f),
            Err(_) if delta < 1e-6 * anorm => delta *= 1e3,
            Err(_) => break None,
        }
    };
    let Some(factor) = factor else { return best };
    for _ in 0..INVERSE_ITERATION_STEPS {
        let mut y = factor.solve(&v);
        if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || vec_norm(&y) == 0.0 {
            break;
        }
        normalize(&mut y);
        let r = residual(a, lambda, &y);
        if r < best.1 {
            best = (y.clone(), r);
        }
        if r <= tol {
            break;
        }
        v = y;
    }
    best
}
