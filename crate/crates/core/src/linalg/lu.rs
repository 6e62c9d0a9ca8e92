//! LU factorization with partial pivoting.

use num_complex::Complex64 as C64;

use super::{ComplexMat, LinalgError};

#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMat,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorizes `a`. Exactly zero pivots are reported as singular; tiny
    /// pivots are left for the caller to judge through a condition estimate.
    pub fn new(a: &ComplexMat) -> Result<Self, LinalgError> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| lu[(x, k)].norm().total_cmp(&lu[(y, k)].norm()))
                .unwrap();
            if lu[(p, k)].norm() == 0.0 {
                return Err(LinalgError::Singular);
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.dim();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[(i, k)];
                x[i] = x[i] - u * x[k];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve_mat(&self, b: &ComplexMat) -> ComplexMat {
        let n = b.dim();
        let mut out = ComplexMat::zeros(n);
        for j in 0..n {
            let col = self.solve(&b.column(j));
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> ComplexMat {
        self.solve_mat(&ComplexMat::identity(self.lu.dim()))
    }
}

pub fn solve(a: &ComplexMat, b: &[C64]) -> Result<Vec<C64>, LinalgError> {
    Ok(Lu::new(a)?.solve(b))
}

pub fn inverse(a: &ComplexMat) -> Result<ComplexMat, LinalgError> {
    Ok(Lu::new(a)?.inverse())
}

/// One-norm condition number `‖A‖₁‖A⁻¹‖₁`; infinite for singular input.
pub fn condition_number(a: &ComplexMat) -> f64 {
    match inverse(a) {
        Ok(inv) if inv.is_finite() => a.norm_one() * inv.norm_one(),
        _ => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_permuted_system() {
        let a = ComplexMat::from_fn(3, |i, j| {
            C64::new(((i * 3 + j) as f64).sin(), if i == 0 && j == 0 { 0.0 } else { (i + j) as f64 })
        });
        let x_true = [C64::new(1.0, -1.0), C64::new(0.5, 2.0), C64::new(-3.0, 0.25)];
        let b = a.mul_vec(&x_true);
        let x = solve(&a, &b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-12);
        }
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).max_abs_diff(&ComplexMat::identity(3)) < 1e-12);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = ComplexMat::from_real_rows([[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(Lu::new(&a), Err(LinalgError::Singular)) || condition_number(&a) > 1e15);
        assert!(Lu::new(&ComplexMat::zeros(2)).is_err());
    }
}
