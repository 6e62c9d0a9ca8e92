use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use super::LinalgError;

/// Largest square dimension supported (a vectorized two-qubit density matrix).
pub const MAX_DIM: usize = 16;

/// Four complex amplitudes over the two-qubit basis.
pub type ComplexVec4 = [C64; 4];

/// Dense square complex matrix, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMat {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMat {
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0 && n <= MAX_DIM, "matrix dimension {n} outside 1..={MAX_DIM}");
        Self { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds from a row-major slice of length `n * n`.
    pub fn from_row_slice(n: usize, data: &[C64]) -> Result<Self, LinalgError> {
        if n == 0 || n > MAX_DIM {
            return Err(LinalgError::DimensionTooLarge { dim: n, max: MAX_DIM });
        }
        if data.len() != n * n {
            return Err(LinalgError::DimensionMismatch { expected: n * n, found: data.len() });
        }
        Ok(Self { n, data: data.to_vec() })
    }

    /// Builds from real entries, row-major.
    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self + s·I`.
    pub fn shift_diag(&self, s: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += s;
        }
        m
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n, "vector length does not match matrix dimension");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius distance to the adjoint.
    pub fn hermiticity_defect(&self) -> f64 {
        (self - &self.adjoint()).norm_fro()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl<'a> Mul<&'a ComplexMat> for &'a ComplexMat {
    type Output = ComplexMat;
    fn mul(self, rhs: &'a ComplexMat) -> ComplexMat {
        self.matmul(rhs)
    }
}

impl<'a> Add<&'a ComplexMat> for &'a ComplexMat {
    type Output = ComplexMat;
    fn add(self, rhs: &'a ComplexMat) -> ComplexMat {
        assert_eq!(self.n, rhs.n);
        ComplexMat { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a ComplexMat> for &'a ComplexMat {
    type Output = ComplexMat;
    fn sub(self, rhs: &'a ComplexMat) -> ComplexMat {
        assert_eq!(self.n, rhs.n);
        ComplexMat { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &ComplexMat {
    type Output = ComplexMat;
    fn neg(self) -> ComplexMat {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMat({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`. Products larger than [`MAX_DIM`] are rejected.
pub fn kron(a: &ComplexMat, b: &ComplexMat) -> Result<ComplexMat, LinalgError> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    if n > MAX_DIM {
        return Err(LinalgError::DimensionTooLarge { dim: n, max: MAX_DIM });
    }
    Ok(ComplexMat::from_fn(n, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)]))
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
