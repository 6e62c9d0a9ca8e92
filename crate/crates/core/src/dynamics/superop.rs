//! Row-major vectorization of the conditional master equation.
//!
//! With `vec` stacking rows, `vec(A·X·B) = (A ⊗ Bᵀ)·vec(X)`.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::linalg::{kron, ComplexMat};

/// Generator `L` with `d vec(ρ)/dt = L·vec(ρ)` for
/// `∂ρ/∂t = −i(Hρ − ρH†) + Σⱼ (ΓⱼρΓⱼ† − ½{Γⱼ†Γⱼ, ρ})`.
pub fn liouvillian(h: &ComplexMat, jumps: &[ComplexMat]) -> Result<ComplexMat> {
    let n = h.dim();
    let id = ComplexMat::identity(n);
    let coherent = &kron(h, &id)? - &kron(&id, &h.conj())?;
    let mut l = coherent.scale(C64::new(0.0, -1.0));
    for g in jumps {
        let gg = &g.adjoint() * g;
        let feed = kron(g, &g.conj())?;
        let drain = &kron(&gg, &id)? + &kron(&id, &gg.transpose())?;
        l = &l + &(&feed - &drain.scale_real(0.5));
    }
    Ok(l)
}

/// Right-hand side evaluated directly on the 4×4 matrix; independent of
/// [`liouvillian`] so the two can cross-check each other.
pub fn master_rhs(h: &ComplexMat, jumps: &[(ComplexMat, ComplexMat, ComplexMat)], rho: &ComplexMat) -> ComplexMat {
    let hd = h.adjoint();
    let mut out = (&(h * rho) - &(rho * &hd)).scale(C64::new(0.0, -1.0));
    for (g, gd, gg) in jumps {
        let feed = &(g * rho) * gd;
        let drain = &(gg * rho) + &(rho * gg);
        out = &out + &(&feed - &drain.scale_real(0.5));
    }
    out
}

/// `(Γ, Γ†, Γ†Γ)` triples for [`master_rhs`].
pub fn jump_cache(jumps: &[ComplexMat]) -> Vec<(ComplexMat, ComplexMat, ComplexMat)> {
    jumps
        .iter()
        .map(|g| {
            let gd = g.adjoint();
            let gg = &gd * g;
            (g.clone(), gd, gg)
        })
        .collect()
}

pub fn vectorize(rho: &ComplexMat) -> Vec<C64> {
    rho.as_slice().to_vec()
}

pub fn unvectorize(v: &[C64]) -> Result<ComplexMat> {
    let n = (v.len() as f64).sqrt().round() as usize;
    Ok(ComplexMat::from_row_slice(n, v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(seed: f64) -> ComplexMat {
        ComplexMat::from_fn(4, |i, j| C64::new((seed + i as f64 * 1.7 + j as f64).sin(), (seed * 0.3 + (i * j) as f64).cos()))
    }

    #[test]
    fn superoperator_matches_matrix_form() {
        let h = sample(0.4);
        let jumps = vec![sample(1.1).scale_real(0.3), sample(2.9).scale_real(0.2)];
        let rho = sample(5.0);
        let l = liouvillian(&h, &jumps).unwrap();
        let via_l = unvectorize(&l.mul_vec(&vectorize(&rho))).unwrap();
        let direct = master_rhs(&h, &jump_cache(&jumps), &rho);
        assert!(via_l.max_abs_diff(&direct) < 1e-13);
    }

    #[test]
    fn dissipator_alone_preserves_trace() {
        let jumps = vec![sample(0.7)];
        let l = liouvillian(&ComplexMat::zeros(4), &jumps).unwrap();
        let rho = sample(3.3);
        let d = unvectorize(&l.mul_vec(&vectorize(&rho))).unwrap();
        assert!(d.trace().norm() < 1e-13);
    }
}
