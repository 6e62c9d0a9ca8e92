//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (degrees 3 to 13, Higham's backward-error thresholds).

use num_complex::Complex64 as C64;

use super::eig::eig;
use super::lu::{self, Lu};
use super::matrix::ComplexMat;
use super::LinalgError;

#[allow(clippy::excessive_precision)] // published constants, kept verbatim
const THETA: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Beyond this `‖A·t‖₁` the squaring phase alone loses all accuracy.
const MAX_SCALED_NORM: f64 = 1e12;

/// `exp(A·t)`.
pub fn expm(a: &ComplexMat, t: f64) -> Result<ComplexMat, LinalgError> {
    if !a.is_finite() || !t.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let at = a.scale_real(t);
    let norm = at.norm_one();
    if norm > MAX_SCALED_NORM {
        return Err(LinalgError::Overflow { norm });
    }
    let n = at.dim();
    if norm == 0.0 {
        return Ok(ComplexMat::identity(n));
    }

    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            let (u, v) = pade_low(&at, m);
            return pade_quotient(&u, &v);
        }
    }

    let s = (norm / THETA[4].1).log2().ceil().max(0.0) as i32;
    let scaled = at.scale_real(0.5f64.powi(s));
    let (u, v) = pade13(&scaled);
    let mut r = pade_quotient(&u, &v)?;
    for _ in 0..s {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(LinalgError::Overflow { norm });
    }
    Ok(r)
}

/// `exp(A·t)` through `V·diag(e^{λt})·V⁻¹`. Unreliable when `V` is ill
/// conditioned (near exceptional points); kept as an independent cross-check.
pub fn expm_via_eig(a: &ComplexMat, t: f64) -> Result<ComplexMat, LinalgError> {
    let d = eig(a)?;
    let v = d.eigenvector_matrix();
    let cond = lu::condition_number(&v);
    if cond > 1e8 {
        return Err(LinalgError::IllConditioned { condition: cond });
    }
    let vinv = lu::inverse(&v)?;
    let n = a.dim();
    let vd = ComplexMat::from_fn(n, |i, j| v[(i, j)] * (d.eigenvalues[j] * t).exp());
    Ok(&vd * &vinv)
}

fn pade_quotient(u: &ComplexMat, v: &ComplexMat) -> Result<ComplexMat, LinalgError> {
    // r = (V − U)⁻¹ (V + U)
    let p = v + u;
    let q = v - u;
    Ok(Lu::new(&q)?.solve_mat(&p))
}

fn pade_low(a: &ComplexMat, m: usize) -> (ComplexMat, ComplexMat) {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => unreachable!("unsupported Padé degree {m}"),
    };
    let n = a.dim();
    let a2 = a * a;
    let mut powers = vec![ComplexMat::identity(n), a2.clone()];
    while powers.len() < m.div_ceil(2) {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u_inner = ComplexMat::zeros(n);
    let mut v = ComplexMat::zeros(n);
    for (k, p) in powers.iter().enumerate() {
        u_inner = &u_inner + &p.scale_real(b[2 * k + 1]);
        v = &v + &p.scale_real(b[2 * k]);
    }
    (a * &u_inner, v)
}

fn pade13(a: &ComplexMat) -> (ComplexMat, ComplexMat) {
    let b = &B13;
    let n = a.dim();
    let id = ComplexMat::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let lin = |c: [f64; 4]| -> ComplexMat {
        let mut m = id.scale_real(c[0]);
        m = &m + &a2.scale_real(c[1]);
        m = &m + &a4.scale_real(c[2]);
        &m + &a6.scale_real(c[3])
    };
    let u_hi = lin([0.0, b[9], b[11], b[13]]);
    let u_lo = lin([b[1], b[3], b[5], b[7]]);
    let u = a * &(&(&a6 * &u_hi) + &u_lo);
    let v_hi = lin([0.0, b[8], b[10], b[12]]);
    let v_lo = lin([b[0], b[2], b[4], b[6]]);
    let v = &(&a6 * &v_hi) + &v_lo;
    (u, v)
}

/// `exp(−i·H·t)`.
pub fn propagator(h: &ComplexMat, t: f64) -> Result<ComplexMat, LinalgError> {
    expm(&h.scale(C64::new(0.0, -1.0)), t)
}
