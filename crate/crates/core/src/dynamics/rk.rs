//! Adaptive Dormand–Prince 5(4) integration of complex linear ODEs.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Integrator state; `f(t, y, dy)` writes the derivative into `dy`.
pub struct DormandPrince<F> {
    f: F,
    t: f64,
    y: Vec<C64>,
    k1: Vec<C64>,
    h: f64,
    tol: Tolerances,
    steps: usize,
}

impl<F> DormandPrince<F>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    pub fn new(mut f: F, t0: f64, y0: &[C64], tol: Tolerances) -> Self {
        let mut k1 = vec![C64::new(0.0, 0.0); y0.len()];
        f(t0, y0, &mut k1);
        let h = initial_step(y0, &k1, tol);
        Self { f, t: t0, y: y0.to_vec(), k1, h, tol, steps: 0 }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &[C64] {
        &self.y
    }

    /// Accepted steps so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Integrates up to exactly `t_end`, landing the last step on it.
    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        let n = self.y.len();
        let mut k = vec![vec![C64::new(0.0, 0.0); n]; 7];
        let mut stage = vec![C64::new(0.0, 0.0); n];
        let mut y_new = vec![C64::new(0.0, 0.0); n];

        while self.t < t_end {
            let remaining = t_end - self.t;
            let min_step = 1e-14 * self.t.abs().max(1.0);
            if self.h < min_step {
                return Err(Error::StepUnderflow { last_good_time: self.t });
            }
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };

            k[0].copy_from_slice(&self.k1);
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = self.y[i];
                    for (r, kr) in k.iter().enumerate().take(s) {
                        if A[s][r] != 0.0 {
                            acc += h * A[s][r] * kr[i];
                        }
                    }
                    stage[i] = acc;
                }
                if s == 6 {
                    y_new.copy_from_slice(&stage);
                }
                (self.f)(self.t + C[s] * h, &stage, &mut k[s]);
            }

            let mut err_sq = 0.0;
            for i in 0..n {
                let mut e = C64::new(0.0, 0.0);
                for (s, ks) in k.iter().enumerate() {
                    e += E[s] * ks[i];
                }
                let scale = self.tol.atol + self.tol.rtol * self.y[i].norm().max(y_new[i].norm());
                err_sq += (h * e).norm_sqr() / (scale * scale);
            }
            let err = (err_sq / n as f64).sqrt();
            if !err.is_finite() {
                self.h = h * MIN_FACTOR;
                continue;
            }

            if err <= 1.0 {
                self.t = if last { t_end } else { self.t + h };
                std::mem::swap(&mut self.y, &mut y_new);
                self.k1.copy_from_slice(&k[6]);
                self.steps += 1;
                let grow = if err == 0.0 { MAX_FACTOR } else { (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR) };
                // a step shortened to hit t_end says nothing about the natural size
                self.h = if last { self.h.max(h * grow) } else { h * grow };
            } else {
                self.h = h * (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            }
        }
        Ok(())
    }
}

fn initial_step(y0: &[C64], f0: &[C64], tol: Tolerances) -> f64 {
    let n = y0.len() as f64;
    let scaled = |v: &[C64]| {
        (v.iter()
            .zip(y0)
            .map(|(x, y)| (x.norm() / (tol.atol + tol.rtol * y.norm())).powi(2))
            .sum::<f64>()
            / n)
            .sqrt()
    };
    let d0 = scaled(y0);
    let d1 = scaled(f0);
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
}
