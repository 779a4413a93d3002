//! Adaptive Dormand–Prince 8(5,3) for i dY/dt = H(t) Y with complex Y.
//!
//! Real and imaginary parts enter the error norm as separate components.
//! The step controller and dense output follow the classic DOP853 code.

use nalgebra::DMatrix;

use super::tableau::{A, B, C, D, E3, E5};
use crate::error::{Error, Result};
use crate::hamiltonian::Generator;
use crate::C64;

const STAGES: usize = 12;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;
const MAX_STEPS: usize = 50_000_000;

type State = DMatrix<C64>;

pub(super) struct Dop853<'a> {
    gen: &'a Generator,
    rtol: f64,
    atol: f64,
    max_step: f64,
}

fn rhs(gen: &Generator, t: f64, y: &State) -> State {
    gen.at(t) * y * C64::new(0.0, -1.0)
}

fn combine(y: &State, h: f64, weights: &[f64], k: &[State]) -> State {
    let mut out = y.clone();
    for (w, kj) in weights.iter().zip(k) {
        if *w != 0.0 {
            out.zip_apply(kj, |o, v| *o += v * (h * w));
        }
    }
    out
}

fn weighted(weights: &[f64], k: &[State]) -> State {
    let mut out = State::zeros(k[0].nrows(), k[0].ncols());
    for (w, kj) in weights.iter().zip(k) {
        if *w != 0.0 {
            out.zip_apply(kj, |o, v| *o += v * *w);
        }
    }
    out
}

/// Sum of squares over real components of `v / scale`.
fn sum_sq_scaled(v: &State, scale: &[(f64, f64)]) -> f64 {
    v.iter()
        .zip(scale)
        .map(|(z, (sr, si))| (z.re / sr).powi(2) + (z.im / si).powi(2))
        .sum()
}

fn rms_scaled(v: &State, scale: &[(f64, f64)]) -> f64 {
    (sum_sq_scaled(v, scale) / (2 * v.len()) as f64).sqrt()
}

impl<'a> Dop853<'a> {
    pub(super) fn new(gen: &'a Generator, rtol: f64, atol: f64, max_step: f64) -> Self {
        Dop853 { gen, rtol, atol, max_step }
    }

    fn scale(&self, y: &State, y_new: &State) -> Vec<(f64, f64)> {
        y.iter()
            .zip(y_new.iter())
            .map(|(a, b)| {
                (
                    self.atol + a.re.abs().max(b.re.abs()) * self.rtol,
                    self.atol + a.im.abs().max(b.im.abs()) * self.rtol,
                )
            })
            .collect()
    }

    fn initial_step(&self, t0: f64, y0: &State, f0: &State, direction: f64) -> f64 {
        let scale = self.scale(y0, y0);
        let d0 = rms_scaled(y0, &scale);
        let d1 = rms_scaled(f0, &scale);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = y0 + f0 * C64::new(h0 * direction, 0.0);
        let f1 = rhs(self.gen, t0 + h0 * direction, &y1);
        let d2 = rms_scaled(&(f1 - f0), &scale) / h0;
        let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / 8.0)
        };
        (100.0 * h0).min(h1).min(self.max_step)
    }

    /// Integrates from `t0` to `t1 > t0`, reporting the state at every time of
    /// `samples` (ascending, inside [t0, t1]) through dense output.
    pub(super) fn integrate(
        &self,
        t0: f64,
        t1: f64,
        y0: State,
        samples: &[f64],
        mut emit: impl FnMut(f64, &State),
    ) -> Result<State> {
        let mut t = t0;
        let mut y = y0;
        let mut f = rhs(self.gen, t, &y);
        let mut next_sample = 0;
        while next_sample < samples.len() && samples[next_sample] <= t0 {
            emit(samples[next_sample], &y);
            next_sample += 1;
        }
        if t1 <= t0 {
            return Ok(y);
        }
        let mut h_abs = self.initial_step(t, &y, &f, 1.0);
        let mut k: Vec<State> = Vec::with_capacity(16);
        let mut steps = 0usize;

        while t < t1 {
            steps += 1;
            let min_step = 10.0 * (f64::EPSILON * t.abs()).max(f64::MIN_POSITIVE);
            if steps > MAX_STEPS {
                return Err(Error::StepUnderflow { time: t, step: h_abs });
            }
            h_abs = h_abs.min(self.max_step);
            let mut rejected = false;
            let (t_new, h, y_new, f_new) = loop {
                if h_abs < min_step {
                    return Err(Error::StepUnderflow { time: t, step: h_abs });
                }
                let mut t_new = t + h_abs;
                if t_new > t1 {
                    t_new = t1;
                }
                let h = t_new - t;

                k.clear();
                k.push(f.clone());
                for s in 1..STAGES {
                    let ys = combine(&y, h, &A[s][..s], &k);
                    k.push(rhs(self.gen, t + C[s] * h, &ys));
                }
                let y_new = combine(&y, h, &B, &k);
                let f_new = rhs(self.gen, t + h, &y_new);

                let scale = self.scale(&y, &y_new);
                let e5sq = sum_sq_scaled(&weighted(&E5, &k), &scale);
                let e3sq = sum_sq_scaled(&weighted(&E3, &k), &scale);
                let n = (2 * y.len()) as f64;
                let err = if e5sq == 0.0 && e3sq == 0.0 {
                    0.0
                } else {
                    h * e5sq / ((e5sq + 0.01 * e3sq) * n).sqrt()
                };

                if err < 1.0 {
                    let mut factor = if err == 0.0 {
                        MAX_FACTOR
                    } else {
                        MAX_FACTOR.min(SAFETY * err.powf(ERROR_EXPONENT))
                    };
                    if rejected {
                        factor = factor.min(1.0);
                    }
                    h_abs *= factor;
                    break (t_new, h, y_new, f_new);
                }
                h_abs *= MIN_FACTOR.max(SAFETY * err.powf(ERROR_EXPONENT));
                rejected = true;
            };
            k.push(f_new.clone());

            if next_sample < samples.len() && samples[next_sample] <= t_new {
                let dense = self.dense(t, h, &y, &y_new, &f, &f_new, &mut k);
                while next_sample < samples.len() && samples[next_sample] <= t_new {
                    let ts = samples[next_sample];
                    if ts == t_new {
                        emit(ts, &y_new);
                    } else {
                        emit(ts, &dense.eval(ts));
                    }
                    next_sample += 1;
                }
            }
            t = t_new;
            y = y_new;
            f = f_new;
        }
        Ok(y)
    }

    #[allow(clippy::too_many_arguments)]
    fn dense(
        &self,
        t_old: f64,
        h: f64,
        y_old: &State,
        y_new: &State,
        f_old: &State,
        f_new: &State,
        k: &mut Vec<State>,
    ) -> DenseStep {
        for s in STAGES + 1..16 {
            let ys = combine(y_old, h, &A[s][..s], k);
            k.push(rhs(self.gen, t_old + C[s] * h, &ys));
        }
        let dy = y_new - y_old;
        let hc = C64::new(h, 0.0);
        let mut coeffs = Vec::with_capacity(7);
        coeffs.push(dy.clone());
        coeffs.push(f_old * hc - &dy);
        coeffs.push(&dy * C64::new(2.0, 0.0) - (f_new + f_old) * hc);
        for row in &D {
            coeffs.push(weighted(row, k) * hc);
        }
        DenseStep { t_old, h, y_old: y_old.clone(), coeffs }
    }
}

struct DenseStep {
    t_old: f64,
    h: f64,
    y_old: State,
    coeffs: Vec<State>,
}

impl DenseStep {
    fn eval(&self, t: f64) -> State {
        let x = (t - self.t_old) / self.h;
        let mut y = State::zeros(self.y_old.nrows(), self.y_old.ncols());
        for (i, c) in self.coeffs.iter().rev().enumerate() {
            y += c;
            let factor = if i % 2 == 0 { x } else { 1.0 - x };
            y *= C64::new(factor, 0.0);
        }
        y + &self.y_old
    }
}
