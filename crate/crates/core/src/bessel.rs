//! Bessel functions of the first kind of integer order and their zeros.
//!
//! J_m(α) is evaluated from the ascending power series for α < 12 and from
//! Miller's downward recurrence, normalized with 1 = J₀ + 2 Σ J₂ₖ, above that.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Largest |m| accepted by [`bessel_j`].
pub const MAX_ORDER: i32 = 60;
/// Largest argument accepted by [`bessel_j`].
pub const MAX_ARG: f64 = 100.0;
/// Largest zero index accepted by [`bessel_zero`].
pub const MAX_ZERO_INDEX: usize = 20;

const SERIES_LIMIT: f64 = 12.0;

/// J_m(α) for |m| ≤ 60 and 0 ≤ α ≤ 100.
pub fn bessel_j(m: i32, alpha: f64) -> Result<f64> {
    if m.abs() > MAX_ORDER || !(0.0..=MAX_ARG).contains(&alpha) {
        return Err(Error::BesselRange { order: m, arg: alpha });
    }
    Ok(jn(m, alpha))
}

/// J_m(x) without range checks. Accurate well beyond the validated range.
pub(crate) fn jn(m: i32, x: f64) -> f64 {
    if x < 0.0 {
        // J_m(−x) = (−1)^m J_m(x)
        return parity(m) * jn(m, -x);
    }
    let n = m.unsigned_abs();
    let value = if x < SERIES_LIMIT { series(n, x) } else { miller(n, x) };
    if m < 0 {
        parity(m) * value
    } else {
        value
    }
}

fn parity(m: i32) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (n as f64 + k));
        sum += term;
        if k > half && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    const BIG: f64 = 1e250;
    let top = (n as f64).max(x);
    let mut start = (top + 30.0 + (40.0 * top).sqrt()) as u32;
    start += start % 2;

    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut even_sum = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        // J_{k-1} = (2k/x) J_k − J_{k+1}
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx == n {
            wanted = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            even_sum += cur;
        }
        if cur.abs() > BIG {
            cur /= BIG;
            next /= BIG;
            even_sum /= BIG;
            wanted /= BIG;
        }
    }
    // cur holds the unnormalized J_0
    let norm = cur + 2.0 * even_sum;
    wanted / norm
}

/// k-th positive zero (k ≥ 1) of J_m. Zeros of J_{−m} coincide with those of J_m.
pub fn bessel_zero(m: i32, k: usize) -> Result<f64> {
    if k == 0 || k > MAX_ZERO_INDEX {
        return Err(Error::InvalidParameter(format!("zero index {k} outside 1..={MAX_ZERO_INDEX}")));
    }
    if m.abs() > MAX_ORDER {
        return Err(Error::BesselRange { order: m, arg: f64::NAN });
    }
    Ok(zeros(m, k).pop().expect("k >= 1"))
}

/// First `count` positive zeros of J_m.
fn zeros(m: i32, count: usize) -> Vec<f64> {
    let n = m.abs();
    let f = |x: f64| jn(n, x);
    let mut out: Vec<f64> = Vec::with_capacity(count);
    for k in 1..=count {
        let bracket = match out.last() {
            None => first_bracket(n, &f),
            Some(&prev) => {
                let (lo, hi) = (prev + FRAC_PI_2, prev + 3.0 * FRAC_PI_2);
                if f(lo) * f(hi) < 0.0 {
                    (lo, hi)
                } else {
                    scan_for_sign_change(prev + 0.1, &f)
                }
            }
        };
        let z = bisect(bracket, &f);
        debug_assert!(k == out.len() + 1);
        out.push(z);
    }
    out
}

/// Bracket for the first zero, seeded by McMahon's expansion
/// j ≈ β − (μ − 1)/(8β), β = (1 + n/2 − 1/4)π, μ = 4n².
fn first_bracket(n: i32, f: &impl Fn(f64) -> f64) -> (f64, f64) {
    let beta = (0.75 + 0.5 * n as f64) * PI;
    let mu = 4.0 * (n as f64).powi(2);
    let guess = beta - (mu - 1.0) / (8.0 * beta);
    // J_n has no zeros in (0, n] for n ≥ 1 and none in (0, 2) for n = 0.
    let floor = (n as f64).max(1.0);
    let lo = (guess - FRAC_PI_2).max(floor);
    let hi = guess + FRAC_PI_2;
    if hi > lo && f(lo) * f(hi) < 0.0 && f(floor) * f(lo) > 0.0 {
        (lo, hi)
    } else {
        scan_for_sign_change(floor, f)
    }
}

fn scan_for_sign_change(start: f64, f: &impl Fn(f64) -> f64) -> (f64, f64) {
    const STEP: f64 = 0.25;
    let mut lo = start;
    let mut flo = f(lo);
    loop {
        let hi = lo + STEP;
        let fhi = f(hi);
        if flo == 0.0 {
            return (lo, lo);
        }
        if flo * fhi <= 0.0 {
            return (lo, hi);
        }
        lo = hi;
        flo = fhi;
    }
}

fn bisect((mut lo, mut hi): (f64, f64), f: &impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}

/// First zeros of one Bessel order.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselZeroTable {
    order: i32,
    zeros: Vec<f64>,
}

impl BesselZeroTable {
    pub fn new(order: i32, count: usize) -> Result<Self> {
        if count > MAX_ZERO_INDEX {
            return Err(Error::InvalidParameter(format!("at most {MAX_ZERO_INDEX} zeros are tabulated")));
        }
        if order.abs() > MAX_ORDER {
            return Err(Error::BesselRange { order, arg: f64::NAN });
        }
        Ok(BesselZeroTable { order, zeros: zeros(order, count) })
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// Zeros that fall inside `[lo, hi]`.
    pub fn within(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.zeros.iter().copied().filter(|z| (lo..=hi).contains(z)).collect()
    }
}
