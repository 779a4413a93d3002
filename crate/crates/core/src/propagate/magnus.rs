//! Fourth-order commutator-free Magnus integrator with two exponentials per step.

use nalgebra::DMatrix;

use crate::hamiltonian::Generator;
use crate::model::hermitian_exp;
use crate::C64;

const SQRT3: f64 = 1.732_050_807_568_877_2;

pub(super) struct CommutatorFree<'a> {
    gen: &'a Generator,
    max_step: f64,
}

impl<'a> CommutatorFree<'a> {
    pub(super) fn new(gen: &'a Generator, max_step: f64) -> Self {
        CommutatorFree { gen, max_step }
    }

    /// U(t + h, t) ≈ exp(−ih(α₂H₁ + α₁H₂)) exp(−ih(α₁H₁ + α₂H₂)),
    /// H_k = H(t + c_k h) at the Gauss nodes c = 1/2 ∓ √3/6.
    fn step(&self, t: f64, h: f64) -> DMatrix<C64> {
        let a1 = 0.25 + SQRT3 / 6.0;
        let a2 = 0.25 - SQRT3 / 6.0;
        let h1 = self.gen.at(t + (0.5 - SQRT3 / 6.0) * h);
        let h2 = self.gen.at(t + (0.5 + SQRT3 / 6.0) * h);
        let first = &h1 * C64::new(a1, 0.0) + &h2 * C64::new(a2, 0.0);
        let second = &h1 * C64::new(a2, 0.0) + &h2 * C64::new(a1, 0.0);
        hermitian_exp(&second, h) * hermitian_exp(&first, h)
    }

    /// Advances `y` from `t0` to `t1` in equal steps no longer than `max_step`.
    pub(super) fn advance(&self, t0: f64, t1: f64, mut y: DMatrix<C64>) -> DMatrix<C64> {
        let span = t1 - t0;
        if span <= 0.0 {
            return y;
        }
        let n = (span / self.max_step).ceil().max(1.0) as usize;
        let h = span / n as f64;
        for i in 0..n {
            y = self.step(t0 + i as f64 * h, h) * y;
        }
        y
    }
}
