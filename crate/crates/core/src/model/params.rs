use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the driven system.
///
/// Every energy is measured in units of the Rabi frequency and every time in
/// units of its inverse. `rabi` is still stored explicitly so a whole
/// parameter set can be rescaled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Rabi frequency Ω.
    pub rabi: f64,
    /// Static detuning Δ₀.
    pub delta0: f64,
    /// Modulation amplitude δ of the detuning.
    pub delta_mod: f64,
    /// Modulation frequency ω.
    pub omega: f64,
    /// van der Waals shift V₀ of the doubly excited state.
    pub v0: f64,
}

impl Default for DriveParams {
    /// Ω = 1, ω = 8, δ = 15, Δ₀ = 0, V₀ = 0.
    fn default() -> Self {
        DriveParams {
            rabi: 1.0,
            delta0: 0.0,
            delta_mod: 15.0,
            omega: 8.0,
            v0: 0.0,
        }
    }
}

impl DriveParams {
    pub fn new(rabi: f64, delta0: f64, delta_mod: f64, omega: f64, v0: f64) -> Result<Self> {
        let params = DriveParams {
            rabi,
            delta0,
            delta_mod,
            omega,
            v0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.rabi, self.delta0, self.delta_mod, self.omega, self.v0]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("all parameters must be finite".into()));
        }
        if self.rabi < 0.0 {
            return Err(Error::InvalidParameter(format!("rabi = {} < 0", self.rabi)));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega = {} <= 0", self.omega)));
        }
        if self.delta_mod < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "delta_mod = {} < 0",
                self.delta_mod
            )));
        }
        if self.v0 < 0.0 {
            return Err(Error::InvalidParameter(format!("v0 = {} < 0", self.v0)));
        }
        Ok(())
    }

    /// Modulation index α = δ/ω.
    pub fn alpha(&self) -> f64 {
        self.delta_mod / self.omega
    }

    /// Drive period T = 2π/ω.
    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// Δ(t) = Δ₀ + δ sin ωt.
    pub fn detuning_at(&self, t: f64) -> f64 {
        self.delta0 + self.delta_mod * (self.omega * t).sin()
    }

    /// Sets δ so that δ/ω equals `alpha`, keeping ω fixed.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.delta_mod = alpha * self.omega;
        self
    }

    pub fn with_delta0(mut self, delta0: f64) -> Self {
        self.delta0 = delta0;
        self
    }

    pub fn with_v0(mut self, v0: f64) -> Self {
        self.v0 = v0;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_delta_mod(mut self, delta_mod: f64) -> Self {
        self.delta_mod = delta_mod;
        self
    }

    pub fn with_rabi(mut self, rabi: f64) -> Self {
        self.rabi = rabi;
        self
    }

    /// Multiplies every energy by `factor`. Time scales by `1/factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        DriveParams {
            rabi: self.rabi * factor,
            delta0: self.delta0 * factor,
            delta_mod: self.delta_mod * factor,
            omega: self.omega * factor,
            v0: self.v0 * factor,
        }
    }

    /// Default Jacobi–Anger truncation, ⌈α⌉ + 15.
    pub fn default_m_max(&self) -> i32 {
        self.alpha().ceil() as i32 + 15
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn detuning_examples() {
        let p = DriveParams::new(1.0, 3.0, 15.0, 8.0, 0.0).unwrap();
        assert_eq!(p.detuning_at(0.0), 3.0);

        let p = p.with_delta0(0.0);
        assert!((p.detuning_at(PI / 16.0) - 15.0).abs() < 1e-12);

        let p = p.with_delta0(8.0);
        assert!((p.detuning_at(2.0 * PI / 8.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn derived_quantities() {
        let p = DriveParams::default();
        assert_eq!(p.alpha(), 15.0 / 8.0);
        assert!((p.period() - 2.0 * PI / 8.0).abs() < 1e-15);
        assert_eq!(p.with_alpha(2.0).delta_mod, 16.0);
        assert_eq!(p.default_m_max(), 17);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(DriveParams::new(1.0, 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(DriveParams::new(1.0, 0.0, -1.0, 8.0, 0.0).is_err());
        assert!(DriveParams::new(1.0, 0.0, 1.0, 8.0, -0.5).is_err());
        assert!(DriveParams::new(1.0, f64::NAN, 1.0, 8.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn detuning_is_periodic(t in -50.0f64..50.0, omega in 0.5f64..40.0, d0 in -20.0f64..20.0) {
            let p = DriveParams::new(1.0, d0, 15.0, omega, 0.0).unwrap();
            prop_assert!((p.detuning_at(t) - p.detuning_at(t + p.period())).abs() <= 1e-12 * (1.0 + t.abs()).max(1.0) * 20.0);
        }
    }
}
