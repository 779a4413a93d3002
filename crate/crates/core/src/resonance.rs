//! Analytic resonance conditions and Bessel-zero trapping predictions.
//!
//! * R1: n₁ω = Δ₀ (|gg⟩ ↔ |+⟩)
//! * R2: n₂ω = Δ₀ − V₀ (|+⟩ ↔ |ee⟩)
//! * R3: n₃ω = 2Δ₀ − V₀ (|gg⟩ ↔ |ee⟩)

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bessel::{BesselZeroTable, MAX_ZERO_INDEX};
use crate::error::{Error, Result};
use crate::hamiltonian::RESONANCE_TOL;
use crate::model::{BasisLabel, DriveParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResonanceKind {
    R1,
    R2,
    R3,
}

impl fmt::Display for ResonanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResonanceKind::R1 => "R1",
            ResonanceKind::R2 => "R2",
            ResonanceKind::R3 => "R3",
        })
    }
}

impl ResonanceKind {
    /// Detuning combination that must equal nω.
    pub fn target(self, delta0: f64, v0: f64) -> f64 {
        match self {
            ResonanceKind::R1 => delta0,
            ResonanceKind::R2 => delta0 - v0,
            ResonanceKind::R3 => 2.0 * delta0 - v0,
        }
    }
}

/// Scanned parameter for [`locate_resonances`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResonanceScan {
    Delta0,
    V0,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceHit {
    pub kind: ResonanceKind,
    pub index: i32,
    /// Value of the scanned parameter that satisfies the condition.
    pub location: f64,
    /// |nω − target| at `location`.
    pub residual: f64,
}

/// All R1/R2/R3 solutions with |n| ≤ `max_index` inside `range`, sorted by location.
///
/// In a V₀ scan R1 does not depend on the scanned variable and is not reported.
pub fn locate_resonances(
    params: &DriveParams,
    scan: ResonanceScan,
    range: (f64, f64),
    max_index: u32,
) -> Result<Vec<ResonanceHit>> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::InvalidParameter(format!("invalid scan range [{lo}, {hi}]")));
    }
    let omega = params.omega;
    let pad = RESONANCE_TOL * omega;
    let mut hits = Vec::new();
    let kinds: &[ResonanceKind] = match scan {
        ResonanceScan::Delta0 => &[ResonanceKind::R1, ResonanceKind::R2, ResonanceKind::R3],
        ResonanceScan::V0 => &[ResonanceKind::R2, ResonanceKind::R3],
    };
    let max = max_index as i32;
    for &kind in kinds {
        for n in -max..=max {
            let nw = n as f64 * omega;
            let location = match (scan, kind) {
                (ResonanceScan::Delta0, ResonanceKind::R1) => nw,
                (ResonanceScan::Delta0, ResonanceKind::R2) => nw + params.v0,
                (ResonanceScan::Delta0, ResonanceKind::R3) => 0.5 * (nw + params.v0),
                (ResonanceScan::V0, ResonanceKind::R2) => params.delta0 - nw,
                (ResonanceScan::V0, ResonanceKind::R3) => 2.0 * params.delta0 - nw,
                (ResonanceScan::V0, ResonanceKind::R1) => unreachable!(),
            };
            if location < lo - pad || location > hi + pad {
                continue;
            }
            let (d0, v0) = match scan {
                ResonanceScan::Delta0 => (location, params.v0),
                ResonanceScan::V0 => (params.delta0, location),
            };
            let residual = (nw - kind.target(d0, v0)).abs();
            hits.push(ResonanceHit { kind, index: n, location, residual });
        }
    }
    hits.sort_by(|a, b| a.location.total_cmp(&b.location).then(a.kind.cmp(&b.kind)).then(a.index.cmp(&b.index)));
    Ok(hits)
}

/// Conditions satisfied by `params` itself, with |n| ≤ `max_index`.
pub fn resonances_at(params: &DriveParams, max_index: u32) -> Vec<ResonanceHit> {
    let mut hits = Vec::new();
    for kind in [ResonanceKind::R1, ResonanceKind::R2, ResonanceKind::R3] {
        let target = kind.target(params.delta0, params.v0);
        let n = (target / params.omega).round() as i32;
        let residual = (n as f64 * params.omega - target).abs();
        if n.unsigned_abs() <= max_index && residual <= RESONANCE_TOL * params.omega {
            hits.push(ResonanceHit { kind, index: n, location: params.delta0, residual });
        }
    }
    hits
}

/// α values at which a resonance is predicted to freeze the dynamics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrappingPrediction {
    pub resonance: ResonanceKind,
    /// Order m of the Bessel function whose zeros are returned.
    pub bessel_order: i32,
    /// States expected to be trapped.
    pub states: Vec<BasisLabel>,
    pub alphas: Vec<f64>,
    /// False for R3 with V₀/ω > 0.25, where the small-V₀ argument fails.
    pub reliable: bool,
}

/// Largest V₀/ω for which an R3 prediction is considered reliable.
pub const R3_RELIABLE_RATIO: f64 = 0.25;

/// First `k_max` zeros of the Bessel function governing `resonance`:
/// J_{n₁} for R1 (|gg⟩), J_{n₂} for R2 (|ee⟩), J₀ for R3 with n₃ = 0.
pub fn predict_trapping(params: &DriveParams, resonance: &ResonanceHit, k_max: usize) -> Result<TrappingPrediction> {
    if k_max == 0 || k_max > MAX_ZERO_INDEX {
        return Err(Error::InvalidParameter(format!("k_max = {k_max} outside 1..={MAX_ZERO_INDEX}")));
    }
    let target = resonance.kind.target(params.delta0, params.v0);
    let residual = (resonance.index as f64 * params.omega - target).abs();
    if residual > RESONANCE_TOL * params.omega {
        return Err(Error::ResonanceNotSatisfied(format!(
            "{} with n = {} is off by {residual:.3e}",
            resonance.kind, resonance.index
        )));
    }
    let (order, states, reliable) = match resonance.kind {
        ResonanceKind::R1 => (resonance.index, vec![BasisLabel::GG], true),
        ResonanceKind::R2 => (resonance.index, vec![BasisLabel::EE], true),
        ResonanceKind::R3 => {
            if resonance.index != 0 {
                return Err(Error::Unsupported(format!(
                    "R3 trapping is only predicted for n3 = 0 (got {})",
                    resonance.index
                )));
            }
            (0, vec![BasisLabel::GG, BasisLabel::EE], params.v0 / params.omega <= R3_RELIABLE_RATIO)
        }
    };
    let table = BesselZeroTable::new(order, k_max)?;
    Ok(TrappingPrediction {
        resonance: resonance.kind,
        bessel_order: order,
        states,
        alphas: table.zeros().to_vec(),
        reliable,
    })
}
