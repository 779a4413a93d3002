//! Populations, bipartite entanglement entropy and regime classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Basis, BasisLabel, StateVector, TimeSeries};

/// Von Neumann entropy (base 2) of atom A's reduced density matrix.
///
/// Accepts pair or symmetric two-atom states; ρ_A = M M† with M_{ab} = ψ_{2a+b}.
pub fn entanglement_entropy(state: &StateVector) -> Result<f64> {
    if state.basis() == Basis::Single {
        return Err(Error::DimensionMismatch { expected: 4, found: 2 });
    }
    let psi = state.in_basis(Basis::Pair)?;
    let a = psi.amplitudes();
    let rho00 = a[0].norm_sqr() + a[1].norm_sqr();
    let rho11 = a[2].norm_sqr() + a[3].norm_sqr();
    let rho01 = a[0] * a[2].conj() + a[1] * a[3].conj();
    let trace = rho00 + rho11;
    let det = rho00 * rho11 - rho01.norm_sqr();
    let disc = (0.25 * trace * trace - det).max(0.0).sqrt();
    let entropy = [0.5 * trace + disc, 0.5 * trace - disc]
        .iter()
        .map(|&l| (l / trace).clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum::<f64>();
    Ok(entropy.clamp(0.0, 1.0))
}

/// |amplitude|² for every label of the state's basis.
pub fn populations(state: &StateVector) -> Vec<(BasisLabel, f64)> {
    state.basis().labels().iter().copied().zip(state.populations()).collect()
}

/// Dynamical regime read off Π^{|gg⟩} and Π^{|ee⟩}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeLabel {
    Freezing,
    Blockade,
    AntiBlockade,
    Mixed,
}

impl RegimeLabel {
    pub fn name(self) -> &'static str {
        match self {
            RegimeLabel::Freezing => "freezing",
            RegimeLabel::Blockade => "blockade",
            RegimeLabel::AntiBlockade => "anti_blockade",
            RegimeLabel::Mixed => "mixed",
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const FREEZING_MAX: f64 = 0.1;
pub const BLOCKADE_BAND: f64 = 0.25;
pub const BLOCKADE_EE_MAX: f64 = 0.1;
pub const ANTI_BLOCKADE_MIN: f64 = 1.75;

/// Fixed thresholds: freezing if Π_gg ≤ 0.1; blockade if |Π_gg − 1| ≤ 0.25
/// and Π_ee ≤ 0.1; anti-blockade if Π_gg ≥ 1.75; mixed otherwise.
pub fn classify_regime(pi_gg: f64, pi_ee: f64) -> RegimeLabel {
    if pi_gg <= FREEZING_MAX {
        RegimeLabel::Freezing
    } else if (pi_gg - 1.0).abs() <= BLOCKADE_BAND && pi_ee <= BLOCKADE_EE_MAX {
        RegimeLabel::Blockade
    } else if pi_gg >= ANTI_BLOCKADE_MIN {
        RegimeLabel::AntiBlockade
    } else {
        RegimeLabel::Mixed
    }
}

/// Smallest population of `label` over the samples; 1 means perfectly trapped.
pub fn trapping_score(series: &TimeSeries, label: BasisLabel) -> Result<f64> {
    let pops = series.population_series(label)?;
    if pops.is_empty() {
        return Err(Error::InvalidParameter("empty time series".into()));
    }
    Ok(pops.into_iter().fold(f64::INFINITY, f64::min))
}
