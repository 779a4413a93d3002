use super::basis::{Basis, BasisLabel};
use super::state::StateVector;
use crate::error::{Error, Result};

/// One sampled point of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub state: StateVector,
    pub populations: Vec<f64>,
    pub norm: f64,
    pub entropy: Option<f64>,
}

impl Sample {
    pub fn new(time: f64, state: StateVector) -> Self {
        let populations = state.populations();
        let norm = state.norm();
        Sample { time, state, populations, norm, entropy: None }
    }
}

/// Sampled trajectory with strictly increasing times.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    basis: Basis,
    samples: Vec<Sample>,
}

impl TimeSeries {
    pub fn new(basis: Basis, samples: Vec<Sample>) -> Result<Self> {
        if samples.windows(2).any(|w| w[1].time <= w[0].time) {
            return Err(Error::InvalidParameter("sample times must increase".into()));
        }
        if let Some(s) = samples.iter().find(|s| s.state.basis() != basis) {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: s.state.dim() });
        }
        Ok(TimeSeries { basis, samples })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.time).collect()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Population of `label` at every sample.
    pub fn population_series(&self, label: BasisLabel) -> Result<Vec<f64>> {
        let idx = self.basis.index_of(label).ok_or_else(|| {
            Error::InvalidParameter(format!("label {label} is not in the {:?} basis", self.basis))
        })?;
        Ok(self.samples.iter().map(|s| s.populations[idx]).collect())
    }

    pub fn norms(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.norm).collect()
    }

    /// Largest |‖ψ(t)‖ − 1| over the trajectory.
    pub fn max_norm_drift(&self) -> f64 {
        self.samples.iter().map(|s| (s.norm - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn entropies(&self) -> Option<Vec<f64>> {
        self.samples.iter().map(|s| s.entropy).collect()
    }

    /// Attaches a per-sample scalar (for instance the entanglement entropy).
    pub fn with_entropy<F>(mut self, f: F) -> Result<Self>
    where
        F: Fn(&StateVector) -> Result<f64>,
    {
        for s in &mut self.samples {
            s.entropy = Some(f(&s.state)?);
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_monotone_times() {
        let s = StateVector::basis_state(Basis::Single, BasisLabel::G).unwrap();
        let samples = vec![Sample::new(0.0, s.clone()), Sample::new(0.0, s)];
        assert!(TimeSeries::new(Basis::Single, samples).is_err());
    }

    #[test]
    fn population_lookup() {
        let s = StateVector::basis_state(Basis::Pair, BasisLabel::EE).unwrap();
        let ts = TimeSeries::new(Basis::Pair, vec![Sample::new(0.0, s.clone()), Sample::new(1.0, s)]).unwrap();
        assert_eq!(ts.population_series(BasisLabel::EE).unwrap(), vec![1.0, 1.0]);
        assert!(ts.population_series(BasisLabel::Plus).is_err());
        assert_eq!(ts.max_norm_drift(), 0.0);
    }
}
