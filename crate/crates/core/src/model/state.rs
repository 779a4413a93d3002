use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{Basis, BasisLabel};
use super::operator::symmetric_isometry;
use crate::error::{Error, Result};

type C64 = Complex64;

const NORM_TOL: f64 = 1e-9;

/// Pure state over one of the fixed bases.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Builds a state from explicit amplitudes; they must already be normalized.
    pub fn new(basis: Basis, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: amplitudes.len() });
        }
        let state = StateVector { basis, amplitudes: DVector::from_vec(amplitudes) };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!("state norm {norm} is not 1")));
        }
        Ok(state)
    }

    /// Builds a state from arbitrary nonzero amplitudes and rescales to unit norm.
    pub fn normalized(basis: Basis, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: amplitudes.len() });
        }
        let v = DVector::from_vec(amplitudes);
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero vector".into()));
        }
        Ok(StateVector { basis, amplitudes: v.unscale(n) })
    }

    pub(crate) fn from_parts(basis: Basis, amplitudes: DVector<C64>) -> Self {
        StateVector { basis, amplitudes }
    }

    /// The basis vector for `label`. |+⟩ is also available in the pair basis.
    pub fn basis_state(basis: Basis, label: BasisLabel) -> Result<Self> {
        let mut amps = vec![C64::new(0.0, 0.0); basis.dim()];
        match (basis.index_of(label), basis, label) {
            (Some(i), _, _) => amps[i] = C64::new(1.0, 0.0),
            (None, Basis::Pair, BasisLabel::Plus) => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                amps[1] = C64::new(r, 0.0);
                amps[2] = C64::new(r, 0.0);
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "label {label} is not available in the {basis:?} basis"
                )))
            }
        }
        Ok(StateVector { basis, amplitudes: DVector::from_vec(amps) })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> C64 {
        self.amplitudes[i]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// |amplitude|² per basis element.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn population(&self, label: BasisLabel) -> Option<f64> {
        self.basis.index_of(label).map(|i| self.amplitudes[i].norm_sqr())
    }

    /// Projects a pair-basis state onto span{|gg⟩, |+⟩, |ee⟩}.
    ///
    /// Returns the renormalized projection together with the weight that was
    /// on the antisymmetric state (|eg⟩ − |ge⟩)/√2.
    pub fn to_symmetric(&self) -> Result<(StateVector, f64)> {
        if self.basis != Basis::Pair {
            return Err(Error::DimensionMismatch { expected: 4, found: self.dim() });
        }
        let s = symmetric_isometry();
        let proj = s.adjoint() * &self.amplitudes;
        let kept = proj.norm_squared() / self.amplitudes.norm_squared();
        let leakage = (1.0 - kept).max(0.0);
        if leakage > 1.0 - 1e-12 {
            return Err(Error::NoSymmetricContent { leakage });
        }
        let n = proj.norm();
        Ok((StateVector { basis: Basis::Symmetric, amplitudes: proj.unscale(n) }, leakage))
    }

    /// Embeds a symmetric-basis state into the pair basis.
    pub fn to_pair(&self) -> Result<StateVector> {
        match self.basis {
            Basis::Pair => Ok(self.clone()),
            Basis::Symmetric => {
                let s = symmetric_isometry();
                Ok(StateVector { basis: Basis::Pair, amplitudes: s * &self.amplitudes })
            }
            Basis::Single => Err(Error::DimensionMismatch { expected: 3, found: 2 }),
        }
    }

    /// Expresses the state in `target`, which must describe the same atoms.
    pub fn in_basis(&self, target: Basis) -> Result<StateVector> {
        match (self.basis, target) {
            (a, b) if a == b => Ok(self.clone()),
            (Basis::Symmetric, Basis::Pair) => self.to_pair(),
            (Basis::Pair, Basis::Symmetric) => self.to_symmetric().map(|(s, _)| s),
            _ => Err(Error::DimensionMismatch { expected: target.dim(), found: self.dim() }),
        }
    }
}

/// Initial states addressable by name, including the Bell state
/// |B⟩ = (|gg⟩ + |ee⟩)/√2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedState {
    G,
    E,
    GG,
    GE,
    EG,
    EE,
    Plus,
    Bell,
}

impl NamedState {
    pub const ALL: [NamedState; 8] = [
        NamedState::G,
        NamedState::E,
        NamedState::GG,
        NamedState::GE,
        NamedState::EG,
        NamedState::EE,
        NamedState::Plus,
        NamedState::Bell,
    ];

    pub fn token(self) -> &'static str {
        match self {
            NamedState::G => "g",
            NamedState::E => "e",
            NamedState::GG => "gg",
            NamedState::GE => "ge",
            NamedState::EG => "eg",
            NamedState::EE => "ee",
            NamedState::Plus => "plus",
            NamedState::Bell => "bell",
        }
    }

    pub fn atoms(self) -> usize {
        match self {
            NamedState::G | NamedState::E => 1,
            _ => 2,
        }
    }

    /// The basis label this state coincides with, if any.
    pub fn label(self) -> Option<BasisLabel> {
        match self {
            NamedState::G => Some(BasisLabel::G),
            NamedState::E => Some(BasisLabel::E),
            NamedState::GG => Some(BasisLabel::GG),
            NamedState::GE => Some(BasisLabel::GE),
            NamedState::EG => Some(BasisLabel::EG),
            NamedState::EE => Some(BasisLabel::EE),
            NamedState::Plus => Some(BasisLabel::Plus),
            NamedState::Bell => None,
        }
    }

    pub fn state(self, basis: Basis) -> Result<StateVector> {
        if basis.atoms().count() != self.atoms() {
            return Err(Error::InvalidParameter(format!(
                "state '{}' does not live in the {basis:?} basis",
                self.token()
            )));
        }
        match self.label() {
            Some(label) => StateVector::basis_state(basis, label),
            None => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                let mut amps = vec![C64::new(0.0, 0.0); basis.dim()];
                amps[0] = C64::new(r, 0.0);
                amps[basis.dim() - 1] = C64::new(r, 0.0);
                StateVector::new(basis, amps)
            }
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedState::ALL
            .iter()
            .copied()
            .find(|n| n.token() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown state token '{s}'")))
    }
}
