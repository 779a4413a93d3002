use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of atoms in the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomCount {
    One,
    Two,
}

impl AtomCount {
    pub fn from_count(n: usize) -> Result<Self> {
        match n {
            1 => Ok(AtomCount::One),
            2 => Ok(AtomCount::Two),
            _ => Err(Error::InvalidParameter(format!("unsupported atom count {n}"))),
        }
    }

    pub fn count(self) -> usize {
        match self {
            AtomCount::One => 1,
            AtomCount::Two => 2,
        }
    }

    /// The full product basis for this many atoms.
    pub fn full_basis(self) -> Basis {
        match self {
            AtomCount::One => Basis::Single,
            AtomCount::Two => Basis::Pair,
        }
    }
}

/// Ordered computational bases.
///
/// * `Single`: (g, e)
/// * `Pair`: (gg, ge, eg, ee), first letter is atom A
/// * `Symmetric`: (gg, +, ee) with |+⟩ = (|eg⟩ + |ge⟩)/√2
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Single,
    Pair,
    Symmetric,
}

impl Basis {
    pub fn dim(self) -> usize {
        match self {
            Basis::Single => 2,
            Basis::Pair => 4,
            Basis::Symmetric => 3,
        }
    }

    pub fn labels(self) -> &'static [BasisLabel] {
        use BasisLabel::*;
        match self {
            Basis::Single => &[G, E],
            Basis::Pair => &[GG, GE, EG, EE],
            Basis::Symmetric => &[GG, Plus, EE],
        }
    }

    pub fn atoms(self) -> AtomCount {
        match self {
            Basis::Single => AtomCount::One,
            Basis::Pair | Basis::Symmetric => AtomCount::Two,
        }
    }

    /// Position of `label` in this basis, if it is one of its elements.
    pub fn index_of(self, label: BasisLabel) -> Option<usize> {
        self.labels().iter().position(|&l| l == label)
    }
}

/// Labels of basis states. `e` is the Rydberg state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisLabel {
    G,
    E,
    GG,
    GE,
    EG,
    EE,
    Plus,
}

impl BasisLabel {
    pub fn name(self) -> &'static str {
        match self {
            BasisLabel::G => "g",
            BasisLabel::E => "e",
            BasisLabel::GG => "gg",
            BasisLabel::GE => "ge",
            BasisLabel::EG => "eg",
            BasisLabel::EE => "ee",
            BasisLabel::Plus => "plus",
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(BasisLabel::G),
            "e" => Ok(BasisLabel::E),
            "gg" => Ok(BasisLabel::GG),
            "ge" => Ok(BasisLabel::GE),
            "eg" => Ok(BasisLabel::EG),
            "ee" => Ok(BasisLabel::EE),
            "plus" | "+" => Ok(BasisLabel::Plus),
            _ => Err(Error::InvalidParameter(format!("unknown basis label '{s}'"))),
        }
    }
}
