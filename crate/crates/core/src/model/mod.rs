//! Shared vocabulary: drive parameters, basis conventions, states, operators
//! and sampled trajectories.

mod basis;
mod operator;
mod params;
mod series;
mod state;

pub use basis::{AtomCount, Basis, BasisLabel};
pub use operator::{ops, symmetric_isometry, OperatorMatrix};
pub(crate) use operator::hermitian_exp;
#[cfg(test)]
pub(crate) use operator::max_abs;
pub use params::DriveParams;
pub use series::{Sample, TimeSeries};
pub use state::{NamedState, StateVector};
