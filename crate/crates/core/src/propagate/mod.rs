//! Time evolution under the lab, rotating or effective Hamiltonian and the
//! one-period monodromy operator U(T).

mod dop853;
mod magnus;
mod tableau;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{effective_hamiltonian, min_m_max, Generator};
use crate::model::{hermitian_exp, AtomCount, Basis, DriveParams, OperatorMatrix, Sample, StateVector, TimeSeries};
use crate::C64;

use dop853::Dop853;
use magnus::CommutatorFree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Dormand–Prince 8(5,3) with dense output.
    AdaptiveEmbeddedRk,
    /// Fourth-order commutator-free Magnus, fixed step `max_step`.
    FixedStepCommutatorFree,
}

/// Which Hamiltonian drives the evolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Lab,
    Rotating,
    Effective,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step. `None` means T/200.
    pub max_step: Option<f64>,
    /// Jacobi–Anger truncation for the rotating and effective frames.
    /// `None` means ⌈α⌉ + 15.
    pub m_max: Option<i32>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::AdaptiveEmbeddedRk,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: None,
            m_max: None,
        }
    }
}

impl IntegratorConfig {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = Some(max_step);
        self
    }

    /// Step cap for `params`; at most T/100 so the drive stays resolved.
    pub fn max_step_for(&self, params: &DriveParams) -> Result<f64> {
        let period = params.period();
        let step = self.max_step.unwrap_or(period / 200.0);
        if !(step > 0.0) || step > period / 100.0 * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "max_step = {step} must lie in (0, T/100 = {}]",
                period / 100.0
            )));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(step)
    }

    pub fn m_max_for(&self, params: &DriveParams) -> i32 {
        self.m_max.unwrap_or_else(|| params.default_m_max()).max(min_m_max(params))
    }
}

fn generator(params: &DriveParams, atoms: AtomCount, frame: Frame, cfg: &IntegratorConfig) -> Result<Generator> {
    Ok(match frame {
        Frame::Lab => Generator::lab(params, atoms),
        Frame::Rotating => Generator::rotating(params, atoms, cfg.m_max_for(params)),
        Frame::Effective => {
            Generator::Static(effective_hamiltonian(params, atoms, cfg.m_max_for(params))?.into_entries())
        }
    })
}

/// Evolves `y0` from `t0` to `t1` and calls `emit` at each requested time.
#[allow(clippy::too_many_arguments)]
fn evolve(
    gen: &Generator,
    params: &DriveParams,
    cfg: &IntegratorConfig,
    t0: f64,
    t1: f64,
    y0: DMatrix<C64>,
    samples: &[f64],
    mut emit: impl FnMut(f64, &DMatrix<C64>),
) -> Result<DMatrix<C64>> {
    let max_step = cfg.max_step_for(params)?;
    if let Generator::Static(h) = gen {
        for &t in samples {
            emit(t, &(hermitian_exp(h, t - t0) * &y0));
        }
        return Ok(hermitian_exp(h, t1 - t0) * y0);
    }
    match cfg.method {
        Method::AdaptiveEmbeddedRk => Dop853::new(gen, cfg.rel_tol, cfg.abs_tol, max_step).integrate(t0, t1, y0, samples, emit),
        Method::FixedStepCommutatorFree => {
            let stepper = CommutatorFree::new(gen, max_step);
            let mut t = t0;
            let mut y = y0;
            for &ts in samples {
                y = stepper.advance(t, ts, y);
                t = ts;
                emit(ts, &y);
            }
            Ok(stepper.advance(t, t1, y))
        }
    }
}

/// Sample grid 0, Δ, 2Δ, … up to `t_final`, with `t_final` always included.
pub fn sample_times(t_final: f64, sample_every: f64) -> Result<Vec<f64>> {
    if !(t_final > 0.0) || !(sample_every > 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need t_final > 0 and sample_every > 0 (got {t_final}, {sample_every})"
        )));
    }
    let n = (t_final / sample_every * (1.0 + 1e-12)).floor() as usize;
    let mut times: Vec<f64> = (0..=n).map(|k| k as f64 * sample_every).filter(|&t| t <= t_final).collect();
    match times.last() {
        Some(&last) if (t_final - last) <= 1e-12 * t_final => {
            *times.last_mut().unwrap() = t_final;
        }
        _ => times.push(t_final),
    }
    Ok(times)
}

/// Propagates `initial` from t = 0 and samples the trajectory every `sample_every`.
///
/// Symmetric-basis states are evolved in the pair basis and projected back.
/// The state is never renormalized; the sampled norm is a diagnostic.
pub fn propagate(
    initial: &StateVector,
    params: &DriveParams,
    frame: Frame,
    t_final: f64,
    sample_every: f64,
    cfg: &IntegratorConfig,
) -> Result<TimeSeries> {
    params.validate()?;
    if (initial.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("initial norm {} is not 1", initial.norm())));
    }
    let times = sample_times(t_final, sample_every)?;
    let basis = initial.basis();
    let atoms = basis.atoms();
    let full = initial.in_basis(atoms.full_basis())?;
    let gen = generator(params, atoms, frame, cfg)?;
    let y0 = DMatrix::from_column_slice(full.dim(), 1, full.amplitudes().as_slice());

    let mut samples = Vec::with_capacity(times.len());
    evolve(&gen, params, cfg, 0.0, t_final, y0, &times, |t, y| {
        let state = StateVector::from_parts(atoms.full_basis(), y.column(0).into_owned());
        let state = if basis == Basis::Symmetric {
            let s = crate::model::symmetric_isometry();
            StateVector::from_parts(Basis::Symmetric, s.adjoint() * state.amplitudes())
        } else {
            state
        };
        samples.push(Sample::new(t, state));
    })?;
    let drift = samples.last().map_or(0.0, |s| (s.norm - 1.0).abs());
    if drift > 1e-9 {
        log::warn!("norm drift {drift:.3e} at t = {t_final}");
    }
    TimeSeries::new(basis, samples)
}

/// U(t1, t0) in the full basis of `atoms`.
pub fn evolution_operator(
    params: &DriveParams,
    atoms: AtomCount,
    frame: Frame,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<OperatorMatrix> {
    params.validate()?;
    if t1 < t0 {
        return Err(Error::InvalidParameter(format!("t1 = {t1} precedes t0 = {t0}")));
    }
    let gen = generator(params, atoms, frame, cfg)?;
    let d = atoms.full_basis().dim();
    let u = evolve(&gen, params, cfg, t0, t1, DMatrix::identity(d, d), &[], |_, _| {})?;
    OperatorMatrix::new(atoms.full_basis(), u)
}

/// Lab-frame monodromy U(T) starting at t = 0.
pub fn monodromy(params: &DriveParams, atoms: AtomCount, cfg: &IntegratorConfig) -> Result<OperatorMatrix> {
    evolution_operator(params, atoms, Frame::Lab, 0.0, params.period(), cfg)
}

/// Monodromy expressed in `basis`; the symmetric form is S†U(T)S.
pub fn monodromy_in(params: &DriveParams, basis: Basis, cfg: &IntegratorConfig) -> Result<OperatorMatrix> {
    let u = monodromy(params, basis.atoms(), cfg)?;
    match basis {
        Basis::Symmetric => u.to_symmetric(),
        _ => Ok(u),
    }
}
