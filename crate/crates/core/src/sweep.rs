//! One- and two-dimensional parameter sweeps of the Floquet spectrum.
//!
//! Every grid point is independent: monodromy, decomposition, IPR per initial
//! state, mode characters and regime label. Points are evaluated in parallel
//! and assembled by grid index, so the result does not depend on scheduling.
//! One-dimensional sweeps additionally carry quasi-energies in tracked branch
//! order; two-dimensional maps report them sorted.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{
    floquet_decompose_with, ipr, locate_crossing, signed_gap, track_modes, FloquetDecomposition,
    DEFAULT_DEGENERACY_TOL,
};
use crate::io::fmt_num;
use crate::model::{AtomCount, Basis, BasisLabel, DriveParams, NamedState, StateVector};
use crate::observables::{classify_regime, RegimeLabel};
use crate::propagate::{monodromy_in, IntegratorConfig};

/// Largest number of grid points accepted by [`run_sweep`].
pub const MAX_POINTS: usize = 10_000_000;

/// Fraction of failed points above which the whole sweep fails.
pub const MAX_FAILED_FRACTION: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Delta0,
    /// α = δ/ω, varied through δ at fixed ω.
    Alpha,
    V0,
    Omega,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Delta0 => "delta0",
            SweepParam::Alpha => "alpha",
            SweepParam::V0 => "v0",
            SweepParam::Omega => "omega",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "delta0" => Ok(SweepParam::Delta0),
            "alpha" => Ok(SweepParam::Alpha),
            "v0" => Ok(SweepParam::V0),
            "omega" => Ok(SweepParam::Omega),
            other => Err(Error::InvalidParameter(format!("unknown sweep parameter '{other}'"))),
        }
    }
}

/// A named grid of parameter values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl SweepAxis {
    /// `count` equally spaced values from `start` to `stop` inclusive.
    pub fn linspace(param: SweepParam, start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter(format!("axis {param} needs at least 2 points")));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidParameter(format!("axis {param} bounds must be finite")));
        }
        let step = (stop - start) / (count - 1) as f64;
        let mut values: Vec<f64> = (0..count).map(|i| start + i as f64 * step).collect();
        values[count - 1] = stop;
        Ok(SweepAxis { param, values })
    }

    pub fn from_values(param: SweepParam, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter(format!("axis {param} needs at least 2 points")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("axis {param} has non-finite values")));
        }
        Ok(SweepAxis { param, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    /// Parses `name=start:stop:count`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("axis '{s}' is not of the form name=start:stop:count"));
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        SweepAxis::linspace(name.parse()?, start, stop, count)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    #[default]
    Full,
    /// (gg, +, ee); two atoms only.
    Symmetric,
}

impl BasisChoice {
    pub fn resolve(self, atoms: AtomCount) -> Result<Basis> {
        match (self, atoms) {
            (BasisChoice::Full, a) => Ok(a.full_basis()),
            (BasisChoice::Symmetric, AtomCount::Two) => Ok(Basis::Symmetric),
            (BasisChoice::Symmetric, AtomCount::One) => {
                Err(Error::InvalidParameter("the symmetric basis needs two atoms".into()))
            }
        }
    }
}

impl FromStr for BasisChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(BasisChoice::Full),
            "symmetric" => Ok(BasisChoice::Symmetric),
            other => Err(Error::InvalidParameter(format!("unknown basis '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub atoms: AtomCount,
    pub basis: BasisChoice,
    pub initial_states: Vec<NamedState>,
    pub integrator: IntegratorConfig,
    pub degeneracy_tol: f64,
    /// Insert the exact crossing points of tracked branches into 1D sweeps.
    pub refine_crossings: bool,
}

impl SweepConfig {
    pub fn new(atoms: AtomCount, initial_states: Vec<NamedState>) -> Self {
        SweepConfig {
            atoms,
            basis: BasisChoice::Full,
            initial_states,
            integrator: IntegratorConfig::default(),
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
            refine_crossings: false,
        }
    }

    pub fn with_basis(mut self, basis: BasisChoice) -> Self {
        self.basis = basis;
        self
    }

    pub fn with_integrator(mut self, integrator: IntegratorConfig) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn with_refined_crossings(mut self, refine: bool) -> Self {
        self.refine_crossings = refine;
        self
    }

    pub fn with_degeneracy_tol(mut self, tol: f64) -> Self {
        self.degeneracy_tol = tol;
        self
    }
}

/// Observables at one successful grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    /// Folded quasi-energies, in branch order.
    pub quasi_energies: Vec<f64>,
    /// Π per initial state, in configuration order.
    pub ipr: Vec<f64>,
    /// `characters[s][b]` = |⟨ψ_s|φ_b⟩|² for initial state s and branch b.
    pub characters: Vec<Vec<f64>>,
    /// Smallest quasi-energy separation on the circle of period ω.
    pub min_gap: f64,
    /// Two atoms only.
    pub regime: Option<RegimeLabel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Value of each axis, in axis order.
    pub coords: Vec<f64>,
    pub params: DriveParams,
    /// True for points inserted at a located branch crossing.
    pub refined: bool,
    pub outcome: std::result::Result<PointRecord, String>,
}

impl SweepPoint {
    pub fn record(&self) -> Option<&PointRecord> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub base: DriveParams,
    pub axes: Vec<SweepAxis>,
    pub config: SweepConfig,
    pub basis: Basis,
    /// Row-major over the axes (last axis fastest), refined points in place.
    pub points: Vec<SweepPoint>,
    pub elapsed_seconds: f64,
    pub version: String,
}

/// Parameters at the given axis values. ω is applied before α so that α
/// sweeps at a swept ω keep δ = αω consistent.
pub fn params_at(base: &DriveParams, axes: &[SweepParam], coords: &[f64]) -> Result<DriveParams> {
    let mut p = *base;
    for (&param, &x) in axes.iter().zip(coords) {
        if param == SweepParam::Omega {
            p.omega = x;
        }
    }
    for (&param, &x) in axes.iter().zip(coords) {
        match param {
            SweepParam::Delta0 => p.delta0 = x,
            SweepParam::V0 => p.v0 = x,
            SweepParam::Alpha => p.delta_mod = x * p.omega,
            SweepParam::Omega => {}
        }
    }
    p.validate()?;
    Ok(p)
}

fn decompose_at(params: &DriveParams, basis: Basis, cfg: &SweepConfig) -> Result<FloquetDecomposition> {
    let u = monodromy_in(params, basis, &cfg.integrator)?;
    floquet_decompose_with(&u, params.omega, cfg.degeneracy_tol)
}

fn record_from(
    dec: &FloquetDecomposition,
    order: &[usize],
    states: &[StateVector],
    regime_states: Option<&(StateVector, StateVector)>,
) -> Result<PointRecord> {
    let q = dec.quasi_energies();
    let quasi_energies = order.iter().map(|&k| q[k]).collect();
    let ipr_values = states.iter().map(|s| ipr(s, dec)).collect::<Result<Vec<_>>>()?;
    let characters = states
        .iter()
        .map(|s| order.iter().map(|&k| dec.modes()[k].fidelity(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let regime = match regime_states {
        Some((gg, ee)) => Some(classify_regime(ipr(gg, dec)?, ipr(ee, dec)?)),
        None => None,
    };
    Ok(PointRecord { quasi_energies, ipr: ipr_values, characters, min_gap: dec.min_quasi_energy_gap(), regime })
}

/// Runs the sweep. Failed points are recorded in place; the sweep itself
/// fails only when more than 1% of the points fail.
pub fn run_sweep(base: &DriveParams, axes: &[SweepAxis], cfg: &SweepConfig) -> Result<SweepResult> {
    let start = Instant::now();
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::InvalidParameter(format!("a sweep needs 1 or 2 axes, got {}", axes.len())));
    }
    if axes.len() == 2 && axes[0].param == axes[1].param {
        return Err(Error::InvalidParameter(format!("axis {} appears twice", axes[0].param)));
    }
    for ax in axes {
        if ax.len() < 2 {
            return Err(Error::InvalidParameter(format!("axis {} needs at least 2 points", ax.param)));
        }
    }
    let total: usize = axes.iter().map(SweepAxis::len).product();
    if total > MAX_POINTS {
        return Err(Error::InvalidParameter(format!("{total} grid points exceed {MAX_POINTS}")));
    }
    base.validate()?;
    if cfg.initial_states.is_empty() {
        return Err(Error::InvalidParameter("no initial states requested".into()));
    }
    let basis = cfg.basis.resolve(cfg.atoms)?;
    let states = cfg.initial_states.iter().map(|s| initial_in(*s, basis)).collect::<Result<Vec<_>>>()?;
    let regime_states = match cfg.atoms {
        AtomCount::Two => Some((
            StateVector::basis_state(basis, BasisLabel::GG)?,
            StateVector::basis_state(basis, BasisLabel::EE)?,
        )),
        AtomCount::One => None,
    };
    let params_of_axes: Vec<SweepParam> = axes.iter().map(|a| a.param).collect();
    let coords: Vec<Vec<f64>> = match axes {
        [a] => a.values.iter().map(|&x| vec![x]).collect(),
        [a, b] => a.values.iter().flat_map(|&x| b.values.iter().map(move |&y| vec![x, y])).collect(),
        _ => unreachable!(),
    };
    let one_d = axes.len() == 1;

    let evaluated: Vec<(DriveParams, std::result::Result<FloquetDecomposition, String>)> = coords
        .par_iter()
        .map(|c| match params_at(base, &params_of_axes, c) {
            Ok(p) => (p, decompose_at(&p, basis, cfg).map_err(|e| e.to_string())),
            Err(e) => (*base, Err(e.to_string())),
        })
        .collect();

    let failed = evaluated.iter().filter(|e| e.1.is_err()).count();
    if failed as f64 > MAX_FAILED_FRACTION * total as f64 {
        return Err(Error::SweepFailed { failed, total });
    }

    let dim = basis.dim();
    let identity: Vec<usize> = (0..dim).collect();
    let mut orders: Vec<Vec<usize>> = vec![identity.clone(); total];
    if one_d {
        let mut prev: Option<usize> = None;
        for i in 0..total {
            let Ok(cur) = &evaluated[i].1 else { continue };
            if let Some(j) = prev {
                let before = evaluated[j].1.as_ref().unwrap();
                let perm = track_modes(before, cur)?.permutation;
                orders[i] = orders[j].iter().map(|&k| perm[k]).collect();
            }
            prev = Some(i);
        }
    }

    let mut points: Vec<SweepPoint> = Vec::with_capacity(total);
    for (i, (params, dec)) in evaluated.iter().enumerate() {
        let outcome = match dec {
            Ok(d) => record_from(d, &orders[i], &states, regime_states.as_ref()).map_err(|e| e.to_string()),
            Err(msg) => Err(msg.clone()),
        };
        points.push(SweepPoint { coords: coords[i].clone(), params: *params, refined: false, outcome });
    }

    if one_d && cfg.refine_crossings {
        let refined = refine_crossings(base, axes[0].param, &coords, &evaluated, &orders, basis, cfg, &states, regime_states.as_ref());
        let mut inserted = 0;
        for (after, extra) in refined {
            let at = after + 1 + inserted;
            inserted += extra.len();
            points.splice(at..at, extra);
        }
    }

    Ok(SweepResult {
        base: *base,
        axes: axes.to_vec(),
        config: cfg.clone(),
        basis,
        points,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn initial_in(state: NamedState, basis: Basis) -> Result<StateVector> {
    if basis == Basis::Symmetric && matches!(state, NamedState::GE | NamedState::EG) {
        return Err(Error::InvalidParameter(format!("state '{}' is not symmetric", state.token())));
    }
    state.state(basis)
}

/// Crossing points of tracked branches between neighbouring grid points,
/// grouped by the index of the left neighbour.
#[allow(clippy::too_many_arguments)]
fn refine_crossings(
    base: &DriveParams,
    param: SweepParam,
    coords: &[Vec<f64>],
    evaluated: &[(DriveParams, std::result::Result<FloquetDecomposition, String>)],
    orders: &[Vec<usize>],
    basis: Basis,
    cfg: &SweepConfig,
    states: &[StateVector],
    regime_states: Option<&(StateVector, StateVector)>,
) -> Vec<(usize, Vec<SweepPoint>)> {
    let dim = basis.dim();
    let mut candidates = Vec::new();
    for i in 0..coords.len() - 1 {
        let (Ok(d0), Ok(d1)) = (&evaluated[i].1, &evaluated[i + 1].1) else { continue };
        let quarter = 0.25 * d0.omega();
        for a in 0..dim {
            for b in a + 1..dim {
                let g0 = signed_gap(d0, orders[i][a], orders[i][b]);
                let g1 = signed_gap(d1, orders[i + 1][a], orders[i + 1][b]);
                if g0 * g1 < 0.0 && g0.abs() < quarter && g1.abs() < quarter {
                    candidates.push((i, a, b));
                }
            }
        }
    }
    let axis = [param];
    let found: Vec<Option<(usize, SweepPoint)>> = candidates
        .par_iter()
        .map(|&(i, a, b)| {
            let d0 = evaluated[i].1.as_ref().unwrap();
            let decompose = |x: f64| decompose_at(&params_at(base, &axis, &[x])?, basis, cfg);
            let (lo, hi) = (coords[i][0], coords[i + 1][0]);
            let crossing = locate_crossing(decompose, lo, hi, (orders[i][a], orders[i][b]), 1e-13, 1e-13 * (hi - lo).abs().max(1.0));
            let crossing = match crossing {
                Ok(c) => c,
                Err(e) => {
                    log::warn!("crossing refinement in [{lo}, {hi}] failed: {e}");
                    return None;
                }
            };
            let perm = track_modes(d0, &crossing.decomposition).ok()?.permutation;
            let order: Vec<usize> = orders[i].iter().map(|&k| perm[k]).collect();
            let params = params_at(base, &axis, &[crossing.location]).ok()?;
            let outcome = record_from(&crossing.decomposition, &order, states, regime_states).map_err(|e| e.to_string());
            Some((i, SweepPoint { coords: vec![crossing.location], params, refined: true, outcome }))
        })
        .collect();
    let mut grouped: Vec<(usize, Vec<SweepPoint>)> = Vec::new();
    for (i, point) in found.into_iter().flatten() {
        match grouped.last_mut() {
            Some((j, pts)) if *j == i => pts.push(point),
            _ => grouped.push((i, vec![point])),
        }
    }
    for (_, pts) in &mut grouped {
        pts.sort_by(|p, q| p.coords[0].total_cmp(&q.coords[0]));
        pts.dedup_by(|p, q| p.coords[0] == q.coords[0]);
    }
    grouped
}

impl SweepResult {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(SweepAxis::len).collect()
    }

    pub fn failed_count(&self) -> usize {
        self.points.iter().filter(|p| p.outcome.is_err()).count()
    }

    fn state_index(&self, state: NamedState) -> Result<usize> {
        self.config
            .initial_states
            .iter()
            .position(|&s| s == state)
            .ok_or_else(|| Error::InvalidParameter(format!("state '{}' was not swept", state.token())))
    }

    /// Values of the first axis (1D sweeps: one per row).
    pub fn axis_column(&self, axis: usize) -> Vec<f64> {
        self.points.iter().map(|p| p.coords[axis]).collect()
    }

    /// Π for `state` per row; NaN at failed points.
    pub fn ipr_column(&self, state: NamedState) -> Result<Vec<f64>> {
        let s = self.state_index(state)?;
        Ok(self.points.iter().map(|p| p.record().map_or(f64::NAN, |r| r.ipr[s])).collect())
    }

    /// Largest mode character of `state` per row.
    pub fn max_character_column(&self, state: NamedState) -> Result<Vec<f64>> {
        let s = self.state_index(state)?;
        Ok(self
            .points
            .iter()
            .map(|p| p.record().map_or(f64::NAN, |r| r.characters[s].iter().copied().fold(0.0, f64::max)))
            .collect())
    }

    /// Column names, in CSV order.
    pub fn header(&self) -> Vec<String> {
        let dim = self.basis.dim();
        let mut h: Vec<String> = self.axes.iter().map(|a| a.param.name().to_string()).collect();
        h.extend((1..=dim).map(|k| format!("eps_{k}")));
        h.extend(self.config.initial_states.iter().map(|s| format!("ipr_{}", s.token())));
        for s in &self.config.initial_states {
            h.extend((1..=dim).map(|k| format!("p_{}_{k}", s.token())));
        }
        h.extend(["min_gap", "regime", "refined", "status"].map(String::from));
        h
    }

    /// One line per row; numbers in 17-significant-digit scientific notation.
    pub fn to_csv(&self) -> String {
        let dim = self.basis.dim();
        let n_states = self.config.initial_states.len();
        let mut out = self.header().join(",");
        out.push('\n');
        for p in &self.points {
            let mut row: Vec<String> = p.coords.iter().map(|&x| fmt_num(x)).collect();
            match &p.outcome {
                Ok(r) => {
                    row.extend(r.quasi_energies.iter().map(|&x| fmt_num(x)));
                    row.extend(r.ipr.iter().map(|&x| fmt_num(x)));
                    for c in &r.characters {
                        row.extend(c.iter().map(|&x| fmt_num(x)));
                    }
                    row.push(fmt_num(r.min_gap));
                    row.push(r.regime.map_or("none", RegimeLabel::name).to_string());
                }
                Err(_) => {
                    row.extend(std::iter::repeat_n(fmt_num(f64::NAN), dim + n_states + n_states * dim + 1));
                    row.push("none".into());
                }
            }
            row.push(if p.refined { "1" } else { "0" }.into());
            row.push(if p.outcome.is_ok() { "ok" } else { "failed" }.into());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Sidecar metadata: parameters, configuration, grid, failures, timing.
    pub fn metadata(&self) -> serde_json::Value {
        let failures: Vec<serde_json::Value> = self
            .points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                p.outcome.as_ref().err().map(|e| serde_json::json!({ "row": i, "coords": p.coords, "error": e }))
            })
            .collect();
        serde_json::json!({
            "kind": "sweep",
            "version": self.version,
            "base": self.base,
            "axes": self.axes.iter().map(|a| serde_json::json!({
                "param": a.param,
                "start": a.values.first(),
                "stop": a.values.last(),
                "count": a.len(),
            })).collect::<Vec<_>>(),
            "config": self.config,
            "basis": self.basis,
            "columns": self.header(),
            "rows": self.points.len(),
            "refined_rows": self.points.iter().filter(|p| p.refined).count(),
            "failures": failures,
            "elapsed_seconds": self.elapsed_seconds,
        })
    }
}

/// A grid point singled out by one of the extremum finders.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub index: usize,
    pub location: f64,
    pub value: f64,
}

/// Interior points not larger than either neighbour and smaller than at
/// least one. NaN entries never qualify.
pub fn local_minima(xs: &[f64], ys: &[f64]) -> Vec<Extremum> {
    (1..ys.len().saturating_sub(1))
        .filter(|&i| {
            let (a, y, b) = (ys[i - 1], ys[i], ys[i + 1]);
            y <= a && y <= b && (y < a || y < b)
        })
        .map(|i| Extremum { index: i, location: xs[i], value: ys[i] })
        .collect()
}

/// Mirror of [`local_minima`].
pub fn local_maxima(xs: &[f64], ys: &[f64]) -> Vec<Extremum> {
    let neg: Vec<f64> = ys.iter().map(|y| -y).collect();
    local_minima(xs, &neg).into_iter().map(|e| Extremum { value: -e.value, ..e }).collect()
}

/// Peaks as maximal runs of consecutive points with value ≥ `threshold`
/// that span at least `min_width` points; each run reports its maximum.
pub fn peaks_above(xs: &[f64], ys: &[f64], threshold: f64, min_width: usize) -> Vec<Extremum> {
    let mut peaks = Vec::new();
    let mut i = 0;
    while i < ys.len() {
        if ys[i] >= threshold {
            let start = i;
            while i < ys.len() && ys[i] >= threshold {
                i += 1;
            }
            if i - start >= min_width.max(1) {
                let best = (start..i).max_by(|&a, &b| ys[a].total_cmp(&ys[b]).then(b.cmp(&a))).unwrap();
                peaks.push(Extremum { index: best, location: xs[best], value: ys[best] });
            }
        } else {
            i += 1;
        }
    }
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_zero;
    use proptest::prelude::*;

    #[test]
    fn axis_parsing() {
        let a: SweepAxis = "alpha=0:10:11".parse().unwrap();
        assert_eq!(a.param, SweepParam::Alpha);
        assert_eq!(a.values.len(), 11);
        assert_eq!(a.values[3], 3.0);
        assert_eq!(a.values[10], 10.0);
        assert!("alpha=0:10:1".parse::<SweepAxis>().is_err());
        assert!("beta=0:1:3".parse::<SweepAxis>().is_err());
        assert!("alpha=0:1".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn omega_applies_before_alpha() {
        let axes = [SweepParam::Alpha, SweepParam::Omega];
        let p = params_at(&DriveParams::default(), &axes, &[2.0, 30.0]).unwrap();
        assert_eq!(p.omega, 30.0);
        assert_eq!(p.delta_mod, 60.0);
    }

    #[test]
    fn rejects_degenerate_grids() {
        let base = DriveParams::default();
        let cfg = SweepConfig::new(AtomCount::One, vec![NamedState::G]);
        let axis = SweepAxis { param: SweepParam::Alpha, values: vec![1.0] };
        assert!(run_sweep(&base, &[axis], &cfg).is_err());
        let axis = SweepAxis::linspace(SweepParam::Alpha, 0.0, 1.0, 3).unwrap();
        assert!(run_sweep(&base, &[], &cfg).is_err());
        let bad = SweepConfig::new(AtomCount::One, vec![NamedState::GG]);
        assert!(run_sweep(&base, &[axis], &bad).is_err());
    }

    #[test]
    fn single_atom_alpha_sweep_has_dip_at_bessel_zero() {
        let base = DriveParams::default();
        let cfg = SweepConfig::new(AtomCount::One, vec![NamedState::G]).with_refined_crossings(true);
        let axis = SweepAxis::linspace(SweepParam::Alpha, 2.0, 2.8, 9).unwrap();
        let res = run_sweep(&base, &[axis], &cfg).unwrap();
        assert_eq!(res.failed_count(), 0);
        let refined: Vec<&SweepPoint> = res.points.iter().filter(|p| p.refined).collect();
        assert_eq!(refined.len(), 1);
        let z = bessel_zero(0, 1).unwrap();
        assert!((refined[0].coords[0] - z).abs() < 0.02);
        assert!(refined[0].record().unwrap().ipr[0] < 0.02);
        let xs = res.axis_column(0);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn csv_layout_and_determinism() {
        let base = DriveParams::default().with_v0(3.0);
        let cfg = SweepConfig::new(AtomCount::Two, vec![NamedState::GG, NamedState::Bell]).with_basis(BasisChoice::Symmetric);
        let axes = [
            SweepAxis::linspace(SweepParam::V0, 0.0, 4.0, 3).unwrap(),
            SweepAxis::linspace(SweepParam::Alpha, 0.5, 1.5, 2).unwrap(),
        ];
        let a = run_sweep(&base, &axes, &cfg).unwrap();
        let b = run_sweep(&base, &axes, &cfg).unwrap();
        let csv = a.to_csv();
        assert_eq!(csv, b.to_csv());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(
            lines[0],
            "v0,alpha,eps_1,eps_2,eps_3,ipr_gg,ipr_bell,p_gg_1,p_gg_2,p_gg_3,p_bell_1,p_bell_2,p_bell_3,min_gap,regime,refined,status"
        );
        assert!(lines[1].starts_with("0.0000000000000000e0,5.0000000000000000e-1,"));
        assert!(lines[2].starts_with("0.0000000000000000e0,1.5000000000000000e0,"));
        for l in &lines[1..] {
            assert_eq!(l.split(',').count(), 17);
            assert!(l.ends_with(",0,ok"));
        }
        let meta = a.metadata();
        assert_eq!(meta["rows"], 6);
        assert_eq!(meta["axes"][0]["param"], "v0");
    }

    #[test]
    fn extremum_finders() {
        let xs: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let ys = [3.0, 1.0, 2.0, 2.0, 0.5, 0.5, 4.0, 0.0, 1.0];
        let mins: Vec<usize> = local_minima(&xs, &ys).iter().map(|e| e.index).collect();
        assert_eq!(mins, vec![1, 4, 5, 7]);
        let maxs: Vec<usize> = local_maxima(&xs, &ys).iter().map(|e| e.index).collect();
        assert_eq!(maxs, vec![2, 3, 6]);
        let peaks = peaks_above(&xs, &ys, 1.5, 2);
        assert_eq!(peaks.len(), 1);
        assert_eq!(peaks[0].index, 2);
        assert_eq!(peaks_above(&xs, &ys, 1.5, 1).len(), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn evaluation_order_does_not_matter(seed in 0u64..1000) {
            let base = DriveParams::default().with_v0(2.0);
            let cfg = SweepConfig::new(AtomCount::Two, vec![NamedState::GG]).with_basis(BasisChoice::Symmetric);
            let mut values: Vec<f64> = (0..6).map(|i| 0.3 + 0.7 * i as f64).collect();
            let forward = run_sweep(&base, &[SweepAxis::from_values(SweepParam::Alpha, values.clone()).unwrap()], &cfg).unwrap();
            // rotate the grid, evaluate, and compare pointwise sorted data
            let r = (seed % 6) as usize;
            values.rotate_left(r);
            let shuffled = run_sweep(&base, &[SweepAxis::from_values(SweepParam::Alpha, values).unwrap()], &cfg).unwrap();
            for (i, p) in forward.points.iter().enumerate() {
                let q = &shuffled.points[(i + 6 - r) % 6];
                prop_assert_eq!(p.coords[0], q.coords[0]);
                prop_assert_eq!(p.record().unwrap().ipr[0], q.record().unwrap().ipr[0]);
                let mut a = p.record().unwrap().quasi_energies.clone();
                let mut b = q.record().unwrap().quasi_energies.clone();
                a.sort_by(f64::total_cmp);
                b.sort_by(f64::total_cmp);
                prop_assert_eq!(a, b);
            }
        }
    }
}
