//! Figure bindings: the sweep or trajectory behind each published panel,
//! with its caption parameters as defaults.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bessel::bessel_zero;
use crate::error::{Error, Result};
use crate::io::{series_header, series_to_csv, Sidecar};
use crate::model::{AtomCount, Basis, DriveParams, NamedState};
use crate::observables::entanglement_entropy;
use crate::propagate::{propagate, Frame, IntegratorConfig};
use crate::sweep::{run_sweep, BasisChoice, SweepAxis, SweepConfig, SweepParam};

pub const FIGURE_IDS: [&str; 21] = [
    "1a", "1b", "1c", "1d", "1e", "1f", "2", "3a", "3b", "3c", "3d", "4a", "4b", "4c", "5", "6a", "6b", "7a", "7b", "8a",
    "8b",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FigureId(&'static str);

impl FigureId {
    pub fn all() -> impl Iterator<Item = FigureId> {
        FIGURE_IDS.iter().map(|s| FigureId(s))
    }

    pub fn as_str(self) -> &'static str {
        self.0
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().trim_start_matches("fig").to_ascii_lowercase();
        FIGURE_IDS
            .iter()
            .find(|id| **id == key)
            .map(|id| FigureId(id))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown figure id '{s}'")))
    }
}

/// One computation behind a figure.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Job {
    Sweep {
        /// File stem of the CSV.
        name: String,
        base: DriveParams,
        axes: Vec<SweepAxis>,
        config: SweepConfig,
    },
    Dynamics {
        name: String,
        base: DriveParams,
        initial: NamedState,
        t_final: f64,
        sample_every: f64,
        entropy: bool,
    },
}

impl Job {
    pub fn name(&self) -> &str {
        match self {
            Job::Sweep { name, .. } | Job::Dynamics { name, .. } => name,
        }
    }

    pub fn base(&self) -> &DriveParams {
        match self {
            Job::Sweep { base, .. } | Job::Dynamics { base, .. } => base,
        }
    }

    fn base_mut(&mut self) -> &mut DriveParams {
        match self {
            Job::Sweep { base, .. } | Job::Dynamics { base, .. } => base,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureBinding {
    pub id: FigureId,
    pub description: String,
    pub jobs: Vec<Job>,
    pub notes: Vec<String>,
}

/// Explicit parameter values that replace the caption defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Overrides {
    pub rabi: Option<f64>,
    pub delta0: Option<f64>,
    pub delta_mod: Option<f64>,
    pub omega: Option<f64>,
    pub v0: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, p: &mut DriveParams) {
        if let Some(x) = self.rabi {
            p.rabi = x;
        }
        if let Some(x) = self.delta0 {
            p.delta0 = x;
        }
        if let Some(x) = self.delta_mod {
            p.delta_mod = x;
        }
        if let Some(x) = self.omega {
            p.omega = x;
        }
        if let Some(x) = self.v0 {
            p.v0 = x;
        }
    }
}

fn params(delta0: f64, delta_mod: f64, omega: f64, v0: f64) -> DriveParams {
    DriveParams { rabi: 1.0, delta0, delta_mod, omega, v0 }
}

fn axis(param: SweepParam, start: f64, stop: f64, count: usize) -> SweepAxis {
    SweepAxis::linspace(param, start, stop, count).expect("static axis")
}

fn sweep(name: &str, base: DriveParams, axes: Vec<SweepAxis>, config: SweepConfig) -> Job {
    Job::Sweep { name: name.to_string(), base, axes, config }
}

fn dynamics(name: &str, base: DriveParams, initial: NamedState, t_final: f64, entropy: bool) -> Job {
    Job::Dynamics { name: name.to_string(), base, initial, t_final, sample_every: 0.01, entropy }
}

fn single_atom() -> SweepConfig {
    SweepConfig::new(AtomCount::One, vec![NamedState::G])
}

fn dimer(states: Vec<NamedState>) -> SweepConfig {
    SweepConfig::new(AtomCount::Two, states).with_basis(BasisChoice::Symmetric)
}

/// The binding for `id` with caption defaults.
pub fn binding(id: FigureId) -> FigureBinding {
    let mut notes = Vec::new();
    let (description, jobs): (&str, Vec<Job>) = match id.as_str() {
        "1a" | "1b" => (
            "single atom, quasi-energies and IPR of |g> versus detuning",
            vec![sweep(
                "fig1ab",
                params(0.0, 15.0, 8.0, 0.0),
                vec![axis(SweepParam::Delta0, 0.0, 20.0, 401)],
                single_atom(),
            )],
        ),
        "1c" | "1d" => {
            notes.push(
                "caption sets the static detuning to 8 while the text mentions 1; 8 = omega is used, \
                 consistent with n1 = 1 and the J1 zeros"
                    .to_string(),
            );
            (
                "single atom at the n1 = 1 resonance, quasi-energies and IPR of |g> versus alpha",
                vec![sweep(
                    "fig1cd",
                    params(8.0, 15.0, 8.0, 0.0),
                    vec![axis(SweepParam::Alpha, 0.0, 10.0, 501)],
                    single_atom().with_refined_crossings(true),
                )],
            )
        }
        "1e" | "1f" => (
            "single atom at the n1 = 0 resonance, quasi-energies and IPR of |g> versus alpha",
            vec![sweep(
                "fig1ef",
                params(0.0, 15.0, 8.0, 0.0),
                vec![axis(SweepParam::Alpha, 0.0, 10.0, 501)],
                single_atom().with_refined_crossings(true),
            )],
        ),
        "2" => (
            "single atom IPR of |g> over (detuning, alpha)",
            vec![sweep(
                "fig2",
                params(0.0, 15.0, 8.0, 0.0),
                vec![axis(SweepParam::Delta0, 0.0, 20.0, 201), axis(SweepParam::Alpha, 0.0, 10.0, 201)],
                single_atom(),
            )],
        ),
        "3a" => ("R1 dynamics from |gg>", vec![dynamics("fig3a", params(8.0, 15.0, 8.0, 10.0), NamedState::GG, 20.0, false)]),
        "3b" => ("R1 dynamics from |ee>", vec![dynamics("fig3b", params(8.0, 15.0, 8.0, 10.0), NamedState::EE, 20.0, false)]),
        "3c" => ("R2 dynamics from |gg>", vec![dynamics("fig3c", params(2.0, 15.0, 8.0, 10.0), NamedState::GG, 20.0, false)]),
        "3d" => ("R2 dynamics from |ee>", vec![dynamics("fig3d", params(2.0, 15.0, 8.0, 10.0), NamedState::EE, 20.0, false)]),
        "4a" | "4b" | "4c" => (
            "two atoms, quasi-energies and IPR of |gg> and |ee> versus detuning",
            vec![sweep(
                "fig4",
                params(0.0, 15.0, 8.0, 10.0),
                vec![axis(SweepParam::Delta0, 0.0, 20.0, 1001)],
                SweepConfig::new(AtomCount::Two, vec![NamedState::GG, NamedState::EE]),
            )],
        ),
        "5" => (
            "two atoms at the n1 = 0 resonance, spectrum and IPR versus alpha for several interactions",
            [0.0, 0.2, 2.0, 8.0]
                .iter()
                .map(|&v0| {
                    sweep(
                        &format!("fig5_v0_{v0}"),
                        params(0.0, 15.0, 8.0, v0),
                        vec![axis(SweepParam::Alpha, 0.0, 10.0, 501)],
                        dimer(vec![NamedState::GG, NamedState::EE]).with_refined_crossings(true),
                    )
                })
                .collect(),
        ),
        "6a" | "6b" => (
            "two atoms at the n1 = 0 resonance, IPR of |gg> and |ee> over (V0, alpha) with regime labels",
            vec![sweep(
                "fig6",
                params(0.0, 15.0, 8.0, 0.0),
                vec![axis(SweepParam::V0, 0.0, 20.0, 101), axis(SweepParam::Alpha, 0.0, 10.0, 201)],
                dimer(vec![NamedState::GG, NamedState::EE]),
            )],
        ),
        "7a" => {
            notes.push("the caption does not list the interaction values; 0.01, 1 and 6 are used".to_string());
            (
                "R3 with n3 = 0 (2 delta0 = V0), IPR of |gg> versus alpha at omega = 30",
                [0.01, 1.0, 6.0]
                    .iter()
                    .map(|&v0| {
                        sweep(
                            &format!("fig7a_v0_{v0}"),
                            params(0.5 * v0, 15.0, 30.0, v0),
                            vec![axis(SweepParam::Alpha, 0.0, 10.0, 1001)],
                            dimer(vec![NamedState::GG]),
                        )
                    })
                    .collect(),
            )
        }
        "7b" => (
            "R3 with n3 = 0 at V0 = 6, IPR of |gg> versus alpha for omega = 15 and 30",
            [15.0, 30.0]
                .iter()
                .map(|&omega| {
                    sweep(
                        &format!("fig7b_omega_{omega}"),
                        params(3.0, 15.0, omega, 6.0),
                        vec![axis(SweepParam::Alpha, 0.0, 10.0, 1001)],
                        dimer(vec![NamedState::GG]),
                    )
                })
                .collect(),
        ),
        "8a" => (
            "two atoms at the n1 = 0 resonance, IPR of |+> over (V0, alpha)",
            vec![sweep(
                "fig8a",
                params(0.0, 15.0, 8.0, 0.0),
                vec![axis(SweepParam::V0, 0.0, 20.0, 101), axis(SweepParam::Alpha, 0.0, 10.0, 201)],
                dimer(vec![NamedState::Plus]),
            )],
        ),
        "8b" => {
            let z = bessel_zero(0, 1).expect("first J0 zero");
            let stabilized = params(0.0, z * 8.0, 8.0, 5.0);
            let blockade = params(0.0, 8.0, 8.0, 5.0);
            notes.push("stabilized case at the first J0 zero, blockade case at alpha = 1; both with V0 = 5".to_string());
            (
                "entanglement entropy dynamics from |+> over 50 periods",
                vec![
                    dynamics("fig8b_stabilized", stabilized, NamedState::Plus, 50.0 * stabilized.period(), true),
                    dynamics("fig8b_blockade", blockade, NamedState::Plus, 50.0 * blockade.period(), true),
                ],
            )
        }
        _ => unreachable!("FigureId is always valid"),
    };
    FigureBinding { id, description: description.to_string(), jobs, notes }
}

/// CSV text and sidecar for one job.
#[derive(Clone, Debug)]
pub struct FigureOutput {
    pub name: String,
    pub csv: String,
    pub sidecar: Sidecar,
}

/// Runs every job of `id` after applying `overrides`.
pub fn run_figure(
    id: FigureId,
    overrides: &Overrides,
    integrator: &IntegratorConfig,
    run_spec: serde_json::Value,
) -> Result<Vec<FigureOutput>> {
    let mut fig = binding(id);
    for job in &mut fig.jobs {
        overrides.apply(job.base_mut());
        job.base().validate()?;
    }
    let meta = serde_json::json!({
        "figure": id,
        "description": fig.description,
        "notes": fig.notes,
        "overrides": overrides,
    });
    let mut outputs = Vec::new();
    for job in &fig.jobs {
        let out = match job {
            Job::Sweep { name, base, axes, config } => {
                let config = config.clone().with_integrator(*integrator);
                let result = run_sweep(base, axes, &config)?;
                let sidecar = Sidecar::new("sweep", result.header(), run_spec.clone(), result.metadata());
                FigureOutput { name: name.clone(), csv: result.to_csv(), sidecar }
            }
            Job::Dynamics { name, base, initial, t_final, sample_every, entropy } => {
                let basis = if initial.atoms() == 1 { Basis::Single } else { Basis::Pair };
                let state = initial.state(basis)?;
                let mut series = propagate(&state, base, Frame::Lab, *t_final, *sample_every, integrator)?;
                if *entropy {
                    series = series.with_entropy(entanglement_entropy)?;
                }
                let data = serde_json::json!({
                    "params": base,
                    "initial": initial,
                    "frame": Frame::Lab,
                    "t_final": t_final,
                    "sample_every": sample_every,
                    "integrator": integrator,
                    "max_norm_drift": series.max_norm_drift(),
                });
                let sidecar = Sidecar::new("dynamics", series_header(&series), run_spec.clone(), data);
                FigureOutput { name: name.clone(), csv: series_to_csv(&series), sidecar }
            }
        };
        outputs.push(FigureOutput { sidecar: out.sidecar.with_figure(meta.clone()), ..out });
    }
    Ok(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        assert_eq!(FigureId::all().count(), 21);
        assert_eq!("1f".parse::<FigureId>().unwrap().as_str(), "1f");
        assert_eq!("fig6a".parse::<FigureId>().unwrap().as_str(), "6a");
        assert!("99".parse::<FigureId>().is_err());
        assert!("1g".parse::<FigureId>().is_err());
    }

    #[test]
    fn caption_defaults() {
        for id in FigureId::all() {
            let b = binding(id);
            assert!(!b.jobs.is_empty());
            for job in &b.jobs {
                job.base().validate().unwrap();
                assert_eq!(job.base().rabi, 1.0);
            }
        }
        let b = binding("4b".parse().unwrap());
        let p = b.jobs[0].base();
        assert_eq!((p.v0, p.delta_mod, p.omega), (10.0, 15.0, 8.0));
        let b = binding("1c".parse().unwrap());
        assert_eq!(b.jobs[0].base().delta0, 8.0);
        assert_eq!(b.notes.len(), 1);
        let b = binding("7b".parse().unwrap());
        let omegas: Vec<f64> = b.jobs.iter().map(|j| j.base().omega).collect();
        assert_eq!(omegas, vec![15.0, 30.0]);
        for job in &binding("7a".parse().unwrap()).jobs {
            assert_eq!(2.0 * job.base().delta0, job.base().v0);
        }
    }

    #[test]
    fn overrides_replace_defaults() {
        let o = Overrides { v0: Some(3.0), ..Overrides::default() };
        let mut p = binding("3a".parse().unwrap()).jobs[0].base().to_owned();
        o.apply(&mut p);
        assert_eq!(p.v0, 3.0);
        assert_eq!(p.delta0, 8.0);
    }

    #[test]
    fn dynamics_figure_runs() {
        let out = run_figure("3b".parse().unwrap(), &Overrides::default(), &IntegratorConfig::default(), serde_json::json!({}))
            .unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].csv.starts_with("time,p_gg,p_ge,p_eg,p_ee,norm\n"));
        assert_eq!(out[0].csv.lines().count(), 2002);
        assert_eq!(out[0].sidecar.figure.as_ref().unwrap()["figure"], "3b");
    }
}
