//! Period-averaged Hamiltonian against the exact rotating-frame evolution.

use rydberg_floquet::model::{Basis, DriveParams, NamedState};
use rydberg_floquet::propagate::{propagate, Frame, IntegratorConfig};

fn main() -> rydberg_floquet::Result<()> {
    let cfg = IntegratorConfig::default();
    let gg = NamedState::GG.state(Basis::Pair)?;
    for v0 in [0.0, 0.02, 0.2] {
        let p = DriveParams::default().with_v0(v0).with_alpha(1.0);
        let t = 50.0 * p.period();
        let exact = propagate(&gg, &p, Frame::Rotating, t, t, &cfg)?;
        let approx = propagate(&gg, &p, Frame::Effective, t, t, &cfg)?;
        let f = exact.last().unwrap().state.fidelity(&approx.last().unwrap().state)?;
        println!("V0 = {v0:<5} fidelity after 50 periods = {f:.4}");
    }
    Ok(())
}
