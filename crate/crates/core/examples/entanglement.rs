//! Entanglement entropy from |+>: stabilized at a J0 zero, oscillating in the blockade.

use rydberg_floquet::bessel::bessel_zero;
use rydberg_floquet::model::{Basis, DriveParams, NamedState};
use rydberg_floquet::observables::entanglement_entropy;
use rydberg_floquet::propagate::{propagate, Frame, IntegratorConfig};

fn main() -> rydberg_floquet::Result<()> {
    let plus = NamedState::Plus.state(Basis::Symmetric)?;
    let base = DriveParams::default().with_v0(5.0);
    for alpha in [bessel_zero(0, 1)?, 1.0] {
        let p = base.with_alpha(alpha);
        let series = propagate(&plus, &p, Frame::Lab, 50.0 * p.period(), 0.01, &IntegratorConfig::default())?
            .with_entropy(entanglement_entropy)?;
        let s = series.entropies().unwrap_or_default();
        let (lo, hi) = s.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        println!("alpha = {alpha:.4}  S_A in [{lo:.3}, {hi:.3}]");
    }
    Ok(())
}
