//! Single driven atom at the first J0 zero: the excited population stays small.

use rydberg_floquet::bessel::bessel_zero;
use rydberg_floquet::model::{Basis, DriveParams, NamedState};
use rydberg_floquet::propagate::{propagate, Frame, IntegratorConfig};

fn main() -> rydberg_floquet::Result<()> {
    let cfg = IntegratorConfig::default();
    let g = NamedState::G.state(Basis::Single)?;
    for alpha in [1.0, bessel_zero(0, 1)?] {
        let params = DriveParams::default().with_alpha(alpha);
        let series = propagate(&g, &params, Frame::Lab, 20.0, 0.05, &cfg)?;
        let pe = series.population_series(rydberg_floquet::model::BasisLabel::E)?;
        let max = pe.iter().copied().fold(0.0, f64::max);
        println!("alpha = {alpha:.4}  max P_e = {max:.4}  norm drift = {:.1e}", series.max_norm_drift());
    }
    Ok(())
}
