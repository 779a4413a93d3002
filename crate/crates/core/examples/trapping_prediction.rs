//! Predicted freezing alphas at each resonance and the measured IPR there.

use rydberg_floquet::error::Error;
use rydberg_floquet::floquet::{floquet_decompose, ipr};
use rydberg_floquet::model::{Basis, DriveParams, StateVector};
use rydberg_floquet::propagate::{monodromy_in, IntegratorConfig};
use rydberg_floquet::resonance::{resonances_at, predict_trapping};

fn main() -> rydberg_floquet::Result<()> {
    let cfg = IntegratorConfig::default();
    for (delta0, v0, omega) in [(0.0, 8.0, 8.0), (0.005, 0.01, 30.0)] {
        let base = DriveParams::default().with_omega(omega).with_delta0(delta0).with_v0(v0);
        for hit in resonances_at(&base, 3) {
            let pred = match predict_trapping(&base, &hit, 2) {
                Ok(p) => p,
                Err(Error::Unsupported(msg)) => {
                    println!("Delta0 = {delta0}, V0 = {v0}: {msg}");
                    continue;
                }
                Err(e) => return Err(e),
            };
            for &alpha in &pred.alphas {
                let p = base.with_alpha(alpha);
                let dec = floquet_decompose(&monodromy_in(&p, Basis::Symmetric, &cfg)?, p.omega)?;
                let iprs = pred
                    .states
                    .iter()
                    .map(|&l| Ok(format!("{} {:.2e}", l.name(), ipr(&StateVector::basis_state(Basis::Symmetric, l)?, &dec)?)))
                    .collect::<rydberg_floquet::Result<Vec<_>>>()?;
                println!(
                    "Delta0 = {delta0}, V0 = {v0}: {} n = {:+} J_{} zero alpha = {alpha:.4}  IPR {}",
                    hit.kind,
                    hit.index,
                    pred.bessel_order,
                    iprs.join(", ")
                );
            }
        }
    }
    Ok(())
}
