//! Resonance positions along the static detuning for a blockaded dimer.

use rydberg_floquet::model::DriveParams;
use rydberg_floquet::resonance::{locate_resonances, ResonanceScan};

fn main() -> rydberg_floquet::Result<()> {
    let params = DriveParams::default().with_v0(10.0);
    for hit in locate_resonances(&params, ResonanceScan::Delta0, (0.0, 20.0), 5)? {
        println!("{}  n = {:+}  Delta0 = {:.3}", hit.kind, hit.index, hit.location);
    }
    Ok(())
}
