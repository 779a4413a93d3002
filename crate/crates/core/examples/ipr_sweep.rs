//! IPR of |g> along alpha with crossing refinement, written as CSV + sidecar.

use rydberg_floquet::io::{write_csv_with_sidecar, Sidecar};
use rydberg_floquet::model::{AtomCount, DriveParams, NamedState};
use rydberg_floquet::sweep::{local_minima, run_sweep, SweepAxis, SweepConfig, SweepParam};

fn main() -> rydberg_floquet::Result<()> {
    let axis = SweepAxis::linspace(SweepParam::Alpha, 0.0, 10.0, 201)?;
    let cfg = SweepConfig::new(AtomCount::One, vec![NamedState::G]).with_refined_crossings(true);
    let result = run_sweep(&DriveParams::default(), &[axis], &cfg)?;
    let xs = result.axis_column(0);
    let ys = result.ipr_column(NamedState::G)?;
    for m in local_minima(&xs, &ys).iter().filter(|m| m.value < 0.05) {
        println!("dip at alpha = {:.6}  IPR = {:.2e}", m.location, m.value);
    }
    let path = std::env::temp_dir().join("ipr_alpha.csv");
    let sidecar = Sidecar::new("sweep", result.header(), serde_json::json!({"example": "ipr_sweep"}), result.metadata());
    write_csv_with_sidecar(&path, &result.to_csv(), &sidecar)?;
    println!("wrote {}", path.display());
    Ok(())
}
