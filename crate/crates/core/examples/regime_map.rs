//! Coarse (V0, alpha) regime map printed as characters.

use rydberg_floquet::model::{AtomCount, DriveParams, NamedState};
use rydberg_floquet::observables::RegimeLabel;
use rydberg_floquet::sweep::{run_sweep, BasisChoice, SweepAxis, SweepConfig, SweepParam};

fn main() -> rydberg_floquet::Result<()> {
    let axes = [
        SweepAxis::linspace(SweepParam::V0, 0.0, 20.0, 21)?,
        SweepAxis::linspace(SweepParam::Alpha, 0.0, 10.0, 61)?,
    ];
    let cfg = SweepConfig::new(AtomCount::Two, vec![NamedState::GG, NamedState::EE]).with_basis(BasisChoice::Symmetric);
    let result = run_sweep(&DriveParams::default(), &axes, &cfg)?;
    println!("F freezing, B blockade, A anti-blockade, . mixed; rows V0, columns alpha");
    for (row, chunk) in result.points.chunks(axes[1].len()).enumerate() {
        let line: String = chunk
            .iter()
            .map(|p| match p.record().and_then(|r| r.regime) {
                Some(RegimeLabel::Freezing) => 'F',
                Some(RegimeLabel::Blockade) => 'B',
                Some(RegimeLabel::AntiBlockade) => 'A',
                Some(RegimeLabel::Mixed) => '.',
                None => '?',
            })
            .collect();
        println!("{:5.1} {line}", axes[0].values[row]);
    }
    Ok(())
}
