//! Quasi-energies and modes of the two-atom monodromy in the symmetric basis.

use rydberg_floquet::floquet::{floquet_decompose, ipr};
use rydberg_floquet::model::{Basis, DriveParams, NamedState};
use rydberg_floquet::propagate::{monodromy_in, IntegratorConfig};

fn main() -> rydberg_floquet::Result<()> {
    let params = DriveParams::default().with_v0(8.0).with_delta0(0.0).with_alpha(2.0);
    let u = monodromy_in(&params, Basis::Symmetric, &IntegratorConfig::default())?;
    println!("unitarity defect {:.2e}", u.unitarity_defect());
    let dec = floquet_decompose(&u, params.omega)?;
    for (k, mode) in dec.modes().iter().enumerate() {
        let p = mode.populations();
        println!(
            "eps_{k} = {:+.6}  |gg|^2 = {:.3}  |+|^2 = {:.3}  |ee|^2 = {:.3}",
            dec.quasi_energies()[k],
            p[0],
            p[1],
            p[2]
        );
    }
    for s in [NamedState::GG, NamedState::EE, NamedState::Plus] {
        println!("IPR {:>4} = {:.4}", s.token(), ipr(&s.state(Basis::Symmetric)?, &dec)?);
    }
    Ok(())
}
