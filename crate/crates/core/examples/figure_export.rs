//! Writes the data of one figure panel into a directory.

use rydberg_floquet::figures::{run_figure, FigureId, Overrides};
use rydberg_floquet::io::write_csv_with_sidecar;
use rydberg_floquet::propagate::IntegratorConfig;

fn main() -> rydberg_floquet::Result<()> {
    let id: FigureId = std::env::args().nth(1).unwrap_or_else(|| "3a".into()).parse()?;
    let dir = std::env::temp_dir().join("rydberg_figures");
    let spec = serde_json::json!({"example": "figure_export", "figure": id});
    for out in run_figure(id, &Overrides::default(), &IntegratorConfig::default(), spec)? {
        let path = dir.join(format!("{}.csv", out.name));
        write_csv_with_sidecar(&path, &out.csv, &out.sidecar)?;
        println!("wrote {} ({} rows)", path.display(), out.csv.lines().count() - 1);
    }
    Ok(())
}
