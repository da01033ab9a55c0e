//! Exact ring levels over a coupling sweep, followed by eigenvector overlap,
//! with true and avoided crossings located.

use cavity_bo::io::workflow::linspace;
use cavity_bo::io::{ScenarioConfig, System};
use cavity_bo::quantity::units::{mev, unit_scale, Dimension};
use cavity_bo::spectra::TrackingOptions;

fn main() -> cavity_bo::Result<()> {
    let cfg = ScenarioConfig::preset("ring")?.resolve()?;
    let sys = System::build(&cfg)?;
    let unit = unit_scale(Dimension::Coupling, "meV^(1/2)/nm")?;
    let lambdas = linspace(0.0, 0.14 * unit, 57);
    let opts = TrackingOptions { window: 6, gap_threshold: 1e-6 * sys.photon().omega, ..Default::default() };
    let (curves, vacuum) = sys.sweep(&lambdas, &opts)?;

    for (s, l) in lambdas.iter().enumerate().step_by(8) {
        let e: Vec<String> = curves.curves.iter().take(6).map(|c| format!("{:8.4}", mev(c[s] - vacuum))).collect();
        println!("λ = {:.4}  {}", l / unit, e.join(" "));
    }
    for c in &curves.crossings {
        println!("crossing  E{}/E{} at λ = {:.4}", c.levels.0 + 1, c.levels.1 + 1, c.lambda / unit);
    }
    for a in curves.avoided.iter().filter(|a| a.levels.1 < 6) {
        println!("avoided   E{}/E{} at λ = {:.4}, gap {:.4} meV", a.levels.0 + 1, a.levels.1 + 1, a.lambda / unit, mev(a.gap));
    }
    if !curves.ambiguities.is_empty() {
        println!("{} ambiguous overlap matches", curves.ambiguities.len());
    }
    Ok(())
}
