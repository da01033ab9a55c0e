//! Two-dimensional (R, q) cavity surfaces of the Shin-Metiu molecule, with
//! their minima, with and without the cavity.

use cavity_bo::io::{ScenarioConfig, System};
use cavity_bo::quantity::units::{mev, unit_scale, Dimension};

fn main() -> cavity_bo::Result<()> {
    let cfg = ScenarioConfig::preset("shin-metiu-1.75")?.resolve()?;
    let sys = System::build(&cfg)?;
    let unit = unit_scale(Dimension::Coupling, "meV^(1/2)/nm")?;
    let q_unit = unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs")?;
    let a = unit_scale(Dimension::Length, "A")?;
    for lam in [0.0, 79.20] {
        let run = sys.cbo(lam * unit)?;
        println!("λ = {lam}");
        for s in &run.surfaces {
            let minima: Vec<String> = s
                .wells
                .minima()
                .iter()
                .map(|m| format!("(R = {:+.2} Å, q = {:+.2}, V = {:.1} meV)", m.coords[0] / a, m.coords[1] / q_unit, mev(m.value)))
                .collect();
            println!("  V_{}: {} {}", s.index, s.wells.name(), minima.join(" "));
        }
        let low: Vec<String> = run.states.iter().take(4).map(|s| format!("{:?} {:.2}", s.label(), mev(s.energy))).collect();
        println!("  lowest CBO states [meV]: {}", low.join(", "));
    }
    Ok(())
}
