//! Ground cavity surface of the ring as the coupling grows: harmonic fit,
//! well structure, and the coupling where it splits into a double well.

use cavity_bo::cbo::{assemble_surfaces, harmonic_fit, Mesh};
use cavity_bo::cbo::wells::bisect_transition;
use cavity_bo::io::{ScenarioConfig, System};
use cavity_bo::quantity::units::{mev, unit_scale, Dimension};

fn main() -> cavity_bo::Result<()> {
    let cfg = ScenarioConfig::preset("ring")?.resolve()?;
    let sys = System::build(&cfg)?;
    let unit = unit_scale(Dimension::Coupling, "meV^(1/2)/nm")?;
    let q_unit = unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs")?;
    let omega = sys.photon().omega;
    let mesh = Mesh::photon(sys.photon().q_grid()?);

    for lam in [0.0, 0.0034, 0.03, 0.05, 0.08, 0.1342] {
        let set = sys.conditional(lam * unit, &mesh, 2)?;
        let s = &assemble_surfaces(&set, true)?[0];
        let fits = harmonic_fit(&mesh, &s.values, &s.wells, 0.1)?;
        let c = mesh.center();
        let dboc = s.components.dboc[c];
        println!(
            "λ = {lam:<6}  {:6} minima at {:?} √aJ·fs, ω̃/ω = {:.3}, DBOC(0) = {:.2e} meV",
            s.wells.name(),
            s.wells.minima().iter().map(|m| (m.coords[0] / q_unit * 100.0).round() / 100.0).collect::<Vec<_>>(),
            fits[0].omega / omega,
            mev(dboc)
        );
    }

    for dboc in [true, false] {
        let onset = bisect_transition(
            |l| Ok(assemble_surfaces(&sys.conditional(l, &mesh, 2)?, dboc)?[0].wells.minima().len() >= 2),
            0.01 * unit,
            0.08 * unit,
            1e-4 * unit,
        )?;
        println!("single → double well at λ = {:.4} (diagonal correction {})", onset / unit, if dboc { "on" } else { "off" });
    }
    Ok(())
}
