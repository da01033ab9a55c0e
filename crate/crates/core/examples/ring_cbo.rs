//! Cavity Born-Oppenheimer treatment of the quantum ring: surfaces, wells,
//! CBO energies and their overlaps with the exact polaritonic states.

use cavity_bo::cbo::{
    assemble_surfaces, compare_exact_cbo, harmonic_fit, solve_all, solve_conditional, MatterConditional, Mesh,
};
use cavity_bo::model::{HamiltonianAssembly, MatterOperators, PhotonBasis, PhotonMode, QuantumRing};
use cavity_bo::quantity::units::{from_mev, mev, unit_scale, Dimension};
use cavity_bo::quantity::Grid1D;
use cavity_bo::spectra::{bare_basis, exact_spectrum, LanczosOptions};

fn main() -> cavity_bo::Result<()> {
    let ring = QuantumRing::standard();
    let basis = bare_basis(&ring.hamiltonian()?, 40, 1e-10)?;
    let lam_unit = unit_scale(Dimension::Coupling, "meV^(1/2)/nm")?;
    let q_unit = unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs")?;
    let q_grid = Grid1D::centered(161, 6.77 / 4.0 * q_unit)?;
    for lam in [0.0034, 0.0302, 0.0637, 0.1342] {
        let mode = PhotonMode::new(from_mev(1.41), lam * lam_unit, &[1.0, 1.0], false, 41, Some(q_grid.clone()))?;
        let matter = MatterOperators::ring_eigen(&ring, &mode, &basis)?;
        let asm = HamiltonianAssembly::new(matter.clone(), &mode, PhotonBasis::Fock)?;
        let exact = exact_spectrum(&asm, &LanczosOptions::lowest(5))?;

        let mesh = Mesh::photon(q_grid.clone());
        let set = solve_conditional(&MatterConditional::new(matter, &mode), &mesh, 6)?;
        let surfaces = assemble_surfaces(&set, true)?;
        let cbo = solve_all(&surfaces, 5)?;
        let ground = &surfaces[0];
        let wells: Vec<String> =
            ground.wells.minima().iter().map(|m| format!("{:.2}", m.coords[0] / q_unit)).collect();
        let fits = harmonic_fit(&mesh, &ground.values, &ground.wells, 0.1)?;
        println!(
            "λ = {lam}: ground surface {} well, minima at q = [{}] √aJ·fs, ω̃/ω = {:.3}",
            ground.wells.name(),
            wells.join(", "),
            fits[0].omega / mode.frequency
        );
        let vac = asm.vacuum_energy();
        for row in compare_exact_cbo(&asm, &exact, &set, &cbo)? {
            println!(
                "  #{}  E = {:.4}  E_CBO = {:.4}  {:?}  overlap {:.2}%",
                row.exact_index + 1,
                mev(row.exact_energy - vac),
                mev(row.cbo_energy - vac),
                row.cbo_label,
                row.overlap_percent
            );
        }
    }
    Ok(())
}
