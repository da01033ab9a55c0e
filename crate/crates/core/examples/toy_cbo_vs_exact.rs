//! A one-dimensional double-well electron in a cavity, small enough to
//! diagonalize densely: CBO energies and overlaps against the exact states.

use cavity_bo::cbo::{assemble_surfaces, compare_exact_cbo, solve_all, solve_conditional, MatterConditional, Mesh};
use cavity_bo::model::{HamiltonianAssembly, MatterLayout, MatterOperators, PhotonBasis, PhotonMode};
use cavity_bo::quantity::stencil::kinetic_1d;
use cavity_bo::quantity::{CsrMatrix, Grid1D};
use cavity_bo::spectra::dense_operator_eigh;
use std::sync::Arc;

fn main() -> cavity_bo::Result<()> {
    let g = Grid1D::centered(41, 0.25)?;
    let x = g.coords();
    let v: Vec<f64> = x.iter().map(|x| 0.05 * x.powi(4) - 0.4 * x * x).collect();
    let h = kinetic_1d(&g, 1.0, 4)?.add_scaled(1.0, &CsrMatrix::diagonal(&v))?;
    for lambda in [0.0, 0.1, 0.3, 0.6] {
        let mode = PhotonMode::new(0.25, lambda, &[1.0], true, 30, Some(Grid1D::centered(61, 0.4)?))?;
        let matter = MatterOperators {
            dim: x.len(),
            layout: MatterLayout::Custom { dim: x.len() },
            hamiltonian: Arc::new(h.clone()),
            nuclear_kinetic: None,
            electron_dipole: Arc::new(CsrMatrix::diagonal(&x.iter().map(|x| -lambda * x).collect::<Vec<_>>())),
            nuclear_dipole: None,
            self_energy: Some(Arc::new(CsrMatrix::diagonal(&x.iter().map(|x| 0.5 * (lambda * x).powi(2)).collect::<Vec<_>>()))),
        };
        let asm = HamiltonianAssembly::new(matter.clone(), &mode, PhotonBasis::Fock)?;
        let exact = dense_operator_eigh(&asm.total(), 6);
        let set = solve_conditional(&MatterConditional::new(matter, &mode), &Mesh::photon(mode.q_grid()?.clone()), 3)?;
        let cbo = solve_all(&assemble_surfaces(&set, true)?, 6)?;
        println!("λ = {lambda}");
        for r in compare_exact_cbo(&asm, &exact, &set, &cbo)? {
            println!(
                "  E = {:.6}  E_CBO = {:.6}  {:?}  overlap {:.2}%",
                r.exact_energy, r.cbo_energy, r.cbo_label, r.overlap_percent
            );
        }
    }
    Ok(())
}
