//! Exact polaritonic spectrum of the quantum ring at the four reference
//! couplings, in the bare-eigenstate ⊗ Fock representation.

use cavity_bo::model::{HamiltonianAssembly, MatterOperators, PhotonBasis, PhotonMode, QuantumRing};
use cavity_bo::quantity::units::{from_mev, mev, unit_scale, Dimension};
use cavity_bo::spectra::{bare_basis, exact_spectrum, LanczosOptions};
use std::time::Instant;

fn main() -> cavity_bo::Result<()> {
    let ring = QuantumRing::standard();
    let t = Instant::now();
    let basis = bare_basis(&ring.hamiltonian()?, 40, 1e-10)?;
    println!("bare basis: {} states in {:.1?}", basis.energies.len(), t.elapsed());
    println!(
        "lowest bare levels [meV]: {:?}",
        basis.energies.iter().take(6).map(|e| (mev(*e) * 1e4).round() / 1e4).collect::<Vec<_>>()
    );
    let lam_unit = unit_scale(Dimension::Coupling, "meV^(1/2)/nm")?;
    for lam in [0.0034, 0.0302, 0.0637, 0.1342] {
        let mode = PhotonMode::new(from_mev(1.41), lam * lam_unit, &[1.0, 1.0], false, 41, None)?;
        let asm = HamiltonianAssembly::new(MatterOperators::ring_eigen(&ring, &mode, &basis)?, &mode, PhotonBasis::Fock)?;
        let s = exact_spectrum(&asm, &LanczosOptions::lowest(5))?;
        let e: Vec<f64> = s.values.iter().map(|e| ((mev(e - asm.vacuum_energy())) * 1e4).round() / 1e4).collect();
        println!("λ = {lam:<7} E [meV, vacuum-referenced] = {e:?}");
    }
    Ok(())
}
