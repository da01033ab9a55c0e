//! Time evolution of the quantum ring after a coherent photon field is
//! switched on: dipole, Mandel Q, purity and CBO surface populations.
//!
//! Pass a step count to shorten the run (default: 160000 steps of 0.146 fs).

use cavity_bo::cbo::{solve_conditional, MatterConditional, Mesh};
use cavity_bo::dynamics::{coherent_initial_state, propagate, Observables, PropagationOptions};
use cavity_bo::model::{HamiltonianAssembly, MatterOperators, PhotonBasis, PhotonMode, QuantumRing};
use cavity_bo::quantity::units::{from_fs, from_mev, from_nm, unit_scale, Dimension, AU_TIME_FS};
use cavity_bo::quantity::Grid1D;
use cavity_bo::spectra::bare_basis;
use std::time::Instant;

fn main() -> cavity_bo::Result<()> {
    let n_steps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(160_000);
    let ring = QuantumRing::standard();
    let basis = bare_basis(&ring.hamiltonian()?, 40, 1e-10)?;
    let lam = 0.0034 * unit_scale(Dimension::Coupling, "meV^(1/2)/nm")?;
    let q_grid = Grid1D::centered(161, 6.77 / 4.0 * unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs")?)?;
    let mode = PhotonMode::new(from_mev(1.41), lam, &[1.0, 1.0], false, 41, Some(q_grid.clone()))?;
    let matter = MatterOperators::ring_eigen(&ring, &mode, &basis)?;
    let asm = HamiltonianAssembly::new(matter.clone(), &mode, PhotonBasis::Fock)?;
    let h = asm.total();

    let mut ground = vec![0.0; matter.dim];
    ground[0] = 1.0;
    let psi0 = coherent_initial_state(&ground, &mode, 4.0, 0.0)?;
    let dipole = basis.project_diagonal(&ring.projected_position([std::f64::consts::FRAC_1_SQRT_2; 2]));
    let set = solve_conditional(&MatterConditional::new(matter, &mode), &Mesh::photon(q_grid), 3)?;
    let projector = mode.fock_qgrid_projector()?;
    let obs = Observables { dipole: Some(&dipole), surfaces: Some((&set, Some(&projector))) };
    let opts = PropagationOptions {
        dt: from_fs(0.146),
        n_steps,
        stride: 100,
        krylov: Default::default(),
        keep_states: false,
    };
    let t = Instant::now();
    let rec = propagate(&h, &psi0, &opts, &obs)?;
    println!("{} steps in {:.1?}, Krylov dimension ≤ {}", n_steps, t.elapsed(), rec.max_krylov_dim);
    println!("{:>8} {:>10} {:>8} {:>8} {:>7} {:>7} {:>7}", "t[ps]", "dipole[nm]", "Q", "purity", "n", "P1", "P3");
    for i in (0..rec.times.len()).step_by((rec.times.len() / 24).max(1)) {
        println!(
            "{:8.3} {:10.4} {:8.4} {:8.4} {:7.3} {:7.4} {:7.4}",
            rec.times[i] * AU_TIME_FS * 1e-3,
            rec.dipole[i] / from_nm(1.0),
            rec.mandel_q[i].unwrap_or(f64::NAN),
            rec.purity[i],
            rec.photon_number[i],
            rec.populations[i][0],
            rec.populations[i][2]
        );
    }
    let drift = rec.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    let de = rec.energy.iter().map(|e| (e - rec.energy[0]).abs()).fold(0.0, f64::max) / rec.energy[0].abs();
    println!("max norm drift {drift:.2e}, max relative energy drift {de:.2e}");
    Ok(())
}
