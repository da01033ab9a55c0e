//! Fock ↔ q-grid projector: how well a real-space grid resolves oscillator
//! states, and a coherent state seen on the grid.

use cavity_bo::model::photon::{coherent_amplitudes, projector_defect};
use cavity_bo::model::PhotonMode;
use cavity_bo::quantity::units::{from_mev, unit_scale, Dimension};
use cavity_bo::quantity::Grid1D;
use cavity_bo::C64;

fn main() -> cavity_bo::Result<()> {
    let q_unit = unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs")?;
    for (points, dq) in [(41, 6.77), (81, 6.77 / 2.0), (161, 6.77 / 4.0)] {
        let mode = PhotonMode::new(from_mev(1.41), 0.0, &[1.0], true, 41, Some(Grid1D::centered(points, dq * q_unit)?))?;
        let p = mode.fock_qgrid_projector()?;
        let resolved = (1..=41).take_while(|&n| projector_defect(&p.rows(0, n).into_owned()) < 1e-6).count();
        println!(
            "{points:3} points, Δq = {:.3} √aJ·fs: |PPᵀ − 1| = {:.2e}, {resolved} states resolved to 1e-6",
            dq,
            projector_defect(&p)
        );
    }

    let mode = PhotonMode::new(from_mev(1.41), 0.0, &[1.0], true, 41, Some(Grid1D::centered(161, 6.77 / 4.0 * q_unit)?))?;
    let p = mode.fock_qgrid_projector()?;
    let (c, loss) = coherent_amplitudes(C64::new(2.0, 0.0), 41);
    let q = mode.q_grid()?.coords();
    let density: Vec<f64> = (0..q.len())
        .map(|i| (0..41).map(|n| c[n] * p[(n, i)]).sum::<C64>().norm_sqr())
        .collect();
    let mean: f64 = q.iter().zip(&density).map(|(q, d)| q * d).sum();
    println!(
        "coherent state |α| = 2: truncation loss {loss:.1e}, ⟨q⟩ = {:.3} √aJ·fs (√(2/ω)·α = {:.3})",
        mean / q_unit,
        (2.0 / mode.frequency).sqrt() * 2.0 / q_unit
    );
    Ok(())
}
