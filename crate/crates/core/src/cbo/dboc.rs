use super::conditional::{AxisKind, ConditionalSolveSet};
use crate::error::{Error, Result};

/// Diagonal kinetic correction −(1/2m)⟨ψ_j|∂²ψ_j⟩ summed over mesh axes,
/// by central differences of the aligned states (one-sided at the edges).
/// Returns dboc[p][j].
pub fn diagonal_kinetic_correction(set: &ConditionalSolveSet) -> Result<Vec<Vec<f64>>> {
    if !set.aligned {
        return Err(Error::Unaligned);
    }
    let mesh = &set.mesh;
    let mut out = vec![vec![0.0; set.n_states]; mesh.len()];
    for (d, axis) in mesh.axes.iter().enumerate() {
        let n = axis.grid.n_points;
        if n < 3 {
            return Err(Error::InvalidGrid(format!("axis {d} needs at least 3 points for a second derivative")));
        }
        let mass = match axis.kind {
            AxisKind::Photon => 1.0,
            AxisKind::Nuclear { mass, .. } => mass,
        };
        let h2 = axis.grid.spacing * axis.grid.spacing;
        for (p, row) in out.iter_mut().enumerate() {
            let mut idx = mesh.multi_index(p);
            let i = idx[d];
            let stencil: [(usize, f64); 3] = if i == 0 {
                [(0, 1.0), (1, -2.0), (2, 1.0)]
            } else if i == n - 1 {
                [(n - 1, 1.0), (n - 2, -2.0), (n - 3, 1.0)]
            } else {
                [(i - 1, 1.0), (i, -2.0), (i + 1, 1.0)]
            };
            let own = &set.vectors[p];
            for (k, w) in stencil {
                idx[d] = k;
                let other = &set.vectors[mesh.flat_index(&idx)];
                for (j, r) in row.iter_mut().enumerate() {
                    *r -= 0.5 / mass * w * own.column(j).dot(&other.column(j)) / h2;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbo::conditional::{solve_conditional, Mesh};
    use crate::cbo::{ConditionalProblem, MatterConditional};
    use crate::model::{MatterLayout, MatterOperators, PhotonMode};
    use crate::quantity::{CsrMatrix, Grid1D};
    use std::sync::Arc;

    /// Two levels split by Δ, mixed by ω q λ d: the mixing angle is
    /// θ(q) = ½ atan(2c q / Δ) with c = ωλd, and the ground-state correction
    /// is ½ θ'(q)².
    #[test]
    fn two_level_closed_form() {
        let (delta, d, w, lam) = (0.3, 1.2, 0.2, 0.5);
        let h = CsrMatrix::diagonal(&[0.0, delta]);
        let x = CsrMatrix::from_triplets(2, 2, vec![(0, 1, d), (1, 0, d)]).unwrap();
        let mode = PhotonMode::new(w, lam, &[1.0], true, 3, Some(Grid1D::centered(401, 0.01).unwrap())).unwrap();
        let m = MatterOperators {
            dim: 2,
            layout: MatterLayout::Custom { dim: 2 },
            hamiltonian: Arc::new(h),
            nuclear_kinetic: None,
            electron_dipole: Arc::new(x.scale(lam)),
            nuclear_dipole: None,
            self_energy: None,
        };
        let p = MatterConditional::new(m, &mode);
        let mesh = Mesh::photon(mode.q_grid.clone().unwrap());
        let set = solve_conditional(&p, &mesh, 2).unwrap();
        let dboc = diagonal_kinetic_correction(&set).unwrap();
        let c = w * lam * d;
        for pt in (20..381).step_by(40) {
            let q = mesh.coords(pt)[0];
            let a = 2.0 * c / delta;
            let dtheta = 0.5 * a / (1.0 + (a * q).powi(2));
            let expect = 0.5 * dtheta * dtheta;
            assert!((dboc[pt][0] - expect).abs() < 1e-4 * expect.max(1e-8), "q={q}: {} vs {expect}", dboc[pt][0]);
            assert!((dboc[pt][1] - expect).abs() < 1e-4 * expect.max(1e-8));
        }
        assert!(p.photon_potential(&[2.0]) > 0.0);
    }

    #[test]
    fn rejects_unaligned() {
        let mode = PhotonMode::new(1.0, 0.1, &[1.0], true, 3, Some(Grid1D::centered(5, 0.5).unwrap())).unwrap();
        let m = MatterOperators {
            dim: 2,
            layout: MatterLayout::Custom { dim: 2 },
            hamiltonian: Arc::new(CsrMatrix::diagonal(&[0.0, 1.0])),
            nuclear_kinetic: None,
            electron_dipole: Arc::new(CsrMatrix::diagonal(&[0.1, -0.1])),
            nuclear_dipole: None,
            self_energy: None,
        };
        let mut set = solve_conditional(&MatterConditional::new(m, &mode), &Mesh::photon(mode.q_grid.clone().unwrap()), 2).unwrap();
        set.aligned = false;
        assert!(matches!(diagonal_kinetic_correction(&set), Err(Error::Unaligned)));
    }
}
