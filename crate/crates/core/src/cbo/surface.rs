use super::conditional::{ConditionalSolveSet, Mesh};
use super::dboc::diagonal_kinetic_correction;
use super::wells::{classify_wells, WellClass};
use crate::error::Result;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceComponents {
    pub electronic: Vec<f64>,
    pub photon: Vec<f64>,
    pub nuclear: Vec<f64>,
    pub dboc: Vec<f64>,
}

/// One cavity potential-energy surface V_j over the mesh.
#[derive(Debug, Clone, Serialize)]
pub struct CavitySurface {
    pub index: usize,
    #[serde(skip)]
    pub mesh: Mesh,
    pub values: Vec<f64>,
    pub components: SurfaceComponents,
    pub wells: WellClass,
}

impl CavitySurface {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// V_j = ε_j + ½ω²q² (+ ion terms) (+ diagonal correction).
pub fn assemble_surfaces(set: &ConditionalSolveSet, include_dboc: bool) -> Result<Vec<CavitySurface>> {
    let n = set.mesh.len();
    let dboc = if include_dboc { Some(diagonal_kinetic_correction(set)?) } else { None };
    (0..set.n_states)
        .map(|j| {
            let electronic = set.energy_curve(j);
            let photon = set.photon_potential.clone();
            let nuclear = set.nuclear_potential.clone();
            let d: Vec<f64> = match &dboc {
                Some(d) => d.iter().map(|r| r[j]).collect(),
                None => vec![0.0; n],
            };
            let values: Vec<f64> = (0..n).map(|p| electronic[p] + photon[p] + nuclear[p] + d[p]).collect();
            let wells = classify_wells(&set.mesh, &values);
            Ok(CavitySurface {
                index: j,
                mesh: set.mesh.clone(),
                values,
                components: SurfaceComponents { electronic, photon, nuclear, dboc: d },
                wells,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbo::conditional::solve_conditional;

    #[test]
    fn parity_symmetric_toy_surfaces() {
        // a symmetric toy potential makes every surface even in q
        let (p, mode) = crate::cbo::conditional::tests::toy_problem(0.5);
        let mut p = p;
        let g = crate::quantity::Grid1D::centered(15, 0.6).unwrap();
        let t = crate::quantity::stencil::kinetic_1d(&g, 1.0, 2).unwrap();
        let v: Vec<f64> = g.coords().iter().map(|x| 0.05 * x.powi(4) - 0.4 * x * x).collect();
        p.matter.hamiltonian = std::sync::Arc::new(t.add_scaled(1.0, &crate::quantity::CsrMatrix::diagonal(&v)).unwrap());
        let mesh = Mesh::photon(mode.q_grid.clone().unwrap());
        let set = solve_conditional(&p, &mesh, 3).unwrap();
        let surfaces = assemble_surfaces(&set, true).unwrap();
        let n = mesh.len();
        for s in &surfaces {
            for i in 0..n {
                assert!((s.values[i] - s.values[n - 1 - i]).abs() < 1e-8);
            }
            let sum: f64 = s.components.electronic[3] + s.components.photon[3] + s.components.nuclear[3] + s.components.dboc[3];
            assert!((sum - s.values[3]).abs() < 1e-14);
        }
    }
}
