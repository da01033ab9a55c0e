use super::conditional::{AxisKind, Mesh};
use super::surface::CavitySurface;
use crate::error::Result;
use crate::quantity::operator::LinearOperator;
use crate::quantity::stencil::{kinetic_1d, sinc_dvr_kinetic};
use crate::spectra::{lowest_eigenpairs, LanczosOptions};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Eigenstate of the nuclear-photon Hamiltonian on one cavity surface.
#[derive(Debug, Clone, Serialize)]
pub struct CboState {
    /// Surface index j (0-based).
    pub surface: usize,
    /// Vibrational index n on that surface (0-based).
    pub vib: usize,
    pub energy: f64,
    /// Wavefunction on the mesh points, unit Euclidean norm.
    #[serde(skip)]
    pub chi: Vec<f64>,
}

impl CboState {
    /// One-based (electronic, vibrational) label.
    pub fn label(&self) -> (usize, usize) {
        (self.surface + 1, self.vib + 1)
    }
}

fn axis_kinetic(mesh: &Mesh, d: usize) -> Result<DMatrix<f64>> {
    let a = &mesh.axes[d];
    match a.kind {
        AxisKind::Photon => sinc_dvr_kinetic(&a.grid, 1.0),
        AxisKind::Nuclear { mass, stencil_order } => Ok(kinetic_1d(&a.grid, mass, stencil_order)?.to_dense()),
    }
}

/// T_slow ⊗ 1 + 1 ⊗ T_fast + V on a two-axis mesh.
struct MeshHamiltonian {
    kinetic: Vec<DMatrix<f64>>,
    potential: Vec<f64>,
}

impl LinearOperator for MeshHamiltonian {
    fn dim(&self) -> usize {
        self.potential.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let fast = self.kinetic.last().unwrap();
        let nf = fast.nrows();
        let ns = self.potential.len() / nf;
        let xm = DMatrix::from_column_slice(nf, ns, x);
        let mut ym = fast * &xm;
        if self.kinetic.len() == 2 {
            ym += &xm * self.kinetic[0].transpose();
        }
        for ((y, v), (p, x)) in y.iter_mut().zip(ym.as_slice()).zip(self.potential.iter().zip(x)) {
            *y = v + p * x;
        }
    }
}

/// Lowest `k` nuclear-photon states on one surface.
pub fn solve_nuclear_photon(surface: &CavitySurface, k: usize) -> Result<Vec<CboState>> {
    let mesh = &surface.mesh;
    let kinetic: Vec<DMatrix<f64>> = (0..mesh.axes.len()).map(|d| axis_kinetic(mesh, d)).collect::<Result<_>>()?;
    let op = MeshHamiltonian { kinetic, potential: surface.values.clone() };
    let spec = lowest_eigenpairs(&op, &LanczosOptions { k, tol: 1e-11, dense_cutoff: 1500, ..Default::default() })?;
    Ok(spec
        .values
        .iter()
        .enumerate()
        .map(|(n, &e)| {
            let chi: DVector<f64> = spec.vectors.column(n).into_owned();
            CboState { surface: surface.index, vib: n, energy: e, chi: chi.as_slice().to_vec() }
        })
        .collect())
}

/// States from every surface, merged and sorted by energy.
pub fn solve_all(surfaces: &[CavitySurface], per_surface: usize) -> Result<Vec<CboState>> {
    let mut all = Vec::new();
    for s in surfaces {
        all.extend(solve_nuclear_photon(s, per_surface)?);
    }
    all.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(all)
}
