use super::conditional::{AxisKind, ConditionalSolveSet};
use super::nuclear_photon::CboState;
use crate::error::{Error, Result};
use crate::model::{HamiltonianAssembly, PhotonBasis};
use crate::spectra::Spectrum;
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct OverlapRow {
    pub exact_index: usize,
    pub exact_energy: f64,
    pub cbo_index: usize,
    pub cbo_label: (usize, usize),
    pub cbo_energy: f64,
    /// |⟨Ψ_exact|Ψ_CBO⟩|² in percent.
    pub overlap_percent: f64,
    /// Overlap with every supplied CBO state, in percent.
    pub all_percent: Vec<f64>,
}

/// Exact state mapped onto (matter basis × q mesh).
fn exact_on_mesh(asm: &HamiltonianAssembly, spec: &Spectrum, i: usize, proj: Option<&DMatrix<f64>>) -> DMatrix<f64> {
    let nm = asm.matter.dim;
    let v = spec.vectors.column(i);
    let coeffs = DMatrix::from_fn(nm, asm.photon_dim, |a, n| v[n * nm + a]);
    match proj {
        Some(p) => coeffs * p,
        None => coeffs,
    }
}

/// Overlaps between exact eigenstates and composite CBO states
/// χ(q) ψ_j(q), with a one-to-one pairing by descending overlap.
pub fn compare_exact_cbo(
    asm: &HamiltonianAssembly,
    exact: &Spectrum,
    set: &ConditionalSolveSet,
    cbo: &[CboState],
) -> Result<Vec<OverlapRow>> {
    if set.mesh.axes.len() != 1 || set.mesh.axes[0].kind != AxisKind::Photon {
        return Err(Error::RepresentationMismatch("comparison needs a photon-only mesh".into()));
    }
    if set.vectors[0].nrows() != asm.matter.dim {
        return Err(Error::RepresentationMismatch(format!(
            "conditional basis has {} functions, exact matter basis has {}",
            set.vectors[0].nrows(),
            asm.matter.dim
        )));
    }
    let grid = &set.mesh.axes[0].grid;
    let mode_grid = asm.mode.q_grid()?;
    if mode_grid.n_points != grid.n_points || (mode_grid.spacing - grid.spacing).abs() > 1e-12 * grid.spacing {
        return Err(Error::RepresentationMismatch("CBO mesh differs from the photon q grid".into()));
    }
    let proj = match asm.photon_basis {
        PhotonBasis::Fock => Some(asm.mode.fock_qgrid_projector()?),
        PhotonBasis::QGrid => None,
    };
    let composites: Vec<DMatrix<f64>> = cbo
        .iter()
        .map(|s| {
            let mut m = DMatrix::zeros(asm.matter.dim, grid.n_points);
            for (p, mut col) in m.column_iter_mut().enumerate() {
                col.copy_from(&(set.vectors[p].column(s.surface) * s.chi[p]));
            }
            m
        })
        .collect();
    let table: Vec<Vec<f64>> = (0..exact.len())
        .map(|i| {
            let psi = exact_on_mesh(asm, exact, i, proj.as_ref());
            composites.iter().map(|c| 100.0 * psi.dot(c).powi(2)).collect()
        })
        .collect();
    let mut pairs: Vec<(usize, usize, f64)> =
        table.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(k, &o)| (i, k, o))).collect();
    pairs.sort_by(|a, b| b.2.total_cmp(&a.2));
    let mut exact_of = vec![None; exact.len()];
    let mut used = vec![false; cbo.len()];
    for (i, k, _) in pairs {
        if exact_of[i].is_none() && !used[k] {
            exact_of[i] = Some(k);
            used[k] = true;
        }
    }
    Ok((0..exact.len())
        .filter_map(|i| {
            let k = exact_of[i]?;
            Some(OverlapRow {
                exact_index: i,
                exact_energy: exact.values[i],
                cbo_index: k,
                cbo_label: cbo[k].label(),
                cbo_energy: cbo[k].energy,
                overlap_percent: table[i][k],
                all_percent: table[i].clone(),
            })
        })
        .collect())
}
