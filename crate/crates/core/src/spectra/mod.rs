//! Eigensolvers (dense and thick-restart Lanczos), the exact-diagonalization
//! driver, and level tracking across coupling sweeps.

pub mod dense;
pub mod lanczos;
pub mod tracking;

pub use dense::{dense_eigh, dense_operator_eigh};
pub use lanczos::{lowest_eigenpairs, LanczosOptions};
pub use tracking::{track_levels, LevelCurves, LevelSample, TrackingOptions};

use crate::error::{Error, Result};
use crate::model::{BareBasis, HamiltonianAssembly};
use crate::quantity::operator::{hermiticity_defect, LinearOperator};
use nalgebra::DMatrix;

/// Lowest eigenpairs of the full composite Hamiltonian.
pub fn exact_spectrum(asm: &HamiltonianAssembly, opts: &LanczosOptions) -> Result<Spectrum> {
    let h = asm.total();
    let defect = hermiticity_defect(&h, 2, 17);
    if defect > 1e-10 {
        return Err(Error::NotHermitian(defect));
    }
    lowest_eigenpairs(&h, opts)
}

/// Lowest `n` eigenpairs of a matter Hamiltonian, as a basis for the
/// eigenstate representation.
pub fn bare_basis(h: &dyn LinearOperator, n: usize, tol: f64) -> Result<BareBasis> {
    let s = lowest_eigenpairs(h, &LanczosOptions { k: n, tol, ..LanczosOptions::default() })?;
    Ok(BareBasis { energies: s.values, vectors: s.vectors })
}

/// Lowest eigenpairs, ascending. Columns of `vectors` are unit eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i).iter().copied().collect()
    }

    /// Groups of indices whose eigenvalues agree within `rel_tol` relative.
    pub fn clusters(&self, rel_tol: f64) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, &e) in self.values.iter().enumerate() {
            match out.last_mut() {
                Some(c) if (e - self.values[*c.last().unwrap()]).abs() <= rel_tol * e.abs().max(1e-300) => c.push(i),
                _ => out.push(vec![i]),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_group_near_equal_values() {
        let s = Spectrum {
            values: vec![1.0, 2.0, 2.0 + 1e-12, 3.0],
            vectors: DMatrix::zeros(4, 4),
            residuals: vec![0.0; 4],
            iterations: 0,
        };
        assert_eq!(s.clusters(1e-9), vec![vec![0], vec![1, 2], vec![3]]);
    }
}
