use super::Spectrum;
use crate::quantity::operator::{to_dense, LinearOperator};
use nalgebra::{DMatrix, SymmetricEigen};

/// Lowest `k` eigenpairs of a dense symmetric matrix.
pub fn dense_eigh(m: &DMatrix<f64>, k: usize) -> Spectrum {
    let sym = 0.5 * (m + m.transpose());
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let k = k.min(idx.len());
    let values: Vec<f64> = idx[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::from_fn(m.nrows(), k, |r, c| eig.eigenvectors[(r, idx[c])]);
    canonical_signs(&mut vectors);
    Spectrum { values, vectors, residuals: vec![0.0; k], iterations: 0 }
}

pub fn dense_operator_eigh(op: &dyn LinearOperator, k: usize) -> Spectrum {
    dense_eigh(&to_dense(op), k)
}

/// Make the largest-magnitude component of every column positive.
pub fn canonical_signs(v: &mut DMatrix<f64>) {
    for mut col in v.column_iter_mut() {
        let mut best = 0.0f64;
        for &x in col.iter() {
            if x.abs() > best.abs() + 1e-12 {
                best = x;
            }
        }
        if best < 0.0 {
            col.neg_mut();
        }
    }
}
