//! Matrix-free operator interface and the matter ⊗ photon Kronecker sum.
//!
//! Composite vectors use matter-fastest layout: element `(a, n)` sits at
//! `n * matter_dim + a`, so each photon index owns a contiguous matter block.

use super::sparse::CsrMatrix;
use crate::C64;
use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub trait LinearOperator: Send + Sync {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Apply to `ncols` contiguous columns of length `dim()`.
    fn apply_block(&self, x: &[f64], y: &mut [f64], ncols: usize) {
        let n = self.dim();
        for c in 0..ncols {
            self.apply(&x[c * n..(c + 1) * n], &mut y[c * n..(c + 1) * n]);
        }
    }

    /// Real operators act on real and imaginary parts separately.
    fn apply_complex(&self, x: &[C64], y: &mut [C64]) {
        let n = self.dim();
        let mut buf = vec![0.0; 2 * n];
        for (i, z) in x.iter().enumerate() {
            buf[i] = z.re;
            buf[n + i] = z.im;
        }
        let mut out = vec![0.0; 2 * n];
        self.apply_block(&buf, &mut out, 2);
        for i in 0..n {
            y[i] = C64::new(out[i], out[n + i]);
        }
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.nrows
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y)
    }
    fn apply_complex(&self, x: &[C64], y: &mut [C64]) {
        for (r, y) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.col_idx[k]] * self.values[k];
            }
            *y = acc;
        }
    }
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_block(x, y, 1)
    }
    fn apply_block(&self, x: &[f64], y: &mut [f64], ncols: usize) {
        let n = self.nrows();
        let xm = DMatrixView::from_slice(x, n, ncols);
        let mut ym = DMatrixViewMut::from_slice(y, n, ncols);
        ym.gemm(1.0, self, &xm, 0.0);
    }
}

/// Sparse copy of an operator, built column by column; entries with
/// magnitude at or below `drop_below` are discarded.
pub fn to_csr(op: &dyn LinearOperator, drop_below: f64) -> CsrMatrix {
    let n = op.dim();
    let mut trip = Vec::new();
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for c in 0..n {
        e[c] = 1.0;
        op.apply(&e, &mut col);
        e[c] = 0.0;
        trip.extend(col.iter().enumerate().filter(|(_, v)| v.abs() > drop_below).map(|(r, &v)| (r, c, v)));
    }
    CsrMatrix::from_triplets(n, n, trip).expect("indices are in range")
}

#[derive(Debug, Clone)]
pub struct Diagonal(pub Vec<f64>);

impl LinearOperator for Diagonal {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for ((y, x), d) in y.iter_mut().zip(x).zip(&self.0) {
            *y = d * x;
        }
    }
}

/// Photon-side factor of a Kronecker term. Kept concrete because it is small
/// and applied as a mixing of matter blocks.
#[derive(Debug, Clone)]
pub enum PhotonFactor {
    Identity,
    Sparse(CsrMatrix),
    Dense(DMatrix<f64>),
}

#[derive(Clone)]
pub struct KronTerm {
    pub coeff: f64,
    /// `None` is the identity.
    pub matter: Option<Arc<dyn LinearOperator>>,
    pub photon: PhotonFactor,
}

/// Σ_t c_t · M_t ⊗ B_t.
#[derive(Clone)]
pub struct KronSum {
    pub matter_dim: usize,
    pub photon_dim: usize,
    pub terms: Vec<KronTerm>,
}

impl KronSum {
    pub fn new(matter_dim: usize, photon_dim: usize) -> Self {
        Self { matter_dim, photon_dim, terms: Vec::new() }
    }

    pub fn push(&mut self, coeff: f64, matter: Option<Arc<dyn LinearOperator>>, photon: PhotonFactor) {
        if let Some(m) = &matter {
            assert_eq!(m.dim(), self.matter_dim, "matter factor dimension");
        }
        self.terms.push(KronTerm { coeff, matter, photon });
    }
}

impl LinearOperator for KronSum {
    fn dim(&self) -> usize {
        self.matter_dim * self.photon_dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let (m, p) = (self.matter_dim, self.photon_dim);
        y.iter_mut().for_each(|v| *v = 0.0);
        let mut z = vec![0.0; m * p];
        for t in &self.terms {
            let zs: &[f64] = match &t.matter {
                Some(op) => {
                    op.apply_block(x, &mut z, p);
                    &z
                }
                None => x,
            };
            match &t.photon {
                PhotonFactor::Identity => {
                    for (y, z) in y.iter_mut().zip(zs) {
                        *y += t.coeff * z;
                    }
                }
                PhotonFactor::Sparse(b) => {
                    for (n, mm, v) in b.triplets() {
                        let c = t.coeff * v;
                        let src = &zs[mm * m..(mm + 1) * m];
                        for (y, z) in y[n * m..(n + 1) * m].iter_mut().zip(src) {
                            *y += c * z;
                        }
                    }
                }
                PhotonFactor::Dense(b) => {
                    let zm = DMatrixView::from_slice(zs, m, p);
                    let mut ym = DMatrixViewMut::from_slice(y, m, p);
                    ym.gemm(t.coeff, &zm, &b.transpose(), 1.0);
                }
            }
        }
    }
}

/// Dense matrix of an operator, column by column. Test and small-problem use.
pub fn to_dense(op: &dyn LinearOperator) -> DMatrix<f64> {
    let n = op.dim();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        op.apply(&e, &mut col);
        m.column_mut(j).copy_from_slice(&col);
        e[j] = 0.0;
    }
    m
}

/// max |⟨u,Av⟩ − ⟨Au,v⟩| / (‖Au‖‖v‖ + ‖u‖‖Av‖) over a few seeded probe pairs.
pub fn hermiticity_defect(op: &dyn LinearOperator, probes: usize, seed: u64) -> f64 {
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let (mut au, mut av) = (vec![0.0; n], vec![0.0; n]);
    for _ in 0..probes {
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        op.apply(&u, &mut au);
        op.apply(&v, &mut av);
        let a = dot(&u, &av);
        let b = dot(&au, &v);
        let scale = norm(&au) * norm(&v) + norm(&u) * norm(&av);
        if scale > 0.0 {
            worst = worst.max((a - b).abs() / scale);
        }
    }
    worst
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn cnorm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        &a + a.transpose()
    }

    #[test]
    fn kron_sum_matches_dense_kronecker() {
        let a = sym(4, 1);
        let b = sym(3, 2);
        let c = sym(3, 3);
        let mut k = KronSum::new(4, 3);
        k.push(0.7, Some(Arc::new(a.clone())), PhotonFactor::Identity);
        k.push(-1.3, None, PhotonFactor::Dense(b.clone()));
        k.push(2.0, Some(Arc::new(a.clone())), PhotonFactor::Sparse(CsrMatrix::from_dense(&c, 0.0)));
        // matter fastest: photon factor is the outer Kronecker index
        let want = DMatrix::identity(3, 3).kronecker(&a) * 0.7
            + b.kronecker(&DMatrix::identity(4, 4)) * -1.3
            + c.kronecker(&a) * 2.0;
        let got = to_dense(&k);
        assert!((got - want).abs().max() < 1e-12);
    }

    #[test]
    fn complex_apply_is_linear_split() {
        let a = sym(5, 9);
        let x: Vec<C64> = (0..5).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let mut y = vec![C64::new(0.0, 0.0); 5];
        a.apply_complex(&x, &mut y);
        for i in 0..5 {
            let want: C64 = (0..5).map(|j| x[j] * a[(i, j)]).sum();
            assert!((y[i] - want).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn symmetric_kron_sums_are_hermitian(seed in 0u64..1000) {
            let mut k = KronSum::new(6, 4);
            k.push(1.0, Some(Arc::new(sym(6, seed))), PhotonFactor::Identity);
            k.push(0.5, Some(Arc::new(sym(6, seed + 1))), PhotonFactor::Dense(sym(4, seed + 2)));
            prop_assert!(hermiticity_defect(&k, 3, seed) < 1e-13);
        }
    }

    #[test]
    fn sparse_copy_and_complex_apply() {
        let a = sym(7, 11);
        let csr = to_csr(&a, 0.0);
        assert!((csr.to_dense() - &a).abs().max() < 1e-15);
        let x: Vec<C64> = (0..7).map(|i| C64::new(i as f64 * 0.3 - 1.0, 0.5 - 0.1 * i as f64)).collect();
        let mut y1 = vec![C64::new(0.0, 0.0); 7];
        let mut y2 = y1.clone();
        csr.apply_complex(&x, &mut y1);
        a.apply_complex(&x, &mut y2);
        for (p, q) in y1.iter().zip(&y2) {
            assert!((p - q).norm() < 1e-13);
        }
    }
}
