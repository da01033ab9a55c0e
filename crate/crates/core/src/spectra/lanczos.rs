//! Thick-restart Lanczos with full reorthogonalization, plus deflation
//! passes so exactly degenerate eigenvalues are not missed.
//!
//! A single Krylov sequence only sees the part of a degenerate eigenspace
//! its start vector touches. After the requested pairs converge they are
//! locked, and a fresh start orthogonal to them is run; the search ends once
//! the lowest eigenvalue of the complement lies above the k-th found value.

use super::dense::{canonical_signs, dense_operator_eigh};
use super::Spectrum;
use crate::error::{Error, Result};
use crate::quantity::operator::{dot, norm, LinearOperator};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    pub k: usize,
    /// Residual tolerance relative to the largest Ritz value magnitude.
    pub tol: f64,
    pub max_restarts: usize,
    /// Krylov basis size; default max(2k + 20, 40).
    pub basis_size: Option<usize>,
    pub seed: u64,
    /// Problems up to this dimension go straight to the dense solver.
    pub dense_cutoff: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { k: 6, tol: 1e-10, max_restarts: 2000, basis_size: None, seed: 0x5eed, dense_cutoff: 300 }
    }
}

impl LanczosOptions {
    pub fn lowest(k: usize) -> Self {
        Self { k, ..Self::default() }
    }
}

/// Normalized all-ones vector plus a seeded uniform perturbation.
pub fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| 1.0 + rng.gen_range(-1.0..1.0)).collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    v
}

pub fn lowest_eigenpairs(op: &dyn LinearOperator, opts: &LanczosOptions) -> Result<Spectrum> {
    let n = op.dim();
    let k = opts.k.min(n);
    if k == 0 {
        return Ok(Spectrum { values: vec![], vectors: DMatrix::zeros(n, 0), residuals: vec![], iterations: 0 });
    }
    if n <= opts.dense_cutoff.max(k + 2) {
        return Ok(dense_operator_eigh(op, k));
    }
    let mut vals: Vec<f64> = Vec::new();
    let mut vecs: Vec<Vec<f64>> = Vec::new();
    let mut res: Vec<f64> = Vec::new();
    let mut iterations = 0;
    let mut pass = 0u64;
    loop {
        let need = if vals.len() < k { k - vals.len() } else { 1 };
        let start = start_vector(n, opts.seed.wrapping_add(pass));
        let out = thick_restart(op, &vecs, need, opts, start)?;
        iterations += out.iterations;
        if vals.len() >= k {
            let kth = vals[k - 1];
            let slack = opts.tol * out.scale + 1e-12 * kth.abs();
            if out.values[0] >= kth - slack {
                break;
            }
        }
        for i in 0..out.values.len() {
            vals.push(out.values[i]);
            vecs.push(out.vectors[i].clone());
            res.push(out.residuals[i]);
        }
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        idx.truncate(k);
        vals = idx.iter().map(|&i| vals[i]).collect();
        vecs = idx.iter().map(|&i| vecs[i].clone()).collect();
        res = idx.iter().map(|&i| res[i]).collect();
        pass += 1;
        if pass as usize > 2 * k + 10 {
            return Err(Error::NoConvergence { converged: vals.len(), requested: k, iterations });
        }
    }
    let mut vectors = DMatrix::zeros(n, k);
    for (c, v) in vecs.iter().enumerate() {
        vectors.column_mut(c).copy_from_slice(v);
    }
    canonical_signs(&mut vectors);
    Ok(Spectrum { values: vals, vectors, residuals: res, iterations })
}

struct PassOutput {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    residuals: Vec<f64>,
    iterations: usize,
    scale: f64,
}

/// Gram-Schmidt against `locked` and `basis`, twice; returns the
/// accumulated coefficients along `basis`.
fn orthogonalize2(w: &mut [f64], locked: &[Vec<f64>], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut coef = vec![0.0; basis.len()];
    for _ in 0..2 {
        for b in locked {
            let d = dot(b, w);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        for (c, b) in coef.iter_mut().zip(basis) {
            let d = dot(b, w);
            *c += d;
            for (x, y) in w.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
    }
    coef
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    orthogonalize2(w, &[], basis)
}

fn thick_restart(
    op: &dyn LinearOperator,
    locked: &[Vec<f64>],
    need: usize,
    opts: &LanczosOptions,
    start: Vec<f64>,
) -> Result<PassOutput> {
    let n = op.dim();
    let free = n - locked.len();
    let m_full = opts.basis_size.unwrap_or((2 * need + 20).max(40)).max(need + 2).min(free);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xabcdef);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_full);
    let mut h = DMatrix::<f64>::zeros(m_full, m_full);
    let mut f = start;
    orthogonalize(&mut f, locked);
    let s = norm(&f);
    if s < 1e-10 {
        f = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        orthogonalize(&mut f, locked);
    }
    let s = norm(&f);
    f.iter_mut().for_each(|x| *x /= s);
    basis.push(f);
    let mut iterations = 0;
    let mut w = vec![0.0; n];
    for _restart in 0..opts.max_restarts {
        let mut m = m_full;
        let beta_last: f64;
        let mut resid = vec![0.0; n];
        let mut j = basis.len() - 1;
        loop {
            op.apply(&basis[j], &mut w);
            iterations += 1;
            let coef = orthogonalize2(&mut w, locked, &basis);
            for (i, c) in coef.iter().enumerate() {
                h[(i, j)] = *c;
                h[(j, i)] = *c;
            }
            let beta = norm(&w);
            if j + 1 == m {
                beta_last = beta;
                if beta > 0.0 {
                    resid = w.iter().map(|x| x / beta).collect();
                }
                break;
            }
            let scale = h.diagonal().amax().max(1e-300);
            if beta > 1e-12 * scale {
                let v: Vec<f64> = w.iter().map(|x| x / beta).collect();
                h[(j + 1, j)] = beta;
                h[(j, j + 1)] = beta;
                basis.push(v);
            } else {
                // invariant subspace: continue with a fresh direction
                let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                orthogonalize2(&mut v, locked, &basis);
                let s = norm(&v);
                if s < 1e-8 {
                    m = j + 1;
                    beta_last = 0.0;
                    break;
                }
                v.iter_mut().for_each(|x| *x /= s);
                basis.push(v);
            }
            j += 1;
        }
        let hm = h.view((0, 0), (m, m)).into_owned();
        let eig = SymmetricEigen::new(hm);
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let theta: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let scale = theta.iter().fold(0.0f64, |a, t| a.max(t.abs())).max(1e-300);
        let rnorm: Vec<f64> = idx.iter().map(|&i| (beta_last * eig.eigenvectors[(m - 1, i)]).abs()).collect();
        let want = need.min(m);
        let done = (0..want).all(|i| rnorm[i] <= opts.tol * scale);
        let keep = if done { want } else { (want + (m - want) / 2).min(m - 1).max(want) };
        let ritz: Vec<Vec<f64>> = (0..keep)
            .map(|c| {
                let y = eig.eigenvectors.column(idx[c]);
                let mut x = vec![0.0; n];
                for (r, b) in basis.iter().enumerate().take(m) {
                    let yr = y[r];
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += yr * bi;
                    }
                }
                x
            })
            .collect();
        if done {
            return Ok(PassOutput {
                values: theta[..want].to_vec(),
                vectors: ritz,
                residuals: rnorm[..want].to_vec(),
                iterations,
                scale,
            });
        }
        h.fill(0.0);
        for c in 0..keep {
            h[(c, c)] = theta[c];
        }
        basis = ritz;
        if beta_last > 0.0 {
            orthogonalize2(&mut resid, locked, &basis);
            let s = norm(&resid);
            resid.iter_mut().for_each(|x| *x /= s);
            basis.push(resid);
        } else {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            orthogonalize2(&mut v, locked, &basis);
            let s = norm(&v);
            v.iter_mut().for_each(|x| *x /= s);
            basis.push(v);
        }
    }
    Err(Error::NoConvergence { converged: 0, requested: need, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::operator::Diagonal;
    use crate::quantity::CsrMatrix;
    use crate::spectra::dense_eigh;

    fn random_sparse(n: usize, seed: u64) -> CsrMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, rng.gen_range(-2.0..2.0)));
            for _ in 0..3 {
                let j = rng.gen_range(0..n);
                let v = rng.gen_range(-1.0..1.0);
                t.push((i, j, v));
                t.push((j, i, v));
            }
        }
        CsrMatrix::from_triplets(n, n, t).unwrap()
    }

    #[test]
    fn matches_dense_on_random_sparse_200() {
        let a = random_sparse(200, 11);
        let opts = LanczosOptions { k: 8, dense_cutoff: 0, tol: 1e-12, ..Default::default() };
        let s = lowest_eigenpairs(&a, &opts).unwrap();
        let d = dense_eigh(&a.to_dense(), 8);
        for i in 0..8 {
            assert!((s.values[i] - d.values[i]).abs() < 1e-9, "{i}");
        }
    }

    #[test]
    fn finds_both_members_of_degenerate_pairs() {
        let mut d: Vec<f64> = (0..500).map(|i| 1.0 + i as f64 * 0.01).collect();
        d[3] = d[1];
        d[7] = d[1];
        d[9] = d[2];
        let op = Diagonal(d.clone());
        let opts = LanczosOptions { k: 6, dense_cutoff: 0, ..Default::default() };
        let s = lowest_eigenpairs(&op, &opts).unwrap();
        let mut want = d.clone();
        want.sort_by(|a, b| a.total_cmp(b));
        for i in 0..6 {
            assert!((s.values[i] - want[i]).abs() < 1e-9, "{i}: {} vs {}", s.values[i], want[i]);
        }
        let g = s.vectors.transpose() * &s.vectors;
        assert!((g - DMatrix::identity(6, 6)).abs().max() < 1e-8);
    }

    #[test]
    fn deterministic() {
        let a = random_sparse(400, 3);
        let opts = LanczosOptions { k: 4, dense_cutoff: 0, ..Default::default() };
        let s1 = lowest_eigenpairs(&a, &opts).unwrap();
        let s2 = lowest_eigenpairs(&a, &opts).unwrap();
        assert_eq!(s1.values, s2.values);
        assert_eq!(s1.vectors, s2.vectors);
    }

    #[test]
    fn residuals_are_small() {
        let a = random_sparse(600, 5);
        let opts = LanczosOptions { k: 5, dense_cutoff: 0, ..Default::default() };
        let s = lowest_eigenpairs(&a, &opts).unwrap();
        let mut y = vec![0.0; 600];
        for i in 0..5 {
            let v = s.vector(i);
            a.apply(&v, &mut y);
            let r: f64 = y.iter().zip(&v).map(|(a, b)| (a - s.values[i] * b).powi(2)).sum::<f64>().sqrt();
            assert!(r < 1e-8, "{r}");
        }
    }
}
