//! Short-iteration Lanczos propagator for exp(−iHΔt).

use crate::error::{Error, Result};
use crate::quantity::operator::LinearOperator;
use crate::C64;
use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Debug, Clone, Copy)]
pub struct KrylovOptions {
    pub krylov_dim: usize,
    pub max_dim: usize,
    /// Bound on the per-step error estimate.
    pub tol: f64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self { krylov_dim: 12, max_dim: 30, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    pub dim: usize,
    pub error: f64,
}

pub struct KrylovStepper<'a> {
    op: &'a dyn LinearOperator,
    opts: KrylovOptions,
    basis: Vec<Vec<C64>>,
    w: Vec<C64>,
}

fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn cnorm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// exp(−i T t) e₁ for the symmetric tridiagonal T = tri(β, α, β).
fn tridiagonal_exp(alpha: &[f64], beta: &[f64], t: f64) -> Vec<C64> {
    let m = alpha.len();
    let mut tm = DMatrix::zeros(m, m);
    for i in 0..m {
        tm[(i, i)] = alpha[i];
        if i + 1 < m {
            tm[(i, i + 1)] = beta[i];
            tm[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(tm);
    (0..m)
        .map(|i| {
            (0..m)
                .map(|k| {
                    let v = eig.eigenvectors[(i, k)] * eig.eigenvectors[(0, k)];
                    C64::from_polar(v, -eig.eigenvalues[k] * t)
                })
                .sum()
        })
        .collect()
}

impl<'a> KrylovStepper<'a> {
    pub fn new(op: &'a dyn LinearOperator, opts: KrylovOptions) -> Result<Self> {
        if opts.krylov_dim < 2 || opts.max_dim < opts.krylov_dim {
            return Err(Error::InvalidParameter("Krylov dimension must be ≥ 2 and ≤ max_dim".into()));
        }
        let n = op.dim();
        Ok(Self { op, opts, basis: Vec::new(), w: vec![C64::new(0.0, 0.0); n] })
    }

    /// Advance ψ by one step of length dt (atomic units), growing the
    /// subspace when the error estimate exceeds the tolerance.
    pub fn step(&mut self, psi: &mut [C64], dt: f64) -> Result<StepInfo> {
        let n = self.op.dim();
        let beta0 = cnorm(psi);
        if beta0 == 0.0 {
            return Ok(StepInfo { dim: 0, error: 0.0 });
        }
        self.basis.clear();
        self.basis.push(psi.iter().map(|z| z / beta0).collect());
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut target = self.opts.krylov_dim;
        loop {
            while alpha.len() < target {
                let j = alpha.len();
                self.op.apply_complex(&self.basis[j], &mut self.w);
                let a = cdot(&self.basis[j], &self.w).re;
                for (w, v) in self.w.iter_mut().zip(&self.basis[j]) {
                    *w -= v * a;
                }
                if j > 0 {
                    let b = beta[j - 1];
                    for (w, v) in self.w.iter_mut().zip(&self.basis[j - 1]) {
                        *w -= v * b;
                    }
                }
                for v in &self.basis {
                    let c = cdot(v, &self.w);
                    for (w, v) in self.w.iter_mut().zip(v) {
                        *w -= v * c;
                    }
                }
                alpha.push(a);
                let b = cnorm(&self.w);
                beta.push(b);
                if b <= 1e-13 * a.abs().max(1.0) {
                    // invariant subspace: the projection is exact
                    let y = tridiagonal_exp(&alpha, &beta[..alpha.len() - 1], dt);
                    self.combine(psi, &y, beta0);
                    return Ok(StepInfo { dim: alpha.len(), error: 0.0 });
                }
                self.basis.push(self.w.iter().map(|z| z / b).collect());
            }
            let m = alpha.len();
            let y = tridiagonal_exp(&alpha, &beta[..m - 1], dt);
            let error = beta0 * beta[m - 1] * y[m - 1].norm();
            if error <= self.opts.tol || m >= n {
                self.combine(psi, &y, beta0);
                return Ok(StepInfo { dim: m, error });
            }
            if m >= self.opts.max_dim {
                return Err(Error::NoConvergence { converged: 0, requested: 1, iterations: m });
            }
            target = (m + 2).min(self.opts.max_dim);
        }
    }

    fn combine(&self, psi: &mut [C64], y: &[C64], beta0: f64) {
        psi.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for (c, v) in y.iter().zip(&self.basis) {
            let c = c * beta0;
            for (p, v) in psi.iter_mut().zip(v) {
                *p += c * v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::CsrMatrix;
    use rand::{Rng as _, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(n: usize, seed: u64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let nr = cnorm(&v);
        v.into_iter().map(|z| z / nr).collect()
    }

    #[test]
    fn diagonal_evolution_is_phase_rotation() {
        let d: Vec<f64> = (0..50).map(|i| 0.01 * i as f64).collect();
        let h = CsrMatrix::diagonal(&d);
        let mut psi = random_state(50, 3);
        let start = psi.clone();
        let mut k = KrylovStepper::new(&h, KrylovOptions::default()).unwrap();
        for _ in 0..100 {
            k.step(&mut psi, 0.5).unwrap();
        }
        for ((p, s), e) in psi.iter().zip(&start).zip(&d) {
            assert!((p - s * C64::from_polar(1.0, -e * 50.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn matches_dense_exponential() {
        let n = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-0.1..0.1));
        let h = &a + a.transpose();
        let eig = SymmetricEigen::new(h.clone());
        let mut psi = random_state(n, 4);
        let start = psi.clone();
        let mut k = KrylovStepper::new(&h, KrylovOptions::default()).unwrap();
        let (dt, steps) = (0.7, 30);
        for _ in 0..steps {
            k.step(&mut psi, dt).unwrap();
        }
        let t = dt * steps as f64;
        for i in 0..n {
            let mut want = C64::new(0.0, 0.0);
            for kk in 0..n {
                let proj: C64 = (0..n).map(|j| start[j] * eig.eigenvectors[(j, kk)]).sum();
                want += eig.eigenvectors[(i, kk)] * proj * C64::from_polar(1.0, -eig.eigenvalues[kk] * t);
            }
            assert!((psi[i] - want).norm() < 1e-9);
        }
        assert!((cnorm(&psi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grows_subspace_for_large_steps() {
        let d: Vec<f64> = (0..200).map(|i| 0.05 * i as f64).collect();
        let h = CsrMatrix::diagonal(&d);
        let mut psi = random_state(200, 5);
        let mut k = KrylovStepper::new(&h, KrylovOptions { krylov_dim: 4, max_dim: 30, tol: 1e-10 }).unwrap();
        let info = k.step(&mut psi, 1.0).unwrap();
        assert!(info.dim > 4 && info.error <= 1e-10);
        let mut k = KrylovStepper::new(&h, KrylovOptions { krylov_dim: 4, max_dim: 6, tol: 1e-10 }).unwrap();
        assert!(k.step(&mut psi, 5.0).is_err());
    }
}
