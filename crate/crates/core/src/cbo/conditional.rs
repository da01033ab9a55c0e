//! Electronic eigenproblems with the photon displacement q (and the ion
//! position R) held fixed, solved on every point of a parameter mesh.

use crate::error::{Error, Result};
use crate::model::{MatterOperators, PhotonMode, ShinMetiu};
use crate::quantity::operator::{to_dense, LinearOperator};
use crate::quantity::{CsrMatrix, Grid1D};
use crate::spectra::{dense_eigh, lowest_eigenpairs, LanczosOptions};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AxisKind {
    /// Photon displacement; unit mass, sinc-DVR kinetic.
    Photon,
    /// Ion coordinate; finite-difference kinetic of the given order.
    Nuclear { mass: f64, stencil_order: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshAxis {
    pub grid: Grid1D,
    pub kind: AxisKind,
}

/// Tensor mesh; the last axis runs fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub axes: Vec<MeshAxis>,
}

impl Mesh {
    pub fn photon(q: Grid1D) -> Self {
        Self { axes: vec![MeshAxis { grid: q, kind: AxisKind::Photon }] }
    }

    pub fn nuclear_photon(r: Grid1D, mass: f64, stencil_order: usize, q: Grid1D) -> Self {
        Self {
            axes: vec![
                MeshAxis { grid: r, kind: AxisKind::Nuclear { mass, stencil_order } },
                MeshAxis { grid: q, kind: AxisKind::Photon },
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.grid.n_points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.grid.n_points).collect()
    }

    pub fn multi_index(&self, mut p: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (d, a) in self.axes.iter().enumerate().rev() {
            idx[d] = p % a.grid.n_points;
            p /= a.grid.n_points;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        self.axes.iter().zip(idx).fold(0, |acc, (a, &i)| acc * a.grid.n_points + i)
    }

    pub fn coords(&self, p: usize) -> Vec<f64> {
        self.multi_index(p).iter().zip(&self.axes).map(|(&i, a)| a.grid.coord(i)).collect()
    }

    pub fn photon_axis(&self) -> Option<usize> {
        self.axes.iter().position(|a| a.kind == AxisKind::Photon)
    }

    pub fn center(&self) -> usize {
        let c: Vec<usize> = self.axes.iter().map(|a| a.grid.center_index()).collect();
        self.flat_index(&c)
    }

    /// Visiting order for alignment, each point paired with an already
    /// visited neighbour: outward along the last axis through the centre,
    /// then outward along the first axis for every value of the last.
    pub fn outward_sweep(&self) -> Vec<(usize, Option<usize>)> {
        let shape = self.shape();
        let c: Vec<usize> = self.axes.iter().map(|a| a.grid.center_index()).collect();
        let mut order = vec![(self.flat_index(&c), None)];
        let outward = |n: usize, c: usize| -> Vec<(usize, usize)> {
            let mut v = Vec::new();
            for i in (c + 1)..n {
                v.push((i, i - 1));
            }
            for i in (0..c).rev() {
                v.push((i, i + 1));
            }
            v
        };
        let last = shape.len() - 1;
        for (i, from) in outward(shape[last], c[last]) {
            let mut a = c.clone();
            let mut b = c.clone();
            a[last] = i;
            b[last] = from;
            order.push((self.flat_index(&a), Some(self.flat_index(&b))));
        }
        if shape.len() == 2 {
            for j in 0..shape[1] {
                for (i, from) in outward(shape[0], c[0]) {
                    order.push((self.flat_index(&[i, j]), Some(self.flat_index(&[from, j]))));
                }
            }
        }
        order
    }
}

/// Source of the electronic Hamiltonian at a mesh point, plus the parts of
/// the cavity surface that are c-numbers at that point.
pub trait ConditionalProblem: Sync {
    fn basis_dim(&self) -> usize;
    fn electronic_operator(&self, point: &[f64]) -> Result<Box<dyn LinearOperator>>;
    /// ½ω²q² at the point.
    fn photon_potential(&self, point: &[f64]) -> f64;
    /// Ion potential and ion-photon coupling at the point (zero without ions).
    fn nuclear_potential(&self, point: &[f64]) -> f64;
}

/// h(q) = H_m + ω q (λ·X) + ½(λ·X)² for matter without a moving ion.
pub struct MatterConditional {
    pub matter: MatterOperators,
    pub omega: f64,
}

impl MatterConditional {
    pub fn new(matter: MatterOperators, mode: &PhotonMode) -> Self {
        Self { matter, omega: mode.frequency }
    }
}

struct Combination {
    dim: usize,
    parts: Vec<(f64, Arc<dyn LinearOperator>)>,
}

impl LinearOperator for Combination {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        let mut buf = vec![0.0; self.dim];
        for (c, op) in &self.parts {
            op.apply(x, &mut buf);
            for (y, b) in y.iter_mut().zip(&buf) {
                *y += c * b;
            }
        }
    }
}

impl ConditionalProblem for MatterConditional {
    fn basis_dim(&self) -> usize {
        self.matter.dim
    }

    fn electronic_operator(&self, point: &[f64]) -> Result<Box<dyn LinearOperator>> {
        let q = point[point.len() - 1];
        let m = &self.matter;
        if m.nuclear_dipole.is_some() {
            return Err(Error::RepresentationMismatch("matter has a moving ion; use a nuclear-photon mesh".into()));
        }
        let mut parts = vec![(1.0, m.hamiltonian.clone()), (self.omega * q, m.electron_dipole.clone())];
        if let Some(s) = &m.self_energy {
            parts.push((1.0, s.clone()));
        }
        Ok(Box::new(Combination { dim: m.dim, parts }))
    }

    fn photon_potential(&self, point: &[f64]) -> f64 {
        let q = point[point.len() - 1];
        0.5 * self.omega * self.omega * q * q
    }

    fn nuclear_potential(&self, _point: &[f64]) -> f64 {
        0.0
    }
}

/// Shin-Metiu electron at fixed (R, q); mesh axes are [R, q].
pub struct ShinMetiuConditional {
    pub model: ShinMetiu,
    pub omega: f64,
    pub lambda: f64,
    kinetic: CsrMatrix,
    r: Vec<f64>,
}

impl ShinMetiuConditional {
    pub fn new(model: &ShinMetiu, mode: &PhotonMode) -> Result<Self> {
        let kinetic = crate::quantity::stencil::kinetic_1d(&model.electron_grid, 1.0, model.stencil_order)?;
        Ok(Self {
            model: model.clone(),
            omega: mode.frequency,
            lambda: mode.lambda_vector()[0],
            kinetic,
            r: model.electron_grid.coords(),
        })
    }
}

impl ConditionalProblem for ShinMetiuConditional {
    fn basis_dim(&self) -> usize {
        self.r.len()
    }

    fn electronic_operator(&self, point: &[f64]) -> Result<Box<dyn LinearOperator>> {
        let (big_r, q) = (point[0], point[1]);
        let (l, w, z) = (self.lambda, self.omega, self.model.charge);
        let diag: Vec<f64> = self
            .r
            .iter()
            .map(|&r| {
                let x = z * big_r - r;
                self.model.electron_potential(r, big_r) - w * q * l * r + 0.5 * l * l * x * x
            })
            .collect();
        Ok(Box::new(self.kinetic.add_scaled(1.0, &CsrMatrix::diagonal(&diag))?))
    }

    fn photon_potential(&self, point: &[f64]) -> f64 {
        0.5 * self.omega * self.omega * point[1] * point[1]
    }

    fn nuclear_potential(&self, point: &[f64]) -> f64 {
        let (big_r, q) = (point[0], point[1]);
        self.model.nuclear_potential(big_r) + self.omega * q * self.lambda * self.model.charge * big_r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlignmentFlag {
    pub point: usize,
    pub state: usize,
    pub overlap: f64,
}

/// Per-point lowest electronic eigenpairs on a mesh.
#[derive(Debug, Clone)]
pub struct ConditionalSolveSet {
    pub mesh: Mesh,
    pub n_states: usize,
    /// energies[p][j], ascending in j.
    pub energies: Vec<Vec<f64>>,
    /// vectors[p]: basis_dim × n_states.
    pub vectors: Vec<DMatrix<f64>>,
    pub aligned: bool,
    pub flags: Vec<AlignmentFlag>,
    /// Points at which the surface-side c-number terms were evaluated.
    pub photon_potential: Vec<f64>,
    pub nuclear_potential: Vec<f64>,
}

/// Problems up to this size are diagonalized densely at each point.
const DENSE_LIMIT: usize = 800;

pub fn solve_conditional(problem: &dyn ConditionalProblem, mesh: &Mesh, n_states: usize) -> Result<ConditionalSolveSet> {
    if n_states == 0 || n_states > problem.basis_dim() {
        return Err(Error::InvalidParameter(format!("cannot request {n_states} conditional states")));
    }
    let points: Vec<Vec<f64>> = (0..mesh.len()).map(|p| mesh.coords(p)).collect();
    let solved: Vec<Result<(Vec<f64>, DMatrix<f64>)>> = points
        .par_iter()
        .map(|pt| {
            let op = problem.electronic_operator(pt)?;
            let s = if op.dim() <= DENSE_LIMIT {
                dense_eigh(&to_dense(op.as_ref()), n_states)
            } else {
                lowest_eigenpairs(op.as_ref(), &LanczosOptions { k: n_states, tol: 1e-11, ..Default::default() })
                    .map_err(|e| Error::InvalidParameter(format!("conditional solve failed at {pt:?}: {e}")))?
            };
            Ok((s.values, s.vectors))
        })
        .collect();
    let mut energies = Vec::with_capacity(points.len());
    let mut vectors = Vec::with_capacity(points.len());
    for r in solved {
        let (e, v) = r?;
        energies.push(e);
        vectors.push(v);
    }
    let mut set = ConditionalSolveSet {
        mesh: mesh.clone(),
        n_states,
        energies,
        vectors,
        aligned: false,
        flags: Vec::new(),
        photon_potential: points.iter().map(|p| problem.photon_potential(p)).collect(),
        nuclear_potential: points.iter().map(|p| problem.nuclear_potential(p)).collect(),
    };
    set.align();
    Ok(set)
}

impl ConditionalSolveSet {
    /// Fix signs (and rotations inside exactly degenerate clusters) so that
    /// each point overlaps its reference neighbour maximally.
    pub fn align(&mut self) {
        self.flags.clear();
        for (p, from) in self.mesh.outward_sweep() {
            let Some(r) = from else { continue };
            let reference = self.vectors[r].clone();
            let e = self.energies[p].clone();
            let v = &mut self.vectors[p];
            let mut j = 0;
            while j < self.n_states {
                let mut end = j + 1;
                while end < self.n_states && (e[end] - e[j]).abs() <= 1e-9 * e[j].abs().max(1e-12) {
                    end += 1;
                }
                if end - j > 1 {
                    let m = reference.columns(j, end - j).transpose() * v.columns(j, end - j);
                    let svd = m.svd(true, true);
                    let q = svd.v_t.unwrap().transpose() * svd.u.unwrap().transpose();
                    let rotated = v.columns(j, end - j) * q;
                    v.columns_mut(j, end - j).copy_from(&rotated);
                } else if reference.column(j).dot(&v.column(j)) < 0.0 {
                    v.column_mut(j).neg_mut();
                }
                j = end;
            }
            for j in 0..self.n_states {
                let o = reference.column(j).dot(&v.column(j));
                if o.abs() < 0.5 {
                    self.flags.push(AlignmentFlag { point: p, state: j, overlap: o });
                }
            }
        }
        self.aligned = true;
    }

    pub fn energy_curve(&self, j: usize) -> Vec<f64> {
        self.energies.iter().map(|e| e[j]).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::MatterLayout;

    pub(crate) fn toy_problem(lambda: f64) -> (MatterConditional, PhotonMode) {
        let n = 15;
        let g = Grid1D::centered(n, 0.6).unwrap();
        let t = crate::quantity::stencil::kinetic_1d(&g, 1.0, 2).unwrap();
        let x = g.coords();
        let v: Vec<f64> = x.iter().map(|x| 0.05 * x.powi(4) - 0.4 * x * x + 0.03 * x).collect();
        let h = t.add_scaled(1.0, &CsrMatrix::diagonal(&v)).unwrap();
        let mode = PhotonMode::new(0.25, lambda, &[1.0], true, 5, Some(Grid1D::centered(21, 0.5).unwrap())).unwrap();
        let dip: Vec<f64> = x.iter().map(|x| -lambda * x).collect();
        let dse: Vec<f64> = x.iter().map(|x| 0.5 * lambda * lambda * x * x).collect();
        let m = MatterOperators {
            dim: n,
            layout: MatterLayout::Custom { dim: n },
            hamiltonian: Arc::new(h),
            nuclear_kinetic: None,
            electron_dipole: Arc::new(CsrMatrix::diagonal(&dip)),
            nuclear_dipole: None,
            self_energy: Some(Arc::new(CsrMatrix::diagonal(&dse))),
        };
        (MatterConditional::new(m, &mode), mode)
    }

    #[test]
    fn zero_coupling_is_q_independent() {
        let (p, mode) = toy_problem(0.0);
        let set = solve_conditional(&p, &Mesh::photon(mode.q_grid.clone().unwrap()), 3).unwrap();
        for j in 0..3 {
            let c = set.energy_curve(j);
            let spread = c.iter().cloned().fold(f64::MIN, f64::max) - c.iter().cloned().fold(f64::MAX, f64::min);
            assert!(spread <= 1e-10);
        }
    }

    #[test]
    fn matches_dense_oracle_per_point() {
        let (p, mode) = toy_problem(0.4);
        let mesh = Mesh::photon(mode.q_grid.clone().unwrap());
        let set = solve_conditional(&p, &mesh, 4).unwrap();
        let x = Grid1D::centered(15, 0.6).unwrap().coords();
        for pt in 0..mesh.len() {
            let q = mesh.coords(pt)[0];
            // independent build: tridiagonal kinetic plus diagonal terms
            let mut h = DMatrix::zeros(15, 15);
            for i in 0..15 {
                h[(i, i)] = 1.0 / 0.36 + 0.05 * x[i].powi(4) - 0.4 * x[i] * x[i] + 0.03 * x[i]
                    - 0.25 * q * 0.4 * x[i]
                    + 0.5 * 0.16 * x[i] * x[i];
                if i + 1 < 15 {
                    h[(i, i + 1)] = -0.5 / 0.36;
                    h[(i + 1, i)] = -0.5 / 0.36;
                }
            }
            let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(|a, b| a.total_cmp(b));
            for j in 0..4 {
                assert!((set.energies[pt][j] - ev[j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn alignment_gives_positive_overlaps_and_is_idempotent() {
        let (p, mode) = toy_problem(0.4);
        let mesh = Mesh::photon(mode.q_grid.clone().unwrap());
        let mut set = solve_conditional(&p, &mesh, 3).unwrap();
        for (pt, from) in mesh.outward_sweep() {
            if let Some(r) = from {
                for j in 0..3 {
                    assert!(set.vectors[r].column(j).dot(&set.vectors[pt].column(j)) >= 0.0);
                }
            }
        }
        let before = set.vectors.clone();
        set.align();
        for (a, b) in before.iter().zip(&set.vectors) {
            assert!((a - b).abs().max() < 1e-12);
        }
    }

    #[test]
    fn sweep_visits_every_point_once() {
        let mesh = Mesh::nuclear_photon(Grid1D::centered(7, 1.0).unwrap(), 100.0, 2, Grid1D::centered(5, 1.0).unwrap());
        let order = mesh.outward_sweep();
        let mut seen = vec![false; mesh.len()];
        for (p, from) in &order {
            assert!(!seen[*p]);
            if let Some(f) = from {
                assert!(seen[*f]);
            }
            seen[*p] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
