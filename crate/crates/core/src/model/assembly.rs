//! Matter operators in a chosen basis, and their Kronecker assembly with the
//! photon mode into the composite Hamiltonian
//! H = H_m ⊗ 1 + 1 ⊗ H_p + ω (λ·X_e + λ·X_n) ⊗ q̂ + ½(λ·X)² ⊗ 1.

use super::photon::PhotonMode;
use super::ring::QuantumRing;
use super::shin_metiu::ShinMetiu;
use crate::error::{Error, Result};
use crate::quantity::operator::{KronSum, LinearOperator, PhotonFactor};
use crate::quantity::CsrMatrix;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhotonBasis {
    Fock,
    QGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MatterLayout {
    /// Electron grid points, x fastest.
    RingGrid { nx: usize, ny: usize },
    /// Lowest bare eigenstates of a ring.
    RingEigen { n_states: usize },
    /// (r, R) grid, r fastest.
    ShinMetiuGrid { n_r: usize, n_big_r: usize },
    /// Per-R electronic eigenstates, state index fastest.
    ShinMetiuAdiabatic { n_states: usize, n_big_r: usize },
    Custom { dim: usize },
}

/// Matter-side operators. Couplings already carry λ.
#[derive(Clone)]
pub struct MatterOperators {
    pub dim: usize,
    pub layout: MatterLayout,
    /// Electronic Hamiltonian (plus nuclear kinetic and potential terms when
    /// the basis mixes them, see `nuclear_kinetic`).
    pub hamiltonian: Arc<dyn LinearOperator>,
    /// Separate nuclear kinetic term on grid layouts; `None` if folded in.
    pub nuclear_kinetic: Option<Arc<dyn LinearOperator>>,
    /// λ·X_e.
    pub electron_dipole: Arc<dyn LinearOperator>,
    /// λ·X_n.
    pub nuclear_dipole: Option<Arc<dyn LinearOperator>>,
    /// ½(λ·X)²; `None` when it is already part of `hamiltonian`.
    pub self_energy: Option<Arc<dyn LinearOperator>>,
}

/// Lowest bare eigenpairs of a grid Hamiltonian; columns are states.
#[derive(Debug, Clone)]
pub struct BareBasis {
    pub energies: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl BareBasis {
    /// Vᵀ diag(w) V for a function sampled on the grid.
    pub fn project_diagonal(&self, w: &[f64]) -> DMatrix<f64> {
        let v = &self.vectors;
        let mut wv = v.clone();
        for (i, mut row) in wv.row_iter_mut().enumerate() {
            row *= w[i];
        }
        let m = v.transpose() * wv;
        0.5 * (&m + m.transpose())
    }
}

impl MatterOperators {
    /// Ring on its real-space grid.
    pub fn ring_grid(ring: &QuantumRing, mode: &PhotonMode) -> Result<Self> {
        let lam = mode.lambda_vector();
        let s = ring.projected_position(lam);
        let dip: Vec<f64> = s.iter().map(|v| -v).collect();
        let dse: Vec<f64> = s.iter().map(|v| 0.5 * v * v).collect();
        Ok(Self {
            dim: ring.grid.len(),
            layout: MatterLayout::RingGrid { nx: ring.grid.x.n_points, ny: ring.grid.y.n_points },
            hamiltonian: Arc::new(ring.hamiltonian()?),
            nuclear_kinetic: None,
            electron_dipole: Arc::new(CsrMatrix::diagonal(&dip)),
            nuclear_dipole: None,
            self_energy: Some(Arc::new(CsrMatrix::diagonal(&dse))),
        })
    }

    /// Ring projected onto bare eigenstates computed on its grid.
    pub fn ring_eigen(ring: &QuantumRing, mode: &PhotonMode, basis: &BareBasis) -> Result<Self> {
        let n = ring.grid.len();
        if basis.vectors.nrows() != n {
            return Err(Error::RepresentationMismatch(format!(
                "bare basis has {} rows, grid has {n} points",
                basis.vectors.nrows()
            )));
        }
        let s = ring.projected_position(mode.lambda_vector());
        let ne = basis.vectors.ncols();
        let dip = basis.project_diagonal(&s.iter().map(|x| -x).collect::<Vec<_>>());
        let dse = basis.project_diagonal(&s.iter().map(|x| 0.5 * x * x).collect::<Vec<_>>());
        Ok(Self {
            dim: ne,
            layout: MatterLayout::RingEigen { n_states: ne },
            hamiltonian: Arc::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(basis.energies.clone()))),
            nuclear_kinetic: None,
            electron_dipole: Arc::new(dip),
            nuclear_dipole: None,
            self_energy: Some(Arc::new(dse)),
        })
    }

    /// Shin-Metiu on the full (r, R) grid.
    pub fn shin_metiu_grid(sm: &ShinMetiu, mode: &PhotonMode) -> Result<Self> {
        let lam = mode.lambda_vector()[0];
        let r = sm.electron_grid.coords();
        let bigr = sm.nuclear_grid.coords();
        let (nr, nb) = (r.len(), bigr.len());
        let te = crate::quantity::stencil::kinetic_1d(&sm.electron_grid, 1.0, sm.stencil_order)?;
        let tn = sm.nuclear_kinetic()?;
        let he = CsrMatrix::identity(nb).kron(&te)?;
        let tn_full = tn.kron(&CsrMatrix::identity(nr))?;
        let mut pot = Vec::with_capacity(nr * nb);
        let mut xe = Vec::with_capacity(nr * nb);
        let mut xn = Vec::with_capacity(nr * nb);
        let mut dse = Vec::with_capacity(nr * nb);
        for &bq in &bigr {
            for &rq in &r {
                pot.push(sm.electron_potential(rq, bq) + sm.nuclear_potential(bq));
                xe.push(-lam * rq);
                xn.push(lam * sm.charge * bq);
                let x = sm.charge * bq - rq;
                dse.push(0.5 * lam * lam * x * x);
            }
        }
        Ok(Self {
            dim: nr * nb,
            layout: MatterLayout::ShinMetiuGrid { n_r: nr, n_big_r: nb },
            hamiltonian: Arc::new(he.add_scaled(1.0, &CsrMatrix::diagonal(&pot))?),
            nuclear_kinetic: Some(Arc::new(tn_full)),
            electron_dipole: Arc::new(CsrMatrix::diagonal(&xe)),
            nuclear_dipole: Some(Arc::new(CsrMatrix::diagonal(&xn))),
            self_energy: Some(Arc::new(CsrMatrix::diagonal(&dse))),
        })
    }

    /// Shin-Metiu in a per-R adiabatic basis (discrete Born-Huang expansion).
    ///
    /// At each nuclear grid point the electronic Hamiltonian including the
    /// self-energy is diagonalized and the lowest `n_states` kept. The
    /// nuclear kinetic stencil couples neighbouring points through overlaps
    /// of their basis sets, so no derivative couplings are dropped.
    pub fn shin_metiu_adiabatic(sm: &ShinMetiu, mode: &PhotonMode, n_states: usize) -> Result<Self> {
        let basis = ShinMetiuAdiabaticBasis::new(sm, mode, n_states)?;
        basis.operators(sm, mode)
    }
}

/// Per-R electronic eigenstates with the self-energy included.
#[derive(Debug, Clone)]
pub struct ShinMetiuAdiabaticBasis {
    pub n_states: usize,
    pub energies: Vec<Vec<f64>>,
    /// One (n_r × n_states) block per nuclear grid point.
    pub vectors: Vec<DMatrix<f64>>,
}

impl ShinMetiuAdiabaticBasis {
    pub fn new(sm: &ShinMetiu, mode: &PhotonMode, n_states: usize) -> Result<Self> {
        let nr = sm.electron_grid.n_points;
        if n_states == 0 || n_states > nr {
            return Err(Error::InvalidParameter(format!("adiabatic basis size {n_states} out of range")));
        }
        let lam = mode.lambda_vector()[0];
        let r = sm.electron_grid.coords();
        let mut energies = Vec::new();
        let mut vectors = Vec::new();
        for bq in sm.nuclear_grid.coords() {
            let mut h = sm.electronic_hamiltonian(bq)?.to_dense();
            for (i, &rq) in r.iter().enumerate() {
                let x = sm.charge * bq - rq;
                h[(i, i)] += 0.5 * lam * lam * x * x;
            }
            let (e, v) = sorted_eigh(h, n_states);
            energies.push(e);
            vectors.push(v);
        }
        let mut basis = Self { n_states, energies, vectors };
        basis.align_signs();
        Ok(basis)
    }

    /// Make each state's overlap with its left neighbour positive.
    fn align_signs(&mut self) {
        for i in 1..self.vectors.len() {
            let (left, right) = self.vectors.split_at_mut(i);
            let prev = &left[i - 1];
            let cur = &mut right[0];
            for j in 0..self.n_states {
                if prev.column(j).dot(&cur.column(j)) < 0.0 {
                    cur.column_mut(j).neg_mut();
                }
            }
        }
    }

    pub fn operators(&self, sm: &ShinMetiu, mode: &PhotonMode) -> Result<MatterOperators> {
        let lam = mode.lambda_vector()[0];
        let nb = self.n_states;
        let npts = sm.nuclear_grid.n_points;
        let tn = sm.nuclear_kinetic()?;
        let bigr = sm.nuclear_grid.coords();
        let r = sm.electron_grid.coords();
        let mut h = Vec::new();
        let mut xe = Vec::new();
        let mut xn = Vec::new();
        for (i, &bq) in bigr.iter().enumerate() {
            for k in tn.row_ptr[i]..tn.row_ptr[i + 1] {
                let (j, c) = (tn.col_idx[k], tn.values[k]);
                let s = if i == j {
                    DMatrix::identity(nb, nb)
                } else {
                    self.vectors[i].transpose() * &self.vectors[j]
                };
                for a in 0..nb {
                    for b in 0..nb {
                        h.push((i * nb + a, j * nb + b, c * s[(a, b)]));
                    }
                }
            }
            let v = &self.vectors[i];
            for a in 0..nb {
                h.push((i * nb + a, i * nb + a, self.energies[i][a] + sm.nuclear_potential(bq)));
                xn.push((i * nb + a, i * nb + a, lam * sm.charge * bq));
                for b in 0..nb {
                    let m: f64 = (0..r.len()).map(|k| v[(k, a)] * r[k] * v[(k, b)]).sum();
                    xe.push((i * nb + a, i * nb + b, -lam * m));
                }
            }
        }
        let dim = npts * nb;
        let h = CsrMatrix::from_triplets(dim, dim, h)?;
        let xe = CsrMatrix::from_triplets(dim, dim, xe)?;
        let xn = CsrMatrix::from_triplets(dim, dim, xn)?;
        Ok(MatterOperators {
            dim,
            layout: MatterLayout::ShinMetiuAdiabatic { n_states: nb, n_big_r: npts },
            hamiltonian: Arc::new(h),
            nuclear_kinetic: None,
            electron_dipole: Arc::new(xe),
            nuclear_dipole: Some(Arc::new(xn)),
            self_energy: None,
        })
    }
}

/// Lowest `k` eigenpairs of a dense symmetric matrix, ascending.
pub fn sorted_eigh(h: DMatrix<f64>, k: usize) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let k = k.min(idx.len());
    let e = idx[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
    let v = DMatrix::from_fn(eig.eigenvectors.nrows(), k, |r, c| eig.eigenvectors[(r, idx[c])]);
    (e, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Matter,
    NuclearKinetic,
    Photon,
    ElectronPhoton,
    NuclearPhoton,
    SelfEnergy,
}

/// Every term of the composite Hamiltonian as a Kronecker sum on
/// matter ⊗ photon (matter index fastest).
#[derive(Clone)]
pub struct HamiltonianAssembly {
    pub matter: MatterOperators,
    pub mode: PhotonMode,
    pub photon_basis: PhotonBasis,
    pub photon_dim: usize,
    photon_h: PhotonFactor,
    photon_q: PhotonFactor,
}

/// Composite dimensions beyond this are refused outright.
pub const MAX_COMPOSITE_DIM: u128 = 1 << 31;

impl HamiltonianAssembly {
    pub fn new(matter: MatterOperators, mode: &PhotonMode, basis: PhotonBasis) -> Result<Self> {
        let (photon_dim, photon_h, photon_q) = match basis {
            PhotonBasis::Fock => (
                mode.fock_size,
                PhotonFactor::Sparse(mode.hamiltonian_fock()),
                PhotonFactor::Sparse(mode.q_fock()),
            ),
            PhotonBasis::QGrid => {
                let g = mode.q_grid()?;
                (g.n_points, PhotonFactor::Dense(mode.hamiltonian_qgrid()?), PhotonFactor::Sparse(mode.q_qgrid()?))
            }
        };
        let dim = matter.dim as u128 * photon_dim as u128;
        if dim > MAX_COMPOSITE_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        Ok(Self { matter, mode: mode.clone(), photon_basis: basis, photon_dim, photon_h, photon_q })
    }

    pub fn dim(&self) -> usize {
        self.matter.dim * self.photon_dim
    }

    pub fn term(&self, t: Term) -> Option<KronSum> {
        let mut k = KronSum::new(self.matter.dim, self.photon_dim);
        let w = self.mode.frequency;
        match t {
            Term::Matter => k.push(1.0, Some(self.matter.hamiltonian.clone()), PhotonFactor::Identity),
            Term::NuclearKinetic => k.push(1.0, Some(self.matter.nuclear_kinetic.clone()?), PhotonFactor::Identity),
            Term::Photon => k.push(1.0, None, self.photon_h.clone()),
            Term::ElectronPhoton => k.push(w, Some(self.matter.electron_dipole.clone()), self.photon_q.clone()),
            Term::NuclearPhoton => k.push(w, Some(self.matter.nuclear_dipole.clone()?), self.photon_q.clone()),
            Term::SelfEnergy => k.push(1.0, Some(self.matter.self_energy.clone()?), PhotonFactor::Identity),
        }
        Some(k)
    }

    pub fn total(&self) -> KronSum {
        let mut k = KronSum::new(self.matter.dim, self.photon_dim);
        for t in [Term::Matter, Term::NuclearKinetic, Term::Photon, Term::ElectronPhoton, Term::NuclearPhoton, Term::SelfEnergy] {
            if let Some(part) = self.term(t) {
                k.terms.extend(part.terms);
            }
        }
        k
    }

    /// Photon-vacuum energy ½ħω; subtract it to quote energies relative to the
    /// empty cavity.
    pub fn vacuum_energy(&self) -> f64 {
        0.5 * self.mode.frequency
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::operator::{hermiticity_defect, to_dense};
    use crate::quantity::{Grid1D, Grid2D};

    fn toy_ring() -> (QuantumRing, PhotonMode) {
        let g = Grid1D::centered(3, 4.0).unwrap();
        let ring = QuantumRing::new(0.2, 1.0, 3.0, 0.5, Grid2D::new(g.clone(), g), 2).unwrap();
        let mode = PhotonMode::new(0.3, 0.2, &[1.0, 1.0], false, 3, Some(Grid1D::centered(9, 0.5).unwrap())).unwrap();
        (ring, mode)
    }

    #[test]
    fn nine_point_grid_matches_elementwise_oracle() {
        let (ring, mode) = toy_ring();
        let asm = HamiltonianAssembly::new(MatterOperators::ring_grid(&ring, &mode).unwrap(), &mode, PhotonBasis::Fock).unwrap();
        let got = to_dense(&asm.total());
        // independent construction, index = n*9 + (iy*3 + ix)
        let h = 4.0;
        let m = 0.5;
        let w = 0.3;
        let lam = 0.2;
        let mut want = DMatrix::zeros(27, 27);
        for n in 0..3 {
            for a in 0..9 {
                let (ax, ay) = (a % 3, a / 3);
                let (x, y) = ((ax as f64 - 1.0) * h, (ay as f64 - 1.0) * h);
                let s = lam * (x + y);
                let i = n * 9 + a;
                want[(i, i)] += ring.potential(x, y) + 2.0 / (m * h * h) + w * (n as f64 + 0.5) + 0.5 * s * s;
                for b in 0..9 {
                    let (bx, by) = (b % 3, b / 3);
                    let adj = (ax.abs_diff(bx) == 1 && ay == by) || (ay.abs_diff(by) == 1 && ax == bx);
                    if adj {
                        want[(i, n * 9 + b)] += -0.5 / (m * h * h);
                    }
                }
                for n2 in 0..3 {
                    if n.abs_diff(n2) == 1 {
                        let q = (n.max(n2) as f64).sqrt() / (2.0 * w).sqrt();
                        want[(i, n2 * 9 + a)] += w * q * (-s);
                    }
                }
            }
        }
        assert!((got - want).abs().max() < 1e-12);
    }

    #[test]
    fn every_term_is_hermitian() {
        let (ring, mode) = toy_ring();
        for basis in [PhotonBasis::Fock, PhotonBasis::QGrid] {
            let asm = HamiltonianAssembly::new(MatterOperators::ring_grid(&ring, &mode).unwrap(), &mode, basis).unwrap();
            for t in [Term::Matter, Term::Photon, Term::ElectronPhoton, Term::SelfEnergy] {
                let op = asm.term(t).unwrap();
                assert!(hermiticity_defect(&op, 4, 7) < 1e-10, "{t:?}");
            }
        }
    }

    #[test]
    fn self_energy_is_positive() {
        let (ring, mode) = toy_ring();
        let asm = HamiltonianAssembly::new(MatterOperators::ring_grid(&ring, &mode).unwrap(), &mode, PhotonBasis::Fock).unwrap();
        let d = to_dense(&asm.term(Term::SelfEnergy).unwrap());
        assert!(d.symmetric_eigenvalues().min() >= -1e-14);
    }

    #[test]
    fn adiabatic_basis_with_all_states_matches_grid() {
        let e = Grid1D::centered(24, 0.9).unwrap();
        let n = Grid1D::centered(10, 0.35).unwrap();
        let sm = ShinMetiu::new(9.0, 50.0, 1.0, 1.4, 1.3, e, n, 2).unwrap();
        let mode = PhotonMode::new(0.01, 0.02, &[1.0], true, 4, None).unwrap();
        let grid = HamiltonianAssembly::new(MatterOperators::shin_metiu_grid(&sm, &mode).unwrap(), &mode, PhotonBasis::Fock).unwrap();
        let adia = HamiltonianAssembly::new(MatterOperators::shin_metiu_adiabatic(&sm, &mode, 24).unwrap(), &mode, PhotonBasis::Fock).unwrap();
        let mut a: Vec<f64> = to_dense(&grid.total()).symmetric_eigenvalues().iter().copied().collect();
        let mut b: Vec<f64> = to_dense(&adia.total()).symmetric_eigenvalues().iter().copied().collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for k in 0..10 {
            assert!((a[k] - b[k]).abs() < 1e-9, "{k}: {} {}", a[k], b[k]);
        }
    }
}
