//! Single cavity mode: Fock-space operators, the real-space q-grid
//! representation, and the projector between them.

use crate::error::{Error, Result};
use crate::quantity::stencil::sinc_dvr_kinetic;
use crate::quantity::{CsrMatrix, Grid1D};
use crate::C64;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Polarization {
    /// Unit vector in the plane of a 2D model.
    Planar([f64; 2]),
    /// Sign along the axis of a 1D model.
    Axial(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonMode {
    /// ω in atomic units (equals ħω as an energy).
    pub frequency: f64,
    /// Magnitude of λ multiplying the unit polarization.
    pub coupling: f64,
    pub polarization: Polarization,
    pub fock_size: usize,
    pub q_grid: Option<Grid1D>,
}

impl PhotonMode {
    /// `raw_polarization` need not be normalized. With `normalize = false` its
    /// length is folded into the coupling magnitude, so λ·e_raw is preserved.
    pub fn new(
        frequency: f64,
        lambda: f64,
        raw_polarization: &[f64],
        normalize: bool,
        fock_size: usize,
        q_grid: Option<Grid1D>,
    ) -> Result<Self> {
        if !(frequency > 0.0) {
            return Err(Error::InvalidParameter(format!("photon frequency must be positive, got {frequency}")));
        }
        if fock_size == 0 {
            return Err(Error::InvalidParameter("fock_size must be at least 1".into()));
        }
        let len = raw_polarization.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(len > 0.0) {
            return Err(Error::InvalidParameter("polarization vector is zero".into()));
        }
        let polarization = match raw_polarization {
            [s] => Polarization::Axial(s.signum()),
            [x, y] => Polarization::Planar([x / len, y / len]),
            _ => return Err(Error::InvalidParameter("polarization must have 1 or 2 components".into())),
        };
        if let Some(g) = &q_grid {
            let (a, b) = g.extent();
            if (a + b).abs() > 1e-9 * g.spacing {
                return Err(Error::InvalidGrid("q grid must be symmetric about 0".into()));
            }
        }
        let coupling = if normalize { lambda } else { lambda * len };
        Ok(Self { frequency, coupling, polarization, fock_size, q_grid })
    }

    pub fn with_coupling(&self, lambda_eff: f64) -> Self {
        Self { coupling: lambda_eff, ..self.clone() }
    }

    /// λ as a vector (2D) or signed scalar (1D, first component).
    pub fn lambda_vector(&self) -> [f64; 2] {
        match self.polarization {
            Polarization::Planar([x, y]) => [self.coupling * x, self.coupling * y],
            Polarization::Axial(s) => [self.coupling * s, 0.0],
        }
    }

    /// √(ħ/ω): width scale of the oscillator.
    pub fn oscillator_length(&self) -> f64 {
        1.0 / self.frequency.sqrt()
    }

    pub fn q_grid(&self) -> Result<&Grid1D> {
        self.q_grid
            .as_ref()
            .ok_or_else(|| Error::RepresentationMismatch("photon mode has no q grid".into()))
    }

    pub fn number_operator(&self) -> CsrMatrix {
        CsrMatrix::diagonal(&(0..self.fock_size).map(|n| n as f64).collect::<Vec<_>>())
    }

    /// q̂ = (a† + a)/√(2ω) in the truncated Fock basis.
    pub fn q_fock(&self) -> CsrMatrix {
        let n = self.fock_size;
        let s = 1.0 / (2.0 * self.frequency).sqrt();
        let mut trip = Vec::new();
        for k in 0..n.saturating_sub(1) {
            let v = s * ((k + 1) as f64).sqrt();
            trip.push((k, k + 1, v));
            trip.push((k + 1, k, v));
        }
        CsrMatrix::from_triplets(n, n, trip).expect("in range")
    }

    /// ω(n + ½), diagonal.
    pub fn hamiltonian_fock(&self) -> CsrMatrix {
        CsrMatrix::diagonal(
            &(0..self.fock_size)
                .map(|n| self.frequency * (n as f64 + 0.5))
                .collect::<Vec<_>>(),
        )
    }

    /// −½∂²_q + ½ω²q² on the q grid (sinc-DVR kinetic).
    pub fn hamiltonian_qgrid(&self) -> Result<DMatrix<f64>> {
        let g = self.q_grid()?;
        let mut h = sinc_dvr_kinetic(g, 1.0)?;
        for (i, q) in g.coords().iter().enumerate() {
            h[(i, i)] += 0.5 * self.frequency * self.frequency * q * q;
        }
        Ok(h)
    }

    pub fn q_qgrid(&self) -> Result<CsrMatrix> {
        Ok(CsrMatrix::diagonal(&self.q_grid()?.coords()))
    }

    pub fn fock_qgrid_projector(&self) -> Result<DMatrix<f64>> {
        let g = self.q_grid()?;
        oscillator_projector(self.frequency, g, self.fock_size)
    }
}

/// P[n, i] = φ_n(q_i)·√Δq for n < n_states, via the normalized three-term
/// recurrence (no raw Hermite polynomials, so no overflow for moderate n).
pub fn oscillator_projector(omega: f64, grid: &Grid1D, n_states: usize) -> Result<DMatrix<f64>> {
    let q = grid.coords();
    let mut p = DMatrix::zeros(n_states, q.len());
    let norm0 = (omega / PI).powf(0.25);
    let sq = grid.spacing.sqrt();
    for (i, &qi) in q.iter().enumerate() {
        let mut prev = 0.0;
        let mut cur = norm0 * (-0.5 * omega * qi * qi).exp();
        for n in 0..n_states {
            if !cur.is_finite() {
                return Err(Error::HermiteRange { n });
            }
            p[(n, i)] = cur * sq;
            let next = (2.0 * omega / (n as f64 + 1.0)).sqrt() * qi * cur
                - (n as f64 / (n as f64 + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
    }
    Ok(p)
}

/// max |P Pᵀ − I|: how well the grid resolves the Fock states it maps.
pub fn projector_defect(p: &DMatrix<f64>) -> f64 {
    let g = p * p.transpose();
    let n = g.nrows();
    (g - DMatrix::identity(n, n)).abs().max()
}

/// Truncated coherent-state amplitudes e^{−|α|²/2} αⁿ/√n!; also returns the
/// norm lost to truncation.
pub fn coherent_amplitudes(alpha: C64, fock_size: usize) -> (Vec<C64>, f64) {
    let mut c = Vec::with_capacity(fock_size);
    let mut cur = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..fock_size {
        c.push(cur);
        cur = cur * alpha / ((n + 1) as f64).sqrt();
    }
    let kept: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    (c, (1.0 - kept).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::units::{unit_scale, Dimension};

    fn mode(q_points: usize, dq: f64) -> PhotonMode {
        let w = 1.41 / crate::quantity::units::HARTREE_MEV;
        PhotonMode::new(w, 0.0, &[1.0, 1.0], true, 41, Some(Grid1D::centered(q_points, dq).unwrap())).unwrap()
    }

    #[test]
    fn ground_row_is_gaussian() {
        let m = mode(161, 6.77 / 4.0 * 19.7996);
        let p = m.fock_qgrid_projector().unwrap();
        let g = m.q_grid.as_ref().unwrap();
        let w = m.frequency;
        for (i, q) in g.coords().iter().enumerate() {
            let want = (w / PI).powf(0.25) * (-0.5 * w * q * q).exp() * g.spacing.sqrt();
            assert!((p[(0, i)] - want).abs() < 1e-10);
        }
    }

    #[test]
    fn fine_grid_projector_is_unitary_on_fock_block() {
        let dq = 6.77 / 4.0 * unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs").unwrap();
        let p = mode(161, dq).fock_qgrid_projector().unwrap();
        assert!(projector_defect(&p) < 1e-10);
    }

    #[test]
    fn coarse_grid_projector_only_resolves_low_states() {
        let dq = 6.77 * unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs").unwrap();
        let p = mode(41, dq).fock_qgrid_projector().unwrap();
        let low = p.rows(0, 1).into_owned();
        assert!(projector_defect(&low) < 1e-4);
        assert!(projector_defect(&p) > 0.1);
    }

    #[test]
    fn coherent_state_displacement() {
        let dq = 6.77 / 4.0 * unit_scale(Dimension::PhotonCoordinate, "sqrt(aJ)*fs").unwrap();
        let m = mode(161, dq);
        let p = m.fock_qgrid_projector().unwrap();
        let (c, loss) = coherent_amplitudes(C64::new(2.0, 0.0), 41);
        assert!(loss < 1e-12);
        let q = m.q_grid.as_ref().unwrap().coords();
        let mut mean = 0.0;
        for (i, qi) in q.iter().enumerate() {
            let amp: f64 = (0..41).map(|n| c[n].re * p[(n, i)]).sum();
            mean += qi * amp * amp;
        }
        let want = (2.0 / m.frequency).sqrt() * 2.0;
        assert!((mean - want).abs() < 1e-6 * want);
    }

    #[test]
    fn polarization_conventions() {
        let a = PhotonMode::new(1.0, 0.5, &[1.0, 1.0], true, 3, None).unwrap();
        let b = PhotonMode::new(1.0, 0.5, &[1.0, 1.0], false, 3, None).unwrap();
        assert!((a.lambda_vector()[0] - 0.5 / 2f64.sqrt()).abs() < 1e-15);
        assert!((b.lambda_vector()[0] - 0.5).abs() < 1e-15);
        assert!(PhotonMode::new(0.0, 0.5, &[1.0], true, 3, None).is_err());
        assert!(PhotonMode::new(1.0, 0.5, &[1.0], true, 0, None).is_err());
    }

    #[test]
    fn fock_and_grid_oscillators_agree() {
        let m = PhotonMode::new(0.3, 0.0, &[1.0], true, 10, Some(Grid1D::centered(121, 0.3).unwrap())).unwrap();
        let h = m.hamiltonian_qgrid().unwrap();
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for n in 0..10 {
            assert!((ev[n] - m.hamiltonian_fock().get(n, n)).abs() < 1e-9, "{n} {} {}", ev[n], m.hamiltonian_fock().get(n, n));
        }
    }
}
