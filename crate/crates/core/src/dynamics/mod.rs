//! Time propagation of the full correlated state and the observables read
//! off it: dipole, photon statistics, purity, densities and populations of
//! the cavity Born-Oppenheimer surfaces.

pub mod krylov;
pub mod observables;
pub mod trajectory;

pub use krylov::{KrylovOptions, KrylovStepper};
pub use observables::{
    electron_density, mandel_q, matter_expectation, number_resolved_populations, photon_density_matrix,
    photon_number, purity, surface_populations,
};
pub use trajectory::{propagate, Observables, PropagationOptions, TrajectoryRecord};

use crate::error::{Error, Result};
use crate::model::{photon::coherent_amplitudes, PhotonBasis, PhotonMode};
use crate::C64;
use nalgebra::DMatrix;

/// Composite amplitudes in matter-fastest layout: element (a, n) sits at
/// `n * matter_dim + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub amplitudes: Vec<C64>,
    pub matter_dim: usize,
    pub photon_dim: usize,
    pub photon_basis: PhotonBasis,
}

impl WaveFunction {
    pub fn new(amplitudes: Vec<C64>, matter_dim: usize, photon_dim: usize, photon_basis: PhotonBasis) -> Result<Self> {
        if amplitudes.len() != matter_dim * photon_dim {
            return Err(Error::DimensionMismatch { expected: matter_dim * photon_dim, got: amplitudes.len() });
        }
        Ok(Self { amplitudes, matter_dim, photon_dim, photon_basis })
    }

    /// Product state matter ⊗ photon.
    pub fn product(matter: &[C64], photon: &[C64], photon_basis: PhotonBasis) -> Self {
        let amplitudes = photon.iter().flat_map(|p| matter.iter().map(move |m| m * p)).collect();
        Self { amplitudes, matter_dim: matter.len(), photon_dim: photon.len(), photon_basis }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        self.amplitudes.iter_mut().for_each(|z| *z /= n);
    }

    /// Coefficients as a matter × photon matrix.
    pub fn as_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_column_slice(self.matter_dim, self.photon_dim, &self.amplitudes)
    }
}

/// Matter state ⊗ truncated coherent state with amplitude √mean_n·e^{iφ}.
/// Fails if the Fock truncation discards more than 1e-8 of the norm.
pub fn coherent_initial_state(matter: &[f64], mode: &PhotonMode, mean_n: f64, phase: f64) -> Result<WaveFunction> {
    if !(mean_n >= 0.0) {
        return Err(Error::InvalidParameter(format!("mean photon number must be nonnegative, got {mean_n}")));
    }
    let alpha = C64::from_polar(mean_n.sqrt(), phase);
    let (mut photon, loss) = coherent_amplitudes(alpha, mode.fock_size);
    if loss > 1e-8 {
        return Err(Error::TruncationLoss(loss));
    }
    let pn = photon.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    photon.iter_mut().for_each(|z| *z /= pn);
    let mn = matter.iter().map(|x| x * x).sum::<f64>().sqrt();
    let matter: Vec<C64> = matter.iter().map(|&x| C64::new(x / mn, 0.0)).collect();
    Ok(WaveFunction::product(&matter, &photon, PhotonBasis::Fock))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(fock: usize) -> PhotonMode {
        PhotonMode::new(0.05, 0.0, &[1.0], true, fock, None).unwrap()
    }

    #[test]
    fn vacuum_and_coherent_photon_numbers() {
        let g = [1.0, 0.0, 0.0];
        let vac = coherent_initial_state(&g, &mode(41), 0.0, 0.0).unwrap();
        assert!(photon_number(&vac).unwrap().abs() < 1e-14);
        assert!(mandel_q(&vac).unwrap().is_none());
        let coh = coherent_initial_state(&g, &mode(41), 4.0, 0.0).unwrap();
        assert!((photon_number(&coh).unwrap() - 4.0).abs() < 1e-8);
        assert!(mandel_q(&coh).unwrap().unwrap().abs() < 1e-8);
        assert!((purity(&coh) - 1.0).abs() < 1e-10);
        assert!((coh.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn truncation_loss_is_reported() {
        assert!(matches!(coherent_initial_state(&[1.0], &mode(8), 4.0, 0.0), Err(Error::TruncationLoss(_))));
    }
}
