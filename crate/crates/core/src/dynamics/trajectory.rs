use super::krylov::{KrylovOptions, KrylovStepper};
use super::observables::{mandel_q, matter_expectation, photon_number, purity, surface_populations};
use super::WaveFunction;
use crate::cbo::ConditionalSolveSet;
use crate::error::{Error, Result};
use crate::model::PhotonBasis;
use crate::quantity::operator::LinearOperator;
use crate::C64;
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct PropagationOptions {
    /// Step length in atomic time units.
    pub dt: f64,
    pub n_steps: usize,
    /// Observables are sampled every `stride` steps (and at t = 0).
    pub stride: usize,
    pub krylov: KrylovOptions,
    /// Keep full state snapshots (memory heavy).
    pub keep_states: bool,
}

/// What to measure at each snapshot besides norm, energy and photon
/// statistics.
#[derive(Default)]
pub struct Observables<'a> {
    /// Matter operator whose expectation is recorded as the dipole.
    pub dipole: Option<&'a dyn LinearOperator>,
    /// Conditional states for surface populations, with the Fock→q
    /// projector when the state is in the Fock basis.
    pub surfaces: Option<(&'a ConditionalSolveSet, Option<&'a DMatrix<f64>>)>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub norm: Vec<f64>,
    pub energy: Vec<f64>,
    pub dipole: Vec<f64>,
    /// `None` where ⟨n⟩ = 0 and Q is undefined.
    pub mandel_q: Vec<Option<f64>>,
    pub purity: Vec<f64>,
    pub photon_number: Vec<f64>,
    /// populations[s][k]
    pub populations: Vec<Vec<f64>>,
    pub stride: usize,
    pub max_krylov_dim: usize,
    #[serde(skip)]
    pub states: Vec<Vec<C64>>,
}

impl TrajectoryRecord {
    pub fn population(&self, k: usize) -> Vec<f64> {
        self.populations.iter().map(|p| p[k]).collect()
    }
}

fn sample(
    rec: &mut TrajectoryRecord,
    t: f64,
    psi: &WaveFunction,
    h: &dyn LinearOperator,
    obs: &Observables,
    keep: bool,
) -> Result<()> {
    let mut hpsi = vec![C64::new(0.0, 0.0); psi.amplitudes.len()];
    h.apply_complex(&psi.amplitudes, &mut hpsi);
    let energy: f64 = psi.amplitudes.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum();
    rec.times.push(t);
    rec.norm.push(psi.norm());
    rec.energy.push(energy);
    rec.purity.push(purity(psi));
    if psi.photon_basis == PhotonBasis::Fock {
        rec.photon_number.push(photon_number(psi)?);
        rec.mandel_q.push(mandel_q(psi)?);
    }
    if let Some(d) = obs.dipole {
        rec.dipole.push(matter_expectation(psi, d)?);
    }
    if let Some((set, proj)) = obs.surfaces {
        rec.populations.push(surface_populations(psi, set, proj)?);
    }
    if keep {
        rec.states.push(psi.amplitudes.clone());
    }
    Ok(())
}

/// ψ(t + dt) = exp(−iH dt) ψ(t) for `n_steps` steps; observables every
/// `stride` steps. The step sequence does not depend on the stride.
pub fn propagate(
    h: &dyn LinearOperator,
    psi0: &WaveFunction,
    opts: &PropagationOptions,
    obs: &Observables,
) -> Result<TrajectoryRecord> {
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!("initial state norm is {}", psi0.norm())));
    }
    if !(opts.dt > 0.0) || opts.stride == 0 {
        return Err(Error::InvalidParameter("dt and stride must be positive".into()));
    }
    if h.dim() != psi0.amplitudes.len() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: psi0.amplitudes.len() });
    }
    let mut stepper = KrylovStepper::new(h, opts.krylov)?;
    let mut psi = psi0.clone();
    let mut rec = TrajectoryRecord { stride: opts.stride, ..Default::default() };
    sample(&mut rec, 0.0, &psi, h, obs, opts.keep_states)?;
    for s in 1..=opts.n_steps {
        let info = stepper.step(&mut psi.amplitudes, opts.dt)?;
        rec.max_krylov_dim = rec.max_krylov_dim.max(info.dim);
        if s % opts.stride == 0 {
            sample(&mut rec, s as f64 * opts.dt, &psi, h, obs, opts.keep_states)?;
        }
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::CsrMatrix;

    fn two_mode_h() -> (CsrMatrix, WaveFunction) {
        // 2 matter levels ⊗ 4 Fock states, Jaynes-Cummings-like exchange
        let mut trip = Vec::new();
        for n in 0..4 {
            trip.push((2 * n, 2 * n, 0.1 * n as f64));
            trip.push((2 * n + 1, 2 * n + 1, 0.1 * n as f64 + 0.1));
            if n + 1 < 4 {
                let g = 0.01 * ((n + 1) as f64).sqrt();
                trip.push((2 * n + 1, 2 * (n + 1), g));
                trip.push((2 * (n + 1), 2 * n + 1, g));
            }
        }
        let h = CsrMatrix::from_triplets(8, 8, trip).unwrap();
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[2] = C64::new(1.0, 0.0);
        (h, WaveFunction::new(amps, 2, 4, PhotonBasis::Fock).unwrap())
    }

    #[test]
    fn conserves_norm_and_energy() {
        let (h, psi) = two_mode_h();
        let opts = PropagationOptions { dt: 2.0, n_steps: 2000, stride: 50, krylov: Default::default(), keep_states: false };
        let rec = propagate(&h, &psi, &opts, &Observables::default()).unwrap();
        for (n, e) in rec.norm.iter().zip(&rec.energy) {
            assert!((n - 1.0).abs() < 1e-10);
            assert!((e - rec.energy[0]).abs() < 1e-10);
        }
        // photon is exchanged with the matter level
        assert!(rec.photon_number.iter().cloned().fold(f64::MAX, f64::min) < 0.5);
    }

    #[test]
    fn stride_does_not_perturb_dynamics() {
        let (h, psi) = two_mode_h();
        let mk = |stride| PropagationOptions { dt: 1.5, n_steps: 600, stride, krylov: Default::default(), keep_states: true };
        let a = propagate(&h, &psi, &mk(10), &Observables::default()).unwrap();
        let b = propagate(&h, &psi, &mk(100), &Observables::default()).unwrap();
        for (i, sb) in b.states.iter().enumerate() {
            let sa = &a.states[i * 10];
            assert_eq!(a.times[i * 10], b.times[i]);
            assert!(sa.iter().zip(sb).all(|(x, y)| (x - y).norm() < 1e-10));
        }
    }

    #[test]
    fn eigenstate_is_stationary() {
        let (h, _) = two_mode_h();
        let s = crate::spectra::dense_eigh(&h.to_dense(), 1);
        let amps: Vec<C64> = s.vectors.column(0).iter().map(|&x| C64::new(x, 0.0)).collect();
        let psi = WaveFunction::new(amps, 2, 4, PhotonBasis::Fock).unwrap();
        let opts = PropagationOptions { dt: 3.0, n_steps: 10_000, stride: 1000, krylov: Default::default(), keep_states: false };
        let rec = propagate(&h, &psi, &opts, &Observables::default()).unwrap();
        for i in 0..rec.times.len() {
            assert!((rec.photon_number[i] - rec.photon_number[0]).abs() < 1e-8);
            assert!((rec.purity[i] - rec.purity[0]).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_unnormalized_input() {
        let (h, mut psi) = two_mode_h();
        psi.amplitudes[2] = C64::new(2.0, 0.0);
        let opts = PropagationOptions { dt: 1.0, n_steps: 1, stride: 1, krylov: Default::default(), keep_states: false };
        assert!(propagate(&h, &psi, &opts, &Observables::default()).is_err());
    }
}
