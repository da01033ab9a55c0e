//! End-to-end computations shared by the command-line runner, the examples
//! and the acceptance suite.

use super::config::{PhotonParams, Resolved, ScenarioKind};
use crate::cbo::{
    assemble_surfaces, compare_exact_cbo, solve_all, solve_conditional, CavitySurface, CboState, ConditionalSolveSet,
    MatterConditional, Mesh, OverlapRow, ShinMetiuConditional,
};
use crate::dynamics::{coherent_initial_state, propagate, KrylovOptions, Observables, PropagationOptions, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::model::{BareBasis, HamiltonianAssembly, MatterOperators, PhotonBasis, PhotonMode, Polarization, QuantumRing, ShinMetiu};
use crate::quantity::{Grid1D, Grid2D};
use crate::spectra::{bare_basis, exact_spectrum, track_levels, LanczosOptions, LevelCurves, LevelSample, Spectrum, TrackingOptions};
use rayon::prelude::*;

pub struct RingSystem {
    pub ring: QuantumRing,
    pub basis: BareBasis,
}

pub struct ShinMetiuSystem {
    pub model: ShinMetiu,
    /// Same molecule on the coarsened nuclear grid used for surface scans.
    pub scan: ShinMetiu,
    pub adiabatic_states: usize,
}

pub enum Model {
    Ring(RingSystem),
    ShinMetiu(ShinMetiuSystem),
}

/// A resolved scenario with its expensive one-off pieces (the bare ring
/// basis) computed.
pub struct System {
    pub config: Resolved,
    pub model: Model,
}

impl System {
    pub fn build(config: &Resolved) -> Result<Self> {
        let model = match config.scenario {
            ScenarioKind::QuantumRing => {
                let r = config.ring.as_ref().expect("validated");
                let g = Grid1D::centered(r.grid_points, r.grid_spacing)?;
                let ring = QuantumRing::new(r.hbar_omega0, r.v0, r.width, r.mass, Grid2D::new(g.clone(), g), r.stencil_order)?;
                let basis = bare_basis(&ring.hamiltonian()?, r.basis_states, config.solver.tolerance)?;
                Model::Ring(RingSystem { ring, basis })
            }
            ScenarioKind::ShinMetiu => {
                let s = config.shin_metiu.as_ref().expect("validated");
                let model = ShinMetiu::new(
                    s.separation,
                    s.nuclear_mass,
                    s.charge,
                    s.softening,
                    s.fixed_softening,
                    Grid1D::centered(s.electron_points, s.electron_spacing)?,
                    Grid1D::centered(s.nuclear_points, s.nuclear_spacing)?,
                    s.stencil_order,
                )?;
                let scan = model.with_nuclear_stride(s.scan_stride)?;
                Model::ShinMetiu(ShinMetiuSystem { model, scan, adiabatic_states: s.adiabatic_states })
            }
        };
        Ok(Self { config: config.clone(), model })
    }

    pub fn photon(&self) -> &PhotonParams {
        &self.config.photon
    }

    pub fn mode(&self, lambda: f64) -> Result<PhotonMode> {
        let p = self.photon();
        PhotonMode::new(p.omega, lambda, &p.polarization, p.normalize, p.fock_size, Some(p.q_grid()?))
    }

    /// Matter operators used by the exact solver.
    pub fn matter(&self, mode: &PhotonMode) -> Result<MatterOperators> {
        match &self.model {
            Model::Ring(r) => MatterOperators::ring_eigen(&r.ring, mode, &r.basis),
            Model::ShinMetiu(s) => MatterOperators::shin_metiu_adiabatic(&s.model, mode, s.adiabatic_states),
        }
    }

    pub fn assembly(&self, lambda: f64) -> Result<HamiltonianAssembly> {
        let mode = self.mode(lambda)?;
        let asm = HamiltonianAssembly::new(self.matter(&mode)?, &mode, PhotonBasis::Fock)?;
        let cap = self.config.solver.resource_cap;
        if asm.dim() as u64 > cap {
            return Err(Error::ResourceCap { estimate: asm.dim() as u128, cap: cap as u128 });
        }
        Ok(asm)
    }

    /// Lowest `k` exact eigenpairs; energies are left absolute.
    pub fn exact(&self, lambda: f64, k: usize) -> Result<(HamiltonianAssembly, Spectrum)> {
        let asm = self.assembly(lambda)?;
        let opts = LanczosOptions { k, tol: self.config.solver.tolerance, ..Default::default() };
        let s = exact_spectrum(&asm, &opts)?;
        Ok((asm, s))
    }

    /// Parameter mesh for the CBO surfaces: q alone for the ring, (R, q)
    /// for the molecule.
    pub fn cbo_mesh(&self) -> Result<Mesh> {
        let q = self.photon().q_grid()?;
        Ok(match &self.model {
            Model::Ring(_) => Mesh::photon(q),
            Model::ShinMetiu(s) => {
                Mesh::nuclear_photon(s.scan.nuclear_grid.clone(), s.scan.nuclear_mass, s.scan.stencil_order, q)
            }
        })
    }

    pub fn conditional(&self, lambda: f64, mesh: &Mesh, n_states: usize) -> Result<ConditionalSolveSet> {
        let mode = self.mode(lambda)?;
        match &self.model {
            Model::Ring(r) => {
                let m = MatterOperators::ring_eigen(&r.ring, &mode, &r.basis)?;
                solve_conditional(&MatterConditional::new(m, &mode), mesh, n_states)
            }
            Model::ShinMetiu(s) => solve_conditional(&ShinMetiuConditional::new(&s.scan, &mode)?, mesh, n_states),
        }
    }

    pub fn cbo(&self, lambda: f64) -> Result<CboRun> {
        let sv = &self.config.solver;
        let set = self.conditional(lambda, &self.cbo_mesh()?, sv.cbo_surfaces)?;
        let surfaces = assemble_surfaces(&set, sv.include_dboc)?;
        let states = solve_all(&surfaces, sv.vib_states)?;
        Ok(CboRun { lambda, set, surfaces, states })
    }

    pub fn compare(&self, lambda: f64) -> Result<Comparison> {
        let (asm, exact) = self.exact(lambda, self.config.solver.exact_states)?;
        let cbo = self.cbo(lambda)?;
        let rows = compare_exact_cbo(&asm, &exact, &cbo.set, &cbo.states)?;
        Ok(Comparison { lambda, vacuum: asm.vacuum_energy(), exact, cbo, rows })
    }

    /// Exact levels over a coupling sweep, tracked by eigenvector overlap.
    pub fn sweep(&self, lambdas: &[f64], opts: &TrackingOptions) -> Result<(LevelCurves, f64)> {
        let k = self.config.solver.track_levels;
        let samples: Vec<Result<LevelSample>> = lambdas
            .par_iter()
            .map(|&l| {
                let (_, s) = self.exact(l, k)?;
                Ok(LevelSample { lambda: l, energies: s.values, vectors: Some(s.vectors) })
            })
            .collect();
        let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
        Ok((track_levels(&samples, opts), 0.5 * self.photon().omega))
    }

    /// Smallest electronic gap ε₁ − ε₀ along the scan grid at q = 0,
    /// with the dipole self-energy included.
    pub fn electronic_gap(&self, lambda: f64) -> Result<f64> {
        let Model::ShinMetiu(s) = &self.model else {
            return Err(Error::InvalidParameter("electronic gap scan is defined for the molecule".into()));
        };
        let mesh = Mesh::nuclear_photon(
            s.scan.nuclear_grid.clone(),
            s.scan.nuclear_mass,
            s.scan.stencil_order,
            Grid1D::centered(3, 1.0)?,
        );
        let set = solve_conditional(&ShinMetiuConditional::new(&s.scan, &self.mode(lambda)?)?, &mesh, 2)?;
        // q is the fast axis; keep the q = 0 column
        Ok(set.energies.iter().skip(1).step_by(3).map(|e| e[1] - e[0]).fold(f64::INFINITY, f64::min))
    }

    pub fn propagate(&self, lambda: f64, n_surfaces: usize) -> Result<TrajectoryRecord> {
        let Model::Ring(r) = &self.model else {
            return Err(Error::InvalidParameter("propagation is provided for the quantum ring".into()));
        };
        let run = &self.config.run;
        let mode = self.mode(lambda)?;
        let matter = self.matter(&mode)?;
        let asm = self.assembly(lambda)?;
        let mut ground = vec![0.0; matter.dim];
        ground[0] = 1.0;
        let psi0 = coherent_initial_state(&ground, &mode, run.mean_photons, run.coherent_phase)?;
        // position along the unit polarization
        let e = match mode.polarization {
            Polarization::Planar(e) => e,
            Polarization::Axial(s) => [s, 0.0],
        };
        let dipole = r.basis.project_diagonal(&r.ring.projected_position(e));
        let set = self.conditional(lambda, &Mesh::photon(self.photon().q_grid()?), n_surfaces)?;
        let projector = mode.fock_qgrid_projector()?;
        let obs = Observables { dipole: Some(&dipole), surfaces: Some((&set, Some(&projector))) };
        let opts = PropagationOptions {
            dt: run.dt,
            n_steps: run.n_steps,
            stride: run.stride,
            krylov: KrylovOptions { krylov_dim: run.krylov_dim, ..Default::default() },
            keep_states: run.keep_states,
        };
        propagate(&asm.total(), &psi0, &opts, &obs)
    }

    /// Bisection on λ for the ground surface turning from single to double
    /// well, on a q mesh `q_mesh`.
    pub fn double_well_onset(&self, lo: f64, hi: f64, tol: f64, q_mesh: &Grid1D) -> Result<f64> {
        let mesh = Mesh::photon(q_mesh.clone());
        let double = |l: f64| -> Result<bool> {
            let set = self.conditional(l, &mesh, 2)?;
            let s = assemble_surfaces(&set, self.config.solver.include_dboc)?;
            Ok(s[0].wells.minima().len() >= 2)
        };
        crate::cbo::wells::bisect_transition(double, lo, hi, tol)
    }
}

pub struct CboRun {
    pub lambda: f64,
    pub set: ConditionalSolveSet,
    pub surfaces: Vec<CavitySurface>,
    pub states: Vec<CboState>,
}

pub struct Comparison {
    pub lambda: f64,
    pub vacuum: f64,
    pub exact: Spectrum,
    pub cbo: CboRun,
    pub rows: Vec<OverlapRow>,
}

/// (E₅ − E₃)/ħω from ascending exact energies.
pub fn rabi_splitting(energies: &[f64], omega: f64) -> Option<f64> {
    Some((energies.get(4)? - energies.get(2)?) / omega)
}

pub fn linspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![from];
    }
    (0..n).map(|i| from + (to - from) * i as f64 / (n - 1) as f64).collect()
}
