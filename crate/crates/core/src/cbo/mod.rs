//! Cavity Born-Oppenheimer pipeline: conditional electronic solves over the
//! (R, q) mesh, cavity potential-energy surfaces, harmonic fits and well
//! classification, the nuclear-photon eigenproblem, and comparison with
//! exact eigenstates.

pub mod compare;
pub mod conditional;
pub mod dboc;
pub mod nuclear_photon;
pub mod surface;
pub mod wells;

pub use compare::{compare_exact_cbo, OverlapRow};
pub use conditional::{
    solve_conditional, ConditionalProblem, ConditionalSolveSet, MatterConditional, Mesh, MeshAxis, ShinMetiuConditional,
};
pub use dboc::diagonal_kinetic_correction;
pub use nuclear_photon::{solve_all, solve_nuclear_photon, CboState};
pub use surface::{assemble_surfaces, CavitySurface, SurfaceComponents};
pub use wells::{classify_wells, harmonic_fit, HarmonicFit, Minimum, WellClass};
