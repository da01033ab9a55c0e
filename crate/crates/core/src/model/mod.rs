//! Model potentials, the photon mode, and Hamiltonian assembly.

pub mod assembly;
pub mod photon;
pub mod ring;
pub mod shin_metiu;

pub use assembly::{BareBasis, HamiltonianAssembly, MatterLayout, MatterOperators, PhotonBasis, Term};
pub use photon::{PhotonMode, Polarization};
pub use ring::QuantumRing;
pub use shin_metiu::ShinMetiu;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Matter {
    QuantumRing(QuantumRing),
    ShinMetiu(ShinMetiu),
}

/// A matter model plus the cavity mode it couples to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub matter: Matter,
    pub mode: PhotonMode,
}
