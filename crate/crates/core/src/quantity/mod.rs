//! Units, grids, stencils and the operator abstraction everything else builds on.

pub mod grid;
pub mod operator;
pub mod sparse;
pub mod stencil;
pub mod units;

pub use grid::{Grid1D, Grid2D};
pub use operator::{KronSum, LinearOperator, PhotonFactor};
pub use sparse::CsrMatrix;
