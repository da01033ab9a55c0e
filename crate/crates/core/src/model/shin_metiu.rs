//! One-dimensional Shin-Metiu molecule: an electron and a mobile ion between
//! two fixed ions at ±L/2.

use crate::error::{Error, Result};
use crate::quantity::stencil::{kinetic_1d};
use crate::quantity::units::{from_nm, DALTON_ME};
use crate::quantity::{CsrMatrix, Grid1D};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;
use std::f64::consts::PI;

/// Hydrogen atom mass in electron masses.
pub const HYDROGEN_MASS: f64 = 1.00782503207 * DALTON_ME;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShinMetiu {
    /// Distance between the fixed ions.
    pub separation: f64,
    pub nuclear_mass: f64,
    pub charge: f64,
    /// Softening of the mobile-ion interaction.
    pub softening: f64,
    /// Softening of the fixed-ion interactions.
    pub fixed_softening: f64,
    pub electron_grid: Grid1D,
    pub nuclear_grid: Grid1D,
    pub stencil_order: usize,
}

impl ShinMetiu {
    pub fn new(
        separation: f64,
        nuclear_mass: f64,
        charge: f64,
        softening: f64,
        fixed_softening: f64,
        electron_grid: Grid1D,
        nuclear_grid: Grid1D,
        stencil_order: usize,
    ) -> Result<Self> {
        if !(nuclear_mass > 0.0) {
            return Err(Error::NonPositiveMass(nuclear_mass));
        }
        for (name, v) in [("L", separation), ("R_c", softening), ("R_f", fixed_softening), ("Z", charge)] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(format!("Shin-Metiu {name} must be positive, got {v}")));
            }
        }
        let (a, b) = nuclear_grid.extent();
        if a.abs().max(b.abs()) >= 0.5 * separation {
            return Err(Error::InvalidGrid("nuclear grid reaches the fixed ions".into()));
        }
        Ok(Self {
            separation,
            nuclear_mass,
            charge,
            softening,
            fixed_softening,
            electron_grid,
            nuclear_grid,
            stencil_order,
        })
    }

    /// L = 10 Å, hydrogen mass, 140 × 0.4233 Å electron grid, 280 × 0.0265 Å
    /// nuclear grid, fixed-ion softening 1.5 Å.
    pub fn standard(softening_angstrom: f64) -> Self {
        let a = |x: f64| from_nm(0.1 * x);
        Self::new(
            a(10.0),
            HYDROGEN_MASS,
            1.0,
            a(softening_angstrom),
            a(1.5),
            Grid1D::centered(140, a(0.4233)).expect("valid"),
            Grid1D::centered(280, a(0.0265)).expect("valid"),
            2,
        )
        .expect("valid")
    }

    pub fn electron_potential(&self, r: f64, big_r: f64) -> f64 {
        let h = 0.5 * self.separation;
        -self.charge * soft_coulomb(r - big_r, self.softening)
            - soft_coulomb(r - h, self.fixed_softening)
            - soft_coulomb(r + h, self.fixed_softening)
    }

    pub fn nuclear_potential(&self, big_r: f64) -> f64 {
        let h = 0.5 * self.separation;
        self.charge * (1.0 / (h - big_r).abs() + 1.0 / (h + big_r).abs())
    }

    /// Electronic Hamiltonian at fixed ion position.
    pub fn electronic_hamiltonian(&self, big_r: f64) -> Result<CsrMatrix> {
        let t = kinetic_1d(&self.electron_grid, 1.0, self.stencil_order)?;
        let v: Vec<f64> = self.electron_grid.coords().iter().map(|&r| self.electron_potential(r, big_r)).collect();
        t.add_scaled(1.0, &CsrMatrix::diagonal(&v))
    }

    pub fn nuclear_kinetic(&self) -> Result<CsrMatrix> {
        kinetic_1d(&self.nuclear_grid, self.nuclear_mass, self.stencil_order)
    }

    /// Nuclear grid coarsened to every `stride`-th point (spacing grows).
    pub fn with_nuclear_stride(&self, stride: usize) -> Result<Self> {
        let g = &self.nuclear_grid;
        let n = (g.n_points - 1) / stride + 1;
        let first = g.coord(0) + 0.5 * ((g.n_points - 1) - (n - 1) * stride) as f64 * g.spacing;
        let ng = Grid1D::new(n, g.spacing * stride as f64, first)?;
        Self::new(
            self.separation,
            self.nuclear_mass,
            self.charge,
            self.softening,
            self.fixed_softening,
            self.electron_grid.clone(),
            ng,
            self.stencil_order,
        )
    }
}

/// erf(|x|/c)/|x| with its limit 2/(√π c) at x = 0.
pub fn soft_coulomb(x: f64, c: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-8 * c {
        2.0 / (PI.sqrt() * c)
    } else {
        erf(ax / c) / ax
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coincident_limit() {
        let sm = ShinMetiu::standard(1.5);
        let v = soft_coulomb(0.0, sm.softening);
        assert!(v.is_finite());
        assert!((v - 2.0 / (PI.sqrt() * sm.softening)).abs() < 1e-14);
        let near = soft_coulomb(1e-6 * sm.softening, sm.softening);
        assert!((near - v).abs() < 1e-9 * v);
    }

    #[test]
    fn symmetric_at_centre() {
        let sm = ShinMetiu::standard(1.75);
        for r in [0.3, 1.7, 5.0, 9.1] {
            assert!((sm.electron_potential(r, 0.0) - sm.electron_potential(-r, 0.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn grids_fit_between_fixed_ions() {
        let sm = ShinMetiu::standard(1.5);
        let g = sm.nuclear_grid.clone();
        assert!(ShinMetiu::new(1.0, 1.0, 1.0, 1.0, 1.0, sm.electron_grid.clone(), g, 2).is_err());
        let c = sm.with_nuclear_stride(4).unwrap();
        assert_eq!(c.nuclear_grid.n_points, 70);
        let (a, b) = c.nuclear_grid.extent();
        assert!((a + b).abs() < 1e-9);
    }
}
