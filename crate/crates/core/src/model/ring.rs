//! Two-dimensional GaAs quantum ring: a harmonic trap with a Gaussian bump
//! at the origin ("Mexican hat").

use crate::error::{Error, Result};
use crate::quantity::stencil::kinetic_2d;
use crate::quantity::units::{from_mev, from_nm};
use crate::quantity::{CsrMatrix, Grid1D, Grid2D};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumRing {
    pub hbar_omega0: f64,
    pub v0: f64,
    /// Gaussian width: the bump is V₀·exp(−r²/d²).
    pub width: f64,
    pub mass: f64,
    pub grid: Grid2D,
    pub stencil_order: usize,
}

impl QuantumRing {
    pub fn new(hbar_omega0: f64, v0: f64, width: f64, mass: f64, grid: Grid2D, stencil_order: usize) -> Result<Self> {
        for (name, v) in [("hbar_omega0", hbar_omega0), ("v0", v0), ("d", width)] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(format!("ring {name} must be positive, got {v}")));
            }
        }
        if !(mass > 0.0) {
            return Err(Error::NonPositiveMass(mass));
        }
        if grid.x.n_points != grid.y.n_points || (grid.x.spacing - grid.y.spacing).abs() > 1e-12 * grid.x.spacing {
            return Err(Error::InvalidGrid("ring grid must be square".into()));
        }
        Ok(Self { hbar_omega0, v0, width, mass, grid, stencil_order })
    }

    /// ħω₀ = 10 meV, V₀ = 200 meV, d = 10 nm, m* = 0.067, 127² points at 0.7052 nm.
    pub fn standard() -> Self {
        let g = Grid1D::centered(127, from_nm(0.7052)).expect("valid");
        Self::new(from_mev(10.0), from_mev(200.0), from_nm(10.0), 0.067, Grid2D::new(g.clone(), g), 2)
            .expect("valid")
    }

    pub fn radial_potential(&self, r: f64) -> f64 {
        let w0 = self.hbar_omega0;
        0.5 * self.mass * w0 * w0 * r * r + self.v0 * (-(r * r) / (self.width * self.width)).exp()
    }

    pub fn potential(&self, x: f64, y: f64) -> f64 {
        self.radial_potential((x * x + y * y).sqrt())
    }

    pub fn potential_on_grid(&self) -> Vec<f64> {
        (0..self.grid.len())
            .map(|k| {
                let (x, y) = self.grid.point(k);
                self.potential(x, y)
            })
            .collect()
    }

    pub fn hamiltonian(&self) -> Result<CsrMatrix> {
        let t = kinetic_2d(&self.grid, self.mass, self.stencil_order)?;
        t.add_scaled(1.0, &CsrMatrix::diagonal(&self.potential_on_grid()))
    }

    /// e·r on the grid for a polarization direction e.
    pub fn projected_position(&self, e: [f64; 2]) -> Vec<f64> {
        (0..self.grid.len())
            .map(|k| {
                let (x, y) = self.grid.point(k);
                e[0] * x + e[1] * y
            })
            .collect()
    }

    /// Radius of the potential minimum.
    pub fn minimum_radius(&self) -> f64 {
        golden_section_min(|r| self.radial_potential(r), 0.0, 5.0 * self.width, 1e-10 * self.width)
    }

    /// Grid permutation for r → −r.
    pub fn inversion_map(&self) -> Vec<usize> {
        let (nx, ny) = (self.grid.x.n_points, self.grid.y.n_points);
        (0..self.grid.len())
            .map(|k| {
                let (ix, iy) = (k % nx, k / nx);
                self.grid.index(nx - 1 - ix, ny - 1 - iy)
            })
            .collect()
    }
}

pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::units::{mev, nm};

    #[test]
    fn origin_and_far_field() {
        let ring = QuantumRing::standard();
        assert!((mev(ring.potential(0.0, 0.0)) - 200.0).abs() < 1e-9);
        let r = from_nm(40.0);
        let h = 0.5 * ring.mass * ring.hbar_omega0.powi(2) * r * r;
        assert!((ring.potential(r, 0.0) / h - 1.0).abs() < 1e-6);
    }

    #[test]
    fn minimum_radius_is_stationary() {
        let ring = QuantumRing::standard();
        let r0 = ring.minimum_radius();
        // analytic stationarity: m ω0² = (2V0/d²) exp(−r²/d²)
        let d = ring.width;
        let lhs = ring.mass * ring.hbar_omega0.powi(2);
        let rhs = 2.0 * ring.v0 / (d * d) * (-(r0 * r0) / (d * d)).exp();
        assert!((lhs / rhs - 1.0).abs() < 1e-6);
        assert!(nm(r0) > 10.0 && nm(r0) < 20.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = Grid1D::centered(9, 1.0).unwrap();
        let sq = Grid2D::new(g.clone(), g.clone());
        assert!(QuantumRing::new(1.0, 1.0, 1.0, 0.0, sq.clone(), 2).is_err());
        assert!(QuantumRing::new(-1.0, 1.0, 1.0, 1.0, sq, 2).is_err());
        let rect = Grid2D::new(g, Grid1D::centered(7, 1.0).unwrap());
        assert!(QuantumRing::new(1.0, 1.0, 1.0, 1.0, rect, 2).is_err());
    }
}
