//! Finite-difference Laplacians (Dirichlet boundaries) and a sinc-DVR kinetic
//! matrix for coarse photon grids.

use super::grid::{Grid1D, Grid2D};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

fn coefficients(order: usize) -> Result<&'static [f64]> {
    match order {
        2 => Ok(&[1.0, -2.0, 1.0]),
        4 => Ok(&[-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0]),
        o => Err(Error::InvalidStencil(o)),
    }
}

pub fn laplacian_1d(grid: &Grid1D, order: usize) -> Result<CsrMatrix> {
    let c = coefficients(order)?;
    let n = grid.n_points;
    if n < c.len() {
        return Err(Error::InvalidGrid(format!(
            "{n} points is fewer than the order-{order} stencil width"
        )));
    }
    let half = (c.len() / 2) as isize;
    let h2 = grid.spacing * grid.spacing;
    let mut trip = Vec::with_capacity(n * c.len());
    for i in 0..n as isize {
        for (k, &ck) in c.iter().enumerate() {
            let j = i + k as isize - half;
            if j >= 0 && j < n as isize {
                trip.push((i as usize, j as usize, ck / h2));
            }
        }
    }
    CsrMatrix::from_triplets(n, n, trip)
}

/// −∇²/(2m) on a 1D grid.
pub fn kinetic_1d(grid: &Grid1D, mass: f64, order: usize) -> Result<CsrMatrix> {
    check_mass(mass)?;
    Ok(laplacian_1d(grid, order)?.scale(-0.5 / mass))
}

/// −∇²/(2m) on a 2D grid (x fastest).
pub fn kinetic_2d(grid: &Grid2D, mass: f64, order: usize) -> Result<CsrMatrix> {
    check_mass(mass)?;
    let tx = kinetic_1d(&grid.x, mass, order)?;
    let ty = kinetic_1d(&grid.y, mass, order)?;
    let a = CsrMatrix::identity(grid.y.n_points).kron(&tx)?;
    let b = ty.kron(&CsrMatrix::identity(grid.x.n_points))?;
    a.add_scaled(1.0, &b)
}

/// Colbert-Miller sinc-DVR kinetic matrix on a uniform grid.
pub fn sinc_dvr_kinetic(grid: &Grid1D, mass: f64) -> Result<DMatrix<f64>> {
    check_mass(mass)?;
    let n = grid.n_points;
    let pref = 1.0 / (2.0 * mass * grid.spacing * grid.spacing);
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            pref * PI * PI / 3.0
        } else {
            let d = i as f64 - j as f64;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            pref * 2.0 * sign / (d * d)
        }
    }))
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveMass(mass))
    }
}
