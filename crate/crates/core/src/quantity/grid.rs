use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform one-dimensional grid, in atomic units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub n_points: usize,
    pub spacing: f64,
    /// Coordinate of the first point.
    pub origin: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, spacing: f64, origin: f64) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        Ok(Self { n_points, spacing, origin })
    }

    /// Symmetric about zero. With an odd point count the middle point is exactly 0.
    pub fn centered(n_points: usize, spacing: f64) -> Result<Self> {
        let origin = -0.5 * (n_points as f64 - 1.0) * spacing;
        Self::new(n_points, spacing, origin)
    }

    pub fn coord(&self, i: usize) -> f64 {
        if 2 * i + 1 == self.n_points {
            // keep the centre of a symmetric grid exactly at zero
            let c = self.origin + 0.5 * (self.n_points as f64 - 1.0) * self.spacing;
            if c.abs() < 1e-12 * self.spacing {
                return 0.0;
            }
        }
        self.origin + i as f64 * self.spacing
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.coord(i)).collect()
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.origin, self.coord(self.n_points - 1))
    }

    pub fn center_index(&self) -> usize {
        self.n_points / 2
    }

    /// Nearest grid index to `x`, clamped.
    pub fn nearest(&self, x: f64) -> usize {
        let f = ((x - self.origin) / self.spacing).round();
        f.clamp(0.0, (self.n_points - 1) as f64) as usize
    }
}

/// Tensor-product grid; the x index runs fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Self { x, y }
    }

    pub fn len(&self) -> usize {
        self.x.n_points * self.y.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.x.n_points + ix
    }

    pub fn point(&self, k: usize) -> (f64, f64) {
        let nx = self.x.n_points;
        (self.x.coord(k % nx), self.y.coord(k / nx))
    }

    pub fn cell_area(&self) -> f64 {
        self.x.spacing * self.y.spacing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_has_exact_zero() {
        let g = Grid1D::centered(127, 0.7052 / 0.0529177210903).unwrap();
        assert_eq!(g.coord(63), 0.0);
        let (a, b) = g.extent();
        assert!((a + b).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::new(1, 1.0, 0.0).is_err());
        assert!(Grid1D::new(10, 0.0, 0.0).is_err());
        assert!(Grid1D::new(10, -1.0, 0.0).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = Grid2D::new(Grid1D::centered(5, 1.0).unwrap(), Grid1D::centered(3, 2.0).unwrap());
        let k = g.index(4, 2);
        assert_eq!(g.point(k), (2.0, 2.0));
    }
}
