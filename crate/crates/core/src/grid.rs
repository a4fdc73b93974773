use ndarray::Array1;

use crate::error::{Error, Result};

/// Uniform cell-centered mesh of `(0, length)` with `n` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_cells must be >= 2, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "domain_length must be positive, got {length}"
            )));
        }
        Ok(Grid { n, length })
    }

    pub fn unit(n: usize) -> Self {
        Grid::new(n, 1.0).expect("unit grid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Center of cell `i`.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Array1<f64> {
        Array1::from_shape_fn(self.n, |i| self.x(i))
    }
}

/// Real values at the cell centers of a [`Grid`]; entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Array1<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Array1<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch {
                expected: grid.n(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_vec(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, Array1::from(values))
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction {
            grid,
            values: Array1::zeros(grid.n()),
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        GridFunction {
            grid,
            values: Array1::from_elem(grid.n(), c),
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.centers().mapv(f))
    }

    /// Wraps values the caller has already checked.
    pub(crate) fn from_trusted(grid: Grid, values: Array1<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        GridFunction { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array1<f64> {
        self.values
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.grid.n() != grid.n() || self.grid.length() != grid.length() {
            return Err(Error::GridMismatch {
                expected: grid.n(),
                found: self.grid.n(),
            });
        }
        Ok(())
    }

    /// `dx * sum(u)`.
    pub fn mass(&self) -> f64 {
        self.values.sum() * self.grid.dx()
    }

    pub fn mean(&self) -> f64 {
        self.mass() / self.grid.length()
    }

    /// Discrete L² inner product with weight `dx`.
    pub fn dot(&self, other: &GridFunction) -> f64 {
        self.values.dot(&other.values) * self.grid.dx()
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// L² norm of forward differences on the interior faces.
    pub fn grad_l2(&self) -> f64 {
        let dx = self.grid.dx();
        let s: f64 = self
            .values
            .windows(2)
            .into_iter()
            .map(|w| {
                let g = (w[1] - w[0]) / dx;
                g * g
            })
            .sum();
        (s * dx).sqrt()
    }
}
