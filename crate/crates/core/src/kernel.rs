//! Midpoint-quadrature discretization of the convolution `(J∗u)(x) = ∫_Ω J(x−y)u(y)dy`,
//! the field `a = J∗1` and the nonlocal operator `Bu = a·u − J∗u`.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::error::{Assumption, Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::monotone::PotentialSplit;
use crate::par::{self, Execution};
use crate::spectral::SpectralBasis;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelShape {
    /// Normal density with standard deviation `width`.
    Gaussian { width: f64 },
    /// Constant on `[−radius, radius]`, with half weight exactly at `±radius`.
    Tophat { radius: f64 },
}

/// Symmetric nonnegative kernel `J` with total mass `mass` over ℝ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSpec {
    pub shape: KernelShape,
    pub mass: f64,
}

impl KernelSpec {
    pub fn gaussian(width: f64, mass: f64) -> Self {
        KernelSpec {
            shape: KernelShape::Gaussian { width },
            mass,
        }
    }

    pub fn tophat(radius: f64, mass: f64) -> Self {
        KernelSpec {
            shape: KernelShape::Tophat { radius },
            mass,
        }
    }

    pub fn width(&self) -> f64 {
        match self.shape {
            KernelShape::Gaussian { width } => width,
            KernelShape::Tophat { radius } => radius,
        }
    }

    /// `J(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        match self.shape {
            KernelShape::Gaussian { width } => {
                let z = ax / width;
                self.mass / (width * (2.0 * std::f64::consts::PI).sqrt()) * (-0.5 * z * z).exp()
            }
            KernelShape::Tophat { radius } => {
                let h = self.mass / (2.0 * radius);
                if (ax - radius).abs() <= 1e-12 * radius {
                    0.5 * h
                } else if ax < radius {
                    h
                } else {
                    0.0
                }
            }
        }
    }

    fn validate(&self, grid: &Grid) -> Result<()> {
        let w = self.width();
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kernel width must be positive, got {w}"
            )));
        }
        if w >= grid.length() {
            return Err(Error::InvalidParameter(format!(
                "kernel width {w} must be smaller than the domain length {}",
                grid.length()
            )));
        }
        if !self.mass.is_finite() || self.mass < 0.0 {
            return Err(Error::assumption(
                Assumption::KernelPositivity,
                format!("kernel must be nonnegative, got mass {}", self.mass),
            ));
        }
        Ok(())
    }
}

/// Dense discretization of `J∗·` on a grid, with `a = J∗1` precomputed.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    spec: KernelSpec,
    grid: Grid,
    matrix: Array2<f64>,
    a_field: Array1<f64>,
    a_min: f64,
}

impl KernelOperator {
    pub fn build(spec: KernelSpec, grid: Grid) -> Result<Self> {
        let n = grid.n();
        if n < 8 {
            return Err(Error::InvalidParameter(format!(
                "kernel operator needs n_cells >= 8, got {n}"
            )));
        }
        spec.validate(&grid)?;
        let dx = grid.dx();
        // entries depend on |i − j| only, so the matrix is exactly symmetric
        let weights: Vec<f64> = (0..n).map(|d| spec.eval(d as f64 * dx) * dx).collect();
        let matrix = Array2::from_shape_fn((n, n), |(i, j)| weights[i.abs_diff(j)]);
        let mut op = KernelOperator {
            spec,
            grid,
            matrix,
            a_field: Array1::zeros(n),
            a_min: 0.0,
        };
        op.refresh_a();
        if op.a_min.is_nan() || op.a_min <= 0.0 {
            return Err(Error::assumption(
                Assumption::KernelPositivity,
                format!(
                    "a_min = {} <= 0: a = J*1 must be bounded away from zero",
                    op.a_min
                ),
            ));
        }
        Ok(op)
    }

    fn refresh_a(&mut self) {
        let ones = Array1::from_elem(self.grid.n(), 1.0);
        self.a_field = self.matvec(Execution::Sequential, &ones);
        self.a_min = self.a_field.iter().copied().fold(f64::INFINITY, f64::min);
    }

    /// Checks `a_- − ‖Π′‖_∞ > 0` for the given splitting.
    pub fn validate_splitting(&self, potential: &PotentialSplit) -> Result<()> {
        let lip = potential.pi_lipschitz();
        if self.a_min <= lip {
            return Err(Error::assumption(
                Assumption::PotentialSplitting,
                format!(
                    "a_min <= pi_lipschitz ({} <= {}) violates positivity of a_- - |Pi'|_inf",
                    self.a_min, lip
                ),
            ));
        }
        Ok(())
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Entries `J(x_i − x_j)·Δx`.
    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn a_field(&self) -> &Array1<f64> {
        &self.a_field
    }

    pub fn a_min(&self) -> f64 {
        self.a_min
    }

    /// Breaks the exact symmetry of the matrix. Fault-injection hook for the
    /// operator property suite.
    #[doc(hidden)]
    pub fn inject_asymmetry(&mut self, eps: f64) {
        self.matrix[[0, 1]] += eps;
        self.refresh_a();
    }

    pub(crate) fn matvec(&self, exec: Execution, u: &Array1<f64>) -> Array1<f64> {
        let n = self.grid.n();
        let mut out = vec![0.0; n];
        par::fill(exec, &mut out, |i| self.matrix.row(i).dot(u));
        Array1::from(out)
    }

    /// `J∗u`.
    pub fn convolve(&self, u: &GridFunction) -> Result<GridFunction> {
        self.convolve_with(Execution::default(), u)
    }

    pub fn convolve_with(&self, exec: Execution, u: &GridFunction) -> Result<GridFunction> {
        u.check_grid(&self.grid)?;
        Ok(GridFunction::from_trusted(
            self.grid,
            self.matvec(exec, u.values()),
        ))
    }

    /// `Bu = a·u − J∗u`.
    pub fn apply_b(&self, u: &GridFunction) -> Result<GridFunction> {
        self.apply_b_with(Execution::default(), u)
    }

    pub fn apply_b_with(&self, exec: Execution, u: &GridFunction) -> Result<GridFunction> {
        u.check_grid(&self.grid)?;
        let conv = self.matvec(exec, u.values());
        let values = &self.a_field * u.values() - conv;
        Ok(GridFunction::from_trusted(self.grid, values))
    }

    /// Finite-rank truncation `I_k f = Σ_{i≤k} ⟨If, e_i⟩ e_i` in the Neumann eigenbasis.
    pub fn truncate(&self, basis: &SpectralBasis, k: usize) -> Result<TruncatedOperator> {
        let n = self.grid.n();
        if k >= n {
            return Err(Error::OutOfRange {
                what: "truncation rank k",
                value: k,
                limit: n - 1,
            });
        }
        basis.check_grid(&self.grid)?;
        let dx = self.grid.dx();
        let modes = basis.modes().slice(ndarray::s![0..=k, ..]);
        // P_k = Δx · E_kᵀ E_k with rows of `modes` the sampled eigenvectors
        let projector = modes.t().dot(&modes) * dx;
        Ok(TruncatedOperator {
            grid: self.grid,
            rank: k,
            matrix: projector.dot(&self.matrix),
        })
    }

    /// `sqrt(Σ_{i>k} ‖I e_i‖²)`, an upper bound for `‖I − I_k‖`.
    pub fn hs_tail(&self, basis: &SpectralBasis, k: usize) -> Result<f64> {
        let n = self.grid.n();
        if k >= n {
            return Err(Error::OutOfRange {
                what: "truncation rank k",
                value: k,
                limit: n - 1,
            });
        }
        basis.check_grid(&self.grid)?;
        let dx = self.grid.dx();
        let tail: f64 = ((k + 1)..n)
            .map(|m| {
                let img = self.matrix.dot(&basis.modes().row(m));
                img.dot(&img) * dx
            })
            .sum();
        Ok(tail.sqrt())
    }
}

/// Matrix form of `I_k` acting on grid values.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    grid: Grid,
    rank: usize,
    matrix: Array2<f64>,
}

impl TruncatedOperator {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        f.check_grid(&self.grid)?;
        Ok(GridFunction::from_trusted(
            self.grid,
            self.matrix.dot(f.values()),
        ))
    }
}
