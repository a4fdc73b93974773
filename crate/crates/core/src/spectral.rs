//! Eigenbasis of the discrete Neumann Laplacian on a uniform cell-centered grid,
//! with the inverse Laplacian and the H⁻¹ norm on mean-zero functions.
//!
//! The eigenvectors are the DCT-II modes `e_m(x_i) ∝ cos(mπ(i+½)/N)`,
//! orthonormal in the `Δx`-weighted inner product, with eigenvalues
//! `λ_m = (4/Δx²) sin²(mπ/(2N))`. They are exact eigenvectors of the
//! reflected three-point stencil, not samples of continuum cosines.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

/// Functions with `|mean| > MEAN_TOL` are rejected by the mean-zero operations.
pub const MEAN_TOL: f64 = 1e-10;

/// Reflected three-point Laplacian `(u_{i−1} − 2u_i + u_{i+1})/Δx²` with
/// `u_{−1} = u_0`, `u_N = u_{N−1}`, evaluated in flux form so that the
/// entries sum to zero up to round-off.
pub fn neumann_laplacian(u: &GridFunction) -> GridFunction {
    let grid = u.grid();
    GridFunction::from_trusted(grid, laplacian_values(u.values(), grid.dx()))
}

pub(crate) fn laplacian_values(u: &Array1<f64>, dx: f64) -> Array1<f64> {
    let n = u.len();
    let inv = 1.0 / (dx * dx);
    let mut out = Array1::zeros(n);
    let mut flux_left = 0.0;
    for i in 0..n {
        let flux_right = if i + 1 < n {
            (u[i + 1] - u[i]) * inv
        } else {
            0.0
        };
        out[i] = flux_right - flux_left;
        flux_left = flux_right;
    }
    out
}

#[derive(Debug, Clone)]
pub struct SpectralBasis {
    grid: Grid,
    /// Row `m` holds `e_m` sampled at the cell centers.
    modes: Array2<f64>,
    eigenvalues: Array1<f64>,
}

impl SpectralBasis {
    pub fn new(grid: Grid) -> Self {
        let n = grid.n();
        let dx = grid.dx();
        let len = grid.length();
        let c0 = (1.0 / len).sqrt();
        let c = (2.0 / len).sqrt();
        let period = 4 * n;
        let modes = Array2::from_shape_fn((n, n), |(m, i)| {
            if m == 0 {
                c0
            } else {
                // reduce m(2i+1) mod 4N in integers before forming the angle
                let r = (m * (2 * i + 1)) % period;
                c * (PI * r as f64 / (2 * n) as f64).cos()
            }
        });
        let eigenvalues = Array1::from_shape_fn(n, |m| {
            let s = (PI * m as f64 / (2 * n) as f64).sin();
            4.0 / (dx * dx) * s * s
        });
        SpectralBasis {
            grid,
            modes,
            eigenvalues,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn modes(&self) -> &Array2<f64> {
        &self.modes
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, m: usize) -> GridFunction {
        GridFunction::from_trusted(self.grid, self.modes.row(m).to_owned())
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.grid != *grid {
            return Err(Error::GridMismatch {
                expected: self.grid.n(),
                found: grid.n(),
            });
        }
        Ok(())
    }

    /// Expansion coefficients `f̂_m = ⟨f, e_m⟩`.
    pub fn coefficients(&self, f: &GridFunction) -> Result<Array1<f64>> {
        f.check_grid(&self.grid)?;
        Ok(self.coeffs_unchecked(f.values()))
    }

    pub(crate) fn coeffs_unchecked(&self, f: &Array1<f64>) -> Array1<f64> {
        self.modes.dot(f) * self.grid.dx()
    }

    /// `Σ_m coeffs[m]·e_m`.
    pub fn synthesize(&self, coeffs: &Array1<f64>) -> Result<GridFunction> {
        if coeffs.len() != self.grid.n() {
            return Err(Error::GridMismatch {
                expected: self.grid.n(),
                found: coeffs.len(),
            });
        }
        Ok(GridFunction::from_trusted(
            self.grid,
            self.modes.t().dot(coeffs),
        ))
    }

    fn check_mean_zero(&self, f: &GridFunction) -> Result<()> {
        f.check_grid(&self.grid)?;
        let mean = f.mean();
        if mean.abs() > MEAN_TOL {
            return Err(Error::NonzeroMean { mean });
        }
        Ok(())
    }

    /// `(−Δ)⁻¹f` for mean-zero `f`, returned with zero mean.
    pub fn inv_laplacian(&self, f: &GridFunction) -> Result<GridFunction> {
        self.check_mean_zero(f)?;
        let mut coeffs = self.coeffs_unchecked(f.values());
        coeffs[0] = 0.0;
        for m in 1..coeffs.len() {
            coeffs[m] /= self.eigenvalues[m];
        }
        self.synthesize(&coeffs)
    }

    /// `‖(−Δ)^{−1/2} f‖_{L²}` for mean-zero `f`.
    pub fn h_minus_one_norm(&self, f: &GridFunction) -> Result<f64> {
        self.check_mean_zero(f)?;
        Ok(self.h_minus_one_sq_unchecked(f.values()).sqrt())
    }

    /// Squared H⁻¹ norm of the mean-free part of `f`.
    pub(crate) fn h_minus_one_sq_unchecked(&self, f: &Array1<f64>) -> f64 {
        let coeffs = self.coeffs_unchecked(f);
        coeffs
            .iter()
            .zip(self.eigenvalues.iter())
            .skip(1)
            .map(|(c, l)| c * c / l)
            .sum()
    }

    /// Splits mean-zero `f` into `f_A ∈ span(e_1..e_k)` and the remainder `f_B`.
    pub fn project(&self, f: &GridFunction, k: usize) -> Result<(GridFunction, GridFunction)> {
        self.check_mean_zero(f)?;
        let mut coeffs = self.coeffs_unchecked(f.values());
        coeffs[0] = 0.0;
        for c in coeffs.iter_mut().skip(k + 1) {
            *c = 0.0;
        }
        let fa = self.synthesize(&coeffs)?;
        let fb = GridFunction::from_trusted(self.grid, f.values() - fa.values());
        Ok((fa, fb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_abs(a: &Array1<f64>) -> f64 {
        a.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    #[test]
    fn laplacian_of_constant_vanishes() {
        let g = Grid::unit(16);
        let l = neumann_laplacian(&GridFunction::constant(g, 2.5));
        assert!(l.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn first_mode_is_eigenvector() {
        let g = Grid::unit(32);
        let b = SpectralBasis::new(g);
        let e1 = b.eigenvector(1);
        let l = neumann_laplacian(&e1);
        let r = l.values() + &(e1.values() * b.eigenvalues()[1]);
        assert!(max_abs(&r) < 1e-10);
        assert_eq!(b.eigenvalues()[0], 0.0);
        assert!(b
            .eigenvector(0)
            .values()
            .iter()
            .all(|&v| v == b.modes()[[0, 0]]));
    }

    #[test]
    fn single_mode_inverse_and_norm() {
        let g = Grid::unit(32);
        let b = SpectralBasis::new(g);
        let e1 = b.eigenvector(1);
        let w = b.inv_laplacian(&e1).unwrap();
        let lam = b.eigenvalues()[1];
        for i in 0..32 {
            assert_abs_diff_eq!(w.values()[i], e1.values()[i] / lam, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(
            b.h_minus_one_norm(&e1).unwrap(),
            1.0 / lam.sqrt(),
            epsilon = 1e-14
        );
        let z = GridFunction::zeros(g);
        assert_eq!(b.h_minus_one_norm(&z).unwrap(), 0.0);
        assert!(b
            .inv_laplacian(&z)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_nonzero_mean() {
        let g = Grid::unit(16);
        let b = SpectralBasis::new(g);
        let f = GridFunction::constant(g, 1e-6);
        assert!(matches!(
            b.inv_laplacian(&f),
            Err(Error::NonzeroMean { .. })
        ));
        assert!(matches!(
            b.h_minus_one_norm(&f),
            Err(Error::NonzeroMean { .. })
        ));
    }

    #[test]
    fn projection_examples() {
        let g = Grid::unit(16);
        let b = SpectralBasis::new(g);
        let e2 = b.eigenvector(2);
        let (fa, fb) = b.project(&e2, 1).unwrap();
        assert!(max_abs(fa.values()) < 1e-14);
        assert!(max_abs(&(fb.values() - e2.values())) < 1e-14);
        let (fa, fb) = b.project(&e2, 15).unwrap();
        assert!(max_abs(&(fa.values() - e2.values())) < 1e-14);
        assert!(max_abs(fb.values()) < 1e-14);
    }
}
