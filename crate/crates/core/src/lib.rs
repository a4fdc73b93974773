//! Yosida-regularized nonlocal Cahn–Hilliard equation with singular potentials
//! on a 1-D Neumann grid, and a harness measuring the convergence
//! `u_λ → u` as the regularization parameter `λ ↓ 0`.
//!
//! Modules, bottom-up:
//! - [`monotone`]: maximal monotone graphs, resolvents, Yosida approximations.
//! - [`kernel`]: convolution operator `J∗·`, `a = J∗1`, the operator `B`, truncations.
//! - [`spectral`]: Neumann eigenbasis, inverse Laplacian, H⁻¹ norm.
//! - [`solver`]: energy-stable time stepping with a semismooth Newton inner solve.
//! - [`harness`]: λ-sweeps, space-time errors, fitted rates.
//! - [`checks`]: property suites shared by the CLI and the tests.
//! - [`config`], [`output`]: the text config format and CSV writers.

pub mod checks;
pub mod config;
pub mod error;
pub mod grid;
pub mod harness;
pub mod kernel;
pub mod monotone;
pub mod output;
pub mod par;
mod roots;
pub mod solver;
pub mod spectral;

pub use error::{Assumption, Error, Result};
pub use grid::{Grid, GridFunction};
pub use kernel::{KernelOperator, KernelShape, KernelSpec};
pub use monotone::{GraphKind, MonotoneGraph, PotentialSplit};
pub use par::Execution;
pub use solver::{InitialCondition, Problem, SimConfig, StepDiagnostics, Trajectory};
pub use spectral::SpectralBasis;
