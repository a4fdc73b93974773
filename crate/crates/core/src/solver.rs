//! Time integration of the Yosida-regularized nonlocal Cahn–Hilliard system
//!
//! ```text
//! ∂t u = Δμ,   μ = B(u) + γ_λ(u) + Π(u),   ∂μ/∂n = 0
//! ```
//!
//! on a 1-D Neumann grid. Each step is a backward-Euler convex–concave
//! splitting: `a·u + γ_λ(u)` is implicit, `−J∗u + Π(u)` is explicit. The
//! implicit system is solved by semismooth Newton with a line search on the
//! strictly convex functional whose optimality condition it is.

use ndarray::Array1;
use serde::Serialize;

use crate::error::{Assumption, Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::kernel::{KernelOperator, KernelSpec};
use crate::monotone::PotentialSplit;
use crate::par::Execution;
use crate::spectral::{laplacian_values, SpectralBasis};

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1.0 / (1u64 << 30) as f64;
const FALLBACK_ITERS: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// `u_0(x) = amplitude·cos(wavenumber·π·x/L)`.
    Cosine {
        amplitude: f64,
        wavenumber: f64,
    },
    Custom {
        values: Vec<f64>,
    },
}

impl InitialCondition {
    pub fn sample(&self, grid: Grid) -> Result<GridFunction> {
        match self {
            InitialCondition::Cosine {
                amplitude,
                wavenumber,
            } => {
                let (a, k, len) = (*amplitude, *wavenumber, grid.length());
                GridFunction::from_fn(grid, |x| a * (k * std::f64::consts::PI * x / len).cos())
            }
            InitialCondition::Custom { values } => GridFunction::from_vec(grid, values.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub potential: PotentialSplit,
    pub kernel: KernelSpec,
    pub lambda: f64,
    pub domain_length: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub t_final: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub output_every: usize,
    pub initial_condition: InitialCondition,
}

impl Default for SimConfig {
    /// Double-obstacle potential, Gaussian kernel (σ = 0.05, mass 4), λ = 1e-2,
    /// Ω = (0, 1) with 256 cells, Δt = 1e-4, T = 0.05, u_0 = 0.5·cos(2πx).
    fn default() -> Self {
        SimConfig {
            potential: PotentialSplit::double_obstacle(),
            kernel: KernelSpec::gaussian(0.05, 4.0),
            lambda: 1e-2,
            domain_length: 1.0,
            n_cells: 256,
            dt: 1e-4,
            t_final: 0.05,
            newton_tol: 1e-10,
            newton_max_iter: 50,
            output_every: 50,
            initial_condition: InitialCondition::Cosine {
                amplitude: 0.5,
                wavenumber: 2.0,
            },
        }
    }
}

impl SimConfig {
    /// `⌈t_final/Δt⌉`, ignoring round-off in the quotient.
    pub fn n_steps(&self) -> usize {
        if self.t_final <= 0.0 {
            return 0;
        }
        let q = self.t_final / self.dt;
        let r = q.round();
        if (q - r).abs() <= 1e-9 * q.max(1.0) {
            r as usize
        } else {
            q.ceil() as usize
        }
    }
}

/// Per-step monitored quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepDiagnostics {
    pub step: usize,
    pub time: f64,
    pub mass: f64,
    pub energy: f64,
    pub l2_norm: f64,
    pub grad_l2: f64,
    pub mu_l2: f64,
    pub grad_mu_l2: f64,
    pub gamma_l2: f64,
    pub newton_iters: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// `(step, state)` pairs: the initial state, every `output_every`-th step and the final one.
    pub snapshots: Vec<(usize, GridFunction)>,
    /// One entry per step, including step 0.
    pub diagnostics: Vec<StepDiagnostics>,
    pub dt: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &GridFunction {
        &self
            .snapshots
            .last()
            .expect("trajectory has the initial state")
            .1
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}

/// Outcome of one implicit solve.
#[derive(Debug, Clone)]
pub struct StepReport {
    pub iterations: usize,
    pub residuals: Vec<f64>,
    pub used_fallback: bool,
}

/// A validated configuration with its discrete operators.
#[derive(Debug, Clone)]
pub struct Problem {
    cfg: SimConfig,
    grid: Grid,
    kernel: KernelOperator,
    basis: SpectralBasis,
    exec: Execution,
}

impl Problem {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        Self::with_execution(cfg, Execution::default())
    }

    pub fn with_execution(cfg: SimConfig, exec: Execution) -> Result<Self> {
        let grid = Grid::new(cfg.n_cells, cfg.domain_length)?;
        let kernel = KernelOperator::build(cfg.kernel, grid)?;
        let basis = SpectralBasis::new(grid);
        Self::from_parts(cfg, kernel, basis, exec)
    }

    /// Reuses prebuilt operators, e.g. across a λ-sweep on a shared grid.
    pub fn from_parts(
        cfg: SimConfig,
        kernel: KernelOperator,
        basis: SpectralBasis,
        exec: Execution,
    ) -> Result<Self> {
        let grid = Grid::new(cfg.n_cells, cfg.domain_length)?;
        if kernel.grid() != grid || basis.grid() != grid || *kernel.spec() != cfg.kernel {
            return Err(Error::InvalidParameter(
                "operators were built for a different grid or kernel".into(),
            ));
        }
        check_numerics(&cfg)?;
        kernel.validate_splitting(&cfg.potential)?;
        let u0 = cfg.initial_condition.sample(grid)?;
        cfg.potential.graph.validate_mean_constraint(u0.mean())?;
        let graph = cfg.potential.graph;
        if graph.has_bounded_domain() {
            if let Some(i) = u0
                .values()
                .iter()
                .position(|&v| !graph.in_domain(v) || v.abs() >= 1.0)
            {
                return Err(Error::assumption(
                    Assumption::InitialData,
                    format!(
                        "initial value {} at cell {i} is outside the interior of the potential's domain",
                        u0.values()[i]
                    ),
                ));
            }
        }
        Ok(Problem {
            cfg,
            grid,
            kernel,
            basis,
            exec,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn kernel(&self) -> &KernelOperator {
        &self.kernel
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    pub fn initial_state(&self) -> Result<GridFunction> {
        self.cfg.initial_condition.sample(self.grid)
    }

    fn yosida_values(&self, u: &Array1<f64>) -> Result<Array1<f64>> {
        let (graph, lambda) = (self.cfg.potential.graph, self.cfg.lambda);
        let mut out = Array1::zeros(u.len());
        for (o, &x) in out.iter_mut().zip(u.iter()) {
            *o = graph.yosida(lambda, x)?;
        }
        Ok(out)
    }

    /// `μ = a·u − J∗u + γ_λ(u) + Π(u)`.
    pub fn chemical_potential(&self, u: &GridFunction) -> Result<GridFunction> {
        let b = self.kernel.apply_b_with(self.exec, u)?;
        let gamma = self.yosida_values(u.values())?;
        let pot = &self.cfg.potential;
        let values = b.values() + &gamma + &u.values().mapv(|x| pot.pi(x));
        GridFunction::new(self.grid, values)
    }

    /// `E_λ(u) = ½⟨Bu, u⟩ + Σ_i [γ̂_λ(u_i) + Π̂(u_i)]Δx`.
    pub fn energy(&self, u: &GridFunction) -> Result<f64> {
        let b = self.kernel.apply_b_with(self.exec, u)?;
        let mut local = 0.0;
        for &x in u.values() {
            local += self.cfg.potential.potential_lambda(self.cfg.lambda, x)?;
        }
        Ok(0.5 * b.dot(u) + local * self.grid.dx())
    }

    pub fn diagnostics(
        &self,
        step: usize,
        u: &GridFunction,
        newton_iters: usize,
    ) -> Result<StepDiagnostics> {
        let mu = self.chemical_potential(u)?;
        let gamma = GridFunction::from_trusted(self.grid, self.yosida_values(u.values())?);
        Ok(StepDiagnostics {
            step,
            time: step as f64 * self.cfg.dt,
            mass: u.mass(),
            energy: self.energy(u)?,
            l2_norm: u.l2_norm(),
            grad_l2: u.grad_l2(),
            mu_l2: mu.l2_norm(),
            grad_mu_l2: mu.grad_l2(),
            gamma_l2: gamma.l2_norm(),
            newton_iters,
        })
    }

    /// Advances `u_n` by one step of size Δt. `step` is used in error reports only.
    pub fn advance(&self, u_n: &GridFunction, step: usize) -> Result<(GridFunction, StepReport)> {
        u_n.check_grid(&self.grid)?;
        let cfg = &self.cfg;
        let (dt, dx) = (cfg.dt, self.grid.dx());
        let conv = self.kernel.matvec(self.exec, u_n.values());
        let explicit = u_n.values().mapv(|x| cfg.potential.pi(x)) - conv;
        let rhs = u_n.values() + &(laplacian_values(&explicit, dx) * dt);

        let solve = ImplicitSolve {
            problem: self,
            rhs: &rhs,
        };
        let mut v = u_n.values().clone();
        let mut residuals = Vec::new();
        let mut eval = solve.evaluate(&v)?;
        let mut iterations = 0;
        let mut converged = false;
        while iterations < cfg.newton_max_iter {
            residuals.push(eval.residual_norm);
            if eval.residual_norm <= cfg.newton_tol {
                converged = true;
                break;
            }
            let delta = solve.newton_direction(&eval.slope, &eval.residual);
            match solve.line_search(&v, &eval, &delta)? {
                Some((next, next_eval)) => {
                    v = next;
                    eval = next_eval;
                }
                None => break,
            }
            iterations += 1;
        }
        if !converged && iterations == cfg.newton_max_iter {
            residuals.push(eval.residual_norm);
            converged = eval.residual_norm <= cfg.newton_tol;
        }
        let mut used_fallback = false;
        if !converged {
            used_fallback = true;
            let (fv, fe, ok) = solve.damped_fixed_point(v, eval, &mut residuals)?;
            v = fv;
            eval = fe;
            converged = ok;
        }
        if !converged {
            if !eval.residual_norm.is_finite() || v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Divergence { step });
            }
            return Err(Error::StepFailure { step, residuals });
        }
        let next = GridFunction::new(self.grid, v).map_err(|_| Error::Divergence { step })?;
        Ok((
            next,
            StepReport {
                iterations,
                residuals,
                used_fallback,
            },
        ))
    }

    /// Runs `⌈T/Δt⌉` steps from the configured initial condition.
    pub fn simulate(&self) -> Result<Trajectory> {
        let cfg = &self.cfg;
        let n_steps = cfg.n_steps();
        let every = cfg.output_every.max(1);
        let mut u = self.initial_state()?;
        let mut snapshots = vec![(0, u.clone())];
        let mut diagnostics = vec![self.diagnostics(0, &u, 0)?];
        for n in 1..=n_steps {
            let (next, report) = self.advance(&u, n)?;
            u = next;
            diagnostics.push(self.diagnostics(n, &u, report.iterations)?);
            if n % every == 0 || n == n_steps {
                snapshots.push((n, u.clone()));
            }
        }
        Ok(Trajectory {
            snapshots,
            diagnostics,
            dt: cfg.dt,
        })
    }
}

/// Convenience wrapper: validate `cfg` and run it.
pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    Problem::new(cfg.clone())?.simulate()
}

fn check_numerics(cfg: &SimConfig) -> Result<()> {
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )))
        }
    };
    positive("lambda", cfg.lambda)?;
    positive("dt", cfg.dt)?;
    positive("newton_tol", cfg.newton_tol)?;
    if !(cfg.t_final >= 0.0 && cfg.t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_final must be nonnegative, got {}",
            cfg.t_final
        )));
    }
    if cfg.newton_max_iter == 0 {
        return Err(Error::InvalidParameter(
            "newton_max_iter must be >= 1".into(),
        ));
    }
    if cfg.output_every == 0 {
        return Err(Error::InvalidParameter("output_every must be >= 1".into()));
    }
    Ok(())
}

struct ImplicitSolve<'a> {
    problem: &'a Problem,
    rhs: &'a Array1<f64>,
}

/// Residual and linearization of `F(v) = v − Δt·L_h(a·v + γ_λ(v)) − rhs`.
struct Evaluation {
    /// `a·v + γ_λ(v)`.
    implicit: Array1<f64>,
    /// `a + γ_λ'(v)`.
    slope: Array1<f64>,
    residual: Array1<f64>,
    residual_norm: f64,
    merit: f64,
}

impl ImplicitSolve<'_> {
    fn evaluate(&self, v: &Array1<f64>) -> Result<Evaluation> {
        let p = self.problem;
        let (graph, lambda) = (p.cfg.potential.graph, p.cfg.lambda);
        let (dt, dx) = (p.cfg.dt, p.grid.dx());
        let a = p.kernel.a_field();
        let n = v.len();
        let mut implicit = Array1::zeros(n);
        let mut slope = Array1::zeros(n);
        let mut convex = 0.0;
        for i in 0..n {
            let y = graph.yosida_eval(lambda, v[i])?;
            implicit[i] = a[i] * v[i] + y.value;
            slope[i] = a[i] + y.slope;
            convex += 0.5 * a[i] * v[i] * v[i]
                + 0.5 * lambda * y.value * y.value
                + graph.gamma_hat(y.resolvent);
        }
        let residual = v - &(laplacian_values(&implicit, dx) * dt) - self.rhs;
        let residual_norm = (residual.dot(&residual) * dx).sqrt();
        let diff = v - self.rhs;
        let merit = 0.5 * p.basis.h_minus_one_sq_unchecked(&diff) / dt + convex * dx;
        Ok(Evaluation {
            implicit,
            slope,
            residual,
            residual_norm,
            merit,
        })
    }

    /// Solves `(I − Δt·L_h·diag(slope))·δ = −F` (tridiagonal, column diagonally dominant).
    fn newton_direction(&self, slope: &Array1<f64>, residual: &Array1<f64>) -> Array1<f64> {
        let p = self.problem;
        let (dt, dx) = (p.cfg.dt, p.grid.dx());
        let c = dt / (dx * dx);
        let d = slope;
        let n = d.len();
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 0..n {
            let neighbours = if i == 0 || i + 1 == n { 1.0 } else { 2.0 };
            diag[i] = 1.0 + c * neighbours * d[i];
            if i > 0 {
                lower[i] = -c * d[i - 1];
            }
            if i + 1 < n {
                upper[i] = -c * d[i + 1];
            }
        }
        let rhs: Vec<f64> = residual.iter().map(|r| -r).collect();
        Array1::from(solve_tridiagonal(&lower, &diag, &upper, &rhs))
    }

    fn directional_derivative(
        &self,
        v: &Array1<f64>,
        eval: &Evaluation,
        delta: &Array1<f64>,
    ) -> f64 {
        let p = self.problem;
        let diff = v - self.rhs;
        let mut coeffs = p.basis.coeffs_unchecked(&diff);
        coeffs[0] = 0.0;
        for m in 1..coeffs.len() {
            coeffs[m] /= p.basis.eigenvalues()[m] * p.cfg.dt;
        }
        let h = p.basis.modes().t().dot(&coeffs);
        (h + &eval.implicit).dot(delta) * p.grid.dx()
    }

    /// Full Newton step if it reduces the residual, otherwise Armijo backtracking on the merit.
    fn line_search(
        &self,
        v: &Array1<f64>,
        eval: &Evaluation,
        delta: &Array1<f64>,
    ) -> Result<Option<(Array1<f64>, Evaluation)>> {
        let full = v + delta;
        let full_eval = self.evaluate(&full)?;
        if full_eval.residual_norm < eval.residual_norm {
            return Ok(Some((full, full_eval)));
        }
        let slope = self.directional_derivative(v, eval, delta);
        if slope.is_nan() || slope >= 0.0 {
            return Ok(None);
        }
        let mut alpha = 0.5;
        while alpha >= MIN_STEP {
            let trial = v + &(delta * alpha);
            let trial_eval = self.evaluate(&trial)?;
            if trial_eval.merit <= eval.merit + ARMIJO * alpha * slope {
                return Ok(Some((trial, trial_eval)));
            }
            alpha *= 0.5;
        }
        Ok(None)
    }

    /// Chord iteration with damping ½ and the Jacobian frozen at the entry point.
    fn damped_fixed_point(
        &self,
        mut v: Array1<f64>,
        mut eval: Evaluation,
        residuals: &mut Vec<f64>,
    ) -> Result<(Array1<f64>, Evaluation, bool)> {
        let tol = self.problem.cfg.newton_tol;
        let frozen = eval.slope.clone();
        for _ in 0..FALLBACK_ITERS {
            if eval.residual_norm <= tol {
                return Ok((v, eval, true));
            }
            let delta = self.newton_direction(&frozen, &eval.residual);
            v += &(delta * 0.5);
            eval = self.evaluate(&v)?;
            residuals.push(eval.residual_norm);
            if !eval.residual_norm.is_finite() {
                break;
            }
        }
        let ok = eval.residual_norm <= tol;
        Ok((v, eval, ok))
    }
}

/// Thomas algorithm; `lower[0]` and `upper[n−1]` are ignored.
pub(crate) fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small(potential: PotentialSplit) -> SimConfig {
        SimConfig {
            potential,
            n_cells: 64,
            t_final: 2e-3,
            ..SimConfig::default()
        }
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let lower = [0.0, -1.0, -0.5, -2.0];
        let diag = [4.0, 5.0, 3.0, 6.0];
        let upper = [-1.0, -2.0, -0.5, 0.0];
        let rhs = [1.0, 2.0, 3.0, 4.0];
        let x = solve_tridiagonal(&lower, &diag, &upper, &rhs);
        for i in 0..4 {
            let mut r = diag[i] * x[i];
            if i > 0 {
                r += lower[i] * x[i - 1];
            }
            if i < 3 {
                r += upper[i] * x[i + 1];
            }
            assert_abs_diff_eq!(r, rhs[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn step_count_ignores_roundoff() {
        let cfg = SimConfig::default();
        assert_eq!(cfg.n_steps(), 500);
        let cfg = SimConfig {
            t_final: 1.5e-4,
            ..SimConfig::default()
        };
        assert_eq!(cfg.n_steps(), 2);
        let cfg = SimConfig {
            t_final: 0.0,
            ..SimConfig::default()
        };
        assert_eq!(cfg.n_steps(), 0);
    }

    #[test]
    fn chemical_potential_of_constants() {
        for pot in [
            PotentialSplit::polynomial(),
            PotentialSplit::double_obstacle(),
            PotentialSplit::logarithmic(0.3, 1.0, 0.4).unwrap(),
        ] {
            let p = Problem::new(small(pot)).unwrap();
            let mu = p
                .chemical_potential(&GridFunction::zeros(p.grid()))
                .unwrap();
            assert!(mu.values().iter().all(|&m| m == 0.0));
            let c = 0.3;
            let mu = p
                .chemical_potential(&GridFunction::constant(p.grid(), c))
                .unwrap();
            let expected = pot.graph.yosida(p.config().lambda, c).unwrap() + pot.pi(c);
            for &m in mu.values() {
                assert_abs_diff_eq!(m, expected, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn constant_state_is_stationary() {
        let cfg = SimConfig {
            initial_condition: InitialCondition::Cosine {
                amplitude: 0.25,
                wavenumber: 0.0,
            },
            ..small(PotentialSplit::double_obstacle())
        };
        let p = Problem::new(cfg).unwrap();
        let u = p.initial_state().unwrap();
        let (next, report) = p.advance(&u, 1).unwrap();
        assert_eq!(next, u);
        assert_eq!(report.iterations, 0);
    }

    #[test]
    fn zero_horizon_keeps_initial_state() {
        let cfg = SimConfig {
            t_final: 0.0,
            ..small(PotentialSplit::polynomial())
        };
        let traj = simulate(&cfg).unwrap();
        assert_eq!(traj.snapshots.len(), 1);
        assert_eq!(traj.diagnostics.len(), 1);
    }

    #[test]
    fn zero_data_stays_zero_for_polynomial() {
        let cfg = SimConfig {
            initial_condition: InitialCondition::Cosine {
                amplitude: 0.0,
                wavenumber: 2.0,
            },
            output_every: 3,
            ..small(PotentialSplit::polynomial())
        };
        let traj = simulate(&cfg).unwrap();
        assert_eq!(traj.snapshots.len(), 1 + 20 / 3 + 1);
        for (_, s) in &traj.snapshots {
            assert!(s.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn validation_gates() {
        let bad_mean = SimConfig {
            initial_condition: InitialCondition::Cosine {
                amplitude: 1.5,
                wavenumber: 0.0,
            },
            ..SimConfig::default()
        };
        let err = Problem::new(bad_mean).unwrap_err();
        assert!(err.to_string().contains("H4"), "{err}");

        let weak_kernel = SimConfig {
            kernel: KernelSpec::gaussian(0.05, 1.5),
            ..SimConfig::default()
        };
        let err = Problem::new(weak_kernel).unwrap_err();
        assert!(err.to_string().contains("H3"), "{err}");

        let outside = SimConfig {
            initial_condition: InitialCondition::Cosine {
                amplitude: 1.2,
                wavenumber: 2.0,
            },
            ..SimConfig::default()
        };
        let err = Problem::new(outside).unwrap_err();
        assert!(err.to_string().contains("H4"), "{err}");
    }

    #[test]
    fn custom_initial_condition_length_is_checked() {
        let cfg = SimConfig {
            initial_condition: InitialCondition::Custom {
                values: vec![0.0; 3],
            },
            ..small(PotentialSplit::polynomial())
        };
        assert!(matches!(Problem::new(cfg), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn short_run_conserves_mass_and_dissipates_energy() {
        for pot in [
            PotentialSplit::polynomial(),
            PotentialSplit::double_obstacle(),
            PotentialSplit::logarithmic(0.3, 1.0, 0.4).unwrap(),
        ] {
            let traj = simulate(&small(pot)).unwrap();
            let m0 = traj.diagnostics[0].mass;
            for w in traj.diagnostics.windows(2) {
                assert!((w[1].mass - m0).abs() <= 1e-12);
                assert!(
                    w[1].energy <= w[0].energy + 1e-10,
                    "{pot:?}: {} -> {}",
                    w[0].energy,
                    w[1].energy
                );
            }
        }
    }
}
