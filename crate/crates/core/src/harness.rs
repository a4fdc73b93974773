//! λ-sweeps measuring how fast `u_λ` approaches the singular limit.
//!
//! The limit solution is not available in closed form; a run at a much
//! smaller `λ_ref` stands in for it. All runs share grid, Δt, T and initial
//! data, so space-time norms compare fields at identical time points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::kernel::KernelOperator;
use crate::par::{self, Execution};
use crate::solver::{Problem, SimConfig, Trajectory};
use crate::spectral::SpectralBasis;

/// Minimum observed order accepted for the rate `‖u_λ − u‖ ≲ λ^{1/2}`.
pub const MIN_SLOPE: f64 = 0.45;
pub const MIN_R_SQUARED: f64 = 0.9;
/// Largest allowed relative increase of the error from one λ to the next smaller one.
pub const MONOTONE_SLACK: f64 = 0.05;
/// Largest allowed max/min spread of the pairwise constants `‖u_λi − u_λj‖²/(λi + λj)`.
pub const MAX_PAIRWISE_SPREAD: f64 = 10.0;
/// Every monitored norm must stay within this factor of its median across the sweep.
pub const ENVELOPE_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    pub exec: Execution,
    /// Cap on worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// Least-squares fit of `log e = slope·log λ + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Suprema / space-time norms of the bounded quantities for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub lambda: f64,
    /// `sup_t ‖u_λ‖_{L²}`.
    pub u_linf_l2: f64,
    /// `‖∇u_λ‖_{L²L²}`.
    pub grad_u_l2l2: f64,
    /// `‖μ_λ‖_{L²L²}`.
    pub mu_l2l2: f64,
    /// `‖∇μ_λ‖_{L²L²}`.
    pub grad_mu_l2l2: f64,
    /// `‖γ_λ(u_λ)‖_{L²L²}`.
    pub gamma_l2l2: f64,
}

impl Envelope {
    pub const NAMES: [&'static str; 5] = [
        "sup_t |u|_L2",
        "|grad u|_L2L2",
        "|mu|_L2L2",
        "|grad mu|_L2L2",
        "|gamma_lambda(u)|_L2L2",
    ];

    pub fn values(&self) -> [f64; 5] {
        [
            self.u_linf_l2,
            self.grad_u_l2l2,
            self.mu_l2l2,
            self.grad_mu_l2l2,
            self.gamma_l2l2,
        ]
    }

    pub fn from_trajectory(lambda: f64, traj: &Trajectory) -> Self {
        let d = &traj.diagnostics;
        let sup = d.iter().map(|s| s.l2_norm).fold(0.0, f64::max);
        let l2l2 = |f: &dyn Fn(&crate::solver::StepDiagnostics) -> f64| {
            let v: Vec<f64> = d.iter().map(|s| f(s).powi(2)).collect();
            trapezoid(&v, traj.dt).sqrt()
        };
        Envelope {
            lambda,
            u_linf_l2: sup,
            grad_u_l2l2: l2l2(&|s| s.grad_l2),
            mu_l2l2: l2l2(&|s| s.mu_l2),
            grad_mu_l2l2: l2l2(&|s| s.grad_mu_l2),
            gamma_l2l2: l2l2(&|s| s.gamma_l2),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RateStudyResult {
    pub lambdas: Vec<f64>,
    pub lambda_ref: f64,
    /// `‖u_λ − u_ref‖_{L²((0,T)×Ω)}`.
    pub errors_l2l2: Vec<f64>,
    /// `sup_t ‖(−Δ)^{−1/2}(u_λ − u_ref)(t)‖_{L²}`.
    pub errors_hminus1: Vec<f64>,
    /// `‖u_λi − u_λi+1‖²_{L²L²}/(λi + λi+1)` for consecutive pairs.
    pub pairwise_ratios: Vec<f64>,
    /// `None` with fewer than three λ values or when some error is exactly zero.
    pub fit: Option<OrderFit>,
    /// One entry per λ in `lambdas`.
    pub diagnostics_envelope: Vec<Envelope>,
}

/// Pass/fail of a spread-type check, with the values behind it.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundCheck {
    Ok { spread: f64 },
    Report { values: Vec<f64>, spread: f64 },
}

impl BoundCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, BoundCheck::Ok { .. })
    }

    pub fn spread(&self) -> f64 {
        match self {
            BoundCheck::Ok { spread } | BoundCheck::Report { spread, .. } => *spread,
        }
    }
}

/// `∫_0^T f` by the trapezoid rule on uniformly spaced samples.
pub(crate) fn trapezoid(values: &[f64], dt: f64) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            dt * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// `sqrt(Σ_n w_n Σ_i (a_{n,i} − b_{n,i})² Δx)` with trapezoid weights `w_n` in time.
pub fn space_time_error(a: &[GridFunction], b: &[GridFunction], dt: f64, dx: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "{} vs {} snapshots",
            a.len(),
            b.len()
        )));
    }
    let mut sq = Vec::with_capacity(a.len());
    for (k, (fa, fb)) in a.iter().zip(b).enumerate() {
        if fa.values().len() != fb.values().len() {
            return Err(Error::Shape(format!(
                "snapshot {k}: {} vs {} cells",
                fa.values().len(),
                fb.values().len()
            )));
        }
        let s: f64 = fa
            .values()
            .iter()
            .zip(fb.values())
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        sq.push(s * dx);
    }
    Ok(trapezoid(&sq, dt).sqrt())
}

/// Ordinary least squares on `(log λ, log e)`.
pub fn fit_order(lambdas: &[f64], errors: &[f64]) -> Result<OrderFit> {
    if lambdas.len() != errors.len() {
        return Err(Error::Shape(format!(
            "{} lambdas vs {} errors",
            lambdas.len(),
            errors.len()
        )));
    }
    if lambdas.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "order fit needs at least 3 points, got {}",
            lambdas.len()
        )));
    }
    if let Some(v) = lambdas
        .iter()
        .chain(errors)
        .find(|v| !(**v > 0.0 && v.is_finite()))
    {
        return Err(Error::InvalidParameter(format!(
            "order fit needs positive finite inputs, got {v}"
        )));
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "order fit needs at least two distinct lambdas".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(OrderFit {
        slope,
        intercept,
        r_squared,
    })
}

/// `max/min` of nonnegative values; `∞` when the minimum is zero.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() {
        1.0
    } else if min > 0.0 {
        max / min
    } else if max == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

fn bound_check(values: &[f64], limit: f64) -> BoundCheck {
    let s = spread(values);
    if s <= limit {
        BoundCheck::Ok { spread: s }
    } else {
        BoundCheck::Report {
            values: values.to_vec(),
            spread: s,
        }
    }
}

/// The pairwise constants are consistent with a single `C` across scales.
pub fn pairwise_bound_check(result: &RateStudyResult) -> BoundCheck {
    bound_check(&result.pairwise_ratios, MAX_PAIRWISE_SPREAD)
}

impl RateStudyResult {
    pub fn rate_ok(&self) -> bool {
        self.fit
            .is_some_and(|f| f.slope >= MIN_SLOPE && f.r_squared >= MIN_R_SQUARED)
    }

    /// Errors do not grow by more than [`MONOTONE_SLACK`] as λ decreases.
    pub fn monotone_ok(&self) -> bool {
        self.errors_l2l2
            .windows(2)
            .all(|w| w[1] <= w[0] * (1.0 + MONOTONE_SLACK))
    }

    /// `errors_hminus1² / (λ + λ_ref)` values.
    pub fn hminus1_constants(&self) -> Vec<f64> {
        self.errors_hminus1
            .iter()
            .zip(&self.lambdas)
            .map(|(e, l)| e * e / (l + self.lambda_ref))
            .collect()
    }

    pub fn hminus1_check(&self) -> BoundCheck {
        bound_check(&self.hminus1_constants(), MAX_PAIRWISE_SPREAD)
    }

    /// Largest ratio to the median, over or under, for each monitored norm.
    pub fn envelope_spreads(&self) -> [f64; 5] {
        let mut out = [1.0; 5];
        for (q, o) in out.iter_mut().enumerate() {
            let mut v: Vec<f64> = self
                .diagnostics_envelope
                .iter()
                .map(|e| e.values()[q])
                .collect();
            v.sort_by(f64::total_cmp);
            if v.is_empty() {
                continue;
            }
            let n = v.len();
            let median = if n % 2 == 1 {
                v[n / 2]
            } else {
                0.5 * (v[n / 2 - 1] + v[n / 2])
            };
            let hi = v[n - 1] / median;
            let lo = median / v[0];
            *o = if median > 0.0 && v[0] > 0.0 {
                hi.max(lo)
            } else if v[n - 1] == 0.0 {
                1.0
            } else {
                f64::INFINITY
            };
        }
        out
    }

    pub fn envelope_ok(&self) -> bool {
        self.envelope_spreads()
            .iter()
            .all(|&s| s <= ENVELOPE_FACTOR)
    }
}

fn states(traj: &Trajectory) -> Vec<GridFunction> {
    traj.snapshots.iter().map(|(_, s)| s.clone()).collect()
}

/// Simulates `base` at every λ in `lambdas` and at `lambda_ref`, then compares.
pub fn run_sweep(
    base: &SimConfig,
    lambdas: &[f64],
    lambda_ref: f64,
    opts: SweepOptions,
) -> Result<RateStudyResult> {
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter("lambda sweep is empty".into()));
    }
    if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {l}"
        )));
    }
    if lambdas.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidParameter(
            "lambda sweep must be nonincreasing".into(),
        ));
    }
    let min = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    if !(lambda_ref > 0.0 && lambda_ref <= min / 10.0 * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "lambda_ref = {lambda_ref} must satisfy 0 < lambda_ref <= min(lambdas)/10 = {}",
            min / 10.0
        )));
    }

    let mut cfg = base.clone();
    cfg.output_every = 1;
    let grid = crate::grid::Grid::new(cfg.n_cells, cfg.domain_length)?;
    let kernel = KernelOperator::build(cfg.kernel, grid)?;
    let basis = SpectralBasis::new(grid);

    let mut all: Vec<f64> = lambdas.to_vec();
    all.push(lambda_ref);
    // each run is sequential inside; the sweep is the parallel axis
    let runs: Vec<Result<Trajectory>> = par::with_threads(opts.threads, || {
        par::map(opts.exec, &all, |&lambda| {
            let run_cfg = SimConfig {
                lambda,
                ..cfg.clone()
            };
            Problem::from_parts(
                run_cfg,
                kernel.clone(),
                basis.clone(),
                Execution::Sequential,
            )
            .and_then(|p| p.simulate())
            .map_err(|e| Error::Sweep {
                lambda,
                source: Box::new(e),
            })
        })
    });
    let runs: Vec<Trajectory> = runs.into_iter().collect::<Result<_>>()?;
    let (reference, sweep) = runs.split_last().expect("at least the reference run");

    let (dt, dx) = (cfg.dt, grid.dx());
    let ref_states = states(reference);
    let sweep_states: Vec<Vec<GridFunction>> = sweep.iter().map(states).collect();

    let mut errors_l2l2 = Vec::with_capacity(lambdas.len());
    let mut errors_hminus1 = Vec::with_capacity(lambdas.len());
    for s in &sweep_states {
        errors_l2l2.push(space_time_error(s, &ref_states, dt, dx)?);
        let mut sup: f64 = 0.0;
        for (a, b) in s.iter().zip(&ref_states) {
            let diff = GridFunction::new(grid, a.values() - b.values())?;
            sup = sup.max(basis.h_minus_one_norm(&diff)?);
        }
        errors_hminus1.push(sup);
    }
    let mut pairwise_ratios = Vec::with_capacity(lambdas.len().saturating_sub(1));
    for i in 0..lambdas.len().saturating_sub(1) {
        let d = space_time_error(&sweep_states[i], &sweep_states[i + 1], dt, dx)?;
        pairwise_ratios.push(d * d / (lambdas[i] + lambdas[i + 1]));
    }
    let fit = fit_order(lambdas, &errors_l2l2).ok();
    let diagnostics_envelope = lambdas
        .iter()
        .zip(sweep)
        .map(|(&l, t)| Envelope::from_trajectory(l, t))
        .collect();
    Ok(RateStudyResult {
        lambdas: lambdas.to_vec(),
        lambda_ref,
        errors_l2l2,
        errors_hminus1,
        pairwise_ratios,
        fit,
        diagnostics_envelope,
    })
}
