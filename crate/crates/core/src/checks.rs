//! Seeded property suites for the graphs, the nonlocal operator and the
//! spectral machinery. The CLI `check` command prints them; the tests assert them.

use std::fmt;

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Grid, GridFunction};
use crate::kernel::{KernelOperator, KernelSpec};
use crate::monotone::{MonotoneGraph, PotentialSplit};
use crate::par::Execution;
use crate::spectral::{neumann_laplacian, SpectralBasis};

pub const DEFAULT_SEED: u64 = 20240521;
pub const ORACLE_GRID_STEP: f64 = 1e-5;
pub const LAMBDAS: [f64; 3] = [1.0, 0.1, 0.01];

/// One measured property: `passed` iff `measured <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckOutcome {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4}  {:<64} measured {:>10.3e}  tol {:>8.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

fn canonical_graphs() -> [(&'static str, PotentialSplit); 3] {
    [
        ("polynomial", PotentialSplit::polynomial()),
        (
            "logarithmic",
            PotentialSplit::logarithmic(0.3, 1.0, 0.4).expect("valid parameters"),
        ),
        ("double_obstacle", PotentialSplit::double_obstacle()),
    ]
}

/// Samples `x ∈ [−3, 3]`; logarithmic samples are clipped into the open domain.
fn sample_point(rng: &mut ChaCha8Rng, graph: &MonotoneGraph) -> f64 {
    let x: f64 = rng.random_range(-3.0..=3.0);
    match graph {
        MonotoneGraph::Logarithmic { .. } => x.clamp(-(1.0 - 1e-9), 1.0 - 1e-9),
        _ => x,
    }
}

/// Closed-form Moreau envelope against the brute-force grid minimum.
pub fn yosida_oracle_suite(seed: u64, samples: usize, exec: Execution) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for (name, split) in canonical_graphs() {
        let graph = split.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let x = sample_point(&mut rng, &graph);
            for &lambda in &LAMBDAS {
                let formula = graph.yosida_primitive(lambda, x).unwrap_or(f64::NAN);
                let oracle = graph.moreau_oracle_with(exec, lambda, x, ORACLE_GRID_STEP);
                worst = worst.max(nan_inf(formula - oracle).abs());
            }
        }
        out.push(CheckOutcome::new(
            format!("{name}: envelope formula = brute-force minimum"),
            worst,
            1e-6,
        ));
    }
    out
}

fn nan_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Resolvent, Yosida and envelope properties on `samples` seeded points per graph.
pub fn graph_suite(seed: u64, samples: usize) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for (name, split) in canonical_graphs() {
        let graph = split.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
        let mut contraction: f64 = 0.0;
        let mut lipschitz: f64 = 0.0;
        let mut at_zero: f64 = 0.0;
        let mut membership: f64 = 0.0;
        let mut moduli: f64 = 0.0;
        let mut limit: f64 = 0.0;
        let mut below_hat: f64 = 0.0;
        let mut env_order: f64 = 0.0;
        let mut convexity: f64 = 0.0;
        let mut minimal_monotone: f64 = 0.0;
        let mut pi_lip: f64 = 0.0;
        let mut failures = 0usize;
        let mut sorted = Vec::with_capacity(samples);

        for _ in 0..samples {
            let x1 = sample_point(&mut rng, &graph);
            let x2 = sample_point(&mut rng, &graph);
            let dx = (x1 - x2).abs();
            for &lambda in &LAMBDAS {
                let (Ok(e1), Ok(e2)) =
                    (graph.yosida_eval(lambda, x1), graph.yosida_eval(lambda, x2))
                else {
                    failures += 1;
                    continue;
                };
                contraction = contraction.max((e1.resolvent - e2.resolvent).abs() - dx);
                lipschitz = lipschitz.max(((e1.value - e2.value).abs() - dx / lambda) * lambda);
                at_zero = at_zero.max(graph.yosida(lambda, 0.0).map_or(f64::INFINITY, f64::abs));
                let member_err = match graph {
                    MonotoneGraph::Polynomial => (e1.value - e1.resolvent.powi(3)).abs() / 1e-10,
                    MonotoneGraph::Logarithmic { theta, .. } => {
                        (e1.value - theta * e1.resolvent.atanh()).abs() / 1e-9
                    }
                    MonotoneGraph::DoubleObstacle => {
                        if e1.resolvent.abs() < 1.0 {
                            e1.value.abs() / 1e-12
                        } else if x1.signum() * e1.value >= 0.0 {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    }
                };
                membership = membership.max(member_err);
                let hat1 = graph.yosida_primitive(lambda, x1).unwrap_or(f64::NAN);
                let hat = graph.gamma_hat(x1);
                if hat.is_finite() {
                    below_hat = below_hat.max(nan_inf(hat1 - hat));
                }
            }
            // λ₁ > λ₂ ordering of |γ_λ| and of the envelopes
            for w in LAMBDAS.windows(2) {
                if graph.in_domain(x1) {
                    let big = graph.yosida(w[0], x1).map_or(f64::NAN, f64::abs);
                    let small = graph.yosida(w[1], x1).map_or(f64::NAN, f64::abs);
                    moduli = moduli.max(nan_inf(big - small));
                }
                let big = graph.yosida_primitive(w[0], x1).unwrap_or(f64::NAN);
                let small = graph.yosida_primitive(w[1], x1).unwrap_or(f64::NAN);
                env_order = env_order.max(nan_inf(big - small));
            }
            if graph.in_domain(x1)
                && x1.abs() <= 2.0
                && (graph == MonotoneGraph::Polynomial || x1.abs() <= 0.9)
            {
                let g0 = graph.gamma_minimal(x1).unwrap_or(f64::NAN).abs();
                let gl = graph.yosida(1e-6, x1).map_or(f64::NAN, f64::abs);
                limit = limit.max(nan_inf((g0 - gl).abs() / (1.0 + g0)));
            }
            let t: f64 = rng.random_range(0.0..1.0);
            let (hx, hy) = (graph.gamma_hat(x1), graph.gamma_hat(x2));
            if hx.is_finite() && hy.is_finite() {
                let mid = graph.gamma_hat(t * x1 + (1.0 - t) * x2);
                convexity = convexity.max(nan_inf(mid - (t * hx + (1.0 - t) * hy)));
            }
            pi_lip = pi_lip.max((split.pi(x1) - split.pi(x2)).abs() - split.pi_lipschitz() * dx);
            if let Some(g) = graph.gamma_minimal(x1) {
                sorted.push((x1, g));
            }
        }
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in sorted.windows(2) {
            minimal_monotone = minimal_monotone.max(w[0].1 - w[1].1);
        }

        let label = |s: &str| format!("{name}: {s}");
        out.push(CheckOutcome::new(
            label("resolvent failures"),
            failures as f64,
            0.0,
        ));
        out.push(CheckOutcome::new(
            label("resolvent is a contraction"),
            contraction,
            1e-12,
        ));
        out.push(CheckOutcome::new(
            label("yosida is 1/lambda-Lipschitz (x lambda)"),
            lipschitz,
            1e-10,
        ));
        out.push(CheckOutcome::new(label("yosida(0) = 0"), at_zero, 0.0));
        out.push(CheckOutcome::new(
            label("yosida(x) in gamma(J(x)) (err/tol)"),
            membership,
            1.0,
        ));
        out.push(CheckOutcome::new(
            label("|yosida| nondecreasing as lambda decreases"),
            moduli,
            1e-12,
        ));
        out.push(CheckOutcome::new(
            label("|yosida| -> |minimal section| (lambda=1e-6)"),
            limit,
            1e-4,
        ));
        out.push(CheckOutcome::new(
            label("envelope <= gamma_hat"),
            below_hat,
            1e-12,
        ));
        out.push(CheckOutcome::new(
            label("envelope nondecreasing as lambda decreases"),
            env_order,
            1e-12,
        ));
        out.push(CheckOutcome::new(
            label("gamma_hat convex"),
            convexity,
            1e-12,
        ));
        out.push(CheckOutcome::new(
            label("minimal section nondecreasing"),
            minimal_monotone,
            0.0,
        ));
        out.push(CheckOutcome::new(
            label("Pi is |Pi'|_inf-Lipschitz"),
            pi_lip,
            1e-12,
        ));
    }
    out
}

/// Kernel operator used by the `operator` suite: Gaussian σ = 0.05, mass 4, 64 cells.
pub fn default_operator() -> KernelOperator {
    KernelOperator::build(KernelSpec::gaussian(0.05, 4.0), Grid::unit(64)).expect("valid kernel")
}

fn random_function(rng: &mut ChaCha8Rng, grid: Grid) -> GridFunction {
    let v: Array1<f64> = (0..grid.n()).map(|_| rng.random_range(-1.0..1.0)).collect();
    GridFunction::new(grid, v).expect("finite")
}

fn random_mean_zero(rng: &mut ChaCha8Rng, grid: Grid) -> GridFunction {
    let f = random_function(rng, grid);
    let m = f.values().mean().unwrap_or(0.0);
    GridFunction::new(grid, f.values() - m).expect("finite")
}

/// `½ ΣΣ J(x_i − x_j)(u_i − u_j)² Δx²` straight from the kernel function.
pub fn quadratic_form_double_sum(spec: &KernelSpec, u: &GridFunction) -> f64 {
    let grid = u.grid();
    let dx = grid.dx();
    let v = u.values();
    let mut s = 0.0;
    for i in 0..grid.n() {
        for j in 0..grid.n() {
            let d = v[i] - v[j];
            s += spec.eval(grid.x(i) - grid.x(j)) * d * d;
        }
    }
    0.5 * s * dx * dx
}

/// Identities of `B`: symmetry, zero mean, nonnegativity, quadratic form, truncation bound.
pub fn operator_suite(op: &KernelOperator, seed: u64, trials: usize) -> Vec<CheckOutcome> {
    let grid = op.grid();
    let basis = SpectralBasis::new(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a_max = op.a_field().iter().copied().fold(0.0, f64::max);
    let m = op.matrix();
    let mut matrix_asym: f64 = 0.0;
    for i in 0..grid.n() {
        for j in 0..grid.n() {
            matrix_asym = matrix_asym.max((m[[i, j]] - m[[j, i]]).abs());
        }
    }
    let (mut sym, mut zero_mean, mut nonneg, mut quad, mut trunc): (f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0);
    let tails: Vec<(usize, f64)> = [0usize, 4, 16, 32]
        .iter()
        .map(|&k| (k, op.hs_tail(&basis, k).unwrap_or(f64::NAN)))
        .collect();
    let tail_monotone = tails
        .windows(2)
        .map(|w| nan_inf(w[1].1 - w[0].1))
        .fold(0.0, f64::max);
    for _ in 0..trials {
        let u = random_function(&mut rng, grid);
        let v = random_function(&mut rng, grid);
        let bu = op.apply_b(&u).expect("same grid");
        let bv = op.apply_b(&v).expect("same grid");
        let scale = 2.0 * a_max * u.l2_norm() * v.l2_norm();
        sym = sym.max((bu.dot(&v) - bv.dot(&u)).abs() / scale);
        let abs_mass: f64 = bu.values().iter().map(|x| x.abs()).sum::<f64>() * grid.dx();
        zero_mean = zero_mean.max(bu.mass().abs() / (abs_mass + a_max * u.l2_norm()));
        let form = bu.dot(&u);
        let uu = a_max * u.dot(&u);
        nonneg = nonneg.max(-form / uu);
        let oracle = quadratic_form_double_sum(op.spec(), &u);
        quad = quad.max((form - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE));
        for &(k, tail) in &tails {
            let ik = op.truncate(&basis, k).expect("k < n");
            let full = op.convolve(&u).expect("same grid");
            let part = ik.apply(&u).expect("same grid");
            let gap = GridFunction::new(grid, full.values() - part.values())
                .expect("finite")
                .l2_norm();
            trunc = trunc.max(nan_inf(gap - tail * u.l2_norm()) / u.l2_norm());
        }
    }
    vec![
        CheckOutcome::new("kernel matrix exactly symmetric", matrix_asym, 0.0),
        CheckOutcome::new("B symmetric: <Bu,v> = <Bv,u> (relative)", sym, 1e-12),
        CheckOutcome::new(
            "B has zero mean: sum(Bu) dx = 0 (relative)",
            zero_mean,
            1e-12,
        ),
        CheckOutcome::new("B nonnegative: <Bu,u> >= 0 (relative)", nonneg, 1e-12),
        CheckOutcome::new(
            "<Bu,u> = 1/2 sum J (u_i-u_j)^2 dx^2 (relative)",
            quad,
            1e-12,
        ),
        CheckOutcome::new("|(I - I_k) f| <= hs_tail(k) |f|", trunc, 1e-12),
        CheckOutcome::new("hs_tail nonincreasing in k", tail_monotone, 0.0),
    ]
}

fn max_abs(a: &Array1<f64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Eigenpairs, transforms, inverse Laplacian and the H⁻¹ machinery on `n` cells.
pub fn spectral_suite(n: usize, seed: u64, trials: usize) -> Vec<CheckOutcome> {
    let grid = Grid::unit(n);
    let basis = SpectralBasis::new(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dx = grid.dx();

    let mut eig: f64 = 0.0;
    for m in 0..n {
        let e = basis.eigenvector(m);
        let r = neumann_laplacian(&e).values() + &(e.values() * basis.eigenvalues()[m]);
        eig = eig.max(max_abs(&r));
    }
    let gram = basis.modes().dot(&basis.modes().t()) * dx;
    let mut ortho: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((gram[[i, j]] - target).abs());
        }
    }
    let e0 = basis.eigenvector(0);
    let e0_const = e0
        .values()
        .iter()
        .map(|v| (v - e0.values()[0]).abs())
        .fold(0.0, f64::max)
        + basis.eigenvalues()[0].abs();

    let (mut roundtrip, mut inverse, mut parseval, mut selfadj, mut psd, mut lap_sum): (
        f64,
        f64,
        f64,
        f64,
        f64,
        f64,
    ) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let ks = [1usize, 4, 16];
    let mut equiv = [0.0f64; 3];
    for _ in 0..trials {
        let u = random_function(&mut rng, grid);
        let back = basis
            .synthesize(&basis.coefficients(&u).expect("grid"))
            .expect("length");
        roundtrip = roundtrip.max(max_abs(&(back.values() - u.values())) / max_abs(u.values()));
        let lu = neumann_laplacian(&u);
        let lu_abs: f64 = lu.values().iter().map(|v| v.abs()).sum();
        lap_sum = lap_sum.max(lu.values().sum().abs() / lu_abs);

        let f = random_mean_zero(&mut rng, grid);
        let g = random_mean_zero(&mut rng, grid);
        let w = basis.inv_laplacian(&f).expect("mean zero");
        let back = neumann_laplacian(&w);
        inverse = inverse.max(max_abs(&(back.values() + f.values())) / max_abs(f.values()));
        let wg = basis.inv_laplacian(&g).expect("mean zero");
        let scale = w.l2_norm() * g.l2_norm() + wg.l2_norm() * f.l2_norm();
        selfadj = selfadj.max((w.dot(&g) - f.dot(&wg)).abs() / scale);
        psd = psd.max(-w.dot(&f) / (w.l2_norm() * f.l2_norm()));

        let full = basis.h_minus_one_norm(&f).expect("mean zero").powi(2);
        for (slot, &k) in ks.iter().enumerate() {
            let (fa, fb) = basis.project(&f, k).expect("mean zero");
            let na = basis.h_minus_one_norm(&fa).expect("mean zero").powi(2);
            let nb = basis.h_minus_one_norm(&fb).expect("mean zero").powi(2);
            parseval = parseval.max((na + nb - full).abs() / full);
            // ‖f_A‖ ≤ sqrt(λ_k)·‖f_A‖_{H⁻¹} on A_k
            let ratio = fa.l2_norm() / (basis.eigenvalues()[k].sqrt() * na.sqrt());
            equiv[slot] = equiv[slot].max(ratio - 1.0);
        }
    }
    // equality is attained by the top mode e_k and the bound is never exceeded by lower modes
    let mut sharp: f64 = 0.0;
    for &k in &ks {
        for m in 1..=k {
            let e = basis.eigenvector(m);
            let ratio = e.l2_norm() / basis.h_minus_one_norm(&e).expect("mean zero");
            let bound = basis.eigenvalues()[k].sqrt();
            if m == k {
                sharp = sharp.max((ratio - bound).abs() / bound);
            } else {
                sharp = sharp.max((ratio - bound).max(0.0) / bound);
            }
        }
    }
    let mut out = vec![
        CheckOutcome::new("eigen-residual max |L_h e_m + lambda_m e_m|", eig, 1e-10),
        CheckOutcome::new("eigenvectors orthonormal", ortho, 1e-12),
        CheckOutcome::new("lambda_0 = 0 and e_0 constant", e0_const, 1e-15),
        CheckOutcome::new("transform round-trip (relative)", roundtrip, 1e-12),
        CheckOutcome::new("Laplacian entries sum to zero (relative)", lap_sum, 1e-12),
        CheckOutcome::new("-L_h (-Laplacian)^-1 f = f (relative)", inverse, 1e-9),
        CheckOutcome::new(
            "H^-1 Parseval split over A_k + B_k (relative)",
            parseval,
            1e-12,
        ),
        CheckOutcome::new("inverse Laplacian self-adjoint (relative)", selfadj, 1e-12),
        CheckOutcome::new("inverse Laplacian positive semidefinite", psd, 1e-12),
    ];
    for (slot, &k) in ks.iter().enumerate() {
        out.push(CheckOutcome::new(
            format!("|f_A| <= sqrt(lambda_k) |f_A|_H-1 on A_k, k = {k}"),
            equiv[slot],
            1e-12,
        ));
    }
    out.push(CheckOutcome::new(
        "norm-equivalence constant attained by e_k",
        sharp,
        1e-12,
    ));
    out
}
