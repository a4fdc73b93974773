use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nlch::{
    Error, Execution, GridFunction, InitialCondition, KernelSpec, PotentialSplit, Problem,
    SimConfig,
};

fn quick(n_cells: usize, t_final: f64) -> SimConfig {
    SimConfig {
        n_cells,
        t_final,
        output_every: 1,
        ..SimConfig::default()
    }
}

#[test]
fn chemical_potential_matches_direct_summation() {
    let cfg = SimConfig {
        lambda: 0.1,
        ..quick(64, 0.0)
    };
    let problem = Problem::new(cfg.clone()).unwrap();
    let grid = problem.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let u: Array1<f64> = (0..64).map(|_| rng.random_range(-1.3..1.3)).collect();
    let u = GridFunction::new(grid, u).unwrap();
    let mu = problem.chemical_potential(&u).unwrap();
    let dx = grid.dx();
    for i in 0..64 {
        let ui = u.values()[i];
        let nonlocal: f64 = (0..64)
            .map(|j| cfg.kernel.eval(grid.x(i) - grid.x(j)) * dx * (ui - u.values()[j]))
            .sum();
        let gamma = (ui - ui.clamp(-1.0, 1.0)) / 0.1;
        let oracle = nonlocal + gamma - ui;
        assert!(
            (mu.values()[i] - oracle).abs() <= 1e-12 * (1.0 + oracle.abs()),
            "cell {i}"
        );
    }
}

#[test]
fn hundred_steps_conserve_mass_and_dissipate_energy() {
    let cfg = quick(128, 100.0 * 1e-4);
    assert_eq!(cfg.n_steps(), 100);
    let traj = Problem::new(cfg).unwrap().simulate().unwrap();
    assert_eq!(traj.diagnostics.len(), 101);
    let m0 = traj.diagnostics[0].mass;
    for w in traj.diagnostics.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-10, "step {}", w[1].step);
        assert!((w[1].mass - w[0].mass).abs() <= 1e-13 * (1.0 + w[0].mass.abs()));
    }
    let drift = (traj.diagnostics.last().unwrap().mass - m0).abs();
    assert!(drift <= 1e-12 * (1.0 + m0.abs()));
    // the run actually moved the state and reached the obstacle
    assert!(traj.diagnostics.last().unwrap().energy < traj.diagnostics[0].energy - 1e-6);
}

#[test]
fn obstacle_penalty_is_bounded_by_the_overshoot() {
    let cfg = quick(64, 0.03);
    let problem = Problem::new(cfg.clone()).unwrap();
    let traj = problem.simulate().unwrap();
    let graph = cfg.potential.graph;
    for (_, u) in &traj.snapshots {
        let overshoot = u.values().iter().fold(0.0f64, |m, v| m.max(v.abs() - 1.0));
        for &x in u.values() {
            let g = graph.yosida(cfg.lambda, x).unwrap();
            assert!(g.abs() <= overshoot / cfg.lambda + 1e-12);
        }
    }
}

#[test]
fn first_order_in_time() {
    let run = |dt: f64| {
        let cfg = SimConfig {
            potential: PotentialSplit::polynomial(),
            lambda: 1.0,
            n_cells: 32,
            dt,
            t_final: 0.04,
            initial_condition: InitialCondition::Cosine {
                amplitude: 0.3,
                wavenumber: 1.0,
            },
            ..SimConfig::default()
        };
        Problem::new(cfg)
            .unwrap()
            .simulate()
            .unwrap()
            .final_state()
            .clone()
    };
    // a·u is implicit and J∗u explicit, so the splitting error constant grows
    // like a·λ_m; the asymptotic regime starts around Δt ≈ 1e-4 here
    let (u1, u2, u3) = (run(2.5e-4), run(1.25e-4), run(6.25e-5));
    let diff = |a: &GridFunction, b: &GridFunction| {
        GridFunction::new(a.grid(), a.values() - b.values())
            .unwrap()
            .l2_norm()
    };
    let (d1, d2) = (diff(&u1, &u2), diff(&u2, &u3));
    assert!(d2 > 0.0);
    let ratio = d1 / d2;
    assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
}

#[test]
fn sup_l2_norm_uniform_in_lambda() {
    let sup = |lambda: f64| {
        let cfg = SimConfig {
            lambda,
            n_cells: 128,
            ..SimConfig::default()
        };
        let traj = Problem::new(cfg).unwrap().simulate().unwrap();
        traj.diagnostics
            .iter()
            .map(|d| d.l2_norm)
            .fold(0.0, f64::max)
    };
    let (a, b) = (sup(1e-2), sup(1e-3));
    assert!(a.max(b) / a.min(b) <= 2.0, "{a} vs {b}");
}

#[test]
fn sequential_and_parallel_runs_agree_bitwise() {
    let cfg = SimConfig {
        potential: PotentialSplit::logarithmic(0.3, 1.0, 0.4).unwrap(),
        ..quick(96, 0.005)
    };
    let a = Problem::with_execution(cfg.clone(), Execution::Sequential)
        .unwrap()
        .simulate()
        .unwrap();
    let b = Problem::with_execution(cfg, Execution::Parallel)
        .unwrap()
        .simulate()
        .unwrap();
    assert_eq!(a.diagnostics, b.diagnostics);
    for ((_, x), (_, y)) in a.snapshots.iter().zip(&b.snapshots) {
        assert_eq!(x.values(), y.values());
    }
}

#[test]
fn validation_gates_name_their_assumption() {
    let weak = SimConfig {
        kernel: KernelSpec::gaussian(0.05, 0.5),
        ..SimConfig::default()
    };
    let err = Problem::new(weak).unwrap_err();
    assert!(matches!(err, Error::Assumption { .. }));
    assert!(err.to_string().contains("(H3)"), "{err}");

    let negative = SimConfig {
        kernel: KernelSpec::gaussian(0.05, -1.0),
        ..SimConfig::default()
    };
    assert!(Problem::new(negative)
        .unwrap_err()
        .to_string()
        .contains("(H2)"));

    let shifted = SimConfig {
        initial_condition: InitialCondition::Cosine {
            amplitude: 1.5,
            wavenumber: 0.0,
        },
        ..SimConfig::default()
    };
    let err = Problem::new(shifted).unwrap_err();
    assert!(err.to_string().contains("(H4)"), "{err}");
    assert!(err.is_config_error());
}
