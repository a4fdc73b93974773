//! Runs the default double-obstacle and logarithmic λ-sweeps and prints the results.

use nlch::harness::{pairwise_bound_check, run_sweep, SweepOptions};
use nlch::{PotentialSplit, SimConfig};

fn main() -> nlch::Result<()> {
    let lambdas = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    for (name, potential) in [
        ("double_obstacle", PotentialSplit::double_obstacle()),
        ("logarithmic", PotentialSplit::logarithmic(0.3, 1.0, 0.4)?),
    ] {
        let cfg = SimConfig {
            potential,
            ..SimConfig::default()
        };
        let t = std::time::Instant::now();
        let r = run_sweep(&cfg, &lambdas, 1e-4, SweepOptions::default())?;
        println!("{name} ({:.1?})", t.elapsed());
        for (i, lambda) in lambdas.iter().enumerate() {
            println!(
                "  lambda {:>7.0e}  l2l2 {:.4e}  h-1 {:.4e}  pair {}",
                lambda,
                r.errors_l2l2[i],
                r.errors_hminus1[i],
                r.pairwise_ratios
                    .get(i)
                    .map_or(String::from("-"), |p| format!("{p:.4e}"))
            );
        }
        println!("  fit {:?}", r.fit);
        println!(
            "  monotone {} pairwise {:?}",
            r.monotone_ok(),
            pairwise_bound_check(&r).spread()
        );
        println!("  h-1 constants {:?}", r.hminus1_constants());
        println!("  envelope spreads {:?}", r.envelope_spreads());
        for e in &r.diagnostics_envelope {
            println!("    {:?}", e.values());
        }
    }
    Ok(())
}
