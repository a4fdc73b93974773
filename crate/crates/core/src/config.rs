//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, unknown or repeated keys are
//! errors. Missing keys take the defaults of the reference experiment.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::monotone::PotentialSplit;
use crate::solver::{InitialCondition, SimConfig};

pub const KEYS: [&str; 20] = [
    "domain_length",
    "n_cells",
    "dt",
    "t_final",
    "potential",
    "theta",
    "big_theta",
    "c",
    "kernel",
    "kernel_width",
    "kernel_mass",
    "lambda",
    "lambda_sweep",
    "lambda_ref",
    "ic_amplitude",
    "ic_wavenumber",
    "newton_tol",
    "newton_max_iter",
    "output_every",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialName {
    Polynomial,
    Logarithmic,
    DoubleObstacle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelName {
    Gaussian,
    Tophat,
}

/// Raw values of every recognized key, defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub domain_length: f64,
    pub n_cells: usize,
    pub dt: f64,
    pub t_final: f64,
    pub potential: PotentialName,
    pub theta: f64,
    pub big_theta: f64,
    pub c: f64,
    pub kernel: KernelName,
    pub kernel_width: f64,
    pub kernel_mass: f64,
    pub lambda: f64,
    pub lambda_sweep: Vec<f64>,
    /// Defaults to `min(lambda_sweep)/10`.
    pub lambda_ref: Option<f64>,
    pub ic_amplitude: f64,
    pub ic_wavenumber: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub output_every: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            domain_length: 1.0,
            n_cells: 256,
            dt: 1e-4,
            t_final: 0.05,
            potential: PotentialName::DoubleObstacle,
            theta: 0.3,
            big_theta: 1.0,
            c: 0.4,
            kernel: KernelName::Gaussian,
            kernel_width: 0.05,
            kernel_mass: 4.0,
            lambda: 1e-2,
            lambda_sweep: vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
            lambda_ref: None,
            ic_amplitude: 0.5,
            ic_wavenumber: 2.0,
            newton_tol: 1e-10,
            newton_max_iter: 50,
            output_every: 50,
            seed: 0,
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config {
        line,
        message: format!("cannot parse `{value}` for key `{key}`"),
    })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config {
                    line,
                    message: format!("unknown key `{key}`"),
                });
            }
            if let Some(prev) = seen.insert(key.to_string(), line) {
                return Err(Error::Config {
                    line,
                    message: format!("key `{key}` already set on line {prev}"),
                });
            }
            cfg.set(line, key, value)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        match key {
            "domain_length" => self.domain_length = parse_num(line, key, value)?,
            "n_cells" => self.n_cells = parse_num(line, key, value)?,
            "dt" => self.dt = parse_num(line, key, value)?,
            "t_final" => self.t_final = parse_num(line, key, value)?,
            "potential" => self.potential = match value {
                "polynomial" => PotentialName::Polynomial,
                "logarithmic" => PotentialName::Logarithmic,
                "double_obstacle" => PotentialName::DoubleObstacle,
                other => return Err(Error::Config {
                    line,
                    message: format!(
                        "unknown potential `{other}` (polynomial, logarithmic, double_obstacle)"
                    ),
                }),
            },
            "theta" => self.theta = parse_num(line, key, value)?,
            "big_theta" => self.big_theta = parse_num(line, key, value)?,
            "c" => self.c = parse_num(line, key, value)?,
            "kernel" => {
                self.kernel = match value {
                    "gaussian" => KernelName::Gaussian,
                    "tophat" => KernelName::Tophat,
                    other => {
                        return Err(Error::Config {
                            line,
                            message: format!("unknown kernel `{other}` (gaussian, tophat)"),
                        })
                    }
                }
            }
            "kernel_width" => self.kernel_width = parse_num(line, key, value)?,
            "kernel_mass" => self.kernel_mass = parse_num(line, key, value)?,
            "lambda" => self.lambda = parse_num(line, key, value)?,
            "lambda_sweep" => {
                self.lambda_sweep = value
                    .split(',')
                    .map(|v| parse_num(line, key, v.trim()))
                    .collect::<Result<_>>()?
            }
            "lambda_ref" => self.lambda_ref = Some(parse_num(line, key, value)?),
            "ic_amplitude" => self.ic_amplitude = parse_num(line, key, value)?,
            "ic_wavenumber" => self.ic_wavenumber = parse_num(line, key, value)?,
            "newton_tol" => self.newton_tol = parse_num(line, key, value)?,
            "newton_max_iter" => self.newton_max_iter = parse_num(line, key, value)?,
            "output_every" => self.output_every = parse_num(line, key, value)?,
            "seed" => self.seed = parse_num(line, key, value)?,
            _ => unreachable!("key list checked by the caller"),
        }
        Ok(())
    }

    pub fn potential_split(&self) -> Result<PotentialSplit> {
        match self.potential {
            PotentialName::Polynomial => Ok(PotentialSplit::polynomial()),
            PotentialName::Logarithmic => {
                PotentialSplit::logarithmic(self.theta, self.big_theta, self.c)
            }
            PotentialName::DoubleObstacle => Ok(PotentialSplit::double_obstacle()),
        }
    }

    pub fn kernel_spec(&self) -> KernelSpec {
        match self.kernel {
            KernelName::Gaussian => KernelSpec::gaussian(self.kernel_width, self.kernel_mass),
            KernelName::Tophat => KernelSpec::tophat(self.kernel_width, self.kernel_mass),
        }
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        Ok(SimConfig {
            potential: self.potential_split()?,
            kernel: self.kernel_spec(),
            lambda: self.lambda,
            domain_length: self.domain_length,
            n_cells: self.n_cells,
            dt: self.dt,
            t_final: self.t_final,
            newton_tol: self.newton_tol,
            newton_max_iter: self.newton_max_iter,
            output_every: self.output_every,
            initial_condition: InitialCondition::Cosine {
                amplitude: self.ic_amplitude,
                wavenumber: self.ic_wavenumber,
            },
        })
    }

    pub fn resolved_lambda_ref(&self) -> f64 {
        self.lambda_ref.unwrap_or_else(|| {
            self.lambda_sweep
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min)
                / 10.0
        })
    }

    /// Every key with its effective value, in the canonical key order.
    pub fn resolved(&self) -> BTreeMap<String, String> {
        let potential = match self.potential {
            PotentialName::Polynomial => "polynomial",
            PotentialName::Logarithmic => "logarithmic",
            PotentialName::DoubleObstacle => "double_obstacle",
        };
        let kernel = match self.kernel {
            KernelName::Gaussian => "gaussian",
            KernelName::Tophat => "tophat",
        };
        let sweep: Vec<String> = self.lambda_sweep.iter().map(|l| l.to_string()).collect();
        let pairs = [
            ("domain_length", self.domain_length.to_string()),
            ("n_cells", self.n_cells.to_string()),
            ("dt", self.dt.to_string()),
            ("t_final", self.t_final.to_string()),
            ("potential", potential.to_string()),
            ("theta", self.theta.to_string()),
            ("big_theta", self.big_theta.to_string()),
            ("c", self.c.to_string()),
            ("kernel", kernel.to_string()),
            ("kernel_width", self.kernel_width.to_string()),
            ("kernel_mass", self.kernel_mass.to_string()),
            ("lambda", self.lambda.to_string()),
            ("lambda_sweep", sweep.join(",")),
            ("lambda_ref", self.resolved_lambda_ref().to_string()),
            ("ic_amplitude", self.ic_amplitude.to_string()),
            ("ic_wavenumber", self.ic_wavenumber.to_string()),
            ("newton_tol", self.newton_tol.to_string()),
            ("newton_max_iter", self.newton_max_iter.to_string()),
            ("output_every", self.output_every.to_string()),
            ("seed", self.seed.to_string()),
        ];
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_defaults() {
        let cfg = RunConfig::parse(
            "# comment\n\npotential = logarithmic  # trailing\nlambda_sweep = 0.1, 0.01,0.001\nn_cells=64\n",
        )
        .unwrap();
        assert_eq!(cfg.potential, PotentialName::Logarithmic);
        assert_eq!(cfg.lambda_sweep, vec![0.1, 0.01, 0.001]);
        assert_eq!(cfg.n_cells, 64);
        assert_eq!(cfg.dt, 1e-4);
        assert!((cfg.resolved_lambda_ref() - 1e-4).abs() < 1e-18);
        assert_eq!(cfg.resolved().len(), KEYS.len());
    }

    #[test]
    fn rejects_unknown_duplicate_and_malformed() {
        let err = RunConfig::parse("dt = 1e-4\nfoo = 1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err}");
        assert!(RunConfig::parse("dt = 1\ndt = 2\n").is_err());
        assert!(RunConfig::parse("dt 1\n").is_err());
        assert!(RunConfig::parse("n_cells = 1.5\n").is_err());
        assert!(RunConfig::parse("potential = quartic\n").is_err());
    }

    #[test]
    fn builds_sim_config() {
        let cfg = RunConfig::parse("kernel = tophat\nkernel_width = 0.1\n").unwrap();
        let sim = cfg.sim_config().unwrap();
        assert_eq!(sim.kernel, KernelSpec::tophat(0.1, 4.0));
        let bad = RunConfig::parse("potential = logarithmic\ntheta = 2\n").unwrap();
        assert!(bad.sim_config().is_err());
    }
}
