//! Maximal monotone graphs `γ = ∂γ̂` of the three canonical singular/smooth
//! potentials, with their resolvents `J_λ = (I + λγ)⁻¹`, Yosida
//! approximations `γ_λ = (I − J_λ)/λ` and Moreau envelopes `γ̂_λ`.
//!
//! Every graph satisfies `0 ∈ γ(0)`, hence `J_λ(0) = 0` and `γ_λ(0) = 0`.

use serde::Serialize;

use crate::error::{Assumption, Error, Result};
use crate::par::{self, Execution};
use crate::roots::newton_bisect;

const MAX_ROOT_ITERS: usize = 200;
const POLY_TOL: f64 = 1e-14;
const LOG_TOL: f64 = 1e-13;

/// Half-width of the admissible mean interval `(m_-, m_+)` for graphs with bounded domain.
pub const MEAN_MARGIN: f64 = 1.0 - 1e-6;

/// Tag used in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Polynomial,
    Logarithmic,
    DoubleObstacle,
}

/// Convex part of a double-well potential, seen through its subdifferential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneGraph {
    /// `γ̂(u) = u⁴/4`, `γ(u) = u³`.
    Polynomial,
    /// `γ̂(u) = (θ/2)[(1+u)log(1+u) + (1−u)log(1−u)]` on `[−1, 1]`.
    Logarithmic { theta: f64, big_theta: f64 },
    /// Indicator of `[−1, 1]`; `γ` is its normal cone.
    DoubleObstacle,
}

/// Resolvent, Yosida value and one element of the generalized derivative of
/// `γ_λ`, all at the same point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YosidaEval {
    pub resolvent: f64,
    pub value: f64,
    pub slope: f64,
}

impl MonotoneGraph {
    pub fn logarithmic(theta: f64, big_theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < big_theta && big_theta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "logarithmic potential needs 0 < theta < big_theta, got theta = {theta}, big_theta = {big_theta}"
            )));
        }
        Ok(MonotoneGraph::Logarithmic { theta, big_theta })
    }

    pub fn kind(&self) -> GraphKind {
        match self {
            MonotoneGraph::Polynomial => GraphKind::Polynomial,
            MonotoneGraph::Logarithmic { .. } => GraphKind::Logarithmic,
            MonotoneGraph::DoubleObstacle => GraphKind::DoubleObstacle,
        }
    }

    /// Endpoints of `dom(γ)`.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            MonotoneGraph::Polynomial => (f64::NEG_INFINITY, f64::INFINITY),
            _ => (-1.0, 1.0),
        }
    }

    pub fn has_bounded_domain(&self) -> bool {
        !matches!(self, MonotoneGraph::Polynomial)
    }

    /// Whether `γ(x)` is nonempty.
    pub fn in_domain(&self, x: f64) -> bool {
        match self {
            MonotoneGraph::Polynomial => x.is_finite(),
            MonotoneGraph::Logarithmic { .. } => x.abs() < 1.0,
            MonotoneGraph::DoubleObstacle => x.abs() <= 1.0,
        }
    }

    /// `γ̂(x)`, `+∞` outside `D(γ̂)`.
    pub fn gamma_hat(&self, x: f64) -> f64 {
        match *self {
            MonotoneGraph::Polynomial => 0.25 * x * x * x * x,
            MonotoneGraph::Logarithmic { theta, .. } => {
                let ax = x.abs();
                if ax > 1.0 {
                    f64::INFINITY
                } else if ax == 1.0 {
                    theta * std::f64::consts::LN_2
                } else {
                    0.5 * theta * ((1.0 + x) * x.ln_1p() + (1.0 - x) * (-x).ln_1p())
                }
            }
            MonotoneGraph::DoubleObstacle => {
                if x.abs() <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Minimal section `γ₀(x)`; `None` outside `dom(γ)`.
    pub fn gamma_minimal(&self, x: f64) -> Option<f64> {
        if !self.in_domain(x) {
            return None;
        }
        Some(match *self {
            MonotoneGraph::Polynomial => x * x * x,
            MonotoneGraph::Logarithmic { theta, .. } => theta * x.atanh(),
            MonotoneGraph::DoubleObstacle => 0.0,
        })
    }

    fn check_lambda(lambda: f64) -> Result<()> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {lambda}"
            )))
        }
    }

    /// `J_λ(x)`: the unique `u` with `x ∈ u + λγ(u)`.
    pub fn resolvent(&self, lambda: f64, x: f64) -> Result<f64> {
        Self::check_lambda(lambda)?;
        let fail = || Error::Resolvent {
            kind: self.kind(),
            lambda,
            x,
        };
        if !x.is_finite() {
            return Err(fail());
        }
        match *self {
            MonotoneGraph::DoubleObstacle => Ok(x.clamp(-1.0, 1.0)),
            MonotoneGraph::Polynomial => {
                if x == 0.0 {
                    return Ok(0.0);
                }
                // J_λ(x) lies between 0 and x
                let (lo, hi) = if x < 0.0 { (x, 0.0) } else { (0.0, x) };
                let start = if lambda * x * x < 1.0 {
                    x
                } else {
                    (x / lambda).cbrt()
                };
                newton_bisect(
                    |u| (u + lambda * u * u * u - x, 1.0 + 3.0 * lambda * u * u),
                    lo,
                    hi,
                    start,
                    POLY_TOL * x.abs().max(1.0),
                    MAX_ROOT_ITERS,
                )
                .ok_or_else(fail)
            }
            MonotoneGraph::Logarithmic { theta, .. } => {
                if x == 0.0 {
                    return Ok(0.0);
                }
                let g = |u: f64| u + lambda * theta * u.atanh() - x;
                let hi = 1.0f64.next_down();
                let lo = -hi;
                // beyond the last representable interior point the root saturates
                if g(hi) <= 0.0 {
                    return Ok(hi);
                }
                if g(lo) >= 0.0 {
                    return Ok(lo);
                }
                let start = x / (1.0 + lambda * theta);
                newton_bisect(
                    |u| {
                        let d = (1.0 - u) * (1.0 + u);
                        (g(u), 1.0 + lambda * theta / d)
                    },
                    lo,
                    hi,
                    start,
                    LOG_TOL * x.abs().max(1.0),
                    MAX_ROOT_ITERS,
                )
                .ok_or_else(fail)
            }
        }
    }

    /// `γ_λ(x) = (x − J_λ(x))/λ`.
    pub fn yosida(&self, lambda: f64, x: f64) -> Result<f64> {
        let j = self.resolvent(lambda, x)?;
        Ok((x - j) / lambda)
    }

    /// Resolvent, `γ_λ(x)` and an element of the generalized derivative of `γ_λ` at `x`.
    pub fn yosida_eval(&self, lambda: f64, x: f64) -> Result<YosidaEval> {
        let resolvent = self.resolvent(lambda, x)?;
        let value = (x - resolvent) / lambda;
        let slope = match *self {
            MonotoneGraph::Polynomial => {
                let g = 3.0 * resolvent * resolvent;
                g / (1.0 + lambda * g)
            }
            MonotoneGraph::Logarithmic { theta, .. } => {
                theta / ((1.0 - resolvent) * (1.0 + resolvent) + lambda * theta)
            }
            MonotoneGraph::DoubleObstacle => {
                if x.abs() > 1.0 {
                    1.0 / lambda
                } else {
                    0.0
                }
            }
        };
        Ok(YosidaEval {
            resolvent,
            value,
            slope,
        })
    }

    /// Moreau envelope `γ̂_λ(x) = (λ/2)|γ_λ(x)|² + γ̂(J_λ(x))`.
    pub fn yosida_primitive(&self, lambda: f64, x: f64) -> Result<f64> {
        let j = self.resolvent(lambda, x)?;
        let g = (x - j) / lambda;
        Ok(0.5 * lambda * g * g + self.gamma_hat(j))
    }

    /// Brute-force `min_y |y − x|²/(2λ) + γ̂(y)` on a uniform grid over
    /// `D(γ̂) ∩ [x − 5, x + 5]`. Independent of the resolvent; used as a test oracle.
    pub fn moreau_oracle(&self, lambda: f64, x: f64, grid_step: f64) -> f64 {
        self.moreau_oracle_with(Execution::default(), lambda, x, grid_step)
    }

    pub fn moreau_oracle_with(&self, exec: Execution, lambda: f64, x: f64, grid_step: f64) -> f64 {
        let (dlo, dhi) = match self {
            MonotoneGraph::Polynomial => (f64::NEG_INFINITY, f64::INFINITY),
            _ => (-1.0, 1.0),
        };
        let mut lo = dlo.max(x - 5.0);
        let mut hi = dhi.min(x + 5.0);
        if lo > hi {
            // x is far outside a bounded domain; the minimizer lies between 0 and x
            lo = dlo.max(x.min(0.0));
            hi = dhi.min(x.max(0.0));
        }
        let n = (((hi - lo) / grid_step).ceil() as usize).max(1) + 1;
        let h = (hi - lo) / (n - 1) as f64;
        par::min_over(exec, n, |k| {
            let y = if k == n - 1 { hi } else { lo + k as f64 * h };
            let d = y - x;
            d * d / (2.0 * lambda) + self.gamma_hat(y)
        })
    }

    /// Checks that the initial mean lies strictly inside `(m_-, m_+)`.
    pub fn validate_mean_constraint(&self, mean_u0: f64) -> Result<()> {
        if !mean_u0.is_finite() {
            return Err(Error::assumption(
                Assumption::InitialData,
                format!("mean of initial data is not finite ({mean_u0})"),
            ));
        }
        if self.has_bounded_domain() && mean_u0.abs() >= MEAN_MARGIN {
            return Err(Error::assumption(
                Assumption::InitialData,
                format!(
                    "mean of initial data {mean_u0} lies outside (m-, m+) = ({}, {})",
                    -MEAN_MARGIN, MEAN_MARGIN
                ),
            ));
        }
        Ok(())
    }
}

/// Splitting `F = γ̂ + Π̂` of a double-well potential into a convex part and
/// a Lipschitz-derivative perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSplit {
    pub graph: MonotoneGraph,
    /// Quadratic coefficient of the logarithmic perturbation; zero otherwise.
    pub c: f64,
}

impl PotentialSplit {
    /// `F_pol(x) = (x² − 1)²/4` with `Π(u) = −u`.
    pub fn polynomial() -> Self {
        PotentialSplit {
            graph: MonotoneGraph::Polynomial,
            c: 0.0,
        }
    }

    /// `F_log` with `Π(u) = −2cu`.
    pub fn logarithmic(theta: f64, big_theta: f64, c: f64) -> Result<Self> {
        let graph = MonotoneGraph::logarithmic(theta, big_theta)?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "logarithmic potential needs c > 0, got {c}"
            )));
        }
        Ok(PotentialSplit { graph, c })
    }

    /// `F_ob(x) = I_[−1,1](x) + (1 − x²)/2` with `Π(u) = −u`.
    pub fn double_obstacle() -> Self {
        PotentialSplit {
            graph: MonotoneGraph::DoubleObstacle,
            c: 0.0,
        }
    }

    pub fn pi(&self, x: f64) -> f64 {
        match self.graph {
            MonotoneGraph::Logarithmic { .. } => -2.0 * self.c * x,
            _ => -x,
        }
    }

    pub fn pi_hat(&self, x: f64) -> f64 {
        match self.graph {
            MonotoneGraph::Polynomial => 0.25 - 0.5 * x * x,
            MonotoneGraph::Logarithmic { big_theta, .. } => 0.5 * big_theta - self.c * x * x,
            MonotoneGraph::DoubleObstacle => 0.5 * (1.0 - x * x),
        }
    }

    /// `‖Π′‖_∞`.
    pub fn pi_lipschitz(&self) -> f64 {
        match self.graph {
            MonotoneGraph::Logarithmic { .. } => 2.0 * self.c,
            _ => 1.0,
        }
    }

    /// `F(x) = γ̂(x) + Π̂(x)`.
    pub fn potential(&self, x: f64) -> f64 {
        self.graph.gamma_hat(x) + self.pi_hat(x)
    }

    /// Regularized potential `γ̂_λ(x) + Π̂(x)`.
    pub fn potential_lambda(&self, lambda: f64, x: f64) -> Result<f64> {
        Ok(self.graph.yosida_primitive(lambda, x)? + self.pi_hat(x))
    }
}
