//! Certified counting of positive solutions of a reduced system at fixed
//! parameter values.

mod backsub;
mod bivariate;
mod oracle;
mod solve;

pub use backsub::{back_substitute, relative_residual, validate_solution, ValidationReport};
pub use bivariate::BivariateInstance;
pub use oracle::{subdivision_oracle, Box2};
pub use solve::{oracle_solutions, positive_solutions, Locator};

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::Signed;
use thiserror::Error;

use crate::algebra::{rat, AlgebraError, Interval, Rat};
use crate::reduction::ReducedSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CounterError {
    #[error("unsupported system: {0}")]
    Unsupported(String),
    #[error("no value given for parameter `{0}`")]
    MissingParameter(String),
    #[error("parameter `{0}` must be positive")]
    NonPositiveParameter(String),
    #[error("the solution set is not zero-dimensional")]
    PositiveDimensional,
    #[error("subdivision undecided at depth {depth}")]
    Indeterminate { depth: u32 },
    #[error("certification failed: {0}")]
    CertificationFailure(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterConfig {
    /// Target width of every coordinate of a reported solution.
    pub width: Rat,
    /// Bound on the relative residual at the midpoint of a solution.
    pub residual_tol: Rat,
    /// Bisections per axis before subdivision gives up.
    pub max_depth: u32,
}

impl Default for CounterConfig {
    fn default() -> Self {
        CounterConfig {
            width: rat(1, 1_000_000_000_000),
            residual_tol: rat(1, 1_000_000_000),
            max_depth: 64,
        }
    }
}

/// A positive steady state with rigorous enclosures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedSolution {
    /// Enclosures of the two cover variables.
    pub cover: Box2,
    /// Enclosure of every symbol of the steady-state system (species and
    /// conserved totals), keyed by name.
    pub state: BTreeMap<String, Interval>,
    /// Relative residual of the steady-state equations at the midpoint.
    pub residual: Rat,
}

impl CertifiedSolution {
    pub fn midpoint(&self) -> BTreeMap<String, Rat> {
        self.state.iter().map(|(k, v)| (k.clone(), v.midpoint())).collect()
    }
}

#[derive(Debug, Clone)]
pub struct CountResult {
    pub count: usize,
    pub solutions: Vec<CertifiedSolution>,
    /// Positive solutions of the reduced system before checking the
    /// eliminated species.
    pub uv_candidates: usize,
    pub elapsed: Duration,
}

/// The reduced equations with `params` substituted.
pub fn bivariate_at(
    red: &ReducedSystem,
    params: &BTreeMap<String, Rat>,
) -> Result<BivariateInstance, CounterError> {
    if red.cover_vars.len() != 2 || red.equations.len() != 2 {
        return Err(CounterError::Unsupported(format!(
            "need two equations in two cover variables, got {} in {}",
            red.equations.len(),
            red.cover_vars.len()
        )));
    }
    let mut point = BTreeMap::new();
    for p in &red.parameters {
        let value = params
            .get(p)
            .ok_or_else(|| CounterError::MissingParameter(p.clone()))?;
        if !value.is_positive() {
            return Err(CounterError::NonPositiveParameter(p.clone()));
        }
        point.insert(p.clone(), value.clone());
    }
    BivariateInstance::new(
        red.equations[0].partial_evaluate(&point),
        red.equations[1].partial_evaluate(&point),
    )
}

/// Number of positive steady states of the system behind `red` at the
/// given conserved totals, each certified and enclosed to `cfg.width`.
pub fn count_positive(
    red: &ReducedSystem,
    params: &BTreeMap<String, Rat>,
    cfg: &CounterConfig,
) -> Result<CountResult, CounterError> {
    let start = Instant::now();
    let inst = bivariate_at(red, params)?;
    let locators = positive_solutions(&inst, cfg.max_depth)?;
    let uv_candidates = locators.len();
    let mut solutions = Vec::new();
    for mut loc in locators {
        let Some(state) = back_substitute(red, params, &mut loc, &cfg.width)? else {
            continue;
        };
        let cover = loc.enclosure()?;
        let mid: BTreeMap<String, Rat> =
            state.iter().map(|(k, v)| (k.clone(), v.midpoint())).collect();
        let residual = relative_residual(&red.source_equations, &mid)?;
        if residual > cfg.residual_tol {
            return Err(CounterError::CertificationFailure(format!(
                "residual {} above tolerance",
                crate::algebra::rat_to_f64(&residual)
            )));
        }
        solutions.push(CertifiedSolution {
            cover,
            state,
            residual,
        });
    }
    Ok(CountResult {
        count: solutions.len(),
        solutions,
        uv_candidates,
        elapsed: start.elapsed(),
    })
}
