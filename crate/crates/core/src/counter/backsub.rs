use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{CounterError, Locator};
use crate::algebra::{rat_to_f64, AlgebraError, Interval, MultiPoly, Rat};
use crate::model::{ConservationLaw, OdeModel};
use crate::reduction::ReducedSystem;

const REFINEMENTS: usize = 40;

/// Recovers the eliminated species from a solution of the reduced system by
/// running the elimination steps backwards in interval arithmetic.
///
/// Returns `None` as soon as some species is certainly negative. Otherwise
/// the locator is refined until every species is certainly positive and
/// every enclosure is at most `width` wide.
pub fn back_substitute(
    red: &ReducedSystem,
    params: &BTreeMap<String, Rat>,
    loc: &mut Locator,
    width: &Rat,
) -> Result<Option<BTreeMap<String, Interval>>, CounterError> {
    let symbols = &red.system_symbols;
    let index = |name: &str| {
        symbols
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| CounterError::Unsupported(format!("unknown symbol `{name}`")))
    };
    let cover_idx = [index(&red.cover_vars[0])?, index(&red.cover_vars[1])?];
    let mut target = width.clone();
    let shrink = Rat::from_integer(256.into());
    for _ in 0..REFINEMENTS {
        loc.refine(&target)?;
        let bits = (60.0 - rat_to_f64(&target).log2()).ceil().max(60.0) as u32;
        let enclosure: Vec<Interval> =
            loc.enclosure()?.iter().map(|iv| iv.round_out(bits)).collect();
        let mut env: Vec<Option<Interval>> = vec![None; symbols.len()];
        for p in &red.parameters {
            let value = params
                .get(p)
                .ok_or_else(|| CounterError::MissingParameter(p.clone()))?;
            env[index(p)?] = Some(Interval::point(value.clone()));
        }
        env[cover_idx[0]] = Some(enclosure[0].clone());
        env[cover_idx[1]] = Some(enclosure[1].clone());

        let mut settled = true;
        for step in red.steps.iter().rev() {
            let boxes: Vec<Interval> = env
                .iter()
                .map(|e| e.clone().unwrap_or_else(|| Interval::point(Rat::zero())))
                .collect();
            let c = Interval::eval_poly(&step.c, &boxes);
            let d = Interval::eval_poly(&step.d, &boxes);
            if c.contains_zero() {
                settled = false;
                break;
            }
            let x = d.neg().div(&c)?.round_out(bits);
            if x.is_negative() {
                return Ok(None);
            }
            if !x.is_positive() || &x.width() > width {
                settled = false;
            }
            env[index(&step.var)?] = Some(x);
        }
        let cover_ok = enclosure
            .iter()
            .all(|iv| iv.is_positive() && &iv.width() <= width);
        if settled && cover_ok {
            return Ok(Some(
                symbols
                    .iter()
                    .cloned()
                    .zip(env.into_iter().map(|e| e.expect("all symbols assigned")))
                    .collect(),
            ));
        }
        target = &target / &shrink;
    }
    Err(CounterError::CertificationFailure(
        "eliminated species could not be separated from zero".into(),
    ))
}

/// `max_i |p_i(x)| / (1 + max_t |t(x)|)` with `t` ranging over the terms of
/// `p_i`.
pub fn relative_residual(
    equations: &[MultiPoly],
    state: &BTreeMap<String, Rat>,
) -> Result<Rat, AlgebraError> {
    let mut worst = Rat::zero();
    for p in equations {
        let values: Vec<Option<&Rat>> = p.vars().iter().map(|v| state.get(v)).collect();
        let mut total = Rat::zero();
        let mut biggest = Rat::zero();
        for (m, c) in p.terms() {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    let v = values[i].ok_or_else(|| AlgebraError::MissingVariable(p.vars()[i].clone()))?;
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            if t.abs() > biggest {
                biggest = t.abs();
            }
            total += t;
        }
        let r = total.abs() / (Rat::one() + biggest);
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub max_residual: Rat,
    pub all_positive: bool,
    pub passed: bool,
}

/// Checks a candidate steady state against every ODE of `model` and every
/// conservation equation. `state` assigns all species and conserved totals.
pub fn validate_solution(
    model: &OdeModel,
    laws: &[ConservationLaw],
    state: &BTreeMap<String, Rat>,
    tol: &Rat,
) -> Result<ValidationReport, CounterError> {
    let symbols: Vec<String> = model.species.iter().chain(&model.conserved).cloned().collect();
    let mut equations = model.numeric_odes();
    equations.extend(laws.iter().map(|l| l.equation(&model.species, &symbols)));
    let max_residual = relative_residual(&equations, state)?;
    let all_positive = model
        .species
        .iter()
        .all(|s| state.get(s).is_some_and(|v| v.is_positive()));
    Ok(ValidationReport {
        passed: all_positive && &max_residual <= tol,
        max_residual,
        all_positive,
    })
}
