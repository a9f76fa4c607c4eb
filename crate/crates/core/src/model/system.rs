use super::{conservation_laws, ConservationLaw, ModelError, OdeModel};
use crate::algebra::MultiPoly;

/// Polynomial equations `equations[i] = 0` with rate constants substituted.
///
/// All polynomials share the variable list `species ++ parameters`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicSystem {
    pub equations: Vec<MultiPoly>,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub positive_symbols: Vec<String>,
    pub laws: Vec<ConservationLaw>,
    /// Species index each equation belongs to: its ODE's species, or the
    /// pivot of its conservation law.
    pub owners: Vec<usize>,
    /// Species whose steady-state equation was replaced by a conservation
    /// equation.
    pub dropped: Vec<String>,
}

impl AlgebraicSystem {
    /// `species ++ parameters`, the variable list of every equation.
    pub fn all_symbols(&self) -> Vec<String> {
        self.variables.iter().chain(&self.parameters).cloned().collect()
    }
}

pub fn steady_state_system(model: &OdeModel) -> Result<AlgebraicSystem, ModelError> {
    let laws = conservation_laws(model)?;
    let symbols: Vec<String> = model
        .species
        .iter()
        .chain(&model.conserved)
        .cloned()
        .collect();
    let dropped_idx: Vec<usize> = laws.iter().map(|l| l.pivot).collect();
    let mut equations = Vec::with_capacity(model.species.len());
    let mut owners = Vec::with_capacity(model.species.len());
    for (i, ode) in model.numeric_odes().iter().enumerate() {
        if dropped_idx.contains(&i) || ode.is_zero() {
            continue;
        }
        equations.push(ode.with_vars(&symbols)?);
        owners.push(i);
    }
    for law in &laws {
        equations.push(law.equation(&model.species, &symbols));
        owners.push(law.pivot);
    }
    Ok(AlgebraicSystem {
        equations,
        variables: model.species.clone(),
        parameters: model.conserved.clone(),
        positive_symbols: symbols,
        dropped: dropped_idx.iter().map(|&i| model.species[i].clone()).collect(),
        laws,
        owners,
    })
}
