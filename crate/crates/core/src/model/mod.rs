//! Reaction-network models: parsing, conservation laws and steady-state
//! systems.

mod conservation;
mod parser;
mod system;

pub use conservation::{conservation_laws, ConservationLaw};
pub use parser::{parse_model, parse_polynomial, render_model};
pub use system::{steady_state_system, AlgebraicSystem};

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::algebra::{AlgebraError, MultiPoly, Rat};

const BIOMOD26: &str = include_str!("../../models/biomod26.model");
const BIOMOD28: &str = include_str!("../../models/biomod28.model");

/// Names accepted by [`embedded_model`].
pub const EMBEDDED_MODELS: [&str; 2] = ["biomod26", "biomod28"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}, column {col}: undeclared symbol `{name}`")]
    UndeclaredSymbol {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("line {line}, column {col}: symbol `{name}` declared twice")]
    DuplicateSymbol {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("line {line}: second ODE for species `{species}`")]
    DuplicateOde { line: usize, species: String },
    #[error("no ODE given for species `{0}`")]
    MissingOde(String),
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error("model declares {declared} conserved totals but the ODEs have {nullity} independent conservation laws")]
    ConservedCount { declared: usize, nullity: usize },
    #[error("unknown embedded model `{0}`")]
    UnknownModel(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Polynomial ODE model `x' = f(x, k)`.
///
/// Every ODE right-hand side is a [`MultiPoly`] over `species ++ rate
/// parameter names`, so rate constants stay symbolic until
/// [`steady_state_system`] substitutes their exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeModel {
    pub name: String,
    pub species: Vec<String>,
    pub rate_params: Vec<(String, Rat)>,
    pub odes: Vec<MultiPoly>,
    pub conserved: Vec<String>,
}

impl OdeModel {
    pub fn new(
        name: String,
        species: Vec<String>,
        rate_params: Vec<(String, Rat)>,
        odes: Vec<MultiPoly>,
        conserved: Vec<String>,
    ) -> Result<Self, ModelError> {
        if odes.len() != species.len() {
            return Err(ModelError::Missing("ode"));
        }
        let mut seen = HashSet::new();
        for s in species
            .iter()
            .chain(rate_params.iter().map(|(s, _)| s))
            .chain(&conserved)
        {
            if !seen.insert(s.as_str()) {
                return Err(ModelError::DuplicateSymbol {
                    line: 0,
                    col: 0,
                    name: s.clone(),
                });
            }
        }
        let vars = Self::vars_of(&species, &rate_params);
        let odes = odes
            .into_iter()
            .map(|o| o.with_vars(&vars))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OdeModel {
            name,
            species,
            rate_params,
            odes,
            conserved,
        })
    }

    fn vars_of(species: &[String], rate_params: &[(String, Rat)]) -> Vec<String> {
        species
            .iter()
            .cloned()
            .chain(rate_params.iter().map(|(s, _)| s.clone()))
            .collect()
    }

    /// Variable list of the ODE polynomials.
    pub fn vars(&self) -> Vec<String> {
        Self::vars_of(&self.species, &self.rate_params)
    }

    pub fn rate_values(&self) -> BTreeMap<String, Rat> {
        self.rate_params.iter().cloned().collect()
    }

    /// Right-hand sides with the rate constants substituted, as polynomials
    /// over the species only.
    pub fn numeric_odes(&self) -> Vec<MultiPoly> {
        let values = self.rate_values();
        self.odes.iter().map(|o| o.partial_evaluate(&values)).collect()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }
}

/// Loads one of the models shipped with the crate.
pub fn embedded_model(name: &str) -> Result<OdeModel, ModelError> {
    match name {
        "biomod26" => parse_model(BIOMOD26),
        "biomod28" => parse_model(BIOMOD28),
        other => Err(ModelError::UnknownModel(other.to_string())),
    }
}

/// Source text of an embedded model.
pub fn embedded_model_text(name: &str) -> Option<&'static str> {
    match name {
        "biomod26" => Some(BIOMOD26),
        "biomod28" => Some(BIOMOD28),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_models_parse() {
        let m = embedded_model("biomod26").unwrap();
        assert_eq!(m.species.len(), 11);
        assert_eq!(m.rate_params.len(), 16);
        assert_eq!(m.odes.len(), 11);
        assert_eq!(m.conserved, vec!["k17", "k18", "k19"]);

        let m = embedded_model("biomod28").unwrap();
        assert_eq!(m.species.len(), 16);
        assert_eq!(m.rate_params.len(), 27);
        assert_eq!(m.conserved, vec!["k28", "k29", "k30"]);

        assert!(matches!(
            embedded_model("biomod99"),
            Err(ModelError::UnknownModel(_))
        ));
    }

    #[test]
    fn first_ode_of_biomod26() {
        let m = embedded_model("biomod26").unwrap();
        let vars = m.vars();
        let expected = parse_polynomial("k2*x6 + k15*x11 - k1*x1*x4 - k16*x1*x5", &vars).unwrap();
        assert_eq!(m.odes[0], expected);
    }

    #[test]
    fn embedded_models_round_trip() {
        for name in EMBEDDED_MODELS {
            let m = embedded_model(name).unwrap();
            assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
        }
    }
}
