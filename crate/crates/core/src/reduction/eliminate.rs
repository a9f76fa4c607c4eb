use std::collections::BTreeSet;
use std::fmt;

use num_traits::Signed;

use super::ReductionError;
use crate::algebra::MultiPoly;
use crate::model::AlgebraicSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignDefiniteness {
    Positive,
    Negative,
    Mixed,
    /// The zero polynomial; treated like `Mixed`.
    Zero,
}

impl SignDefiniteness {
    pub fn is_definite(self) -> bool {
        matches!(self, SignDefiniteness::Positive | SignDefiniteness::Negative)
    }
}

impl fmt::Display for SignDefiniteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignDefiniteness::Positive => "+",
            SignDefiniteness::Negative => "-",
            SignDefiniteness::Mixed => "mixed",
            SignDefiniteness::Zero => "zero",
        })
    }
}

pub fn sign_definite(p: &MultiPoly) -> SignDefiniteness {
    if p.is_zero() {
        return SignDefiniteness::Zero;
    }
    let mut terms = p.terms().map(|(_, c)| c.is_positive());
    let first = terms.next().expect("nonzero");
    if terms.all(|s| s == first) {
        if first {
            SignDefiniteness::Positive
        } else {
            SignDefiniteness::Negative
        }
    } else {
        SignDefiniteness::Mixed
    }
}

/// One Gaussian elimination step: `equation = c*var + d`, solved as
/// `var = -d/c`.
///
/// `c` and `d` live over the full system variable list and do not contain
/// `var`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationStep {
    pub var: String,
    /// Index into the steady-state system's equation list.
    pub equation_index: usize,
    pub c: MultiPoly,
    pub d: MultiPoly,
    pub sign: SignDefiniteness,
}

/// Result of eliminating a maximum independent set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSystem {
    /// Canonical equations over `cover_vars ++ parameters`.
    pub equations: Vec<MultiPoly>,
    pub cover_vars: Vec<String>,
    pub parameters: Vec<String>,
    pub steps: Vec<EliminationStep>,
    pub positive_symbols: Vec<String>,
    /// Variable list of the step polynomials: `species ++ parameters`.
    pub system_symbols: Vec<String>,
    /// The steady-state equations before elimination, over `system_symbols`.
    pub source_equations: Vec<MultiPoly>,
}

impl ReducedSystem {
    /// Symbols of the reduced equations, `cover_vars ++ parameters`.
    pub fn symbols(&self) -> Vec<String> {
        self.cover_vars.iter().chain(&self.parameters).cloned().collect()
    }

    pub fn elimination_order(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.var.clone()).collect()
    }
}

/// Checks that every variable in `independent` occurs at most linearly and
/// never multiplied by another member.
fn check_linearity(
    equations: &[(usize, MultiPoly)],
    independent: &[usize],
    names: &[String],
) -> Result<(), ReductionError> {
    for (_, eq) in equations {
        for (m, _) in eq.terms() {
            let mut hits = independent.iter().filter(|&&i| m[i] > 0);
            if let Some(&i) = hits.next() {
                if m[i] > 1 {
                    return Err(ReductionError::NotIndependent(format!(
                        "{} occurs nonlinearly",
                        names[i]
                    )));
                }
                if let Some(&j) = hits.next() {
                    return Err(ReductionError::NotIndependent(format!(
                        "{} and {} multiply",
                        names[i], names[j]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Removes factors that cannot vanish on the open positive orthant: the
/// integer content, the monomial content and every common factor with a
/// polynomial in `divisors`. Each divisor is sign-definite, so none of its
/// factors has a positive zero.
pub(crate) fn strip_positive_factors(
    p: &MultiPoly,
    divisors: &[MultiPoly],
) -> Result<MultiPoly, ReductionError> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    let content = p.integer_content();
    let mut out = p
        .div_monomial(&p.monomial_content())
        .expect("monomial content divides")
        .scale(&content.recip());
    for d in divisors {
        while !out.coprime_images(d) {
            let g = out.gcd(d)?;
            if g.is_constant() {
                break;
            }
            out = out.exact_div(&g).expect("gcd divides");
        }
    }
    Ok(out)
}

/// Eliminates the species in `independent` (ascending index) from `sys`.
///
/// Each variable is solved from the equation it owns (see
/// [`AlgebraicSystem::owners`]) when that equation is still present and its
/// coefficient of the variable is sign-definite; otherwise from the
/// lowest-index remaining equation with a sign-definite coefficient. The
/// solution is then substituted into the other
/// remaining equations with denominators cleared by that coefficient.
pub fn eliminate(
    sys: &AlgebraicSystem,
    independent: &BTreeSet<usize>,
) -> Result<ReducedSystem, ReductionError> {
    let symbols = sys.all_symbols();
    let order: Vec<usize> = independent.iter().copied().collect();
    if let Some(&bad) = order.iter().find(|&&i| i >= sys.variables.len()) {
        return Err(ReductionError::NotIndependent(format!("no species with index {bad}")));
    }
    let mut remaining: Vec<(usize, MultiPoly)> =
        sys.equations.iter().cloned().enumerate().collect();
    check_linearity(&remaining, &order, &symbols)?;

    let mut steps = Vec::with_capacity(order.len());
    let mut divisors: Vec<MultiPoly> = Vec::new();
    for (k, &v) in order.iter().enumerate() {
        let name = &symbols[v];
        let usable = |eq: &MultiPoly| {
            eq.degree_in(v) == 1 && sign_definite(&eq.coefficients_in(v)[1]).is_definite()
        };
        let chosen = remaining
            .iter()
            .position(|(i, eq)| sys.owners.get(*i) == Some(&v) && usable(eq))
            .or_else(|| remaining.iter().position(|(_, eq)| usable(eq)));
        let Some(pos) = chosen else {
            return Err(ReductionError::CaseSplitRequired(name.clone()));
        };
        let (equation_index, eq) = remaining.remove(pos);
        let mut coeffs = eq.coefficients_in(v);
        let c = coeffs.pop().expect("degree 1");
        let d = coeffs.pop().expect("degree 1");
        let neg_d = -&d;
        if !c.is_constant() && !divisors.contains(&c) {
            divisors.push(c.clone());
        }
        for (_, other) in remaining.iter_mut() {
            if other.contains_var(v) {
                let substituted = other.substitute_rational(name, &neg_d, &c)?;
                *other = strip_positive_factors(&substituted, &divisors)?;
            }
        }
        remaining.retain(|(_, eq)| !eq.is_zero());
        check_linearity(&remaining, &order[k + 1..], &symbols)?;
        steps.push(EliminationStep {
            var: name.clone(),
            equation_index,
            sign: sign_definite(&c),
            c,
            d,
        });
    }

    let cover_vars: Vec<String> = (0..sys.variables.len())
        .filter(|i| !independent.contains(i))
        .map(|i| symbols[i].clone())
        .collect();
    let reduced_symbols: Vec<String> =
        cover_vars.iter().chain(&sys.parameters).cloned().collect();
    let equations = remaining
        .iter()
        .map(|(_, eq)| Ok(eq.with_vars(&reduced_symbols)?.canonical()))
        .collect::<Result<Vec<_>, ReductionError>>()?;
    Ok(ReducedSystem {
        equations,
        positive_symbols: reduced_symbols,
        cover_vars,
        parameters: sys.parameters.clone(),
        steps,
        system_symbols: symbols,
        source_equations: sys.equations.clone(),
    })
}
