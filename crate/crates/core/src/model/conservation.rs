use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ModelError, OdeModel};
use crate::algebra::{Monomial, MultiPoly, Rat};

/// Linear first integral `sum coeffs[i] * x_i = total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservationLaw {
    pub coeffs: Vec<BigInt>,
    pub total: String,
    /// Species index of the first nonzero coefficient.
    pub pivot: usize,
}

impl ConservationLaw {
    /// `sum c_i x_i - total` over `vars`, which must contain the species and
    /// the total's symbol.
    pub fn equation(&self, species: &[String], vars: &[String]) -> MultiPoly {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut m = vec![0; vars.len()];
            let j = vars.iter().position(|v| *v == species[i]).expect("species in vars");
            m[j] = 1;
            terms.push((Rat::from_integer(c.clone()), m));
        }
        let mut m = vec![0; vars.len()];
        let j = vars.iter().position(|v| *v == self.total).expect("total in vars");
        m[j] = 1;
        terms.push((-Rat::one(), m));
        MultiPoly::from_terms(vars, terms)
    }

    pub fn display(&self, species: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &species[i];
            let term = if c.abs().is_one() {
                name.clone()
            } else {
                format!("{}*{}", c.abs(), name)
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{term}") } else { term });
            } else {
                parts.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, term));
            }
        }
        format!("{} = {}", parts.join(" "), self.total)
    }
}

impl fmt::Display for ConservationLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.coeffs.len()).map(|i| format!("s{i}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..ncols {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis (as rows) of `{c : sum_i c_i * polys[i] = 0}`, in reduced row
/// echelon form with the usual column order.
pub(crate) fn polynomial_left_null_space(polys: &[MultiPoly]) -> Vec<Vec<Rat>> {
    let n = polys.len();
    let mut monomials: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = monomials.len();
            monomials.entry(m).or_insert(next);
        }
    }
    // One row per monomial, one column per polynomial.
    let mut rows = vec![vec![Rat::zero(); n]; monomials.len()];
    for (j, p) in polys.iter().enumerate() {
        for (m, c) in p.terms() {
            rows[monomials[m]][j] = c.clone();
        }
    }
    let pivots = rref(&mut rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<Rat>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect();
    rref(&mut basis, n);
    basis
}

fn primitive_integer_row(row: &[Rat]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

/// Conservation laws of the model in reduced row echelon form, ordered by
/// pivot species index descending; totals are named from
/// `model.conserved` in that order.
pub fn conservation_laws(model: &OdeModel) -> Result<Vec<ConservationLaw>, ModelError> {
    let basis = polynomial_left_null_space(&model.odes);
    if basis.len() != model.conserved.len() {
        return Err(ModelError::ConservedCount {
            declared: model.conserved.len(),
            nullity: basis.len(),
        });
    }
    let mut laws: Vec<(usize, Vec<BigInt>)> = basis
        .iter()
        .map(|row| {
            let pivot = row.iter().position(|c| !c.is_zero()).expect("nonzero row");
            (pivot, primitive_integer_row(row))
        })
        .collect();
    laws.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(laws
        .into_iter()
        .zip(&model.conserved)
        .map(|((pivot, coeffs), total)| ConservationLaw {
            coeffs,
            total: total.clone(),
            pivot,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;

    #[test]
    fn antisymmetric_pair() {
        let m = parse_model("model t\nspecies x1 x2\node x1 = -x1*x2\node x2 = x1*x2\nconserved K\n")
            .unwrap();
        let laws = conservation_laws(&m).unwrap();
        assert_eq!(laws.len(), 1);
        assert_eq!(laws[0].coeffs, vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(laws[0].total, "K");
        assert_eq!(laws[0].pivot, 0);
    }

    #[test]
    fn same_sign_pair_has_difference_law() {
        let m = parse_model("model t\nspecies x1 x2\node x1 = -x1*x2\node x2 = -x1*x2\nconserved K\n")
            .unwrap();
        let laws = conservation_laws(&m).unwrap();
        assert_eq!(laws[0].coeffs, vec![BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn wrong_number_of_totals() {
        let m = parse_model("model t\nspecies x1 x2\node x1 = -x1\node x2 = x1\n").unwrap();
        assert_eq!(
            conservation_laws(&m),
            Err(ModelError::ConservedCount {
                declared: 0,
                nullity: 1
            })
        );
    }

    #[test]
    fn rref_basic() {
        let r = |n: i64| Rat::from_integer(n.into());
        let mut rows = vec![vec![r(2), r(4), r(2)], vec![r(1), r(2), r(3)]];
        let piv = rref(&mut rows, 3);
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(rows[0], vec![r(1), r(2), r(0)]);
    }
}
