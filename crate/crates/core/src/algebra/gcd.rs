//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive: split off the content with respect to the highest-index
//! variable, then run the subresultant PRS on the primitive parts.

use std::collections::BTreeMap;

use super::{subresultant_prs, AlgebraError, MultiPoly, Rat};

impl MultiPoly {
    /// Greatest common divisor, normalized with [`MultiPoly::canonical`].
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        if self.vars() != other.vars() {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars().to_vec(),
                right: other.vars().to_vec(),
            });
        }
        Ok(gcd_rec(self, other))
    }

    /// Cheap sufficient test for a constant [`gcd`](Self::gcd). For every
    /// variable `x` of `other`, the remaining variables are fixed at integer
    /// points and the univariate gcd of the images is computed. Images that
    /// keep their full degree in `x` and are coprime rule out a common
    /// factor involving `x`. `false` only means "run the full gcd".
    pub fn coprime_images(&self, other: &MultiPoly) -> bool {
        if self.vars() != other.vars() {
            return false;
        }
        let vars = self.vars();
        for x in (0..vars.len()).filter(|&i| other.contains_var(i)) {
            if !self.contains_var(x) {
                continue;
            }
            let point: BTreeMap<String, Rat> = vars
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != x)
                .map(|(i, v)| (v.clone(), Rat::from_integer((17 + 13 * i as i64 + 7 * x as i64).into())))
                .collect();
            let a = self.partial_evaluate(&point).to_unipoly(0);
            let b = other.partial_evaluate(&point).to_unipoly(0);
            match (a, b) {
                (Ok(a), Ok(b)) if a.degree() == Some(self.degree_in(x) as usize)
                    && b.degree() == Some(other.degree_in(x) as usize) =>
                {
                    if a.gcd(&b).degree() != Some(0) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }

    /// Gcd of the coefficients of `self` as a polynomial in variable `idx`.
    pub fn content_in(&self, idx: usize) -> MultiPoly {
        content(self, idx)
    }
}

fn top_var(p: &MultiPoly) -> Option<usize> {
    (0..p.vars().len()).rev().find(|&i| p.contains_var(i))
}

fn content(p: &MultiPoly, idx: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(p.vars());
    for c in p.coefficients_in(idx) {
        if c.is_zero() {
            continue;
        }
        acc = gcd_rec(&acc, &c);
        if acc.is_constant() {
            break;
        }
    }
    acc
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let vars = a.vars();
    if a.is_zero() {
        return b.canonical();
    }
    if b.is_zero() {
        return a.canonical();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(vars);
    }
    let x = top_var(a).max(top_var(b)).expect("nonconstant");
    if !a.contains_var(x) {
        return gcd_rec(a, &content(b, x));
    }
    if !b.contains_var(x) {
        return gcd_rec(&content(a, x), b);
    }
    let ca = content(a, x);
    let cb = content(b, x);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let gc = gcd_rec(&ca, &cb);

    let ka = pa.coefficients_in(x);
    let kb = pb.coefficients_in(x);
    let prs = subresultant_prs(&ka, &kb, &MultiPoly::zero(vars));
    let gp = if !prs.resultant.is_zero() {
        MultiPoly::one(vars)
    } else {
        let last = match prs.chain.last() {
            Some(m) => MultiPoly::from_coefficients_in(vars, x, m),
            None if ka.len() <= kb.len() => pa.clone(),
            None => pb.clone(),
        };
        let c = content(&last, x);
        last.exact_div(&c).expect("content divides")
    };
    (&gc * &gp).canonical()
}
