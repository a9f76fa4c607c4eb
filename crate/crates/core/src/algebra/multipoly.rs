use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{format_rat, AlgebraError, Rat, UniPoly};

/// Exponent vector aligned with the owning polynomial's variable list.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, so structural equality
/// does not depend on construction order. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rat>,
}

fn graded_lex(a: &Monomial, b: &Monomial) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn var(vars: &[String], name: &str) -> Result<Self, AlgebraError> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(exps, Rat::one());
        Ok(p)
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Rat, Monomial)>,
    {
        let mut p = Self::zero(vars);
        for (c, m) in terms {
            assert_eq!(m.len(), vars.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m[idx]).max().unwrap_or(0)
    }

    /// Names of variables that occur with a positive exponent.
    pub fn support(&self) -> Vec<&str> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .map(|i| self.vars[i].as_str())
            .collect()
    }

    pub fn contains_var(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m[idx] > 0)
    }

    fn check_same_vars(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn div_scalar(&self, c: &Rat) -> Result<Self, AlgebraError> {
        if c.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.scale(&c.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplies by the monomial `exps`.
    pub fn mul_monomial(&self, exps: &[u32]) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Full evaluation. Every variable that occurs in `self` must be assigned;
    /// variables that do not occur may be left out.
    pub fn evaluate(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat, AlgebraError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.iter().enumerate() {
            match assignment.get(name) {
                Some(v) => values.push(Some(v.clone())),
                None if self.contains_var(i) => {
                    return Err(AlgebraError::MissingVariable(name.clone()))
                }
                None => values.push(None),
            }
        }
        let mut powers: Vec<Vec<Rat>> = values.iter().map(|_| vec![Rat::one()]).collect();
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = values[i].as_ref().expect("checked above");
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * base;
                    cache.push(next);
                }
                term *= &cache[e as usize];
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes the assigned variables and drops them from the variable
    /// list. Variables absent from `assignment` are kept in their order.
    pub fn partial_evaluate(&self, assignment: &BTreeMap<String, Rat>) -> Self {
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| !assignment.contains_key(&self.vars[i]))
            .collect();
        let new_vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let mut out = Self::zero(&new_vars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    if let Some(v) = assignment.get(&self.vars[i]) {
                        coeff *= num_traits::pow(v.clone(), e as usize);
                    }
                }
            }
            let new_m: Monomial = keep.iter().map(|&i| m[i]).collect();
            out.add_term(new_m, coeff);
        }
        out
    }

    /// Coefficients of `var^0, var^1, ...` as polynomials over the same
    /// variable list (with `var` absent from their terms).
    pub fn coefficients_in(&self, idx: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![Self::zero(&self.vars); deg + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let mut stripped = m.clone();
            let e = stripped[idx] as usize;
            stripped[idx] = 0;
            out[e].terms.insert(stripped, c.clone());
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(vars: &[String], idx: usize, coeffs: &[MultiPoly]) -> Self {
        let mut out = Self::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut m = m.clone();
                m[idx] += k as u32;
                out.add_term(m, v.clone());
            }
        }
        out
    }

    /// Returns `den^d * p[var := num/den]` where `d = deg_var(p)`.
    pub fn substitute_rational(
        &self,
        var: &str,
        num: &MultiPoly,
        den: &MultiPoly,
    ) -> Result<Self, AlgebraError> {
        self.check_same_vars(num)?;
        self.check_same_vars(den)?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let idx = self
            .var_index(var)
            .ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))?;
        let coeffs = self.coefficients_in(idx);
        let d = coeffs.len() - 1;
        // sum_k c_k * num^k * den^(d-k)
        let mut num_pows = vec![Self::one(&self.vars)];
        let mut den_pows = vec![Self::one(&self.vars)];
        for k in 1..=d {
            num_pows.push(&num_pows[k - 1] * num);
            den_pows.push(&den_pows[k - 1] * den);
        }
        let mut out = Self::zero(&self.vars);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = &(c * &num_pows[k]) * &den_pows[d - k];
            out = &out + &term;
        }
        Ok(out)
    }

    /// Exact division. `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if divisor.is_zero() || self.vars != divisor.vars {
            return None;
        }
        let (lead_m, lead_c) = divisor.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((m, c)) = rem.terms.iter().next_back() {
            if m.iter().zip(lead_m).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = m.iter().zip(lead_m).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            for (dm, dc) in &divisor.terms {
                let pm: Monomial = dm.iter().zip(&qm).map(|(a, b)| a + b).collect();
                rem.add_term(pm, -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if m[idx] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[idx] -= 1;
            out.add_term(dm, c * Rat::from_integer(BigInt::from(m[idx])));
        }
        out
    }

    /// Positive rational `q` such that `self / q` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn integer_content(&self) -> Rat {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Rat::zero();
        }
        Rat::new(num_gcd, den_lcm)
    }

    /// Smallest exponent of each variable over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut out: Option<Monomial> = None;
        for m in self.terms.keys() {
            out = Some(match out {
                None => m.clone(),
                Some(acc) => acc.iter().zip(m).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        out.unwrap_or_else(|| vec![0; self.vars.len()])
    }

    pub fn div_monomial(&self, exps: &[u32]) -> Option<Self> {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.iter().zip(exps).any(|(a, b)| a < b) {
                return None;
            }
            out.terms
                .insert(m.iter().zip(exps).map(|(a, b)| a - b).collect(), c.clone());
        }
        Some(out)
    }

    /// Leading term under graded-lex order, with earlier variables ranking
    /// higher.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|a, b| graded_lex(a.0, b.0))
    }

    /// Integer-primitive scaling with a positive graded-lex leading
    /// coefficient.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut content = self.integer_content();
        if self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        self.scale(&content.recip())
    }

    /// Terms sorted by descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_lex(b.0, a.0));
        v
    }

    /// Re-expresses the polynomial over `new_vars`. Every variable occurring
    /// in `self` must be present in `new_vars`.
    pub fn with_vars(&self, new_vars: &[String]) -> Result<Self, AlgebraError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let pos = new_vars.iter().position(|n| n == v);
            if pos.is_none() && self.contains_var(i) {
                return Err(AlgebraError::UnknownVariable(v.clone()));
            }
            map.push(pos);
        }
        let mut out = Self::zero(new_vars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; new_vars.len()];
            for (i, &e) in m.iter().enumerate() {
                if let Some(j) = map[i] {
                    nm[j] += e;
                }
            }
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Univariate view in variable `idx`; fails if another variable occurs.
    pub fn to_unipoly(&self, idx: usize) -> Result<UniPoly, AlgebraError> {
        let mut coeffs = vec![Rat::zero(); self.degree_in(idx) as usize + 1];
        for (m, c) in &self.terms {
            if let Some(j) = (0..m.len()).find(|&j| j != idx && m[j] > 0) {
                return Err(AlgebraError::UnknownVariable(self.vars[j].clone()));
            }
            coeffs[m[idx] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn from_unipoly(vars: &[String], idx: usize, p: &UniPoly) -> Self {
        let mut out = Self::zero(vars);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut m = vec![0; vars.len()];
            m[idx] = k as u32;
            out.add_term(m, c.clone());
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = m.iter().all(|&e| e == 0);
            if !abs.is_one() || is_const {
                factors.push(format_rat(&abs));
            }
            for (v, &e) in self.vars.iter().zip(m) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    /// Panics on mismatched variable lists; use `checked_add` for input data.
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("MultiPoly add")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("MultiPoly sub")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("MultiPoly mul")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}
