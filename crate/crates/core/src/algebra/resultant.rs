//! Resultants via the subresultant polynomial remainder sequence.
//!
//! The PRS runs over any exact coefficient ring ([`CoeffRing`]); the crate
//! uses it with multivariate coefficients for symbolic resultants and with
//! univariate coefficients when counting solutions of bivariate systems.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{AlgebraError, MultiPoly, Rat, UniPoly};

/// Integral domain with exact division, as needed by the subresultant PRS.
pub trait CoeffRing: Clone + PartialEq
where
    for<'a> &'a Self: Add<&'a Self, Output = Self>
        + Sub<&'a Self, Output = Self>
        + Mul<&'a Self, Output = Self>
        + Neg<Output = Self>,
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    /// Panics if the division is not exact; the PRS only divides where
    /// exactness is guaranteed.
    fn div_exact(&self, divisor: &Self) -> Self;

    fn pow_elem(&self, e: usize) -> Self {
        let mut out = self.one_like();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl CoeffRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        MultiPoly::one(self.vars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn div_exact(&self, divisor: &Self) -> Self {
        self.exact_div(divisor)
            .expect("inexact division in subresultant sequence")
    }
    fn pow_elem(&self, e: usize) -> Self {
        self.pow(e as u32)
    }
}

impl CoeffRing for UniPoly {
    fn zero_like(&self) -> Self {
        UniPoly::zero()
    }
    fn one_like(&self) -> Self {
        UniPoly::constant(Rat::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor).expect("division by zero polynomial");
        assert!(r.is_zero(), "inexact division in subresultant sequence");
        q
    }
}

impl CoeffRing for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn div_exact(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

fn trim<R: CoeffRing>(mut p: Vec<R>) -> Vec<R>
where
    for<'a> &'a R: Add<&'a R, Output = R>
        + Sub<&'a R, Output = R>
        + Mul<&'a R, Output = R>
        + Neg<Output = R>,
{
    while p.last().is_some_and(|c| c.is_zero_elem()) {
        p.pop();
    }
    p
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`. Both inputs
/// trimmed, `b` nonzero, `deg a >= deg b`.
pub fn pseudo_remainder<R: CoeffRing>(a: &[R], b: &[R]) -> Vec<R>
where
    for<'a> &'a R: Add<&'a R, Output = R>
        + Sub<&'a R, Output = R>
        + Mul<&'a R, Output = R>
        + Neg<Output = R>,
{
    let db = b.len() - 1;
    let lb = &b[db];
    let delta = a.len() - b.len();
    let mut r: Vec<R> = a.to_vec();
    let mut steps = 0;
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        let mut next: Vec<R> = r.iter().map(|c| c * lb).collect();
        for (j, bc) in b.iter().enumerate() {
            next[shift + j] = &next[shift + j] - &(&lr * bc);
        }
        next.pop();
        r = trim(next);
        steps += 1;
    }
    let missing = delta + 1 - steps;
    if missing > 0 {
        let f = lb.pow_elem(missing);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

/// Output of [`subresultant_prs`].
#[derive(Clone, Debug)]
pub struct Prs<R> {
    pub resultant: R,
    /// Remainder sequence members after the two inputs, in order of
    /// decreasing degree. Each is, up to sign, a subresultant of the inputs.
    pub chain: Vec<Vec<R>>,
}

impl<R: CoeffRing> Prs<R>
where
    for<'a> &'a R: Add<&'a R, Output = R>
        + Sub<&'a R, Output = R>
        + Mul<&'a R, Output = R>
        + Neg<Output = R>,
{
    /// The chain member of the given degree, if the sequence has one.
    pub fn member_of_degree(&self, d: usize) -> Option<&Vec<R>> {
        self.chain.iter().find(|m| m.len() == d + 1)
    }
}

/// Resultant of two univariate polynomials over `R` (coefficients lowest
/// degree first) with the Collins–Brown subresultant PRS. Degree-zero inputs
/// follow the usual convention `res(a, c) = c^deg(a)`.
pub fn subresultant_prs<R: CoeffRing>(a: &[R], b: &[R], zero: &R) -> Prs<R>
where
    for<'a> &'a R: Add<&'a R, Output = R>
        + Sub<&'a R, Output = R>
        + Mul<&'a R, Output = R>
        + Neg<Output = R>,
{
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    let mut chain = Vec::new();
    if a.is_empty() || b.is_empty() {
        return Prs {
            resultant: zero.zero_like(),
            chain,
        };
    }
    let one = zero.one_like();
    let mut negate = false;
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            negate = true;
        }
    }
    if b.len() == 1 {
        let r = b[0].pow_elem(a.len() - 1);
        return Prs {
            resultant: if negate { -&r } else { r },
            chain,
        };
    }
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = pseudo_remainder(&a, &b);
        let divisor = &g * &h.pow_elem(delta);
        let next: Vec<R> = r.iter().map(|c| c.div_exact(&divisor)).collect();
        a = b;
        b = next;
        g = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow_elem(delta).div_exact(&h.pow_elem(delta - 1)),
        };
        if b.is_empty() {
            return Prs {
                resultant: zero.zero_like(),
                chain,
            };
        }
        chain.push(b.clone());
        if b.len() == 1 {
            let da = a.len() - 1;
            let lb = &b[0];
            let res = if da == 1 {
                lb.clone()
            } else {
                lb.pow_elem(da).div_exact(&h.pow_elem(da - 1))
            };
            return Prs {
                resultant: if negate { -&res } else { res },
                chain,
            };
        }
    }
}

impl MultiPoly {
    /// Resultant with respect to `var`, over the same variable list.
    pub fn resultant(&self, other: &MultiPoly, var: &str) -> Result<MultiPoly, AlgebraError> {
        if self.vars() != other.vars() {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars().to_vec(),
                right: other.vars().to_vec(),
            });
        }
        let idx = self
            .var_index(var)
            .ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))?;
        if self.degree_in(idx) == 0 || other.degree_in(idx) == 0 {
            return Err(AlgebraError::ConstantIn(var.to_string()));
        }
        let a = self.coefficients_in(idx);
        let b = other.coefficients_in(idx);
        Ok(subresultant_prs(&a, &b, &MultiPoly::zero(self.vars())).resultant)
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn rational_determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Resultant of two univariate rational polynomials (lowest degree first)
/// as the determinant of their Sylvester matrix. Independent of the PRS and
/// used to cross-check it.
pub fn sylvester_resultant(a: &[Rat], b: &[Rat]) -> Rat {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return Rat::one();
    }
    let mut rows = vec![vec![Rat::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    rational_determinant(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat_int, UniPoly};
    use crate::model::parse_polynomial;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn small_resultants() {
        let v = vars(&["x", "v"]);
        let p = |s: &str| parse_polynomial(s, &v).unwrap();
        assert_eq!(p("x-1").resultant(&p("x+1"), "x").unwrap(), p("2"));
        assert!(p("x^2-1").resultant(&p("x-1"), "x").unwrap().is_zero());
        assert_eq!(p("x^2-v").resultant(&p("x-1"), "x").unwrap(), p("1-v"));
        assert_eq!(
            p("v").resultant(&p("x"), "x"),
            Err(AlgebraError::ConstantIn("x".into()))
        );
    }

    #[test]
    fn resultant_sign_convention_matches_sylvester() {
        // res(a, b) = (-1)^(deg a * deg b) res(b, a)
        let a = UniPoly::from_ints(&[2, -3, 0, 1]);
        let b = UniPoly::from_ints(&[-5, 1, 4]);
        let ab = subresultant_prs(a.coeffs(), b.coeffs(), &rat_int(0)).resultant;
        let ba = subresultant_prs(b.coeffs(), a.coeffs(), &rat_int(0)).resultant;
        assert_eq!(ab, sylvester_resultant(a.coeffs(), b.coeffs()));
        assert_eq!(ba, sylvester_resultant(b.coeffs(), a.coeffs()));
        assert_eq!(ab, ba); // deg a * deg b even
    }

    #[test]
    fn degree_one_member_recovers_common_root() {
        // f = (u-2)(u+1) + (v-3), g = (u-2)(u-5) + 2(v-3): common root (2, 3)
        let f: Vec<UniPoly> = vec![
            UniPoly::from_ints(&[-5, 1]),
            UniPoly::from_ints(&[-1]),
            UniPoly::from_ints(&[1]),
        ];
        let g: Vec<UniPoly> = vec![
            UniPoly::from_ints(&[4, 2]),
            UniPoly::from_ints(&[-7]),
            UniPoly::from_ints(&[1]),
        ];
        let prs = subresultant_prs(&f, &g, &UniPoly::zero());
        let r = &prs.resultant;
        assert!(r.eval(&rat_int(3)).is_zero());
        let lin = prs.member_of_degree(1).unwrap();
        let u = -lin[0].eval(&rat_int(3)) / lin[1].eval(&rat_int(3));
        assert_eq!(u, rat_int(2));
    }
}
