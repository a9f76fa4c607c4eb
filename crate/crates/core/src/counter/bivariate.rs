use num_traits::{One, Zero};

use super::CounterError;
use crate::algebra::{
    cauchy_root_bound, subresultant_prs, AlgebraError, Interval, MultiPoly, Prs, Rat,
    RealBound, SturmSequence, UniPoly,
};

/// Two polynomials in the variables `(u, v)`, in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateInstance {
    pub f: MultiPoly,
    pub g: MultiPoly,
    /// `[df/du, df/dv, dg/du, dg/dv]`.
    pub(crate) jacobian: [MultiPoly; 4],
}

impl BivariateInstance {
    pub fn new(f: MultiPoly, g: MultiPoly) -> Result<Self, CounterError> {
        if f.vars().len() != 2 || f.vars() != g.vars() {
            return Err(CounterError::Unsupported(format!(
                "expected two polynomials in the same two variables, got {:?} and {:?}",
                f.vars(),
                g.vars()
            )));
        }
        if f.is_zero() || g.is_zero() {
            return Err(CounterError::PositiveDimensional);
        }
        let jacobian = [f.derivative(0), f.derivative(1), g.derivative(0), g.derivative(1)];
        Ok(BivariateInstance { f, g, jacobian })
    }

    pub fn vars(&self) -> &[String] {
        self.f.vars()
    }

    /// Coefficients of `p` in variable `idx`, each a univariate polynomial in
    /// the other variable.
    pub(crate) fn coeffs_in(p: &MultiPoly, idx: usize) -> Vec<UniPoly> {
        let other = 1 - idx;
        p.coefficients_in(idx)
            .iter()
            .map(|c| c.to_unipoly(other).expect("bivariate"))
            .collect()
    }

    /// Subresultant PRS of `f` and `g` with respect to variable `idx`.
    pub(crate) fn prs(&self, idx: usize) -> Prs<UniPoly> {
        subresultant_prs(
            &Self::coeffs_in(&self.f, idx),
            &Self::coeffs_in(&self.g, idx),
            &UniPoly::zero(),
        )
    }

    /// Resultant eliminating variable `idx`, as a polynomial in the other.
    pub fn resultant(&self, idx: usize) -> UniPoly {
        self.prs(idx).resultant
    }

    pub fn eval(&self, p: &MultiPoly, bx: &[Interval; 2]) -> Interval {
        Interval::eval_poly(p, bx)
    }

    pub fn eval_point(p: &MultiPoly, u: &Rat, v: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in p.terms() {
            acc += c * num_traits::pow(u.clone(), m[0] as usize) * num_traits::pow(v.clone(), m[1] as usize);
        }
        acc
    }
}

/// Open interval `(lo, hi)` with `0 < lo` containing every positive root of
/// `r`, or `None` if `r` has no positive roots.
pub(crate) fn positive_root_range(r: &UniPoly) -> Result<Option<(Rat, Rat)>, AlgebraError> {
    let (q, _) = r.squarefree()?.strip_zero_roots();
    if q.degree() == Some(0) {
        return Ok(None);
    }
    let seq = SturmSequence::new(&q)?;
    if seq.count(&RealBound::Finite(Rat::zero()), &RealBound::PosInfinity)? == 0 {
        return Ok(None);
    }
    let hi = cauchy_root_bound(&q)?;
    let lo = Rat::one() / cauchy_root_bound(&q.reversed())?;
    Ok(Some((lo, hi)))
}

/// Whether `p` vanishes at the unique positive root of the square-free `r`
/// in `[lo, hi]` (closed if `lo == hi`, open otherwise, with `lo >= 0`).
pub(crate) fn vanishes_at_root(
    p: &UniPoly,
    r: &UniPoly,
    lo: &Rat,
    hi: &Rat,
) -> Result<bool, AlgebraError> {
    if p.is_zero() {
        return Ok(true);
    }
    // Only roots in the open interval matter, and `lo >= 0`.
    let (h, _) = p.gcd(r).strip_zero_roots();
    if h.degree() == Some(0) {
        return Ok(false);
    }
    if lo == hi {
        return Ok(h.eval(lo).is_zero());
    }
    let n = SturmSequence::new(&h)?.count(
        &RealBound::Finite(lo.clone()),
        &RealBound::Finite(hi.clone()),
    )?;
    Ok(n > 0)
}
