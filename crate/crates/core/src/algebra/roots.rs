//! Real root counting and isolation with Sturm sequences.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{format_rat, rat_int, AlgebraError, Rat, UniPoly};

/// Closed interval `[lo, hi]` holding exactly one root of some polynomial.
/// Endpoints are not roots unless `lo == hi`, in which case the root is
/// `lo` itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsolatingInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl IsolatingInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi);
        IsolatingInterval { lo, hi }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &IsolatingInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn to_interval(&self) -> super::Interval {
        super::Interval::new(self.lo.clone(), self.hi.clone())
    }
}

impl fmt::Display for IsolatingInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rat(&self.lo), format_rat(&self.hi))
    }
}

/// Endpoint of a counting interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealBound {
    NegInfinity,
    Finite(Rat),
    PosInfinity,
}

/// Sign of an integer polynomial at `num/den` (`den > 0`), computed on the
/// homogenised form so no rationals are formed.
fn int_sign_at(coeffs: &[BigInt], num: &BigInt, den: &BigInt) -> i8 {
    let Some((last, rest)) = coeffs.split_last() else {
        return 0;
    };
    let mut acc = last.clone();
    let mut den_pow = BigInt::one();
    for c in rest.iter().rev() {
        den_pow *= den;
        acc = acc * num + c * &den_pow;
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn int_sign_at_infinity(coeffs: &[BigInt], positive: bool) -> i8 {
    let Some(lc) = coeffs.last() else { return 0 };
    let s: i8 = if lc.is_positive() { 1 } else { -1 };
    if positive || (coeffs.len() - 1) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn primitive_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

/// Sign-preserving negated pseudo-remainder: a positive multiple of
/// `-(a mod b)`, made primitive.
fn neg_prem_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let lb_abs = lb.abs();
    let flip = lb.is_negative();
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        // |lb| * r - sign(lb) * lr * x^shift * b
        for c in r.iter_mut() {
            *c *= &lb_abs;
        }
        for (j, bc) in b.iter().enumerate() {
            let t = &lr * bc;
            if flip {
                r[shift + j] += t;
            } else {
                r[shift + j] -= t;
            }
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        r = primitive_int(r);
    }
    r.into_iter().map(|c| -c).collect()
}

/// Sturm sequence of a polynomial, kept as primitive integer polynomials.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    polys: Vec<Vec<BigInt>>,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Result<Self, AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let p0 = p.to_integer_coeffs();
        let mut polys = vec![p0.clone()];
        if p0.len() > 1 {
            polys.push(p.derivative().to_integer_coeffs());
        }
        while polys.last().unwrap().len() > 1 {
            let n = polys.len();
            let r = neg_prem_int(&polys[n - 2], &polys[n - 1]);
            if r.is_empty() {
                break;
            }
            polys.push(r);
        }
        Ok(SturmSequence { polys })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Sign of the underlying (primitive) polynomial at `x`.
    pub fn sign_at(&self, x: &Rat) -> i8 {
        int_sign_at(&self.polys[0], x.numer(), x.denom())
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, b: &RealBound) -> usize {
        match b {
            RealBound::Finite(x) => Self::variations(
                self.polys
                    .iter()
                    .map(|p| int_sign_at(p, x.numer(), x.denom())),
            ),
            RealBound::PosInfinity => {
                Self::variations(self.polys.iter().map(|p| int_sign_at_infinity(p, true)))
            }
            RealBound::NegInfinity => {
                Self::variations(self.polys.iter().map(|p| int_sign_at_infinity(p, false)))
            }
        }
    }

    /// Distinct real roots in the open interval `(lo, hi)`. Finite endpoints
    /// must not be roots.
    pub fn count(&self, lo: &RealBound, hi: &RealBound) -> Result<usize, AlgebraError> {
        for b in [lo, hi] {
            if let RealBound::Finite(x) = b {
                if self.sign_at(x) == 0 {
                    return Err(AlgebraError::EndpointIsRoot(format_rat(x)));
                }
            }
        }
        let vl = self.variations_at(lo);
        let vh = self.variations_at(hi);
        Ok(vl.saturating_sub(vh))
    }
}

/// Number of distinct real roots of a square-free `p` in `(lo, hi)`.
pub fn sturm_count(p: &UniPoly, lo: &RealBound, hi: &RealBound) -> Result<usize, AlgebraError> {
    SturmSequence::new(p)?.count(lo, hi)
}

/// `1 + max |c_i| / |c_n|`; every real root lies strictly inside
/// `(-B, B)`.
pub fn cauchy_root_bound(p: &UniPoly) -> Result<Rat, AlgebraError> {
    let lc = p.leading_coeff().ok_or(AlgebraError::ZeroPolynomial)?.abs();
    let n = p.coeffs().len() - 1;
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rat::zero);
    Ok(Rat::one() + max / lc)
}

/// Sign variations in the coefficient sequence: an upper bound on the
/// number of positive roots, with the same parity.
pub fn descartes_sign_variations(p: &UniPoly) -> usize {
    SturmSequence::variations(p.coeffs().iter().map(super::sign_of))
}

fn split_point(seq: &SturmSequence, lo: &Rat, hi: &Rat) -> Rat {
    let mid = (lo + hi) / rat_int(2);
    if seq.sign_at(&mid) != 0 {
        return mid;
    }
    // Nudge off an exact root; only finitely many candidates can be roots.
    let w = hi - lo;
    let mut k = 3u32;
    loop {
        let cand = &mid + &w / Rat::from_integer(BigInt::one() << k as usize);
        if seq.sign_at(&cand) != 0 {
            return cand;
        }
        k += 1;
    }
}

/// Isolates the distinct positive roots of `p` in ascending order. Every
/// interval lies in `(0, cauchy bound]` and has non-root endpoints.
pub fn isolate_positive_roots(p: &UniPoly) -> Result<Vec<IsolatingInterval>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let (q, _) = p.squarefree()?.strip_zero_roots();
    if q.degree() == Some(0) || descartes_sign_variations(&q) == 0 {
        return Ok(Vec::new());
    }
    let seq = SturmSequence::new(&q)?;
    let bound = cauchy_root_bound(&q)?;
    let zero = Rat::zero();
    let total = seq.count(&RealBound::Finite(zero.clone()), &RealBound::Finite(bound.clone()))?;
    let mut out = Vec::with_capacity(total);
    let mut stack = vec![(zero, bound, total)];
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(IsolatingInterval::new(lo, hi)),
            _ => {
                let m = split_point(&seq, &lo, &hi);
                let bm = RealBound::Finite(m.clone());
                let left = seq.count(&RealBound::Finite(lo.clone()), &bm)?;
                stack.push((m.clone(), hi, n - left));
                stack.push((lo, m, left));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    if let Some(first) = out.first_mut().filter(|iv| iv.lo.is_zero()) {
        // 0 may be a root of `p`; move the lower end off it.
        let hi = RealBound::Finite(first.hi.clone());
        let mut m = first.hi.clone();
        loop {
            m /= Rat::from_integer(2.into());
            if seq.sign_at(&m) != 0 && seq.count(&RealBound::Finite(m.clone()), &hi)? == 1 {
                break;
            }
        }
        first.lo = m;
    }
    Ok(out)
}

/// Shrinks an isolating interval of a square-free `p` by bisection until its
/// width is at most `width`. Returns `[r, r]` if a midpoint hits the root.
pub fn refine_root(
    p: &UniPoly,
    iv: &IsolatingInterval,
    width: &Rat,
) -> Result<IsolatingInterval, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let ints = p.to_integer_coeffs();
    let sign = |x: &Rat| int_sign_at(&ints, x.numer(), x.denom());
    if iv.is_exact() {
        return if sign(&iv.lo) == 0 {
            Ok(iv.clone())
        } else {
            Err(AlgebraError::NoSignChange {
                lo: format_rat(&iv.lo),
                hi: format_rat(&iv.hi),
            })
        };
    }
    let s_lo = sign(&iv.lo);
    let s_hi = sign(&iv.hi);
    if s_lo == 0 || s_hi == 0 || s_lo == s_hi {
        return Err(AlgebraError::NoSignChange {
            lo: format_rat(&iv.lo),
            hi: format_rat(&iv.hi),
        });
    }
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let two = rat_int(2);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        match sign(&mid) {
            0 => return Ok(IsolatingInterval::new(mid.clone(), mid)),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(IsolatingInterval::new(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn fin(n: i64) -> RealBound {
        RealBound::Finite(rat_int(n))
    }

    #[test]
    fn sturm_examples() {
        let p = UniPoly::from_ints(&[6, -7, 0, 1]); // (x-1)(x-2)(x+3)
        assert_eq!(sturm_count(&p, &fin(0), &RealBound::PosInfinity).unwrap(), 2);
        assert_eq!(
            sturm_count(&p, &RealBound::NegInfinity, &RealBound::PosInfinity).unwrap(),
            3
        );
        let q = UniPoly::from_ints(&[1, 0, 1]);
        assert_eq!(
            sturm_count(&q, &RealBound::NegInfinity, &RealBound::PosInfinity).unwrap(),
            0
        );
        let r = UniPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(sturm_count(&r, &fin(0), &fin(2)).unwrap(), 1);
        assert!(matches!(
            sturm_count(&p, &fin(1), &fin(5)),
            Err(AlgebraError::EndpointIsRoot(_))
        ));
    }

    #[test]
    fn negative_leading_coefficient_sequences() {
        let p = UniPoly::from_ints(&[-6, 7, 0, -1]);
        assert_eq!(sturm_count(&p, &fin(0), &RealBound::PosInfinity).unwrap(), 2);
        assert_eq!(
            sturm_count(&p, &RealBound::NegInfinity, &fin(0)).unwrap(),
            1
        );
    }

    #[test]
    fn isolation_examples() {
        let p = UniPoly::from_ints(&[6, -7, 0, 1]);
        let ivs = isolate_positive_roots(&p).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].contains(&rat_int(1)) && !ivs[0].contains(&rat_int(2)));
        assert!(ivs[1].contains(&rat_int(2)) && !ivs[1].contains(&rat_int(1)));
        assert!(isolate_positive_roots(&UniPoly::from_ints(&[1, 0, 1]))
            .unwrap()
            .is_empty());
        assert_eq!(
            isolate_positive_roots(&UniPoly::zero()),
            Err(AlgebraError::ZeroPolynomial)
        );
        // midpoint of the first split is an exact root
        let roots = [rat(3, 2), rat(1, 4), rat(7, 1)];
        let ivs = isolate_positive_roots(&UniPoly::from_roots(&roots)).unwrap();
        assert_eq!(ivs.len(), 3);
    }

    #[test]
    fn refinement_examples() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let iv = IsolatingInterval::new(rat_int(1), rat_int(2));
        let r = refine_root(&p, &iv, &rat(1, 1000)).unwrap();
        assert!(r.width() <= rat(1, 1000));
        assert!(&r.lo * &r.lo < rat_int(2) && &r.hi * &r.hi > rat_int(2));
        let r2 = refine_root(&p, &r, &rat(1, 100000)).unwrap();
        assert!(r2.is_subset_of(&r));

        let q = UniPoly::from_ints(&[-1, 1]);
        let r = refine_root(&q, &IsolatingInterval::new(rat_int(0), rat_int(2)), &rat(1, 2))
            .unwrap();
        assert!(r.contains(&rat_int(1)));

        assert!(matches!(
            refine_root(&p, &IsolatingInterval::new(rat_int(2), rat_int(3)), &rat(1, 2)),
            Err(AlgebraError::NoSignChange { .. })
        ));
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(cauchy_root_bound(&UniPoly::from_ints(&[-2, 0, 1])).unwrap(), rat_int(3));
        assert_eq!(cauchy_root_bound(&UniPoly::from_ints(&[-5, 1])).unwrap(), rat_int(6));
        assert_eq!(cauchy_root_bound(&UniPoly::from_ints(&[-8, 0, 2])).unwrap(), rat_int(5));
        assert_eq!(
            cauchy_root_bound(&UniPoly::zero()),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn descartes_bound() {
        assert_eq!(descartes_sign_variations(&UniPoly::from_ints(&[6, -7, 0, 1])), 2);
        assert_eq!(descartes_sign_variations(&UniPoly::from_ints(&[1, 2, 3])), 0);
    }
}
