use num_traits::{One, Signed};

use super::bivariate::{positive_root_range, vanishes_at_root, BivariateInstance};
use super::oracle::{contract, dyadic_region, subdivision_oracle, Box2};
use super::CounterError;
use crate::algebra::{
    isolate_positive_roots, refine_root, Interval, IsolatingInterval, Rat, RealBound,
    SturmSequence, UniPoly,
};

/// A certified positive solution `(u, v)` of a bivariate system together
/// with the data needed to shrink its enclosure on demand.
#[derive(Debug, Clone)]
pub enum Locator {
    /// `v` is the root of `r` in `iv`; `u = -b(v)/a(v)` with `a(v) != 0`.
    Resultant {
        r: UniPoly,
        iv: IsolatingInterval,
        a: UniPoly,
        b: UniPoly,
    },
    /// The unique root of the instance inside `bx`.
    Krawczyk { inst: BivariateInstance, bx: Box2 },
}

impl Locator {
    /// Current enclosure `[U, V]`.
    pub fn enclosure(&self) -> Result<Box2, CounterError> {
        match self {
            Locator::Resultant { iv, a, b, .. } => {
                let v = iv.to_interval();
                let u = b.eval_interval(&v).neg().div(&a.eval_interval(&v))?;
                Ok([u, v])
            }
            Locator::Krawczyk { bx, .. } => Ok(bx.clone()),
        }
    }

    /// Shrinks the enclosure so that its widest side is at most `width`.
    pub fn refine(&mut self, width: &Rat) -> Result<(), CounterError> {
        match self {
            Locator::Resultant { r, iv, .. } => {
                *iv = refine_root(r, iv, width)?;
            }
            Locator::Krawczyk { inst, bx } => {
                *bx = contract(inst, bx, width)?;
            }
        }
        Ok(())
    }
}

/// Enclosure width of `u = -b/a` over `iv`, or `None` if `a` may vanish.
fn quotient(a: &UniPoly, b: &UniPoly, iv: &IsolatingInterval) -> Option<Interval> {
    let v = iv.to_interval();
    let av = a.eval_interval(&v);
    if av.contains_zero() {
        return None;
    }
    b.eval_interval(&v).neg().div(&av).ok()
}

/// An isolating interval of the positive root in `iv` with positive width,
/// a positive lower end and endpoints that are not roots of the square-free
/// `r`.
fn open_isolating(r: &UniPoly, iv: &IsolatingInterval) -> Result<IsolatingInterval, CounterError> {
    let mut iv = iv.clone();
    while !iv.is_exact() && !iv.lo.is_positive() {
        let w = iv.width() / Rat::from_integer(4.into());
        iv = refine_root(r, &iv, &w)?;
    }
    if !iv.is_exact() {
        return Ok(iv);
    }
    let seq = SturmSequence::new(r)?;
    let mut eps = Rat::one();
    loop {
        let lo = &iv.lo - &eps;
        let hi = &iv.hi + &eps;
        if lo.is_positive() && seq.sign_at(&lo) != 0 && seq.sign_at(&hi) != 0 {
            let n = seq.count(&RealBound::Finite(lo.clone()), &RealBound::Finite(hi.clone()))?;
            if n == 1 {
                return Ok(IsolatingInterval::new(lo, hi));
            }
        }
        eps /= Rat::from_integer(2.into());
    }
}

/// Certified positive solutions of `f = g = 0` on the open positive
/// quadrant.
///
/// The `v` coordinates are the positive roots of `Res_u(f, g)`. Where the
/// degree-one subresultant determines `u` as a rational function of `v` the
/// solution is read off it; elsewhere the strip above the root is handed to
/// [`subdivision_oracle`].
pub fn positive_solutions(
    inst: &BivariateInstance,
    max_depth: u32,
) -> Result<Vec<Locator>, CounterError> {
    let f_u = BivariateInstance::coeffs_in(&inst.f, 0);
    let g_u = BivariateInstance::coeffs_in(&inst.g, 0);
    if f_u.len() == 1 && g_u.len() == 1 {
        // Neither equation involves u: solutions form vertical lines.
        let h = f_u[0].gcd(&g_u[0]);
        return if positive_root_range(&h)?.is_some() {
            Err(CounterError::PositiveDimensional)
        } else {
            Ok(Vec::new())
        };
    }
    let prs = inst.prs(0);
    if prs.resultant.is_zero() {
        return Err(CounterError::PositiveDimensional);
    }
    let (r, _) = prs.resultant.squarefree()?.strip_zero_roots();
    let roots = isolate_positive_roots(&r)?;
    if roots.is_empty() {
        return Ok(Vec::new());
    }
    let lead = if f_u.len() >= g_u.len() {
        f_u.last()
    } else {
        g_u.last()
    }
    .expect("nonempty")
    .clone();
    let linear = prs.member_of_degree(1).map(|m| (m[1].clone(), m[0].clone()));

    let mut out = Vec::new();
    let mut u_range: Option<Option<Interval>> = None;
    for iv in roots {
        let generic = match &linear {
            Some((a, _)) => {
                !vanishes_at_root(&lead, &r, &iv.lo, &iv.hi)?
                    && !vanishes_at_root(a, &r, &iv.lo, &iv.hi)?
            }
            None => false,
        };
        if generic {
            let (a, b) = linear.clone().expect("checked");
            if vanishes_at_root(&b, &r, &iv.lo, &iv.hi)? {
                // u = 0 is not positive.
                continue;
            }
            let mut iv = iv;
            let u = loop {
                if let Some(u) = quotient(&a, &b, &iv) {
                    if u.is_positive() || u.is_negative() {
                        break u;
                    }
                }
                let w = iv.width() / Rat::from_integer(16.into());
                iv = refine_root(&r, &iv, &w)?;
            };
            if u.is_negative() {
                continue;
            }
            let bx = [u, iv.to_interval()];
            if !Interval::eval_poly(&inst.f, &bx).contains_zero()
                || !Interval::eval_poly(&inst.g, &bx).contains_zero()
            {
                return Err(CounterError::CertificationFailure(
                    "recovered solution does not satisfy the system".into(),
                ));
            }
            out.push(Locator::Resultant { r: r.clone(), iv, a, b });
        } else {
            let range = match &u_range {
                Some(range) => range.clone(),
                None => {
                    let r_v = inst.resultant(1);
                    if r_v.is_zero() {
                        return Err(CounterError::PositiveDimensional);
                    }
                    let range = positive_root_range(&r_v)?.map(|(lo, hi)| dyadic_region(&lo, &hi));
                    u_range = Some(range.clone());
                    range
                }
            };
            let Some(u_iv) = range else {
                // No positive u anywhere.
                return Ok(Vec::new());
            };
            let strip = [u_iv, open_isolating(&r, &iv)?.to_interval()];
            for bx in subdivision_oracle(inst, &strip, max_depth)? {
                out.push(Locator::Krawczyk { inst: inst.clone(), bx });
            }
        }
    }
    Ok(out)
}

/// Positive solutions found by subdivision alone on a box bracketing every
/// positive root of both resultants. Independent of the subresultant
/// recovery in [`positive_solutions`].
pub fn oracle_solutions(
    inst: &BivariateInstance,
    max_depth: u32,
) -> Result<Vec<Box2>, CounterError> {
    let mut region = Vec::with_capacity(2);
    for idx in [1, 0] {
        let r = inst.resultant(idx);
        if r.is_zero() {
            return Err(CounterError::PositiveDimensional);
        }
        match positive_root_range(&r)? {
            Some((lo, hi)) => region.push(dyadic_region(&lo, &hi)),
            None => return Ok(Vec::new()),
        }
    }
    subdivision_oracle(inst, &[region[0].clone(), region[1].clone()], max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int, rat_to_f64};
    use crate::model::parse_polynomial;

    fn inst(f: &str, g: &str) -> BivariateInstance {
        let vars = vec!["u".to_string(), "v".to_string()];
        BivariateInstance::new(
            parse_polynomial(f, &vars).unwrap(),
            parse_polynomial(g, &vars).unwrap(),
        )
        .unwrap()
    }

    fn count(f: &str, g: &str) -> (usize, usize) {
        let i = inst(f, g);
        (
            positive_solutions(&i, 64).unwrap().len(),
            oracle_solutions(&i, 64).unwrap().len(),
        )
    }

    #[test]
    fn symmetric_pair() {
        assert_eq!(count("u + v - 3", "u*v - 2"), (2, 2));
    }

    #[test]
    fn no_positive_solutions() {
        assert_eq!(count("u - v", "v^2 + 1"), (0, 0));
        assert_eq!(count("u + v + 1", "u - v"), (0, 0));
    }

    #[test]
    fn negative_u_filtered() {
        // v = 1 with u = -1 and v = 4 with u = 2.
        assert_eq!(count("u^2 - v", "v - u - 2"), (1, 1));
    }

    #[test]
    fn shared_v_coordinate_uses_oracle() {
        // Two solutions above v = 1: u = 1 and u = 2.
        let i = inst("(u - 1)*(u - 2)", "v - 1");
        let sols = positive_solutions(&i, 64).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.iter().all(|s| matches!(s, Locator::Krawczyk { .. })));
    }

    #[test]
    fn grid_of_roots() {
        assert_eq!(
            count("(u - 1)*(u - 3)*(u + 2)", "(v - 2)*(v - 5)*(u*v - 7)"),
            (6, 6)
        );
    }

    #[test]
    fn positive_dimensional_detected() {
        let i = inst("(u - v)*(u + 1)", "(u - v)*(v + 2)");
        assert!(matches!(
            positive_solutions(&i, 64),
            Err(CounterError::PositiveDimensional)
        ));
        let i = inst("v - 1", "v^2 - 1");
        assert!(matches!(
            positive_solutions(&i, 64),
            Err(CounterError::PositiveDimensional)
        ));
    }

    #[test]
    fn refinement_shrinks_enclosure() {
        let i = inst("u^2 - 2", "v - u");
        let mut sols = positive_solutions(&i, 64).unwrap();
        let w = rat(1, 1_000_000_000_000);
        sols[0].refine(&w).unwrap();
        let e = sols[0].enclosure().unwrap();
        assert!(e[0].width() <= rat_int(1) && e[1].width() <= w);
        assert!((rat_to_f64(&e[1].midpoint()) - 2f64.sqrt()).abs() < 1e-12);
    }
}
