//! Certified subdivision solver for two polynomials in two variables.
//!
//! Boxes are discarded when an interval enclosure of `f` or `g` excludes
//! zero, and a root is accepted once the Krawczyk operator maps an inflated
//! box strictly into its own interior. Leaves are half-open, `[lo, hi)` on
//! each axis, so every root has exactly one owner.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::bivariate::BivariateInstance;
use super::CounterError;
use crate::algebra::{
    rat_from_f64, rat_to_f64, Interval, Rat, RealBound, SturmSequence, UniPoly,
};

pub type Box2 = [Interval; 2];

const CONTRACTION_STEPS: usize = 200;

fn max_width(bx: &Box2) -> Rat {
    let (a, b) = (bx[0].width(), bx[1].width());
    if a > b {
        a
    } else {
        b
    }
}

/// Dyadic precision for rounding enclosures of `bx`: about 48 bits below
/// its width.
pub(crate) fn precision_bits(bx: &Box2) -> u32 {
    let w = rat_to_f64(&max_width(bx));
    if w <= 0.0 || !w.is_finite() {
        return 256;
    }
    (48.0 - w.log2()).ceil().clamp(48.0, 4096.0) as u32
}

fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Largest power of two `<= x`, for `x > 0`.
pub(crate) fn pow2_floor(x: &Rat) -> Rat {
    let mut e = rat_to_f64(x).log2().floor() as i64;
    while &pow2(e) > x {
        e -= 1;
    }
    while &pow2(e + 1) <= x {
        e += 1;
    }
    pow2(e)
}

/// Smallest power of two `>= x`, for `x > 0`.
pub(crate) fn pow2_ceil(x: &Rat) -> Rat {
    let f = pow2_floor(x);
    if &f == x {
        f
    } else {
        f * Rat::from_integer(2.into())
    }
}

fn split_point(iv: &Interval) -> Rat {
    let four = Rat::from_integer(4.into());
    if iv.lo.is_positive() && iv.hi >= &iv.lo * &four {
        let g = ((rat_to_f64(&iv.lo).log2() + rat_to_f64(&iv.hi).log2()) / 2.0).round();
        let m = pow2(g as i64);
        if iv.lo < m && m < iv.hi {
            return m;
        }
    }
    iv.midpoint()
}

fn center(bx: &Box2) -> [Rat; 2] {
    [bx[0].midpoint(), bx[1].midpoint()]
}

/// Mean-value form `p(c) + grad p(X) . (X - c)`.
fn centered(p0: &Rat, grad: [&Interval; 2], bx: &Box2, c: &[Rat; 2]) -> Interval {
    let mut acc = Interval::point(p0.clone());
    for i in 0..2 {
        let d = bx[i].add_scalar(&-&c[i]);
        acc = acc.add(&grad[i].mul(&d));
    }
    acc
}

/// `true` if `f` or `g` provably has no zero in `bx`.
pub(crate) fn excluded(inst: &BivariateInstance, bx: &Box2) -> bool {
    let polys = [(&inst.f, 0usize), (&inst.g, 2usize)];
    if polys
        .iter()
        .any(|(p, _)| !Interval::eval_poly(p, bx).contains_zero())
    {
        return true;
    }
    let c = center(bx);
    polys.iter().any(|(p, j)| {
        let grad = [
            Interval::eval_poly(&inst.jacobian[*j], bx),
            Interval::eval_poly(&inst.jacobian[*j + 1], bx),
        ];
        let p0 = BivariateInstance::eval_point(p, &c[0], &c[1]);
        !centered(&p0, [&grad[0], &grad[1]], bx, &c).contains_zero()
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum KrawczykOutcome {
    /// No root in the box.
    Empty,
    /// Exactly one root in the box, and it lies in the returned sub-box.
    Unique(Box2),
    /// Inconclusive; any root of the box lies in the returned sub-box.
    Unknown(Box2),
}

/// One application of the Krawczyk operator with an approximate inverse of
/// the Jacobian at the box centre as preconditioner.
pub(crate) fn krawczyk(inst: &BivariateInstance, x: &Box2) -> KrawczykOutcome {
    let c = center(x);
    let jc: Vec<f64> = inst
        .jacobian
        .iter()
        .map(|p| rat_to_f64(&BivariateInstance::eval_point(p, &c[0], &c[1])))
        .collect();
    let det = jc[0] * jc[3] - jc[1] * jc[2];
    let inv = [jc[3] / det, -jc[1] / det, -jc[2] / det, jc[0] / det];
    if det == 0.0 || !det.is_finite() || inv.iter().any(|v| !v.is_finite()) {
        return KrawczykOutcome::Unknown(x.clone());
    }
    let y: Vec<Rat> = inv.iter().map(|&v| rat_from_f64(v)).collect();
    let fc = [
        BivariateInstance::eval_point(&inst.f, &c[0], &c[1]),
        BivariateInstance::eval_point(&inst.g, &c[0], &c[1]),
    ];
    let jx: Vec<Interval> = inst.jacobian.iter().map(|p| Interval::eval_poly(p, x)).collect();
    let d = [x[0].add_scalar(&-&c[0]), x[1].add_scalar(&-&c[1])];
    let bits = precision_bits(x);

    let mut k: Vec<Interval> = Vec::with_capacity(2);
    for i in 0..2 {
        let (y0, y1) = (&y[2 * i], &y[2 * i + 1]);
        let newton = &c[i] - (y0 * &fc[0] + y1 * &fc[1]);
        let mut acc = Interval::point(newton);
        for j in 0..2 {
            let delta = if i == j { Rat::one() } else { Rat::zero() };
            let yj = jx[j].scale(y0).add(&jx[2 + j].scale(y1));
            let m = Interval::point(delta).sub(&yj);
            acc = acc.add(&m.mul(&d[j]));
        }
        k.push(acc.round_out(bits));
    }
    let k: Box2 = [k[0].clone(), k[1].clone()];
    let (Some(a), Some(b)) = (k[0].intersect(&x[0]), k[1].intersect(&x[1])) else {
        return KrawczykOutcome::Empty;
    };
    if k[0].is_strict_subset_of(&x[0]) && k[1].is_strict_subset_of(&x[1]) {
        KrawczykOutcome::Unique(k)
    } else {
        KrawczykOutcome::Unknown([a, b])
    }
}

/// Number of distinct roots of the square-free `h` in the closed interval
/// `[a, b]`.
fn count_closed(h: &UniPoly, a: &Rat, b: &Rat) -> Result<usize, CounterError> {
    let seq = SturmSequence::new(h)?;
    let at_a = usize::from(seq.sign_at(a) == 0);
    if a == b {
        return Ok(at_a);
    }
    let va = seq.variations_at(&RealBound::Finite(a.clone()));
    let vb = seq.variations_at(&RealBound::Finite(b.clone()));
    Ok(va.saturating_sub(vb) + at_a)
}

/// Square-free gcd of `f` and `g` restricted to the line where variable
/// `axis` equals `s`, as a polynomial in the other variable.
fn restriction_gcd(
    inst: &BivariateInstance,
    axis: usize,
    s: &Rat,
) -> Result<UniPoly, CounterError> {
    let point = BTreeMap::from([(inst.vars()[axis].clone(), s.clone())]);
    let f = inst.f.partial_evaluate(&point).to_unipoly(0)?;
    let g = inst.g.partial_evaluate(&point).to_unipoly(0)?;
    if f.is_zero() && g.is_zero() {
        return Err(CounterError::PositiveDimensional);
    }
    let h = if f.is_zero() {
        g
    } else if g.is_zero() {
        f
    } else {
        f.gcd(&g)
    };
    Ok(h.squarefree()?)
}

fn axis_membership(leaf: &Interval, k: &Interval) -> Option<bool> {
    if k.lo >= leaf.lo && k.hi < leaf.hi {
        Some(true)
    } else if k.hi < leaf.lo || k.lo >= leaf.hi {
        Some(false)
    } else {
        None
    }
}

/// Decides whether the unique root known to lie in `k` belongs to the
/// half-open leaf `leaf`. `k` must be contained in a box where the root is
/// unique.
pub(crate) fn owns(
    inst: &BivariateInstance,
    leaf: &Box2,
    mut k: Box2,
) -> Result<bool, CounterError> {
    for _ in 0..CONTRACTION_STEPS {
        let m = [axis_membership(&leaf[0], &k[0]), axis_membership(&leaf[1], &k[1])];
        if m.contains(&Some(false)) {
            return Ok(false);
        }
        if m == [Some(true), Some(true)] {
            return Ok(true);
        }
        for axis in (0..2).filter(|&a| m[a].is_none()) {
            for s in [&leaf[axis].lo, &leaf[axis].hi] {
                if !k[axis].contains(s) {
                    continue;
                }
                let other = 1 - axis;
                let h = restriction_gcd(inst, axis, s)?;
                if h.degree() == Some(0) || count_closed(&h, &k[other].lo, &k[other].hi)? == 0 {
                    continue;
                }
                // The root has coordinate exactly `s` on this axis.
                if s == &leaf[axis].hi {
                    return Ok(false);
                }
                let lo = if k[other].lo > leaf[other].lo { &k[other].lo } else { &leaf[other].lo };
                let hi = if k[other].hi < leaf[other].hi { &k[other].hi } else { &leaf[other].hi };
                if lo > hi {
                    return Ok(false);
                }
                let inside = count_closed(&h, lo, hi)?;
                let on_top = usize::from(hi == &leaf[other].hi && h.eval(hi).is_zero());
                return Ok(inside > on_top);
            }
        }
        k = match krawczyk(inst, &k) {
            KrawczykOutcome::Empty => {
                return Err(CounterError::CertificationFailure(
                    "Krawczyk contraction lost a certified root".into(),
                ))
            }
            KrawczykOutcome::Unique(next) => next,
            KrawczykOutcome::Unknown(next) => next,
        };
    }
    Err(CounterError::CertificationFailure(
        "could not decide which box owns a root".into(),
    ))
}

fn inflate(bx: &Box2) -> Box2 {
    let four = Rat::from_integer(4.into());
    let grow = |iv: &Interval| {
        let e = iv.width() / &four;
        Interval::new(&iv.lo - &e, &iv.hi + &e)
    };
    [grow(&bx[0]), grow(&bx[1])]
}

/// All common roots of `f` and `g` in the half-open box `region`, each
/// returned as a box in which it is the unique root. `region` should have
/// dyadic endpoints to keep the arithmetic small.
///
/// Fails with [`CounterError::Indeterminate`] when a box still cannot be
/// decided after `max_depth` bisections of each axis.
pub fn subdivision_oracle(
    inst: &BivariateInstance,
    region: &Box2,
    max_depth: u32,
) -> Result<Vec<Box2>, CounterError> {
    let mut stack = vec![(region.clone(), 0u32)];
    let mut roots = Vec::new();
    while let Some((bx, depth)) = stack.pop() {
        if excluded(inst, &bx) {
            continue;
        }
        match krawczyk(inst, &inflate(&bx)) {
            KrawczykOutcome::Empty => continue,
            KrawczykOutcome::Unique(k) => {
                if owns(inst, &bx, k.clone())? {
                    roots.push(k);
                }
                continue;
            }
            KrawczykOutcome::Unknown(_) => {}
        }
        if depth >= max_depth {
            return Err(CounterError::Indeterminate { depth });
        }
        let su = split_point(&bx[0]);
        let sv = split_point(&bx[1]);
        for (u_lo, u_hi) in [(&bx[0].lo, &su), (&su, &bx[0].hi)] {
            for (v_lo, v_hi) in [(&bx[1].lo, &sv), (&sv, &bx[1].hi)] {
                stack.push((
                    [
                        Interval::new(u_lo.clone(), u_hi.clone()),
                        Interval::new(v_lo.clone(), v_hi.clone()),
                    ],
                    depth + 1,
                ));
            }
        }
    }
    roots.sort_by(|a, b| a[1].lo.cmp(&b[1].lo).then(a[0].lo.cmp(&b[0].lo)));
    Ok(roots)
}

/// Shrinks a box holding a unique root until both sides are at most
/// `width` wide.
pub(crate) fn contract(
    inst: &BivariateInstance,
    bx: &Box2,
    width: &Rat,
) -> Result<Box2, CounterError> {
    let mut k = bx.clone();
    for _ in 0..CONTRACTION_STEPS {
        if &max_width(&k) <= width {
            return Ok(k);
        }
        let before = max_width(&k);
        k = match krawczyk(inst, &k) {
            KrawczykOutcome::Empty => {
                return Err(CounterError::CertificationFailure(
                    "Krawczyk contraction lost a certified root".into(),
                ))
            }
            KrawczykOutcome::Unique(next) | KrawczykOutcome::Unknown(next) => next,
        };
        if max_width(&k) >= before {
            // No progress: halve the box and keep the half that still
            // contains the root.
            let axis = usize::from(k[1].width() > k[0].width());
            let m = k[axis].midpoint();
            let halves = [
                Interval::new(k[axis].lo.clone(), m.clone()),
                Interval::new(m, k[axis].hi.clone()),
            ];
            let mut next = None;
            for half in halves {
                let mut cand = k.clone();
                cand[axis] = half;
                if !excluded(inst, &cand) && krawczyk(inst, &cand) != KrawczykOutcome::Empty {
                    next = Some(cand);
                    break;
                }
            }
            k = next.ok_or_else(|| {
                CounterError::CertificationFailure("root escaped during contraction".into())
            })?;
        }
    }
    Err(CounterError::CertificationFailure(
        "Krawczyk contraction did not converge".into(),
    ))
}

/// Dyadic box `[lo/2, 2 hi]` rounded outward to powers of two.
pub(crate) fn dyadic_region(lo: &Rat, hi: &Rat) -> Interval {
    let two = Rat::from_integer(2.into());
    Interval::new(pow2_floor(&(lo / &two)), pow2_ceil(&(hi * &two)))
}
