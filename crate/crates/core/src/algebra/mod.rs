//! Exact polynomial algebra over the rationals.
//!
//! Everything in the symbolic path works on [`Rat`] (arbitrary precision,
//! always in lowest terms). [`MultiPoly`] is the sparse multivariate type used
//! for models and reduced systems; [`UniPoly`] is the dense univariate type
//! used for eliminants, Sturm sequences and root isolation.

mod gcd;
mod interval;
mod multipoly;
mod resultant;
mod roots;
mod unipoly;

pub use interval::Interval;
pub use multipoly::{Monomial, MultiPoly};
pub use resultant::{
    pseudo_remainder, rational_determinant, subresultant_prs, sylvester_resultant, CoeffRing,
    Prs,
};
pub use roots::{
    cauchy_root_bound, descartes_sign_variations, isolate_positive_roots, refine_root,
    sturm_count, IsolatingInterval, RealBound, SturmSequence,
};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number. `num_rational` keeps values reduced with a positive
/// denominator, and zero is always `0/1`.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is constant in `{0}`")]
    ConstantIn(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("interval endpoint {0} is a root")]
    EndpointIsRoot(String),
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: String, hi: String },
    #[error("invalid rational literal `{0}`")]
    BadLiteral(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `12`, `-3/4`, `0.02` or `1.5e-3` into an exact rational.
pub fn parse_rat(text: &str) -> Result<Rat, AlgebraError> {
    let bad = || AlgebraError::BadLiteral(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rat::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rat::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Formats a rational as `n` or `n/d`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64`, only for reporting and for building approximate
/// preconditioners; never fed back into exact decisions.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = n - d - 60;
    let scaled = if shift > 0 {
        Rat::new(r.numer().clone(), r.denom() << shift as usize)
    } else {
        Rat::new(r.numer() << (-shift) as usize, r.denom().clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Exact conversion of a finite `f64`.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

pub(crate) fn sign_of(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Rounds `x` down to a multiple of `2^-bits`.
pub(crate) fn floor_dyadic(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits as usize;
    let scaled = x * Rat::from_integer(scale.clone());
    Rat::new(scaled.floor().to_integer(), scale)
}

/// Rounds `x` up to a multiple of `2^-bits`.
pub(crate) fn ceil_dyadic(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits as usize;
    let scaled = x * Rat::from_integer(scale.clone());
    Rat::new(scaled.ceil().to_integer(), scale)
}
