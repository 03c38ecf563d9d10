//! Exact rational scalars.
//!
//! Every probability, coefficient and moment in the crate is a
//! [`Scalar`], an arbitrary-precision rational kept in lowest terms with a
//! positive denominator. Text form is `num/den`, or a bare integer when the
//! denominator is 1.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn uint(v: usize) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn from_u128(v: u128) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Parses `"p/q"`, `"-p/q"` or an integer. Surrounding whitespace is ignored.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let bad = || Error::ParseScalar(text.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(num, den))
}

pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(x: &Scalar, e: usize) -> Scalar {
    num_traits::pow(x.clone(), e)
}

/// Integer power allowing negative exponents.
pub fn powi(x: &Scalar, e: i64) -> Scalar {
    if e >= 0 {
        pow(x, e as usize)
    } else {
        pow(&x.recip(), (-e) as usize)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial2(n: usize) -> Scalar {
    int((n * n.saturating_sub(1) / 2) as i64)
}

pub fn ensure_positive(alpha: &Scalar) -> Result<()> {
    if alpha.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveAlpha(alpha.to_string()))
    }
}

/// The chains are only defined for `alpha >= 1`; smaller values reduce to
/// `1/alpha` by conjugation.
pub fn ensure_chain_alpha(alpha: &Scalar) -> Result<()> {
    if *alpha >= Scalar::one() {
        Ok(())
    } else {
        Err(Error::AlphaBelowOne(alpha.to_string()))
    }
}

/// Outcome of comparing two exactly computed quantities over a family of
/// indices. `max_abs` is the largest absolute difference seen; `witness`
/// names the first index at which a nonzero difference occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub max_abs: Scalar,
    pub witness: Option<String>,
    pub checked: usize,
}

impl Residual {
    pub fn new() -> Self {
        Residual {
            max_abs: Scalar::zero(),
            witness: None,
            checked: 0,
        }
    }

    pub fn record(&mut self, lhs: &Scalar, rhs: &Scalar, at: impl FnOnce() -> String) {
        self.checked += 1;
        let d = (lhs - rhs).abs();
        if !d.is_zero() && self.witness.is_none() {
            self.witness = Some(at());
        }
        if d > self.max_abs {
            self.max_abs = d;
        }
    }

    pub fn merge(&mut self, other: Residual) {
        self.checked += other.checked;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        if other.max_abs > self.max_abs {
            self.max_abs = other.max_abs;
        }
    }

    pub fn is_exact(&self) -> bool {
        self.max_abs.is_zero()
    }
}

impl Default for Residual {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max residual {} over {} comparisons",
            self.max_abs, self.checked
        )?;
        if let Some(w) = &self.witness {
            write!(f, " (first mismatch at {w})")?;
        }
        Ok(())
    }
}
