//! Coefficient rings for truncated series.
//!
//! Two rings are used in practice: exact rationals for concrete branches, and
//! multivariate polynomials over the rationals for parametric families (see
//! [`crate::poly::ParamPoly`]). Zero tests in the parametric ring can only be
//! answered relative to a set of constraints, which is what [`ZeroTest`]
//! abstracts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::ParamPoly;

pub type Rational = BigRational;

/// Commutative ring with exact, syntactic zero test.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient, when `rhs` divides `self` in the ring.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
    /// True for elements of the base field.
    fn is_constant(&self) -> bool {
        true
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

/// A zero test that could not be settled from the current constraints.
///
/// Carries the (normalised) polynomial whose vanishing is in question; the
/// stratifier reacts by splitting on it.
#[derive(Clone, Debug, PartialEq)]
pub struct Undecided(pub ParamPoly);

impl fmt::Display for Undecided {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot decide whether {} vanishes", self.0)
    }
}

/// Decides whether a coefficient is nonzero.
pub trait ZeroTest<R> {
    fn is_nonzero(&self, c: &R) -> Result<bool, Undecided>;
}

/// Syntactic zero test; exact for fields such as the rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl<R: Ring> ZeroTest<R> for Exact {
    fn is_nonzero(&self, c: &R) -> Result<bool, Undecided> {
        Ok(!c.is_zero())
    }
}

/// Parses `"3"`, `"-1/2"`, `"29/18"`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let q = Rational::from_str(s).map_err(|e| format!("invalid rational {s:?}: {e}"))?;
    Ok(q)
}

/// Canonical string form used in every JSON document.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
