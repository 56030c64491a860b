//! Truncated power series in one local parameter `t`.
//!
//! A [`TruncatedSeries`] stores every coefficient of `t^0 .. t^(T-1)`; terms of
//! degree `T` and above are unknown. Orders that cannot be certified below
//! the precision are reported as [`Order::AbovePrecision`].

use std::fmt;

use thiserror::Error;

use crate::poly::Polynomial;
use crate::ring::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Exact(usize),
    /// Every stored coefficient vanishes; the true order is at least this.
    AbovePrecision(usize),
}

impl Order {
    pub fn exact(self) -> Option<usize> {
        match self {
            Order::Exact(k) => Some(k),
            Order::AbovePrecision(_) => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Exact(k) => write!(f, "{k}"),
            Order::AbovePrecision(p) => write!(f, ">= {p}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("polynomial has {needed} variables but only {given} series were supplied")]
    MissingArguments { needed: usize, given: usize },
    #[error("precision {available} is too small, {needed} is required")]
    PrecisionUnderflow { needed: usize, available: usize },
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> TruncatedSeries<R> {
    pub fn zero(precision: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![R::zero(); precision],
        }
    }

    pub fn one(precision: usize) -> Self {
        Self::monomial(0, R::one(), precision)
    }

    /// `c * t^k`, truncated.
    pub fn monomial(k: usize, c: R, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if k < precision {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds `sum c_k t^k` from `(k, c_k)` pairs, dropping terms at or above
    /// the precision.
    pub fn from_terms<'a, I>(terms: I, precision: usize) -> Self
    where
        I: IntoIterator<Item = (usize, &'a R)>,
        R: 'a,
    {
        let mut s = Self::zero(precision);
        for (k, c) in terms {
            if k < precision {
                s.coeffs[k] = s.coeffs[k].add(c);
            }
        }
        s
    }

    pub fn from_coefficients(coeffs: Vec<R>) -> Self {
        TruncatedSeries { coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coefficients(&self) -> &[R] {
        &self.coeffs
    }

    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Order::Exact(k),
            None => Order::AbovePrecision(self.precision()),
        }
    }

    /// Returns `(order, leading coefficient)` when the order is certain.
    pub fn leading(&self) -> Option<(usize, &R)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let p = precision.min(self.precision());
        TruncatedSeries {
            coeffs: self.coeffs[..p].to_vec(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        TruncatedSeries {
            coeffs: (0..p).map(|k| self.coeffs[k].add(&rhs.coeffs[k])).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        TruncatedSeries {
            coeffs: (0..p).map(|k| self.coeffs[k].sub(&rhs.coeffs[k])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| if a.is_zero() { R::zero() } else { a.mul(c) })
                .collect(),
        }
    }

    /// `self - c * rhs`, skipping zero coefficients of `rhs`.
    pub fn sub_scaled(&self, c: &R, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        let mut out = self.truncate(p);
        for k in 0..p {
            if !rhs.coeffs[k].is_zero() {
                out.coeffs[k] = out.coeffs[k].sub(&rhs.coeffs[k].mul(c));
            }
        }
        out
    }

    /// Product; the result precision is the smaller operand precision.
    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        let mut out = vec![R::zero(); p];
        let lo_a = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(p);
        let lo_b = rhs.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(p);
        for i in lo_a..p {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in lo_b..(p - i) {
                let b = &rhs.coeffs[j];
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.precision());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let p = self.precision();
        let mut out = vec![R::zero(); p];
        if k < p {
            out[k..].clone_from_slice(&self.coeffs[..p - k]);
        }
        TruncatedSeries { coeffs: out }
    }

    /// `d/dt`; the precision drops by one.
    pub fn derivative(&self) -> Self {
        TruncatedSeries {
            coeffs: (1..self.precision())
                .map(|k| self.coeffs[k].mul(&R::from_int(k as i64)))
                .collect(),
        }
    }

    /// `t * d/dt`, which keeps the precision.
    pub fn euler_derivative(&self) -> Self {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.mul(&R::from_int(k as i64)))
                .collect(),
        }
    }
}

/// Substitutes series for the variables of `p` (Horner scheme in each
/// variable). The result has the smallest precision among the arguments.
pub fn eval_poly<R: Ring>(
    p: &Polynomial<R>,
    args: &[TruncatedSeries<R>],
) -> Result<TruncatedSeries<R>, SeriesError> {
    if p.num_vars() > args.len() {
        return Err(SeriesError::MissingArguments {
            needed: p.num_vars(),
            given: args.len(),
        });
    }
    let precision = args.iter().map(|a| a.precision()).min().unwrap_or(1);
    Ok(horner(p, args, precision))
}

fn horner<R: Ring>(p: &Polynomial<R>, args: &[TruncatedSeries<R>], precision: usize) -> TruncatedSeries<R> {
    if p.is_constant() {
        return TruncatedSeries::monomial(0, p.constant_term(), precision);
    }
    let groups = p.split_first();
    let x = &args[0];
    let mut acc: Option<TruncatedSeries<R>> = None;
    let mut last_exp = 0u32;
    for (e, rest) in groups.iter().rev() {
        let inner = horner(rest, &args[1..], precision);
        acc = Some(match acc {
            None => inner,
            Some(a) => a.mul(&x.pow(last_exp - e)).add(&inner),
        });
        last_exp = *e;
    }
    let acc = acc.unwrap_or_else(|| TruncatedSeries::zero(precision));
    acc.mul(&x.pow(last_exp))
}

impl<R: Ring + fmt::Debug> fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c:?}*t^{k}"))
            .collect();
        write!(f, "[{}] + O(t^{})", terms.join(" + "), self.precision())
    }
}
