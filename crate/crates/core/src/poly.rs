//! Sparse multivariate polynomials over a coefficient ring.
//!
//! Used both for functions and 1-form coefficients in the coordinates
//! `x, y, ...` (coefficients in a [`Ring`]) and, with rational coefficients,
//! as the parameter ring of symbolic families ([`ParamPoly`]).

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{rational_to_string, Rational, Ring};

/// Exponent vector with trailing zeros trimmed, so that equal monomials have
/// equal representations regardless of the number of variables in play.
/// `Vec`'s lexicographic order is the lex monomial order with `x0 > x1 > ...`.
pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut m = long.to_vec();
    for (e, s) in m.iter_mut().zip(short) {
        *e += s;
    }
    m
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut m = a.to_vec();
    for (e, d) in m.iter_mut().zip(b) {
        if *e < *d {
            return None;
        }
        *e -= d;
    }
    Some(trim(m))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<R> {
    terms: BTreeMap<Monomial, R>,
}

/// Polynomials in the parameters of a family, over the rationals.
pub type ParamPoly = Polynomial<Rational>;

impl<R: Ring> Polynomial<R> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    /// The variable `x_i`.
    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Self::monomial(m, R::one())
    }

    pub fn monomial(exponents: Monomial, c: R) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(trim(exponents), c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, R)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(trim(m), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when only the constant monomial occurs.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn constant_term(&self) -> R {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(R::zero)
    }

    pub fn coefficient(&self, m: &[u32]) -> R {
        self.terms.get(&trim(m.to_vec())).cloned().unwrap_or_else(R::zero)
    }

    /// Leading term in lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &R)> {
        self.terms.iter().next_back()
    }

    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Indices of the variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_vars()];
        for m in self.terms.keys() {
            for (i, e) in m.iter().enumerate() {
                if *e > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter_map(|(i, u)| u.then_some(i))
            .collect()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.get(var).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.neg());
        }
        p
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut p = Self::zero();
        for (m, a) in &self.terms {
            p.add_term(m.clone(), a.mul(c));
        }
        p
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut p = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                p.add_term(mono_mul(ma, mb), ca.mul(cb));
            }
        }
        p
    }

    pub fn mul_monomial(&self, m: &[u32], c: &R) -> Self {
        let mut p = Self::zero();
        for (ma, ca) in &self.terms {
            p.add_term(mono_mul(ma, m), ca.mul(c));
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `x_var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[var] -= 1;
            p.add_term(trim(dm), c.mul(&R::from_int(e as i64)));
        }
        p
    }

    /// Drops every monomial whose weighted degree is at least `bound`.
    pub fn truncate_weight(&self, weights: &[usize], bound: usize) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| weighted_degree(m, weights) < bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Minimal weighted degree over the monomials, `None` for zero.
    pub fn min_weight(&self, weights: &[usize]) -> Option<usize> {
        self.terms.keys().map(|m| weighted_degree(m, weights)).min()
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients<S: Ring>(&self, f: impl Fn(&R) -> S) -> Polynomial<S> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Groups terms by the exponent of `x_0`; the remaining monomials are
    /// shifted down one variable. Used by Horner evaluation.
    pub fn split_first(&self) -> BTreeMap<u32, Polynomial<R>> {
        let mut out: BTreeMap<u32, Polynomial<R>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.first().copied().unwrap_or(0);
            let rest = if m.is_empty() { Vec::new() } else { m[1..].to_vec() };
            out.entry(e)
                .or_insert_with(Self::zero)
                .add_term(trim(rest), c.clone());
        }
        out
    }

    /// Substitutes `x_var := value`.
    pub fn substitute(&self, var: usize, value: &Self) -> Self {
        if self.degree_in(var) == 0 {
            return self.clone();
        }
        let mut powers: Vec<Self> = vec![Self::one()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let mut rest = m.clone();
            if var < rest.len() {
                rest[var] = 0;
            }
            let rest = trim(rest);
            out = out.add(&powers[e].mul_monomial(&rest, c));
        }
        out
    }

    /// Formats with the given variable names (`x{i}` for missing ones).
    pub fn display_with(&self, names: &[String]) -> String
    where
        R: CoefficientDisplay,
    {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (negative, body) = c.display_parts();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                if *e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            if factors.is_empty() {
                out.push_str(&body);
            } else {
                if body != "1" {
                    out.push_str(&body);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

pub fn weighted_degree(m: &[u32], weights: &[usize]) -> usize {
    m.iter().zip(weights).map(|(e, w)| *e as usize * w).sum()
}

/// Coefficient rendering for [`Polynomial::display_with`].
pub trait CoefficientDisplay {
    /// Sign and absolute-value rendering; composite coefficients are
    /// parenthesised.
    fn display_parts(&self) -> (bool, String);
}

impl CoefficientDisplay for Rational {
    fn display_parts(&self) -> (bool, String) {
        use num_traits::Signed;
        (self.is_negative(), rational_to_string(&self.abs()))
    }
}

impl CoefficientDisplay for ParamPoly {
    fn display_parts(&self) -> (bool, String) {
        if self.is_constant() {
            return self.constant_term().display_parts();
        }
        (false, format!("({})", self))
    }
}

impl ParamPoly {
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = <Rational as Ring>::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.iter().enumerate() {
                if *e > 0 {
                    let base = point.get(i).cloned().unwrap_or_else(<Rational as Ring>::zero);
                    t *= num_traits::pow(base, *e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact division in lex order; `None` when `d` does not divide `self`.
    pub fn div_exact_poly(&self, d: &ParamPoly) -> Option<ParamPoly> {
        let (dm, dc) = d.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = ParamPoly::zero();
        while let Some((rm, rc)) = r.leading_term() {
            let m = mono_div(rm, &dm)?;
            let c = rc / &dc;
            q.add_term(m.clone(), c.clone());
            r = r.sub(&d.mul_monomial(&m, &c));
        }
        Some(q)
    }

    /// Scales so that the lex-leading coefficient is 1.
    pub fn monic(&self) -> ParamPoly {
        match self.leading_term() {
            Some((_, c)) => {
                let inv = <Rational as Ring>::one() / c;
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }
}

impl Ring for ParamPoly {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn from_int(n: i64) -> Self {
        Polynomial::constant(Rational::from_int(n))
    }
    fn from_rational(q: &Rational) -> Self {
        Polynomial::constant(q.clone())
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Polynomial::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Polynomial::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_constant() {
            return rhs.scale(&self.constant_term());
        }
        if rhs.is_constant() {
            return self.scale(&rhs.constant_term());
        }
        Polynomial::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Polynomial::neg(self)
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if rhs.is_constant() {
            return Some(self.scale(&(<Rational as Ring>::one() / rhs.constant_term())));
        }
        self.div_exact_poly(rhs)
    }
    fn is_constant(&self) -> bool {
        Polynomial::is_constant(self)
    }
}

impl<R: Ring + CoefficientDisplay> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl<R: Ring + CoefficientDisplay> fmt::Debug for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}
