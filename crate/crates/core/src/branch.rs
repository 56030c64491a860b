//! Plane branches given by a Puiseux parametrization `(t^n, y(t))`.

use num_integer::Integer;
use thiserror::Error;

use crate::poly::Polynomial;
use crate::ring::{Rational, Ring};
use crate::semigroup::{small_representation, CharacteristicSequence, NumericalSemigroup, SemigroupError};
use crate::series::{eval_poly, Order, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BranchError {
    #[error("the exponent n of x = t^n must be positive")]
    ZeroMultiplicity,
    #[error("ord y = {ord} is below n = {n}")]
    NotPuiseuxForm { n: usize, ord: usize },
    #[error("parametrization is not primitive: gcd of n and the exponents of y is {gcd}")]
    NonPrimitive { gcd: usize },
    #[error("only two coordinates are supported here, got {0}")]
    NotPlane(usize),
    #[error("standard basis element {index} has an unexpected term at t^{exponent}")]
    UnexpectedValue { index: usize, exponent: usize },
    #[error("precision {available} too small, at least {needed} is required")]
    Precision { needed: usize, available: usize },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// `(t^n, y(t), z_1(t), ...)` with polynomial coordinates in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxParametrization<R> {
    n: usize,
    y: Vec<(usize, R)>,
    extra: Vec<Vec<(usize, R)>>,
}

fn normalize_terms<R: Ring>(terms: Vec<(usize, R)>) -> Vec<(usize, R)> {
    let mut terms = terms;
    terms.sort_by_key(|(k, _)| *k);
    let mut out: Vec<(usize, R)> = Vec::with_capacity(terms.len());
    for (k, c) in terms {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc = lc.add(&c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl<R: Ring> PuiseuxParametrization<R> {
    pub fn new(n: usize, y: Vec<(usize, R)>) -> Result<Self, BranchError> {
        Self::with_extra(n, y, Vec::new())
    }

    pub fn with_extra(
        n: usize,
        y: Vec<(usize, R)>,
        extra: Vec<Vec<(usize, R)>>,
    ) -> Result<Self, BranchError> {
        if n == 0 {
            return Err(BranchError::ZeroMultiplicity);
        }
        let y = normalize_terms(y);
        if n > 1 {
            if let Some((ord, _)) = y.first() {
                if *ord < n {
                    return Err(BranchError::NotPuiseuxForm { n, ord: *ord });
                }
            }
        }
        let extra = extra.into_iter().map(normalize_terms).collect();
        Ok(PuiseuxParametrization { n, y, extra })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nonzero terms of `y(t)`, by increasing exponent.
    pub fn y_terms(&self) -> &[(usize, R)] {
        &self.y
    }

    pub fn extra(&self) -> &[Vec<(usize, R)>] {
        &self.extra
    }

    pub fn num_coordinates(&self) -> usize {
        2 + self.extra.len()
    }

    /// Coordinate series `x, y, z_1, ...` to the given precision.
    pub fn coordinates(&self, precision: usize) -> Vec<TruncatedSeries<R>> {
        let mut out = vec![TruncatedSeries::monomial(self.n, R::one(), precision)];
        out.push(TruncatedSeries::from_terms(
            self.y.iter().map(|(k, c)| (*k, c)),
            precision,
        ));
        for z in &self.extra {
            out.push(TruncatedSeries::from_terms(
                z.iter().map(|(k, c)| (*k, c)),
                precision,
            ));
        }
        out
    }

    /// Order of `y(t)`, or `None` when `y = 0`.
    pub fn y_order(&self) -> Option<usize> {
        self.y.first().map(|(k, _)| *k)
    }

    /// Weights `(ord x, ord y)` of the monomials `x^a y^b`.
    pub fn weights(&self) -> [usize; 2] {
        [self.n, self.y_order().unwrap_or(usize::MAX / 4)]
    }

    fn require_plane(&self) -> Result<(), BranchError> {
        if self.extra.is_empty() {
            Ok(())
        } else {
            Err(BranchError::NotPlane(self.num_coordinates()))
        }
    }

    /// `beta_i = min{j : a_j != 0, e_{i-1} does not divide j}`.
    pub fn characteristic_sequence(&self) -> Result<CharacteristicSequence, BranchError> {
        self.require_plane()?;
        let mut beta = vec![self.n];
        let mut e = self.n;
        for (j, _) in &self.y {
            if e == 1 {
                break;
            }
            if j % e != 0 {
                beta.push(*j);
                e = e.gcd(j);
            }
        }
        if e != 1 {
            return Err(BranchError::NonPrimitive { gcd: e });
        }
        Ok(CharacteristicSequence::new(beta)?)
    }

    pub fn semigroup(&self) -> Result<NumericalSemigroup, BranchError> {
        let beta = self.characteristic_sequence()?;
        Ok(crate::semigroup::semigroup_from_characteristic(&beta))
    }

    /// `nu(h) = ord_t h(x(t), y(t))` at the given precision.
    pub fn nu(&self, h: &Polynomial<R>, precision: usize) -> Order {
        let coords = self.coordinates(precision);
        eval_poly(h, &coords)
            .map(|s| s.order())
            .unwrap_or(Order::AbovePrecision(precision))
    }
}

/// Minimal standard basis `h_0, ..., h_g` of the local ring of a branch.
#[derive(Clone)]
pub struct StandardBasis<R> {
    pub polys: Vec<Polynomial<R>>,
    pub values: Vec<usize>,
    pub pullbacks: Vec<TruncatedSeries<R>>,
}

impl<R: Ring> StandardBasis<R> {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// Builds `h_0 = x`, `h_1 = y - (terms of y in C{x})`, and
/// `h_{k+1}` from `h_k^{n_k}` by cancelling every term whose exponent lies in
/// `<v_0, ..., v_k>` until `t^{v_{k+1}}` is reached. Pullbacks are kept to
/// `precision`, which must exceed `v_g`.
pub fn standard_basis_of_ring<R: Ring>(
    phi: &PuiseuxParametrization<R>,
    precision: usize,
) -> Result<StandardBasis<R>, BranchError> {
    let gamma = phi.semigroup()?;
    let v = gamma.small_generators()?;
    let n = gamma.ratios();
    let g = v.len() - 1;
    if precision <= v[g] {
        return Err(BranchError::Precision {
            needed: v[g] + 1,
            available: precision,
        });
    }
    let coords = phi.coordinates(precision);
    let weights = phi.weights();
    let pull = |h: &Polynomial<R>| eval_poly(h, &coords[..2]).expect("two coordinates");
    let x = Polynomial::<R>::var(0);
    let mut polys = vec![x.clone()];
    let mut pullbacks = vec![pull(&x)];
    if g >= 1 {
        let mut h1 = Polynomial::<R>::var(1);
        for (j, c) in phi.y_terms() {
            if *j >= v[1] {
                break;
            }
            let m = vec![(*j / v[0]) as u32];
            h1 = h1.sub(&Polynomial::monomial(m, c.clone()));
        }
        pullbacks.push(pull(&h1));
        polys.push(h1);
    }
    for k in 1..g {
        let nk: u32 = (&n[k])
            .try_into()
            .map_err(|_| SemigroupError::TooLarge(n[k].clone()))?;
        let prefix = &v[..=k];
        let mut p = polys[k].pow(nk).truncate_weight(&weights, precision);
        let mut ps = pull(&p);
        let mut w = 0;
        loop {
            if w >= precision {
                return Err(BranchError::Precision {
                    needed: v[k + 1] + 1,
                    available: precision,
                });
            }
            if ps.coeff(w).is_zero() {
                w += 1;
                continue;
            }
            if w == v[k + 1] {
                break;
            }
            let alpha = match small_representation(prefix, w) {
                Some(a) => a,
                None => {
                    return Err(BranchError::UnexpectedValue {
                        index: k + 1,
                        exponent: w,
                    })
                }
            };
            let mut m = Polynomial::<R>::one();
            for (i, a) in alpha.iter().enumerate() {
                if *a > 0 {
                    m = m
                        .mul(&polys[i].pow(*a as u32))
                        .truncate_weight(&weights, precision);
                }
            }
            let ms = pull(&m);
            let lc_m = ms.coeff(w).clone();
            let lc_p = ps.coeff(w).clone();
            match lc_p.div_exact(&lc_m) {
                Some(c) => {
                    p = p.sub(&m.scale(&c));
                    ps = ps.sub_scaled(&c, &ms);
                }
                None => {
                    p = p.scale(&lc_m).sub(&m.scale(&lc_p));
                    ps = ps.scale(&lc_m).sub_scaled(&lc_p, &ms);
                }
            }
            w += 1;
        }
        polys.push(p);
        pullbacks.push(ps);
    }
    Ok(StandardBasis {
        polys,
        values: v,
        pullbacks,
    })
}

/// A random branch with semigroup `gamma`: `y = sum c_k t^{beta_k}` plus a
/// random tail of exponents below `tail_bound` that keeps the characteristic
/// sequence. Coefficients are small nonzero rationals.
pub fn random_branch<G: rand::Rng>(
    gamma: &NumericalSemigroup,
    tail_bound: usize,
    density: f64,
    rng: &mut G,
) -> Result<PuiseuxParametrization<Rational>, BranchError> {
    let beta = crate::semigroup::characteristic_from_semigroup(gamma)?;
    let b: Vec<usize> = beta
        .exponents()
        .iter()
        .map(|x| x.try_into().map_err(|_| SemigroupError::TooLarge(x.clone())))
        .collect::<Result<_, _>>()?;
    let e: Vec<usize> = beta.gcds().iter().map(|x| x.try_into().unwrap()).collect();
    let mut y = Vec::new();
    if b.len() == 1 {
        return PuiseuxParametrization::new(b[0], y);
    }
    for bk in &b[1..] {
        y.push((*bk, random_nonzero(rng)));
    }
    for i in (b[1] + 1)..tail_bound {
        let k = b.iter().rposition(|bk| *bk <= i).unwrap();
        if b.contains(&i) || i % e[k] != 0 {
            continue;
        }
        if rng.gen_bool(density) {
            y.push((i, random_nonzero(rng)));
        }
    }
    PuiseuxParametrization::new(b[0], y)
}

/// Uniform over `p/q` with `1 <= |p| <= 9`, `1 <= q <= 5`.
pub fn random_nonzero<G: rand::Rng>(rng: &mut G) -> Rational {
    let p: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let q: i64 = rng.gen_range(1..=5);
    crate::ring::rat(p, q)
}
