//! Holomorphic 1-forms on a branch and the set `Lambda` of their values.
//!
//! A 1-form `omega = sum A_i dx_i` is stored in pulled-back form as the series
//! `t * phi^*(omega) = sum phi^*(A_i) * t x_i'(t)`, so its value is the order
//! of that series.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

use crate::branch::{standard_basis_of_ring, BranchError, PuiseuxParametrization, StandardBasis};
use crate::poly::Polynomial;
use crate::ring::{Exact, Rational, Ring, Undecided, ZeroTest};
use crate::semigroup::{small_representation, NumericalSemigroup, SemigroupError};
use crate::series::{eval_poly, Order, TruncatedSeries};
use crate::valueset::ValueSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormsError {
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("{0}")]
    Undecided(Undecided),
    #[error("form has {form} coefficients but the branch has {branch} coordinates")]
    Arity { form: usize, branch: usize },
    #[error("the form vanishes to precision {precision} on branch {branch}")]
    Vanishes { branch: usize, precision: usize },
    #[error("the zero form has no value")]
    ZeroForm,
    #[error("precision {requested} is below the conductor {conductor} and the cap {cap} was reached")]
    PrecisionCap {
        requested: usize,
        conductor: usize,
        cap: usize,
    },
}

impl From<Undecided> for FormsError {
    fn from(u: Undecided) -> Self {
        FormsError::Undecided(u)
    }
}

/// `sum A_i dx_i`, one coefficient per coordinate.
#[derive(Clone, PartialEq)]
pub struct OneForm<R> {
    pub coeffs: Vec<Polynomial<R>>,
}

impl<R: Ring> OneForm<R> {
    pub fn new(coeffs: Vec<Polynomial<R>>) -> Self {
        OneForm { coeffs }
    }

    /// `dh` in the plane.
    pub fn differential(h: &Polynomial<R>) -> Self {
        OneForm {
            coeffs: vec![h.derivative(0), h.derivative(1)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |f: &Self, i: usize| f.coeffs.get(i).cloned().unwrap_or_else(Polynomial::zero);
        OneForm {
            coeffs: (0..n).map(|i| get(self, i).add(&get(rhs, i))).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        OneForm {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn mul_poly(&self, h: &Polynomial<R>) -> Self {
        OneForm {
            coeffs: self.coeffs.iter().map(|a| a.mul(h)).collect(),
        }
    }

    fn truncate_weight(&self, weights: &[usize], bound: usize) -> Self {
        OneForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.truncate_weight(weights, bound))
                .collect(),
        }
    }
}

/// `t * phi^*(omega)` to the given precision.
pub fn pullback_form<R: Ring>(
    phi: &PuiseuxParametrization<R>,
    omega: &OneForm<R>,
    precision: usize,
) -> Result<TruncatedSeries<R>, FormsError> {
    if omega.coeffs.len() > phi.num_coordinates() {
        return Err(FormsError::Arity {
            form: omega.coeffs.len(),
            branch: phi.num_coordinates(),
        });
    }
    let coords = phi.coordinates(precision);
    let mut acc = TruncatedSeries::zero(precision);
    for (a, x) in omega.coeffs.iter().zip(&coords) {
        if a.is_zero() {
            continue;
        }
        let pa = eval_poly(a, &coords).map_err(|_| FormsError::Arity {
            form: a.num_vars(),
            branch: coords.len(),
        })?;
        acc = acc.add(&pa.mul(&x.euler_derivative()));
    }
    Ok(acc)
}

/// `nu(omega) = ord_t(t * phi^*(omega))`.
pub fn eval_form_order<R: Ring>(
    phi: &PuiseuxParametrization<R>,
    omega: &OneForm<R>,
    precision: usize,
) -> Result<Order, FormsError> {
    if omega.is_zero() {
        return Err(FormsError::ZeroForm);
    }
    Ok(pullback_form(phi, omega, precision)?.order())
}

/// Componentwise values on several branches; fails if the form vanishes to
/// precision on one of them.
pub fn eval_form_orders_multi<R: Ring>(
    branches: &[PuiseuxParametrization<R>],
    omega: &OneForm<R>,
    precision: usize,
) -> Result<Vec<usize>, FormsError> {
    branches
        .iter()
        .enumerate()
        .map(|(i, phi)| match eval_form_order(phi, omega, precision)? {
            Order::Exact(k) => Ok(k),
            Order::AbovePrecision(p) => Err(FormsError::Vanishes {
                branch: i,
                precision: p,
            }),
        })
        .collect()
}

/// Matched values `m < bound` of the minimal S-processes between elements of
/// values `nu_p` and `nu_q`: the minimal generators of the monomodule
/// `(nu_p + Gamma) ∩ (nu_q + Gamma)`.
pub fn minimal_s_process_values(member: &[bool], nu_p: usize, nu_q: usize, bound: usize) -> Vec<usize> {
    let in_gamma = |z: usize| z < member.len() && member[z] || z >= member.len();
    let mut found: Vec<usize> = Vec::new();
    for m in nu_p.max(nu_q)..bound {
        if !(in_gamma(m - nu_p) && in_gamma(m - nu_q)) {
            continue;
        }
        if found.iter().any(|f| m > *f && in_gamma(m - f)) {
            continue;
        }
        found.push(m);
    }
    found
}

/// A pending or realized S-process `h^alpha omega_p - c h^gamma omega_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SProcess {
    pub p: usize,
    pub q: usize,
    pub matched: usize,
    pub alpha: Vec<usize>,
    pub gamma: Vec<usize>,
}

/// The minimal S-processes of a pair, with exponent vectors in the canonical
/// representation over the standard basis values.
pub fn minimal_s_processes(
    gamma: &NumericalSemigroup,
    p: (usize, usize),
    q: (usize, usize),
    bound: usize,
) -> Result<Vec<SProcess>, SemigroupError> {
    let gens = gamma.small_generators()?;
    let member = gamma.indicator(bound)?;
    Ok(minimal_s_process_values(&member, p.1, q.1, bound)
        .into_iter()
        .map(|m| SProcess {
            p: p.0,
            q: q.0,
            matched: m,
            alpha: small_representation(&gens, m - p.1).unwrap(),
            gamma: small_representation(&gens, m - q.1).unwrap(),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// `dh_j`.
    Differential(usize),
    SProcess {
        p: usize,
        q: usize,
        matched: usize,
    },
}

#[derive(Clone)]
pub struct BasisElement<R> {
    pub value: usize,
    pub series: TruncatedSeries<R>,
    pub form: Option<OneForm<R>>,
    pub origin: Origin,
}

#[derive(Clone)]
pub struct FormValueBasis<R> {
    pub gamma: NumericalSemigroup,
    pub conductor: usize,
    pub precision: usize,
    pub elements: Vec<BasisElement<R>>,
    /// Indices into `elements` of a minimal standard basis, by value.
    pub minimal: Vec<usize>,
    pub lambda: ValueSet,
    pub s_processes: usize,
}

impl<R: Ring> FormValueBasis<R> {
    pub fn minimal_values(&self) -> Vec<usize> {
        self.minimal.iter().map(|i| self.elements[*i].value).collect()
    }

    /// `Lambda \ Gamma`.
    pub fn lambda_minus_gamma(&self) -> Vec<usize> {
        self.lambda.minus_semigroup(&self.gamma)
    }
}

#[derive(Clone, Debug)]
pub struct Algorithm1Options {
    /// Series precision; defaults to `mu + v_0 + 2`.
    pub precision: Option<usize>,
    /// Largest precision reached by doubling a too-small request.
    pub max_precision: usize,
    /// Keep the polynomial coefficients of every basis element.
    pub track_forms: bool,
}

impl Default for Algorithm1Options {
    fn default() -> Self {
        Algorithm1Options {
            precision: None,
            max_precision: 1 << 16,
            track_forms: true,
        }
    }
}

/// Value, reduced series and its form.
type Reduced<R> = (usize, TruncatedSeries<R>, Option<OneForm<R>>);

struct State<'a, R: Ring, Z: ZeroTest<R>> {
    zero: &'a Z,
    gens: Vec<usize>,
    member: Vec<bool>,
    bound: usize,
    weights: [usize; 2],
    precision: usize,
    sb: StandardBasis<R>,
    elements: Vec<BasisElement<R>>,
    /// `reducer[w] = (k, alpha)` for `w` in the monomodule.
    reducer: Vec<Option<(usize, Vec<usize>)>>,
    h_series: HashMap<Vec<usize>, TruncatedSeries<R>>,
    h_polys: HashMap<Vec<usize>, Polynomial<R>>,
    products: HashMap<(Vec<usize>, usize), TruncatedSeries<R>>,
    track_forms: bool,
}

impl<'a, R: Ring, Z: ZeroTest<R>> State<'a, R, Z> {
    fn h_power_series(&mut self, alpha: &[usize]) -> TruncatedSeries<R> {
        if let Some(s) = self.h_series.get(alpha) {
            return s.clone();
        }
        let s = match alpha.iter().position(|a| *a > 0) {
            None => TruncatedSeries::one(self.precision),
            Some(i) => {
                let mut lower = alpha.to_vec();
                lower[i] -= 1;
                self.h_power_series(&lower).mul(&self.sb.pullbacks[i])
            }
        };
        self.h_series.insert(alpha.to_vec(), s.clone());
        s
    }

    fn h_power_poly(&mut self, alpha: &[usize]) -> Polynomial<R> {
        if let Some(p) = self.h_polys.get(alpha) {
            return p.clone();
        }
        let p = match alpha.iter().position(|a| *a > 0) {
            None => Polynomial::one(),
            Some(i) => {
                let mut lower = alpha.to_vec();
                lower[i] -= 1;
                self.h_power_poly(&lower)
                    .mul(&self.sb.polys[i])
                    .truncate_weight(&self.weights, self.precision)
            }
        };
        self.h_polys.insert(alpha.to_vec(), p.clone());
        p
    }

    /// Series of `h^alpha * omega_k`.
    fn product(&mut self, alpha: &[usize], k: usize) -> TruncatedSeries<R> {
        let key = (alpha.to_vec(), k);
        if let Some(s) = self.products.get(&key) {
            return s.clone();
        }
        let s = self.h_power_series(alpha).mul(&self.elements[k].series);
        self.products.insert(key, s.clone());
        s
    }

    fn product_form(&mut self, alpha: &[usize], k: usize) -> Option<OneForm<R>> {
        if !self.track_forms {
            return None;
        }
        let h = self.h_power_poly(alpha);
        let f = self.elements[k].form.clone()?;
        Some(f.mul_poly(&h).truncate_weight(&self.weights, self.precision))
    }

    fn in_gamma(&self, z: usize) -> bool {
        z >= self.member.len() || self.member[z]
    }

    fn add_element(&mut self, e: BasisElement<R>) -> usize {
        let k = self.elements.len();
        let lambda = e.value;
        self.elements.push(e);
        for w in lambda..=self.bound {
            if self.reducer[w].is_none() && self.in_gamma(w - lambda) {
                let alpha = small_representation(&self.gens, w - lambda).unwrap();
                self.reducer[w] = Some((k, alpha));
            }
        }
        k
    }

    /// `a * s - b * r` with `(a, b) = (1, c_s / c_r)` when the quotient exists
    /// in the ring, else `(c_r, c_s)`.
    fn cancel(
        s: &TruncatedSeries<R>,
        sf: Option<OneForm<R>>,
        r: &TruncatedSeries<R>,
        rf: Option<OneForm<R>>,
        w: usize,
    ) -> (TruncatedSeries<R>, Option<OneForm<R>>) {
        let cs = s.coeff(w).clone();
        let cr = r.coeff(w).clone();
        let (a, b) = match cs.div_exact(&cr) {
            Some(q) => (None, q),
            None => (Some(cr), cs),
        };
        let base = match &a {
            Some(a) => s.scale(a),
            None => s.clone(),
        };
        let series = base.sub_scaled(&b, r);
        let form = match (sf, rf) {
            (Some(sf), Some(rf)) => {
                let sf = match &a {
                    Some(a) => sf.scale(a),
                    None => sf,
                };
                Some(sf.add(&rf.scale(&b.neg())))
            }
            _ => None,
        };
        (series, form)
    }

    /// Scans `s` from `start` to the bound, cancelling every term whose
    /// exponent lies in the monomodule. Returns the value of the first term
    /// outside it, or `None` when the scan passes the bound.
    fn reduce(
        &mut self,
        mut s: TruncatedSeries<R>,
        mut form: Option<OneForm<R>>,
        start: usize,
    ) -> Result<Option<Reduced<R>>, Undecided> {
        for w in start..=self.bound {
            if s.coeff(w).is_zero() {
                continue;
            }
            match self.reducer[w].clone() {
                Some((k, alpha)) => {
                    let r = self.product(&alpha, k);
                    let rf = self.product_form(&alpha, k);
                    let (ns, nf) = Self::cancel(&s, form, &r, rf, w);
                    s = ns;
                    form = nf;
                }
                None => {
                    if self.zero.is_nonzero(s.coeff(w))? {
                        return Ok(Some((w, s, form)));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Standard basis of `phi^*(Omega^1)` below the conductor and the resulting
/// set `Lambda`.
pub fn algorithm1<R: Ring, Z: ZeroTest<R>>(
    phi: &PuiseuxParametrization<R>,
    zero: &Z,
    options: &Algorithm1Options,
) -> Result<FormValueBasis<R>, FormsError> {
    let gamma = phi.semigroup()?;
    let mu = gamma.small_conductor()?;
    let gens = gamma.small_generators()?;
    let v0 = gens[0];
    let mut precision = options.precision.unwrap_or(mu + v0 + 2);
    while precision < mu.max(gens[gens.len() - 1] + 1) {
        if precision >= options.max_precision {
            return Err(FormsError::PrecisionCap {
                requested: options.precision.unwrap_or(0),
                conductor: mu,
                cap: options.max_precision,
            });
        }
        precision = (precision * 2).max(1).min(options.max_precision);
    }
    let sb = standard_basis_of_ring(phi, precision)?;
    let bound = mu.saturating_sub(1);
    let mut st = State {
        zero,
        member: gamma.indicator(bound + 1)?,
        gens: gens.clone(),
        bound,
        weights: phi.weights(),
        precision,
        elements: Vec::new(),
        reducer: vec![None; bound + 1],
        h_series: HashMap::new(),
        h_polys: HashMap::new(),
        products: HashMap::new(),
        track_forms: options.track_forms,
        sb,
    };
    let mut queue: BinaryHeap<Reverse<(usize, usize, usize, usize)>> = BinaryHeap::new();
    let mut ticket = 0usize;
    let push_pairs = |st: &State<R, Z>, queue: &mut BinaryHeap<_>, ticket: &mut usize, j: usize| {
        for i in 0..j {
            let (vi, vj) = (st.elements[i].value, st.elements[j].value);
            for m in minimal_s_process_values(&st.member, vi, vj, st.bound) {
                queue.push(Reverse((m, *ticket, i, j)));
                *ticket += 1;
            }
        }
    };
    for (j, value) in gens.iter().enumerate() {
        let series = st.sb.pullbacks[j].euler_derivative();
        let form = options
            .track_forms
            .then(|| OneForm::differential(&st.sb.polys[j]));
        let k = st.add_element(BasisElement {
            value: *value,
            series,
            form,
            origin: Origin::Differential(j),
        });
        push_pairs(&st, &mut queue, &mut ticket, k);
    }
    let mut processed = 0usize;
    while let Some(Reverse((m, _, i, j))) = queue.pop() {
        processed += 1;
        let (vi, vj) = (st.elements[i].value, st.elements[j].value);
        let ai = small_representation(&gens, m - vi).unwrap();
        let aj = small_representation(&gens, m - vj).unwrap();
        let si = st.product(&ai, i);
        let fi = st.product_form(&ai, i);
        let sj = st.product(&aj, j);
        let fj = st.product_form(&aj, j);
        let (s, f) = State::<R, Z>::cancel(&si, fi, &sj, fj, m);
        if let Some((w, s, f)) = st.reduce(s, f, m + 1)? {
            let k = st.add_element(BasisElement {
                value: w,
                series: s,
                form: f,
                origin: Origin::SProcess {
                    p: i,
                    q: j,
                    matched: m,
                },
            });
            push_pairs(&st, &mut queue, &mut ticket, k);
        }
    }
    let mut order: Vec<usize> = (0..st.elements.len()).collect();
    order.sort_by_key(|k| st.elements[*k].value);
    let mut minimal: Vec<usize> = Vec::new();
    for k in order {
        let v = st.elements[k].value;
        let covered = minimal
            .iter()
            .any(|i| v >= st.elements[*i].value && st.in_gamma(v - st.elements[*i].value));
        if !covered {
            minimal.push(k);
        }
    }
    let mut indicator = vec![false; mu.max(1)];
    for (w, r) in st.reducer.iter().enumerate().take(mu) {
        indicator[w] = r.is_some();
    }
    if mu == 0 {
        indicator = vec![false];
    }
    let lambda = ValueSet::from_indicator(&indicator).expect("0 has no reducer");
    Ok(FormValueBasis {
        gamma,
        conductor: mu,
        precision,
        elements: st.elements,
        minimal,
        lambda,
        s_processes: processed,
    })
}

/// `Lambda` of a concrete branch.
pub fn lambda_of(phi: &PuiseuxParametrization<Rational>) -> Result<FormValueBasis<Rational>, FormsError> {
    algorithm1(phi, &Exact, &Algorithm1Options::default())
}
