//! Parametric runs of Algorithm 1 over the normal-form family of a
//! semigroup, splitting on the coefficient conditions that decide each
//! value.

use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::sync::{Condvar, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::branch::{BranchError, PuiseuxParametrization};
use crate::forms::{algorithm1, Algorithm1Options, FormsError};
use crate::poly::{ParamPoly, Polynomial};
use crate::ring::{Exact, Rational, Ring, Undecided, ZeroTest};
use crate::semigroup::{characteristic_from_semigroup, NumericalSemigroup, SemigroupError};
use crate::valueset::ValueSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrataError {
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error("witness {witness} gives {concrete} but the stratum has {symbolic}")]
    WitnessMismatch {
        witness: String,
        symbolic: ValueSet,
        concrete: ValueSet,
    },
}

/// `(t^{v_0}, t^{v_1} + sum_{i in E} a_i t^i)`.
#[derive(Clone, Debug)]
pub struct Family {
    pub gamma: NumericalSemigroup,
    /// Exponent set `E`, increasing.
    pub exponents: Vec<usize>,
    /// Exponent fixed to coefficient 1, if any.
    pub normalized: Option<usize>,
    /// Exponents of the free parameters; parameter `j` is variable `j`.
    pub params: Vec<usize>,
    /// Parameters that must not vanish.
    pub nonzero: Vec<usize>,
    v0: usize,
    v1: usize,
}

impl Family {
    pub fn names(&self) -> Vec<String> {
        self.params.iter().map(|e| format!("a{e}")).collect()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// The family with every parameter replaced by `values[j]`.
    pub fn parametrization<R: Ring>(&self, values: &[R]) -> Result<PuiseuxParametrization<R>, BranchError> {
        let mut y = Vec::new();
        if self.v1 > 0 {
            y.push((self.v1, R::one()));
        }
        if let Some(e) = self.normalized {
            y.push((e, R::one()));
        }
        for (j, e) in self.params.iter().enumerate() {
            y.push((*e, values[j].clone()));
        }
        PuiseuxParametrization::new(self.v0, y)
    }
}

/// Normal-form family of `gamma`: exponents `v_1 < i < mu - v_0` with
/// `v_0 + i` not in `gamma` and, between `beta_k` and `beta_{k+1}`, divisible
/// by `e_k`; each `beta_k` with `k >= 2` is included. The coefficient of
/// `t^{beta_2}` is 1, those of later `beta_k` are nonzero.
pub fn normal_form_family(gamma: &NumericalSemigroup) -> Result<Family, StrataError> {
    let beta = characteristic_from_semigroup(gamma)?;
    let b: Vec<usize> = beta
        .exponents()
        .iter()
        .map(|x| x.to_usize().ok_or_else(|| SemigroupError::TooLarge(x.clone())))
        .collect::<Result<_, _>>()?;
    let e: Vec<usize> = beta.gcds().iter().map(|x| x.to_usize().unwrap()).collect();
    let v = gamma.small_generators()?;
    let mu = gamma.small_conductor()?;
    if v.len() == 1 {
        return Ok(Family {
            gamma: gamma.clone(),
            exponents: Vec::new(),
            normalized: None,
            params: Vec::new(),
            nonzero: Vec::new(),
            v0: v[0],
            v1: 0,
        });
    }
    let (v0, v1) = (v[0], v[1]);
    let mut exponents = Vec::new();
    for i in (v1 + 1)..mu.saturating_sub(v0) {
        let k = b.iter().rposition(|bk| *bk <= i).unwrap();
        let forced = k >= 2 && b[k] == i;
        if forced || (!gamma.contains_small(v0 + i) && i % e[k] == 0) {
            exponents.push(i);
        }
    }
    for bk in b.iter().skip(2) {
        if !exponents.contains(bk) {
            exponents.push(*bk);
        }
    }
    exponents.sort_unstable();
    let normalized = b.get(2).copied();
    let params: Vec<usize> = exponents
        .iter()
        .copied()
        .filter(|i| Some(*i) != normalized)
        .collect();
    let nonzero = b.iter().skip(3).copied().collect();
    Ok(Family {
        gamma: gamma.clone(),
        exponents,
        normalized,
        params,
        nonzero,
        v0,
        v1,
    })
}

/// Equalities solved as substitutions `a_j := s_j(free parameters)`,
/// disequalities reduced modulo them.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    subst: BTreeMap<usize, ParamPoly>,
    equalities: Vec<ParamPoly>,
    disequalities: Vec<ParamPoly>,
    unresolved: Vec<ParamPoly>,
}

impl ConstraintSystem {
    pub fn new(family: &Family) -> Self {
        let mut sys = ConstraintSystem {
            subst: BTreeMap::new(),
            equalities: Vec::new(),
            disequalities: Vec::new(),
            unresolved: Vec::new(),
        };
        for e in &family.nonzero {
            let j = family.params.iter().position(|p| p == e).unwrap();
            sys.disequalities.push(Polynomial::var(j));
        }
        sys
    }

    pub fn substitutions(&self) -> &BTreeMap<usize, ParamPoly> {
        &self.subst
    }

    pub fn equalities(&self) -> &[ParamPoly] {
        &self.equalities
    }

    pub fn disequalities(&self) -> &[ParamPoly] {
        &self.disequalities
    }

    pub fn unresolved(&self) -> &[ParamPoly] {
        &self.unresolved
    }

    pub fn reduce(&self, p: &ParamPoly) -> ParamPoly {
        let mut out = p.clone();
        for (j, s) in &self.subst {
            out = out.substitute(*j, s);
        }
        out
    }

    /// Family coefficients under the substitutions.
    pub fn coefficients(&self, n: usize) -> Vec<ParamPoly> {
        (0..n)
            .map(|j| self.subst.get(&j).cloned().unwrap_or_else(|| Polynomial::var(j)))
            .collect()
    }

    /// `a_j := s`; `None` if a disequality becomes `0`.
    fn substitute(&self, j: usize, s: &ParamPoly) -> Option<Self> {
        let s = self.reduce(s);
        let mut next = self.clone();
        for rhs in next.subst.values_mut() {
            *rhs = rhs.substitute(j, &s);
        }
        next.subst.insert(j, s.clone());
        let neqs = std::mem::take(&mut next.disequalities);
        for d in neqs {
            next = next.with_disequality(&d.substitute(j, &s))?;
        }
        next.unresolved = next.unresolved.iter().map(|u| u.substitute(j, &s)).collect();
        Some(next)
    }

    /// Adds `p != 0`; `None` if `p` reduces to `0`.
    fn with_disequality(mut self, p: &ParamPoly) -> Option<Self> {
        let p = self.reduce(p);
        if Ring::is_zero(&p) {
            return None;
        }
        if p.is_constant() {
            return Some(self);
        }
        let p = p.monic();
        if !self.disequalities.contains(&p) {
            self.disequalities.push(p);
        }
        Some(self)
    }

    fn with_equality_record(mut self, p: &ParamPoly) -> Self {
        self.equalities.push(p.monic());
        self
    }

    fn with_unresolved(mut self, p: &ParamPoly) -> Self {
        self.unresolved.push(p.monic());
        self
    }

    /// Whether `point` (values of every parameter) satisfies the system.
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        self.subst.iter().all(|(j, s)| s.eval(point) == point[*j])
            && self.disequalities.iter().all(|d| !Zero::is_zero(&d.eval(point)))
            && self.unresolved.iter().all(|u| Zero::is_zero(&u.eval(point)))
    }
}

/// Zero test modulo a constraint system: a coefficient is nonzero when it
/// is a constant times a product of disequalities.
pub struct ConstraintOracle<'a> {
    pub system: &'a ConstraintSystem,
}

impl ZeroTest<ParamPoly> for ConstraintOracle<'_> {
    fn is_nonzero(&self, c: &ParamPoly) -> Result<bool, Undecided> {
        if Ring::is_zero(c) {
            return Ok(false);
        }
        let r = strip_known_factors(c, &self.system.disequalities);
        if r.is_constant() {
            Ok(true)
        } else {
            Err(Undecided(r.monic()))
        }
    }
}

fn strip_known_factors(c: &ParamPoly, known: &[ParamPoly]) -> ParamPoly {
    let mut r = c.clone();
    for d in known {
        while !r.is_constant() {
            match r.div_exact_poly(d) {
                Some(q) => r = q,
                None => break,
            }
        }
    }
    r
}

/// Coefficients by degree of a polynomial in the single variable `j`.
fn univariate_coefficients(p: &ParamPoly, j: usize) -> Vec<Rational> {
    let d = p.degree_in(j) as usize;
    let mut out = vec![<Rational as Ring>::zero(); d + 1];
    for (m, c) in p.terms() {
        let e = m.get(j).copied().unwrap_or(0) as usize;
        out[e] = c.clone();
    }
    out
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Distinct rational roots and the cofactor left after dividing them out.
/// `None` when the coefficients are too large to search.
fn rational_roots(coeffs: &[Rational]) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let mut poly = coeffs.to_vec();
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let mut roots = Vec::new();
    if poly.len() >= 2 && Zero::is_zero(&poly[0]) {
        roots.push(<Rational as Ring>::zero());
        while poly.len() >= 2 && Zero::is_zero(&poly[0]) {
            poly.remove(0);
        }
    }
    let lcm = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = poly
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    if ints.len() >= 2 {
        let ps = divisors(&ints[0])?;
        let qs = divisors(ints.last().unwrap())?;
        let mut cands: BTreeSet<Rational> = BTreeSet::new();
        for p in &ps {
            for q in &qs {
                cands.insert(Rational::new(p.clone(), q.clone()));
                cands.insert(Rational::new(-p.clone(), q.clone()));
            }
        }
        for r in cands {
            let mut found = false;
            loop {
                let (q, rem) = synthetic_division(&poly, &r);
                if !Zero::is_zero(&rem) {
                    break;
                }
                poly = q;
                found = true;
                if poly.len() < 2 {
                    break;
                }
            }
            if found {
                roots.push(r);
            }
            if poly.len() < 2 {
                break;
            }
        }
    }
    Some((roots, poly))
}

fn synthetic_division(p: &[Rational], r: &Rational) -> (Vec<Rational>, Rational) {
    let n = p.len();
    let mut q = vec![<Rational as Ring>::zero(); n - 1];
    let mut acc = <Rational as Ring>::zero();
    for i in (0..n).rev() {
        acc = &acc * r + &p[i];
        if i > 0 {
            q[i - 1] = acc.clone();
        }
    }
    (q, acc)
}

fn from_univariate(coeffs: &[Rational], j: usize) -> ParamPoly {
    let mut p = ParamPoly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        if !Zero::is_zero(c) {
            let mut m = vec![0u32; j + 1];
            m[j] = e as u32;
            p = p.add(&Polynomial::monomial(m, c.clone()));
        }
    }
    p
}

/// Children of `sys` for the split on `p`: first `p != 0`, then the `p = 0`
/// cases.
fn split(sys: &ConstraintSystem, p: &ParamPoly) -> Vec<ConstraintSystem> {
    let mut out = Vec::new();
    let vars = p.variables();
    if vars.len() == 1 {
        let j = vars[0];
        if let Some((roots, rest)) = rational_roots(&univariate_coefficients(p, j)) {
            let mut nonzero = Some(sys.clone());
            for r in &roots {
                let lin = from_univariate(&[-r.clone(), <Rational as Ring>::one()], j);
                nonzero = nonzero.and_then(|s| s.with_disequality(&lin));
            }
            let rest_poly = from_univariate(&rest, j);
            if !rest_poly.is_constant() {
                nonzero = nonzero.and_then(|s| s.with_disequality(&rest_poly));
            }
            out.extend(nonzero);
            for r in &roots {
                let lin = from_univariate(&[-r.clone(), <Rational as Ring>::one()], j);
                let value = ParamPoly::constant(r.clone());
                if let Some(c) = sys.substitute(j, &value) {
                    out.push(c.with_equality_record(&lin));
                }
            }
            if !rest_poly.is_constant() {
                let mut c = Some(sys.clone().with_unresolved(&rest_poly));
                for r in &roots {
                    let lin = from_univariate(&[-r.clone(), <Rational as Ring>::one()], j);
                    c = c.and_then(|c| c.with_disequality(&lin));
                }
                out.extend(c);
            }
            return out;
        }
    }
    out.extend(sys.clone().with_disequality(p));
    // linear with constant coefficient, preferring the largest exponent
    for j in vars.iter().rev() {
        if p.degree_in(*j) != 1 {
            continue;
        }
        let lead = p.derivative(*j);
        if lead.is_constant() {
            let rest = p.substitute(*j, &ParamPoly::zero());
            let value = rest.scale(&(-(<Rational as Ring>::one() / lead.constant_term())));
            if let Some(c) = sys.substitute(*j, &value) {
                out.push(c.with_equality_record(p));
            }
            return out;
        }
    }
    for j in vars.iter().rev() {
        if p.degree_in(*j) != 1 {
            continue;
        }
        let lead = p.derivative(*j);
        let rest = p.substitute(*j, &ParamPoly::zero());
        if let Some(q) = rest.div_exact_poly(&lead) {
            // p = lead * (a_j + q)
            out.extend(
                split(sys, &lead)
                    .into_iter()
                    .skip(1)
                    .map(|c| c.with_equality_record(p)),
            );
            if let Some(c) = sys.clone().with_disequality(&lead) {
                if let Some(c) = c.substitute(*j, &q.neg()) {
                    out.push(c.with_equality_record(p));
                }
            }
            return out;
        }
    }
    out.push(sys.clone().with_unresolved(p));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratumStatus {
    Resolved,
    /// An equality that could not be solved, or no witness was found.
    Unresolved(String),
}

#[derive(Clone, Debug)]
pub struct Stratum {
    pub constraints: ConstraintSystem,
    pub lambda: Option<ValueSet>,
    /// Values of every family parameter.
    pub witness: Option<Vec<Rational>>,
    pub status: StratumStatus,
}

impl Stratum {
    pub fn witness_branch(&self, family: &Family) -> Option<PuiseuxParametrization<Rational>> {
        self.witness.as_ref().and_then(|w| family.parametrization(w).ok())
    }
}

#[derive(Clone, Debug)]
pub struct StratifyOptions {
    pub max_splits: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Random points tried per leaf before giving up on a witness.
    pub witness_attempts: usize,
    pub precision: Option<usize>,
}

impl Default for StratifyOptions {
    fn default() -> Self {
        StratifyOptions {
            max_splits: 10_000,
            seed: 0,
            jobs: 1,
            witness_attempts: 2_000,
            precision: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stratification {
    pub family: Family,
    pub strata: Vec<Stratum>,
    pub splits: usize,
}

impl Stratification {
    /// Distinct `Lambda` of resolved strata, sorted.
    pub fn distinct_lambdas(&self) -> Vec<ValueSet> {
        let set: BTreeSet<ValueSet> = self
            .strata
            .iter()
            .filter(|s| s.status == StratumStatus::Resolved)
            .filter_map(|s| s.lambda.clone())
            .collect();
        set.into_iter().collect()
    }

    pub fn has_unresolved(&self) -> bool {
        self.strata.iter().any(|s| s.status != StratumStatus::Resolved)
    }
}

enum Outcome {
    Leaf(Stratum),
    Split(Vec<ConstraintSystem>),
}

fn small_rational<G: rand::Rng>(rng: &mut G, spread: i64) -> Rational {
    let p = rng.gen_range(-spread..=spread);
    let q = rng.gen_range(1..=spread.max(1));
    crate::ring::rat(p, q)
}

fn find_witness(sys: &ConstraintSystem, n: usize, seed: u64, attempts: usize) -> Option<Vec<Rational>> {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    format!("{:?}", sys.subst).hash(&mut h);
    format!("{:?}", sys.disequalities).hash(&mut h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h.finish());
    for attempt in 0..attempts {
        let spread = 2 + (attempt / 50) as i64;
        let mut point: Vec<Rational> = (0..n)
            .map(|j| {
                if sys.subst.contains_key(&j) {
                    <Rational as Ring>::zero()
                } else {
                    small_rational(&mut rng, spread)
                }
            })
            .collect();
        for (j, s) in &sys.subst {
            point[*j] = s.eval(&point);
        }
        if sys.satisfied_by(&point) {
            return Some(point);
        }
    }
    None
}

fn process(
    family: &Family,
    sys: ConstraintSystem,
    options: &StratifyOptions,
) -> Result<Outcome, StrataError> {
    if !sys.unresolved.is_empty() {
        return Ok(Outcome::Leaf(Stratum {
            constraints: sys,
            lambda: None,
            witness: None,
            status: StratumStatus::Unresolved("equality not solvable by substitution".into()),
        }));
    }
    let n = family.num_params();
    let phi = family.parametrization(&sys.coefficients(n))?;
    let a1 = Algorithm1Options {
        precision: options.precision,
        track_forms: false,
        ..Algorithm1Options::default()
    };
    let oracle = ConstraintOracle { system: &sys };
    match algorithm1(&phi, &oracle, &a1) {
        Ok(basis) => {
            let lambda = basis.lambda;
            let Some(w) = find_witness(&sys, n, options.seed, options.witness_attempts) else {
                return Ok(Outcome::Leaf(Stratum {
                    constraints: sys,
                    lambda: Some(lambda),
                    witness: None,
                    status: StratumStatus::Unresolved("no witness found".into()),
                }));
            };
            let concrete = family.parametrization(&w)?;
            let got = algorithm1(
                &concrete,
                &Exact,
                &Algorithm1Options {
                    precision: options.precision,
                    track_forms: false,
                    ..Algorithm1Options::default()
                },
            )?
            .lambda;
            if got != lambda {
                let names = family.names();
                let desc: Vec<String> = names
                    .iter()
                    .zip(&w)
                    .map(|(a, q)| format!("{a}={}", crate::ring::rational_to_string(q)))
                    .collect();
                return Err(StrataError::WitnessMismatch {
                    witness: desc.join(","),
                    symbolic: lambda,
                    concrete: got,
                });
            }
            Ok(Outcome::Leaf(Stratum {
                constraints: sys,
                lambda: Some(lambda),
                witness: Some(w),
                status: StratumStatus::Resolved,
            }))
        }
        Err(FormsError::Undecided(Undecided(p))) => Ok(Outcome::Split(split(&sys, &p))),
        Err(e) => Err(e.into()),
    }
}

/// Every `Lambda` attained by branches with semigroup `gamma`.
pub fn stratify(
    gamma: &NumericalSemigroup,
    options: &StratifyOptions,
) -> Result<Stratification, StrataError> {
    let family = normal_form_family(gamma)?;
    let root = ConstraintSystem::new(&family);
    struct Shared {
        pending: Vec<ConstraintSystem>,
        active: usize,
        splits: usize,
        leaves: Vec<Stratum>,
        error: Option<StrataError>,
    }
    let shared = Mutex::new(Shared {
        pending: vec![root],
        active: 0,
        splits: 0,
        leaves: Vec::new(),
        error: None,
    });
    let cv = Condvar::new();
    let worker = || loop {
        let sys = {
            let mut g = shared.lock().unwrap();
            loop {
                if g.error.is_some() {
                    return;
                }
                if let Some(s) = g.pending.pop() {
                    g.active += 1;
                    break s;
                }
                if g.active == 0 {
                    return;
                }
                g = cv.wait(g).unwrap();
            }
        };
        let over_budget = shared.lock().unwrap().splits >= options.max_splits;
        let result = if over_budget {
            Ok(Outcome::Leaf(Stratum {
                constraints: sys,
                lambda: None,
                witness: None,
                status: StratumStatus::Unresolved("split budget exhausted".into()),
            }))
        } else {
            process(&family, sys, options)
        };
        let mut g = shared.lock().unwrap();
        g.active -= 1;
        match result {
            Ok(Outcome::Leaf(s)) => g.leaves.push(s),
            Ok(Outcome::Split(children)) => {
                g.splits += 1;
                g.pending.extend(children.into_iter().rev());
            }
            Err(e) => g.error = Some(e),
        }
        cv.notify_all();
    };
    let jobs = options.jobs.max(1);
    if jobs == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..jobs {
                s.spawn(worker);
            }
        });
    }
    let shared = shared.into_inner().unwrap();
    if let Some(e) = shared.error {
        return Err(e);
    }
    let mut strata = shared.leaves;
    strata.sort_by(|a, b| {
        let key = |s: &Stratum| (s.lambda.clone(), format!("{:?}", s.constraints));
        key(a).cmp(&key(b))
    });
    Ok(Stratification {
        family,
        strata,
        splits: shared.splits,
    })
}
