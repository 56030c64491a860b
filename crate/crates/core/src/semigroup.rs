//! Numerical semigroups of plane branches.
//!
//! Generators are arbitrary-precision integers. For a semigroup
//! `<v_0, ..., v_g>` we keep `e_i = gcd(v_0, ..., v_i)` and
//! `n_i = e_{i-1} / e_i` (with `n_0 = 1`). Every integer `z` has a unique
//! representation `z = s_0 v_0 + ... + s_g v_g` with `0 <= s_i < n_i` for
//! `i >= 1`; for plane-branch semigroups `z` is a member iff `s_0 >= 0`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("no generators given")]
    Empty,
    #[error("generators must be positive, got {0}")]
    NonPositive(BigInt),
    #[error("gcd of the generators is {0}, not 1")]
    GcdNotOne(BigInt),
    #[error("{0} is too large for an explicit enumeration")]
    TooLarge(BigInt),
    #[error("not a characteristic sequence: {0}")]
    InvalidCharacteristic(String),
    #[error("not the semigroup of a plane branch: {0}")]
    NotPlaneBranch(PlaneBranchViolation),
}

/// First violated condition of the plane-branch (Bresinsky) criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneBranchViolation {
    Empty,
    NotStrictlyIncreasing {
        index: usize,
    },
    NonPositive {
        index: usize,
    },
    GcdNotOne {
        gcd: BigInt,
    },
    RatioBelowTwo {
        index: usize,
        ratio: BigInt,
    },
    NotAboveMultiple {
        index: usize,
        multiple: BigInt,
        value: BigInt,
    },
}

impl fmt::Display for PlaneBranchViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneBranchViolation::Empty => write!(f, "empty generator list"),
            PlaneBranchViolation::NotStrictlyIncreasing { index } => {
                write!(f, "generators not strictly increasing at position {index}")
            }
            PlaneBranchViolation::NonPositive { index } => {
                write!(f, "generator at position {index} is not positive")
            }
            PlaneBranchViolation::GcdNotOne { gcd } => write!(f, "gcd of the generators is {gcd}"),
            PlaneBranchViolation::RatioBelowTwo { index, ratio } => {
                write!(f, "n_{index} = {ratio} < 2")
            }
            PlaneBranchViolation::NotAboveMultiple {
                index,
                multiple,
                value,
            } => write!(
                f,
                "n_{}*v_{} = {multiple} >= v_{index} = {value}",
                index - 1,
                index - 1
            ),
        }
    }
}

/// `(e_i)` and `(n_i)` of an increasing sequence.
fn gcd_sequence(v: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut e = Vec::with_capacity(v.len());
    let mut n = Vec::with_capacity(v.len());
    for (i, vi) in v.iter().enumerate() {
        if i == 0 {
            e.push(vi.clone());
            n.push(BigInt::one());
        } else {
            let g = e[i - 1].gcd(vi);
            n.push(&e[i - 1] / &g);
            e.push(g);
        }
    }
    (e, n)
}

/// Checks the plane-branch criterion on a list of generators: gcd 1,
/// `n_i >= 2` and `n_{i-1} v_{i-1} < v_i` for `1 <= i <= g`.
pub fn is_plane_branch_semigroup(v: &[BigInt]) -> Result<(), PlaneBranchViolation> {
    if v.is_empty() {
        return Err(PlaneBranchViolation::Empty);
    }
    for (i, x) in v.iter().enumerate() {
        if !x.is_positive() {
            return Err(PlaneBranchViolation::NonPositive { index: i });
        }
        if i > 0 && v[i - 1] >= *x {
            return Err(PlaneBranchViolation::NotStrictlyIncreasing { index: i });
        }
    }
    let (e, n) = gcd_sequence(v);
    let last = e.last().unwrap();
    if !last.is_one() {
        return Err(PlaneBranchViolation::GcdNotOne { gcd: last.clone() });
    }
    for i in 1..v.len() {
        if n[i] < BigInt::from(2) {
            return Err(PlaneBranchViolation::RatioBelowTwo {
                index: i,
                ratio: n[i].clone(),
            });
        }
        let multiple = &n[i - 1] * &v[i - 1];
        if multiple >= v[i] {
            return Err(PlaneBranchViolation::NotAboveMultiple {
                index: i,
                multiple,
                value: v[i].clone(),
            });
        }
    }
    Ok(())
}

/// Unique representation `z = sum s_i v_i`, `0 <= s_i < n_i` for `i >= 1`.
/// `None` when `e_g` does not divide `z`.
fn representation_in(v: &[BigInt], e: &[BigInt], n: &[BigInt], z: &BigInt) -> Option<Vec<BigInt>> {
    let g = v.len() - 1;
    if !z.is_multiple_of(&e[g]) {
        return None;
    }
    let mut s = vec![BigInt::zero(); v.len()];
    let mut rest = z.clone();
    for i in (1..=g).rev() {
        // rest / e_i = s_i * (v_i / e_i)  (mod n_i)
        let ni = &n[i];
        let r = (&rest / &e[i]).mod_floor(ni);
        let w = (&v[i] / &e[i]).mod_floor(ni);
        let inv = mod_inverse(&w, ni);
        let si = (r * inv).mod_floor(ni);
        rest -= &si * &v[i];
        s[i] = si;
    }
    s[0] = rest / &v[0];
    Some(s)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let ext = a.extended_gcd(m);
    ext.x.mod_floor(m)
}

/// Whether every `n_i v_i` already lies in `<v_0, ..., v_{i-1}>`, which makes
/// the `s_0 >= 0` membership test exact.
fn is_telescopic(v: &[BigInt], e: &[BigInt], n: &[BigInt]) -> bool {
    (1..v.len()).all(|i| {
        let target = &n[i] * &v[i];
        let prefix = &v[..i];
        let (pe, pn) = (&e[..i], &n[..i]);
        match representation_in(prefix, pe, pn, &target) {
            Some(s) => !s[0].is_negative(),
            None => false,
        }
    })
}

/// Membership in the semigroup generated by arbitrary positive integers,
/// through shortest paths on residues modulo the smallest generator.
fn apery_distances(gens: &[BigInt]) -> Result<Vec<Option<BigInt>>, SemigroupError> {
    let a = gens.iter().min().ok_or(SemigroupError::Empty)?;
    let m = a
        .to_usize()
        .filter(|m| *m <= 10_000_000)
        .ok_or_else(|| SemigroupError::TooLarge(a.clone()))?;
    let steps: Vec<(usize, BigInt)> = gens
        .iter()
        .map(|g| ((g % a).to_usize().unwrap(), g.clone()))
        .collect();
    let mut dist: Vec<Option<BigInt>> = vec![None; m];
    dist[0] = Some(BigInt::zero());
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((BigInt::zero(), 0usize)));
    while let Some(Reverse((d, r))) = heap.pop() {
        if dist[r].as_ref() != Some(&d) {
            continue;
        }
        for (step, g) in &steps {
            let nr = (r + step) % m;
            let nd = &d + g;
            if dist[nr].as_ref().is_none_or(|old| nd < *old) {
                dist[nr] = Some(nd.clone());
                heap.push(Reverse((nd, nr)));
            }
        }
    }
    Ok(dist)
}

fn generated_contains(gens: &[BigInt], z: &BigInt) -> Result<bool, SemigroupError> {
    if z.is_negative() {
        return Ok(false);
    }
    if z.is_zero() {
        return Ok(true);
    }
    if gens.is_empty() {
        return Ok(false);
    }
    let (e, n) = gcd_sequence(gens);
    if is_telescopic(gens, &e, &n) {
        return Ok(representation_in(gens, &e, &n, z).is_some_and(|s| !s[0].is_negative()));
    }
    let a = gens.iter().min().unwrap();
    let dist = apery_distances(gens)?;
    let r = (z % a).to_usize().unwrap();
    Ok(dist[r].as_ref().is_some_and(|d| d <= z))
}

/// A numerical semigroup given by its minimal generators `v_0 < ... < v_g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    generators: Vec<BigInt>,
    e: Vec<BigInt>,
    n: Vec<BigInt>,
    telescopic: bool,
}

impl NumericalSemigroup {
    /// Sorts, removes duplicates and drops generators expressible by the
    /// others. The generators must be positive with gcd 1.
    pub fn new<I, T>(generators: I) -> Result<Self, SemigroupError>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut gens: Vec<BigInt> = generators.into_iter().map(Into::into).collect();
        if gens.is_empty() {
            return Err(SemigroupError::Empty);
        }
        if let Some(bad) = gens.iter().find(|g| !g.is_positive()) {
            return Err(SemigroupError::NonPositive(bad.clone()));
        }
        gens.sort();
        gens.dedup();
        let gcd = gens.iter().fold(BigInt::zero(), |acc, g| acc.gcd(g));
        if !gcd.is_one() {
            return Err(SemigroupError::GcdNotOne(gcd));
        }
        let mut minimal: Vec<BigInt> = Vec::new();
        for g in gens {
            if !generated_contains(&minimal, &g)? {
                minimal.push(g);
            }
        }
        let (e, n) = gcd_sequence(&minimal);
        let telescopic = is_telescopic(&minimal, &e, &n);
        Ok(NumericalSemigroup {
            generators: minimal,
            e,
            n,
            telescopic,
        })
    }

    pub fn from_small(generators: &[usize]) -> Result<Self, SemigroupError> {
        Self::new(generators.iter().map(|g| BigInt::from(*g)))
    }

    pub fn generators(&self) -> &[BigInt] {
        &self.generators
    }

    /// `g`, the number of generators minus one.
    pub fn genus_index(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn multiplicity(&self) -> &BigInt {
        &self.generators[0]
    }

    /// `e_0, ..., e_g`.
    pub fn gcds(&self) -> &[BigInt] {
        &self.e
    }

    /// `n_0 = 1, n_1, ..., n_g`.
    pub fn ratios(&self) -> &[BigInt] {
        &self.n
    }

    pub fn is_plane_branch(&self) -> bool {
        is_plane_branch_semigroup(&self.generators).is_ok()
    }

    pub fn plane_branch_check(&self) -> Result<(), PlaneBranchViolation> {
        is_plane_branch_semigroup(&self.generators)
    }

    /// The representation `(s_0, ..., s_g)` with `0 <= s_i < n_i` for `i >= 1`.
    pub fn representation(&self, z: &BigInt) -> Vec<BigInt> {
        // gcd is 1, so every integer has one.
        representation_in(&self.generators, &self.e, &self.n, z).expect("e_g = 1")
    }

    /// `(is_member, representation)`.
    pub fn membership(&self, z: &BigInt) -> (bool, Vec<BigInt>) {
        let s = self.representation(z);
        let member = if self.telescopic {
            !s[0].is_negative()
        } else {
            generated_contains(&self.generators, z).unwrap_or(false)
        };
        (member, s)
    }

    pub fn contains(&self, z: &BigInt) -> bool {
        self.membership(z).0
    }

    pub fn contains_small(&self, z: usize) -> bool {
        self.contains(&BigInt::from(z))
    }

    /// Least `c` with `c + N` inside the semigroup; 0 for `<1>`.
    ///
    /// Panics when the semigroup is not telescopic and its multiplicity
    /// exceeds the residue table limit; see [`Self::checked_conductor`].
    pub fn conductor(&self) -> BigInt {
        self.checked_conductor().expect("multiplicity fits in memory")
    }

    pub fn checked_conductor(&self) -> Result<BigInt, SemigroupError> {
        if self.telescopic {
            let mut sum = -self.generators[0].clone() + BigInt::one();
            for i in 1..self.generators.len() {
                sum += (&self.n[i] - BigInt::one()) * &self.generators[i];
            }
            return Ok(sum);
        }
        // Frobenius number + 1 from the Apery set of the multiplicity.
        let dist = apery_distances(&self.generators)?;
        let max = dist.into_iter().flatten().max().unwrap();
        Ok(max - &self.generators[0] + BigInt::one())
    }

    /// Apery set of `Gamma \ {0}` with respect to `v_0`, sorted.
    pub fn gamma_star_apery(&self) -> Result<Vec<BigInt>, SemigroupError> {
        let v0 = self.multiplicity().clone();
        let count = v0
            .to_usize()
            .filter(|c| *c <= 10_000_000)
            .ok_or_else(|| SemigroupError::TooLarge(v0.clone()))?;
        let mut out = Vec::with_capacity(count);
        if self.telescopic {
            // {v_0} together with sum_{i>=1} s_i v_i, 0 <= s_i < n_i, not all zero.
            let mut acc = vec![BigInt::zero()];
            for i in 1..self.generators.len() {
                let ni = self.n[i].to_usize().unwrap();
                let mut next = Vec::with_capacity(acc.len() * ni);
                for a in &acc {
                    for s in 0..ni {
                        next.push(a + BigInt::from(s) * &self.generators[i]);
                    }
                }
                acc = next;
            }
            out.push(v0);
            out.extend(acc.into_iter().filter(|a| !a.is_zero()));
        } else {
            let dist = apery_distances(&self.generators)?;
            out.push(v0.clone());
            out.extend(dist.into_iter().skip(1).flatten());
        }
        out.sort();
        Ok(out)
    }

    /// Generators as machine integers, for explicit enumerations.
    pub fn small_generators(&self) -> Result<Vec<usize>, SemigroupError> {
        self.generators
            .iter()
            .map(|g| g.to_usize().ok_or_else(|| SemigroupError::TooLarge(g.clone())))
            .collect()
    }

    pub fn small_conductor(&self) -> Result<usize, SemigroupError> {
        let c = self.conductor();
        c.to_usize().ok_or(SemigroupError::TooLarge(c))
    }

    /// Membership indicator of `0 .. bound`.
    pub fn indicator(&self, bound: usize) -> Result<Vec<bool>, SemigroupError> {
        let gens = self.small_generators()?;
        let mut member = vec![false; bound];
        if bound > 0 {
            member[0] = true;
        }
        for z in 1..bound {
            member[z] = gens.iter().any(|g| *g <= z && member[z - g]);
        }
        Ok(member)
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gens.join(","))
    }
}

impl fmt::Debug for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumericalSemigroup{}", self)
    }
}

/// Representation with respect to a prefix `v_0, ..., v_k` of a plane-branch
/// generator sequence (so `gcd` may exceed 1). `None` if `z` is not in the
/// generated semigroup.
pub fn small_representation(gens: &[usize], z: usize) -> Option<Vec<usize>> {
    let big: Vec<BigInt> = gens.iter().map(|g| BigInt::from(*g)).collect();
    let (e, n) = gcd_sequence(&big);
    let s = representation_in(&big, &e, &n, &BigInt::from(z))?;
    if s[0].is_negative() {
        return None;
    }
    Some(s.iter().map(|x| x.to_usize().unwrap()).collect())
}

/// An increasing sequence `beta_0 < ... < beta_g` of characteristic exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacteristicSequence {
    exponents: Vec<BigInt>,
}

impl CharacteristicSequence {
    pub fn new<I, T>(exponents: I) -> Result<Self, SemigroupError>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let exponents: Vec<BigInt> = exponents.into_iter().map(Into::into).collect();
        if exponents.is_empty() {
            return Err(SemigroupError::Empty);
        }
        let mut e = exponents[0].clone();
        if !e.is_positive() {
            return Err(SemigroupError::NonPositive(e));
        }
        for i in 1..exponents.len() {
            if exponents[i] <= exponents[i - 1] {
                return Err(SemigroupError::InvalidCharacteristic(format!(
                    "beta_{i} = {} is not above beta_{} = {}",
                    exponents[i],
                    i - 1,
                    exponents[i - 1]
                )));
            }
            if exponents[i].is_multiple_of(&e) {
                return Err(SemigroupError::InvalidCharacteristic(format!(
                    "e_{} = {e} divides beta_{i} = {}",
                    i - 1,
                    exponents[i]
                )));
            }
            e = e.gcd(&exponents[i]);
        }
        if !e.is_one() {
            return Err(SemigroupError::InvalidCharacteristic(format!("e_g = {e}, not 1")));
        }
        Ok(CharacteristicSequence { exponents })
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    pub fn gcds(&self) -> Vec<BigInt> {
        gcd_sequence(&self.exponents).0
    }
}

/// `v_0 = beta_0`, `v_i = n_{i-1} v_{i-1} + beta_i - beta_{i-1}`.
pub fn semigroup_from_characteristic(beta: &CharacteristicSequence) -> NumericalSemigroup {
    let b = beta.exponents();
    let (_, n) = gcd_sequence(b);
    let mut v: Vec<BigInt> = vec![b[0].clone()];
    for i in 1..b.len() {
        let vi = &n[i - 1] * &v[i - 1] + &b[i] - &b[i - 1];
        v.push(vi);
    }
    let (e, n) = gcd_sequence(&v);
    let telescopic = is_telescopic(&v, &e, &n);
    NumericalSemigroup {
        generators: v,
        e,
        n,
        telescopic,
    }
}

/// Inverse of [`semigroup_from_characteristic`].
pub fn characteristic_from_semigroup(
    gamma: &NumericalSemigroup,
) -> Result<CharacteristicSequence, SemigroupError> {
    gamma
        .plane_branch_check()
        .map_err(SemigroupError::NotPlaneBranch)?;
    let v = gamma.generators();
    let n = gamma.ratios();
    let mut beta = vec![v[0].clone()];
    for i in 1..v.len() {
        let b = &v[i] - &n[i - 1] * &v[i - 1] + &beta[i - 1];
        beta.push(b);
    }
    CharacteristicSequence::new(beta)
}
