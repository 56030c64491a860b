//! Cofinite subsets of the positive integers and their Apéry arithmetic.
//!
//! A [`ValueSet`] is stored as the sorted list of its elements below a
//! threshold `cofinal`, every integer `>= cofinal` being a member. The form is
//! canonical (`cofinal - 1` is never a member), so structural equality is set
//! equality.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semigroup::{NumericalSemigroup, SemigroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValueSetError {
    #[error("0 cannot belong to a value set")]
    ContainsZero,
    #[error("set is not covered by its Apéry set (witness {witness})")]
    NotCovered { witness: usize },
    #[error("not Λ-shaped: Δ_{index} has {available} elements, {needed} are needed")]
    DeltaTooSmall {
        index: usize,
        needed: usize,
        available: usize,
    },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawValueSet")]
pub struct ValueSet {
    elements: Vec<usize>,
    cofinal: usize,
}

#[derive(Deserialize)]
struct RawValueSet {
    elements: Vec<usize>,
    cofinal: usize,
}

impl TryFrom<RawValueSet> for ValueSet {
    type Error = ValueSetError;
    fn try_from(raw: RawValueSet) -> Result<Self, Self::Error> {
        ValueSet::new(raw.elements, raw.cofinal)
    }
}

impl ValueSet {
    /// Canonicalizes: drops listed elements `>= cofinal`, lowers `cofinal`
    /// while `cofinal - 1` is listed.
    pub fn new<I: IntoIterator<Item = usize>>(elements: I, cofinal: usize) -> Result<Self, ValueSetError> {
        let mut elements: Vec<usize> = elements.into_iter().filter(|e| *e < cofinal).collect();
        if cofinal == 0 || elements.contains(&0) {
            return Err(ValueSetError::ContainsZero);
        }
        elements.sort_unstable();
        elements.dedup();
        let mut cofinal = cofinal;
        while elements.last() == Some(&(cofinal - 1)) {
            elements.pop();
            cofinal -= 1;
        }
        Ok(ValueSet { elements, cofinal })
    }

    /// `N \ {0}`.
    pub fn positive_integers() -> Self {
        ValueSet {
            elements: Vec::new(),
            cofinal: 1,
        }
    }

    /// The set `{n >= 1 : member[n]}` together with `[member.len(), inf)`.
    pub fn from_indicator(member: &[bool]) -> Result<Self, ValueSetError> {
        if member.first() == Some(&true) {
            return Err(ValueSetError::ContainsZero);
        }
        let elements = (1..member.len()).filter(|n| member[*n]);
        Self::new(elements, member.len().max(1))
    }

    /// `Gamma \ {0}`.
    pub fn gamma_star(gamma: &NumericalSemigroup) -> Result<Self, ValueSetError> {
        let c = gamma.small_conductor()?.max(1);
        let ind = gamma.indicator(c)?;
        let elements = (1..c).filter(|n| ind[*n]);
        Self::new(elements, c)
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn cofinal(&self) -> usize {
        self.cofinal
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= self.cofinal || self.elements.binary_search(&n).is_ok()
    }

    pub fn min(&self) -> usize {
        self.elements.first().copied().unwrap_or(self.cofinal)
    }

    /// Positive integers not in the set.
    pub fn gaps(&self) -> Vec<usize> {
        (1..self.cofinal).filter(|n| !self.contains(*n)).collect()
    }

    /// Members below `bound`.
    pub fn members_below(&self, bound: usize) -> Vec<usize> {
        (1..bound).filter(|n| self.contains(*n)).collect()
    }

    /// Members of `self` that are not in `gamma`.
    pub fn minus_semigroup(&self, gamma: &NumericalSemigroup) -> Vec<usize> {
        let top = gamma.small_conductor().unwrap_or(usize::MAX).max(self.cofinal);
        (1..top)
            .filter(|n| self.contains(*n) && !gamma.contains_small(*n))
            .collect()
    }

    /// `a_0 < a_1 < ...`: the least member of every residue class mod `a_0`
    /// that the set meets.
    pub fn apery_set(&self) -> Vec<usize> {
        let a0 = self.min();
        let mut first: Vec<Option<usize>> = vec![None; a0];
        let mut missing = a0;
        let mut n = a0;
        while missing > 0 {
            if self.contains(n) && first[n % a0].is_none() {
                first[n % a0] = Some(n);
                missing -= 1;
            }
            n += 1;
        }
        let mut out: Vec<usize> = first.into_iter().flatten().collect();
        out.sort_unstable();
        out
    }

    /// Whether the set equals `U (a_j + N a_0)`; otherwise the least member
    /// of the union that is missing.
    pub fn is_covered(&self) -> Coverage {
        let ap = self.apery_set();
        let a0 = ap[0];
        let mut rep = vec![usize::MAX; a0];
        for a in &ap {
            rep[a % a0] = *a;
        }
        if ap.len() < a0 {
            return Coverage {
                covered: false,
                witness: None,
                apery_size: ap.len(),
            };
        }
        let witness = (a0..self.cofinal).find(|n| !self.contains(*n) && *n >= rep[n % a0]);
        Coverage {
            covered: witness.is_none(),
            witness,
            apery_size: ap.len(),
        }
    }

    /// Full Apéry profile; fails when the set is not covered.
    pub fn profile(&self) -> Result<AperyProfile, ValueSetError> {
        let apery = self.apery_set();
        let cov = self.is_covered();
        if !cov.covered {
            return Err(ValueSetError::NotCovered {
                witness: cov.witness.unwrap_or(0),
            });
        }
        let (epsilon, eta) = epsilon_eta_of(&apery);
        let b = b_sets_of(&apery, &epsilon)?;
        let candidates = b.iter().map(|s| *s.last().unwrap()).collect();
        Ok(AperyProfile {
            apery,
            epsilon,
            eta,
            b,
            candidates,
        })
    }

    /// `(epsilon, eta)` with `epsilon_0 = a_0 > ... > epsilon_rho = 1`.
    pub fn epsilon_eta(&self) -> Result<(Vec<usize>, Vec<usize>), ValueSetError> {
        self.require_covered()?;
        Ok(epsilon_eta_of(&self.apery_set()))
    }

    /// `B_0, ..., B_rho`, each sorted.
    pub fn b_sets(&self) -> Result<Vec<Vec<usize>>, ValueSetError> {
        self.require_covered()?;
        let ap = self.apery_set();
        let (eps, _) = epsilon_eta_of(&ap);
        b_sets_of(&ap, &eps)
    }

    /// `<max B_0, ..., max B_rho>`.
    pub fn recover_gamma(&self) -> Result<NumericalSemigroup, ValueSetError> {
        let p = self.profile()?;
        Ok(NumericalSemigroup::from_small(&p.candidates)?)
    }

    fn require_covered(&self) -> Result<(), ValueSetError> {
        let cov = self.is_covered();
        if cov.covered {
            Ok(())
        } else {
            Err(ValueSetError::NotCovered {
                witness: cov.witness.unwrap_or(0),
            })
        }
    }
}

/// `epsilon_i = gcd(epsilon_{i-1}, a)` for the least `a` in the sorted Apéry
/// set with `epsilon_{i-1} ∤ a`.
fn epsilon_eta_of(apery: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut eps = vec![apery[0]];
    let mut eta = vec![1];
    loop {
        let last = *eps.last().unwrap();
        let next = apery.iter().find(|a| *a % last != 0).map(|a| last.gcd(a));
        match next {
            Some(e) => {
                eta.push(last / e);
                eps.push(e);
            }
            None => break,
        }
    }
    (eps, eta)
}

fn b_sets_of(apery: &[usize], eps: &[usize]) -> Result<Vec<Vec<usize>>, ValueSetError> {
    let mut out = vec![vec![apery[0]]];
    for i in 1..eps.len() {
        let needed = eps[0] / eps[i - 1];
        let delta: Vec<usize> = apery
            .iter()
            .copied()
            .filter(|a| a % eps[i] == 0 && a % eps[i - 1] != 0)
            .collect();
        if delta.len() < needed {
            return Err(ValueSetError::DeltaTooSmall {
                index: i,
                needed,
                available: delta.len(),
            });
        }
        out.push(delta[..needed].to_vec());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub covered: bool,
    pub witness: Option<usize>,
    pub apery_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AperyProfile {
    pub apery: Vec<usize>,
    pub epsilon: Vec<usize>,
    pub eta: Vec<usize>,
    pub b: Vec<Vec<usize>>,
    /// `max B_i`.
    pub candidates: Vec<usize>,
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}} ∪ [{}, ∞)", els.join(","), self.cofinal)
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
