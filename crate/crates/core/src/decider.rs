//! Decides whether a cofinite set is the value set of 1-forms of a plane
//! branch.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::branch::PuiseuxParametrization;
use crate::forms::{lambda_of, FormsError};
use crate::ring::Rational;
use crate::semigroup::NumericalSemigroup;
use crate::strata::{stratify, StrataError, Stratification, StratifyOptions, StratumStatus};
use crate::valueset::{ValueSet, ValueSetError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecideError {
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    ValueSet(#[from] ValueSetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    NotCovered,
    EtaOrBresinskyFailed,
    NoMatchingStratum,
    Matched,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unresolved => "unresolved",
        }
    }
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::NotCovered => "not-covered",
            Stage::EtaOrBresinskyFailed => "eta-or-bresinsky-failed",
            Stage::NoMatchingStratum => "no-matching-stratum",
            Stage::Matched => "matched",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// An element of `U (a_j + N a_0)` missing from the set.
    UncoveredElement(usize),
    /// `max B_i <= eta_{i-1} max B_{i-1}`.
    Inequality {
        index: usize,
        u: usize,
        eta: usize,
        previous: usize,
    },
    /// Some `Delta_i` is smaller than `epsilon_0 / epsilon_{i-1}`.
    ShortDelta {
        index: usize,
        needed: usize,
        available: usize,
    },
    /// Every attainable `Lambda` of the recovered semigroup differs.
    NoStratum {
        semigroup: Vec<usize>,
        attainable: usize,
    },
    /// Some strata could not be resolved and none of the others matched.
    UnresolvedStrata {
        semigroup: Vec<usize>,
        unresolved: usize,
    },
    Witness,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::UncoveredElement(w) => {
                write!(f, "{w} lies in the Apéry progressions but not in the set")
            }
            Evidence::Inequality {
                index,
                u,
                eta,
                previous,
            } => {
                let rhs = eta * previous;
                let rel = if *u < rhs { "<" } else { "=" };
                write!(
                    f,
                    "{u} = max(B_{index}) {rel} eta_{}*max(B_{}) = {rhs}",
                    index - 1,
                    index - 1
                )
            }
            Evidence::ShortDelta {
                index,
                needed,
                available,
            } => write!(f, "Delta_{index} has {available} elements, {needed} needed"),
            Evidence::NoStratum {
                semigroup,
                attainable,
            } => write!(
                f,
                "none of the {attainable} value sets attainable for <{}> matches",
                join(semigroup)
            ),
            Evidence::UnresolvedStrata {
                semigroup,
                unresolved,
            } => write!(
                f,
                "{unresolved} strata of <{}> are unresolved and no resolved stratum matches",
                join(semigroup)
            ),
            Evidence::Witness => write!(f, "witness branch reproduces the set"),
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub verdict: Verdict,
    pub stage: Stage,
    pub evidence: Evidence,
    /// `<max B_0, ..., max B_rho>` when the second gate was reached.
    pub semigroup: Option<Vec<usize>>,
    pub witness: Option<PuiseuxParametrization<Rational>>,
}

type CacheKey = (Vec<usize>, usize, u64, Option<usize>);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Stratification>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Stratification>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Stratification of `gamma`, memoized per process.
pub fn cached_stratify(
    gamma: &NumericalSemigroup,
    options: &StratifyOptions,
) -> Result<Arc<Stratification>, StrataError> {
    let key = (
        gamma.small_generators()?,
        options.max_splits,
        options.seed,
        options.precision,
    );
    if let Some(s) = cache().lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let s = Arc::new(stratify(gamma, options)?);
    cache().lock().unwrap().insert(key, s.clone());
    Ok(s)
}

pub fn decide(set: &ValueSet, options: &StratifyOptions) -> Result<Decision, DecideError> {
    let cov = set.is_covered();
    if !cov.covered {
        return Ok(Decision {
            verdict: Verdict::No,
            stage: Stage::NotCovered,
            evidence: Evidence::UncoveredElement(cov.witness.unwrap_or(0)),
            semigroup: None,
            witness: None,
        });
    }
    if *set == ValueSet::positive_integers() {
        return Ok(Decision {
            verdict: Verdict::Yes,
            stage: Stage::Matched,
            evidence: Evidence::Witness,
            semigroup: Some(vec![1]),
            witness: Some(PuiseuxParametrization::new(1, Vec::new()).expect("smooth branch")),
        });
    }
    let profile = match set.profile() {
        Ok(p) => p,
        Err(ValueSetError::DeltaTooSmall {
            index,
            needed,
            available,
        }) => {
            return Ok(Decision {
                verdict: Verdict::No,
                stage: Stage::EtaOrBresinskyFailed,
                evidence: Evidence::ShortDelta {
                    index,
                    needed,
                    available,
                },
                semigroup: None,
                witness: None,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let u = profile.candidates.clone();
    let eta = &profile.eta;
    for i in 2..u.len() {
        if eta[i - 1] * u[i - 1] >= u[i] {
            return Ok(Decision {
                verdict: Verdict::No,
                stage: Stage::EtaOrBresinskyFailed,
                evidence: Evidence::Inequality {
                    index: i,
                    u: u[i],
                    eta: eta[i - 1],
                    previous: u[i - 1],
                },
                semigroup: Some(u),
                witness: None,
            });
        }
    }
    let gamma = NumericalSemigroup::from_small(&u).map_err(ValueSetError::from)?;
    let strata = cached_stratify(&gamma, options)?;
    for s in &strata.strata {
        if s.status != StratumStatus::Resolved || s.lambda.as_ref() != Some(set) {
            continue;
        }
        let Some(branch) = s.witness_branch(&strata.family) else {
            continue;
        };
        if lambda_of(&branch)?.lambda == *set {
            return Ok(Decision {
                verdict: Verdict::Yes,
                stage: Stage::Matched,
                evidence: Evidence::Witness,
                semigroup: Some(u),
                witness: Some(branch),
            });
        }
    }
    let unresolved = strata
        .strata
        .iter()
        .filter(|s| s.status != StratumStatus::Resolved)
        .count();
    if unresolved > 0 {
        return Ok(Decision {
            verdict: Verdict::Unresolved,
            stage: Stage::NoMatchingStratum,
            evidence: Evidence::UnresolvedStrata {
                semigroup: u.clone(),
                unresolved,
            },
            semigroup: Some(u),
            witness: None,
        });
    }
    Ok(Decision {
        verdict: Verdict::No,
        stage: Stage::NoMatchingStratum,
        evidence: Evidence::NoStratum {
            semigroup: u.clone(),
            attainable: strata.distinct_lambdas().len(),
        },
        semigroup: Some(u),
        witness: None,
    })
}
