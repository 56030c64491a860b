//! JSON exchange formats. Rationals are always strings such as `"29/18"`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::branch::{BranchError, PuiseuxParametrization};
use crate::decider::{Decision, Evidence};
use crate::forms::{FormValueBasis, OneForm};
use crate::poly::Polynomial;
use crate::ring::{parse_rational, rational_to_string, Rational, Ring};
use crate::semigroup::{characteristic_from_semigroup, NumericalSemigroup};
use crate::strata::{Stratification, StratumStatus};
use crate::valueset::{AperyProfile, ValueSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JsonError {
    #[error("{0}")]
    Rational(String),
    #[error("unknown coordinate {0:?}")]
    Coordinate(String),
    #[error("malformed polynomial term {0}")]
    Term(String),
    #[error(transparent)]
    Branch(#[from] BranchError),
}

/// Integers as JSON numbers when they fit in 64 bits, as strings otherwise.
pub fn big_to_json(n: &BigInt) -> Value {
    match n.to_u64() {
        Some(u) => json!(u),
        None => json!(n.to_string()),
    }
}

fn terms_to_json(terms: &[(usize, Rational)]) -> Vec<(usize, String)> {
    terms.iter().map(|(k, c)| (*k, rational_to_string(c))).collect()
}

fn terms_from_json(terms: &[(usize, String)]) -> Result<Vec<(usize, Rational)>, JsonError> {
    terms
        .iter()
        .map(|(k, c)| Ok((*k, parse_rational(c).map_err(JsonError::Rational)?)))
        .collect()
}

/// `{"n": 6, "y": [[9, "1"], [10, "1"]], "extra": []}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchJson {
    pub n: usize,
    pub y: Vec<(usize, String)>,
    #[serde(default)]
    pub extra: Vec<Vec<(usize, String)>>,
}

impl BranchJson {
    pub fn from_branch(phi: &PuiseuxParametrization<Rational>) -> Self {
        BranchJson {
            n: phi.n(),
            y: terms_to_json(phi.y_terms()),
            extra: phi.extra().iter().map(|z| terms_to_json(z)).collect(),
        }
    }

    pub fn to_branch(&self) -> Result<PuiseuxParametrization<Rational>, JsonError> {
        let extra = self
            .extra
            .iter()
            .map(|z| terms_from_json(z))
            .collect::<Result<_, _>>()?;
        Ok(PuiseuxParametrization::with_extra(
            self.n,
            terms_from_json(&self.y)?,
            extra,
        )?)
    }
}

fn coordinate_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        k => format!("x{k}"),
    }
}

fn coordinate_index(name: &str) -> Result<usize, JsonError> {
    match name {
        "x" => Ok(0),
        "y" => Ok(1),
        "z" => Ok(2),
        _ => name
            .strip_prefix('x')
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| JsonError::Coordinate(name.into())),
    }
}

/// `{"d": [["x", [[0, 1, "-3"]]], ["y", [[1, 0, "2"]]]]}`: each polynomial is
/// a list of `[e_x, e_y, ..., coefficient]` terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneFormJson {
    pub d: Vec<(String, Vec<Vec<Value>>)>,
}

impl OneFormJson {
    pub fn from_form(omega: &OneForm<Rational>) -> Self {
        let width = omega
            .coeffs
            .iter()
            .map(|c| c.num_vars())
            .max()
            .unwrap_or(0)
            .max(omega.coeffs.len())
            .max(2);
        let d = omega
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let terms = c
                    .terms()
                    .map(|(m, q)| {
                        let mut row: Vec<Value> = (0..width)
                            .map(|k| json!(m.get(k).copied().unwrap_or(0)))
                            .collect();
                        row.push(json!(rational_to_string(q)));
                        row
                    })
                    .collect();
                (coordinate_name(i), terms)
            })
            .collect();
        OneFormJson { d }
    }

    pub fn to_form(&self) -> Result<OneForm<Rational>, JsonError> {
        let mut coeffs: Vec<Polynomial<Rational>> = Vec::new();
        for (name, terms) in &self.d {
            let i = coordinate_index(name)?;
            while coeffs.len() <= i {
                coeffs.push(Polynomial::zero());
            }
            let mut p = Polynomial::zero();
            for t in terms {
                let (last, exps) = t
                    .split_last()
                    .ok_or_else(|| JsonError::Term(json!(t).to_string()))?;
                let c = match last {
                    Value::String(s) => parse_rational(s).map_err(JsonError::Rational)?,
                    Value::Number(n) if n.is_i64() => Rational::from_int(n.as_i64().unwrap()),
                    _ => return Err(JsonError::Term(json!(t).to_string())),
                };
                let m: Vec<u32> = exps
                    .iter()
                    .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| JsonError::Term(json!(t).to_string()))?;
                p = p.add(&Polynomial::monomial(m, c));
            }
            coeffs[i] = coeffs[i].add(&p);
        }
        Ok(OneForm::new(coeffs))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupJson {
    pub generators: Vec<Value>,
    pub e: Vec<Value>,
    pub n: Vec<Value>,
    pub conductor: Option<Value>,
    pub characteristic: Option<Vec<Value>>,
    pub apery: Option<Vec<Value>>,
    pub plane_branch: bool,
    pub reason: Option<String>,
}

impl SemigroupJson {
    pub fn from_semigroup(gamma: &NumericalSemigroup) -> Self {
        let list = |v: &[BigInt]| v.iter().map(big_to_json).collect::<Vec<_>>();
        let check = gamma.plane_branch_check();
        SemigroupJson {
            generators: list(gamma.generators()),
            e: list(gamma.gcds()),
            n: list(gamma.ratios()),
            conductor: gamma.checked_conductor().ok().map(|c| big_to_json(&c)),
            characteristic: characteristic_from_semigroup(gamma)
                .ok()
                .map(|c| list(c.exponents())),
            apery: gamma.gamma_star_apery().ok().map(|a| list(&a)),
            plane_branch: check.is_ok(),
            reason: check.err().map(|r| r.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoverJson {
    pub apery: Vec<usize>,
    pub epsilon: Vec<usize>,
    pub eta: Vec<usize>,
    pub b: Vec<Vec<usize>>,
    pub candidates: Vec<usize>,
    pub recovered: Vec<usize>,
    pub plane_branch: bool,
}

impl RecoverJson {
    pub fn new(profile: &AperyProfile, recovered: &NumericalSemigroup) -> Self {
        RecoverJson {
            apery: profile.apery.clone(),
            epsilon: profile.epsilon.clone(),
            eta: profile.eta.clone(),
            b: profile.b.clone(),
            candidates: profile.candidates.clone(),
            recovered: recovered.small_generators().unwrap_or_default(),
            plane_branch: recovered.is_plane_branch(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisElementJson {
    pub value: usize,
    pub form: Option<OneFormJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaJson {
    pub gamma: Vec<usize>,
    pub conductor: usize,
    pub lambda: ValueSet,
    pub lambda_minus_gamma: Vec<usize>,
    pub minimal_basis: Vec<BasisElementJson>,
    pub precision: usize,
}

impl LambdaJson {
    pub fn from_basis(b: &FormValueBasis<Rational>) -> Self {
        LambdaJson {
            gamma: b.gamma.small_generators().unwrap_or_default(),
            conductor: b.conductor,
            lambda: b.lambda.clone(),
            lambda_minus_gamma: b.lambda_minus_gamma(),
            minimal_basis: b
                .minimal
                .iter()
                .map(|i| BasisElementJson {
                    value: b.elements[*i].value,
                    form: b.elements[*i].form.as_ref().map(OneFormJson::from_form),
                })
                .collect(),
            precision: b.precision,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionJson {
    pub verdict: String,
    pub stage: String,
    pub evidence: Value,
    pub semigroup: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BranchJson>,
}

fn evidence_json(e: &Evidence) -> Value {
    let text = e.to_string();
    match e {
        Evidence::UncoveredElement(w) => json!({"kind": "uncovered-element", "element": w, "text": text}),
        Evidence::Inequality {
            index,
            u,
            eta,
            previous,
        } => json!({
            "kind": "inequality",
            "index": index,
            "max_b": u,
            "bound": eta * previous,
            "text": text
        }),
        Evidence::ShortDelta {
            index,
            needed,
            available,
        } => {
            json!({"kind": "short-delta", "index": index, "needed": needed, "available": available, "text": text})
        }
        Evidence::NoStratum {
            semigroup,
            attainable,
        } => json!({"kind": "no-stratum", "semigroup": semigroup, "attainable": attainable, "text": text}),
        Evidence::UnresolvedStrata {
            semigroup,
            unresolved,
        } => {
            json!({"kind": "unresolved-strata", "semigroup": semigroup, "unresolved": unresolved, "text": text})
        }
        Evidence::Witness => json!({"kind": "witness", "text": text}),
    }
}

impl DecisionJson {
    pub fn from_decision(d: &Decision) -> Self {
        DecisionJson {
            verdict: d.verdict.as_str().into(),
            stage: d.stage.as_str().into(),
            evidence: evidence_json(&d.evidence),
            semigroup: d.semigroup.clone(),
            witness: d.witness.as_ref().map(BranchJson::from_branch),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintsJson {
    pub eq: Vec<String>,
    pub neq: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratumJson {
    pub constraints: ConstraintsJson,
    pub lambda: Option<ValueSet>,
    pub lambda_minus_gamma: Option<Vec<usize>>,
    pub witness: Option<BTreeMap<String, String>>,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub exponents: Vec<usize>,
    pub normalized: Option<usize>,
    pub parameters: Vec<String>,
    pub nonzero: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratificationJson {
    pub gamma: Vec<usize>,
    pub family: FamilyJson,
    pub strata: Vec<StratumJson>,
    /// Distinct `Lambda` over resolved strata.
    pub lambdas: Vec<ValueSet>,
    pub splits: usize,
}

impl StratificationJson {
    pub fn from_stratification(s: &Stratification) -> Self {
        let names = s.family.names();
        let gamma = &s.family.gamma;
        let strata = s
            .strata
            .iter()
            .map(|st| {
                let c = &st.constraints;
                let mut eq: Vec<String> = c.equalities().iter().map(|p| p.display_with(&names)).collect();
                eq.extend(c.unresolved().iter().map(|p| p.display_with(&names)));
                let neq = c.disequalities().iter().map(|p| p.display_with(&names)).collect();
                let witness = st.witness.as_ref().map(|w| {
                    let mut m: BTreeMap<String, String> = names
                        .iter()
                        .zip(w)
                        .map(|(a, q)| (a.clone(), rational_to_string(q)))
                        .collect();
                    if let Some(e) = s.family.normalized {
                        m.insert(format!("a{e}"), "1".into());
                    }
                    m
                });
                let (status, reason) = match &st.status {
                    StratumStatus::Resolved => ("resolved".to_string(), None),
                    StratumStatus::Unresolved(r) => ("unresolved".to_string(), Some(r.clone())),
                };
                StratumJson {
                    constraints: ConstraintsJson { eq, neq },
                    lambda: st.lambda.clone(),
                    lambda_minus_gamma: st.lambda.as_ref().map(|l| l.minus_semigroup(gamma)),
                    witness,
                    status,
                    reason,
                }
            })
            .collect();
        StratificationJson {
            gamma: gamma.small_generators().unwrap_or_default(),
            family: FamilyJson {
                exponents: s.family.exponents.clone(),
                normalized: s.family.normalized,
                parameters: names.clone(),
                nonzero: s.family.nonzero.iter().map(|e| format!("a{e}")).collect(),
            },
            strata,
            lambdas: s.distinct_lambdas(),
            splits: s.splits,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn branch_roundtrip() {
        let j = r#"{"n": 6, "y": [[9,"1"],[10,"1"],[11,"-1/2"]], "extra": []}"#;
        let b: BranchJson = serde_json::from_str(j).unwrap();
        let phi = b.to_branch().unwrap();
        assert_eq!(phi.y_terms()[2], (11, rat(-1, 2)));
        assert_eq!(BranchJson::from_branch(&phi), b);
        let no_extra: BranchJson = serde_json::from_str(r#"{"n":2,"y":[[3,"1"]]}"#).unwrap();
        assert!(no_extra.extra.is_empty());
        let bad: BranchJson = serde_json::from_str(r#"{"n":2,"y":[[3,"x"]]}"#).unwrap();
        assert!(bad.to_branch().is_err());
    }

    #[test]
    fn form_roundtrip() {
        let j = r#"{"d": [["x", [[0, 1, "-3"]]], ["y", [[1, 0, "2"]]]]}"#;
        let f: OneFormJson = serde_json::from_str(j).unwrap();
        let w = f.to_form().unwrap();
        assert_eq!(w.coeffs[0], Polynomial::var(1).scale(&rat(-3, 1)));
        assert_eq!(OneFormJson::from_form(&w), f);
        let z: OneFormJson = serde_json::from_str(r#"{"d": [["z", [[0, 0, 1]]]]}"#).unwrap();
        assert_eq!(z.to_form().unwrap().coeffs.len(), 3);
        let bad: OneFormJson = serde_json::from_str(r#"{"d": [["q", []]]}"#).unwrap();
        assert!(bad.to_form().is_err());
    }

    #[test]
    fn semigroup_json() {
        let g = NumericalSemigroup::from_small(&[6, 9, 19]).unwrap();
        let j = serde_json::to_value(SemigroupJson::from_semigroup(&g)).unwrap();
        assert_eq!(j["conductor"], json!(42));
        assert_eq!(j["apery"], json!([6, 9, 19, 28, 38, 47]));
        assert_eq!(j["characteristic"], json!([6, 9, 10]));
        let big = NumericalSemigroup::new([BigInt::from(2), BigInt::from(10u64).pow(25) + 1]).unwrap();
        let j = serde_json::to_value(SemigroupJson::from_semigroup(&big)).unwrap();
        assert_eq!(j["conductor"], json!("10000000000000000000000000"));
    }
}
