//! Shared corpus and brute-force oracles for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use planebranch::branch::{random_branch, random_nonzero, PuiseuxParametrization};
use planebranch::ring::{rat, Rational};
use planebranch::semigroup::NumericalSemigroup;

pub type Phi = PuiseuxParametrization<Rational>;

pub struct Entry {
    pub label: String,
    pub gamma: Vec<usize>,
    pub phi: Phi,
}

pub fn branch(n: usize, y: &[(usize, i64, i64)]) -> Phi {
    PuiseuxParametrization::new(n, y.iter().map(|(k, p, q)| (*k, rat(*p, *q))).collect()).unwrap()
}

/// The four representatives of the `<6,9,19>` table, in table order.
pub fn table_6919() -> Vec<Phi> {
    vec![
        branch(6, &[(9, 1, 1), (10, 1, 1)]),
        branch(6, &[(9, 1, 1), (10, 1, 1), (11, 29, 18)]),
        branch(6, &[(9, 1, 1), (10, 1, 1), (11, -1, 2)]),
        branch(6, &[(9, 1, 1), (10, 1, 1), (11, -1, 2), (17, 1, 38)]),
    ]
}

pub const TABLE_6919: [&[usize]; 4] = [
    &[16, 22, 26, 29, 32, 35, 41],
    &[16, 22, 26, 32, 35, 41],
    &[16, 22, 29, 32, 35, 41],
    &[16, 22, 29, 35, 41],
];

pub fn corpus_semigroups() -> Vec<Vec<usize>> {
    let mut v = vec![vec![2, 3], vec![2, 5], vec![3, 4], vec![4, 6, 13], vec![6, 9, 19]];
    for k in 7..=10 {
        v.push(vec![4, 6, 2 * k + 1]);
    }
    v
}

/// 100 random branches spread over [`corpus_semigroups`], fixed seed.
pub fn random_corpus() -> Vec<Entry> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6919);
    let classes = corpus_semigroups();
    (0..100)
        .map(|i| {
            let gens = &classes[i % classes.len()];
            let gamma = NumericalSemigroup::from_small(gens).unwrap();
            let mu = gamma.small_conductor().unwrap();
            let density = [0.2, 0.5, 0.9][i % 3];
            let phi = random_branch(&gamma, mu + gens[0], density, &mut rng).unwrap();
            Entry {
                label: format!("random #{i} {gens:?}"),
                gamma: gens.clone(),
                phi,
            }
        })
        .collect()
}

/// Random corpus plus the table representatives.
pub fn full_corpus() -> Vec<Entry> {
    let mut v = random_corpus();
    for (i, phi) in table_6919().into_iter().enumerate() {
        v.push(Entry {
            label: format!("table row {}", i + 1),
            gamma: vec![6, 9, 19],
            phi,
        });
    }
    v
}

/// Dense series truncated below `len`, kept separate from the library series.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense(pub Vec<Rational>);

impl Dense {
    pub fn monomial(k: usize, c: Rational, len: usize) -> Self {
        let mut v = vec![Rational::zero(); len];
        if k < len {
            v[k] = c;
        }
        Dense(v)
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let len = self.0.len();
        let mut v = vec![Rational::zero(); len];
        for (i, a) in self.0.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in o.0.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Dense(v)
    }

    pub fn axpy(&mut self, c: &Rational, o: &Dense) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += c * b;
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }
}

/// `t * phi^*(x^a y^b dx)` and `t * phi^*(x^a y^b dy)` below `len`, for every
/// monomial whose pullback is nonzero below `len`.
pub struct Pullbacks {
    pub len: usize,
    /// `(a, b, phi^*(x^a y^b))`.
    pub functions: Vec<(usize, usize, Dense)>,
    pub dx: Dense,
    pub dy: Dense,
}

impl Pullbacks {
    pub fn new(phi: &Phi, len: usize) -> Self {
        let n = phi.n();
        let x = Dense::monomial(n, Rational::one(), len);
        let mut y = Dense(vec![Rational::zero(); len]);
        let mut ty = Dense(vec![Rational::zero(); len]);
        for (k, c) in phi.y_terms() {
            if *k < len {
                y.0[*k] += c;
                ty.0[*k] += c * Rational::from_integer((*k as i64).into());
            }
        }
        let dx = Dense::monomial(n, Rational::from_integer((n as i64).into()), len);
        let my = y.order().unwrap_or(len);
        let mut functions = Vec::new();
        let mut xa = Dense::monomial(0, Rational::one(), len);
        for a in 0.. {
            if a * n >= len {
                break;
            }
            let mut m = xa.clone();
            for b in 0.. {
                if a * n + b * my >= len || m.order().is_none() {
                    break;
                }
                functions.push((a, b, m.clone()));
                m = m.mul(&y);
            }
            xa = xa.mul(&x);
        }
        Pullbacks {
            len,
            functions,
            dx,
            dy: ty,
        }
    }

    pub fn form_rows(&self) -> Vec<Dense> {
        let mut rows = Vec::new();
        for (_, _, f) in &self.functions {
            rows.push(f.mul(&self.dx));
            rows.push(f.mul(&self.dy));
        }
        rows
    }

    pub fn function_rows(&self) -> Vec<Dense> {
        self.functions.iter().map(|(_, _, f)| f.clone()).collect()
    }

    /// Value below `len` of `A dx + B dy`, given as `(a, b, c)` terms.
    pub fn form_value(
        &self,
        a_terms: &[(usize, usize, Rational)],
        b_terms: &[(usize, usize, Rational)],
    ) -> Option<usize> {
        let mut total = Dense(vec![Rational::zero(); self.len]);
        for (terms, d) in [(a_terms, &self.dx), (b_terms, &self.dy)] {
            let mut poly = Dense(vec![Rational::zero(); self.len]);
            for (a, b, c) in terms {
                if let Some((_, _, f)) = self.functions.iter().find(|(x, y, _)| x == a && y == b) {
                    poly.axpy(c, f);
                }
            }
            total.axpy(&Rational::one(), &poly.mul(d));
        }
        total.order()
    }
}

/// Orders attained by nonzero vectors in the span of `rows`.
pub fn span_orders(rows: Vec<Dense>) -> BTreeSet<usize> {
    let mut pivots: Vec<Dense> = Vec::new();
    let mut orders = BTreeSet::new();
    for mut r in rows {
        while let Some(k) = r.order() {
            match pivots.iter().find(|p| p.order() == Some(k)) {
                Some(p) => {
                    let c = -(&r.0[k] / &p.0[k]);
                    r.axpy(&c, p);
                }
                None => {
                    orders.insert(k);
                    pivots.push(r);
                    break;
                }
            }
        }
    }
    orders
}

/// `(Gamma ∩ [0, mu), Lambda ∩ [1, mu))` by linear algebra on monomials.
pub fn echelon_oracle(phi: &Phi, mu: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let p = Pullbacks::new(phi, mu);
    (span_orders(p.function_rows()), span_orders(p.form_rows()))
}

/// A random sparse polynomial of degree at most `deg`, biased to low weight.
pub fn random_poly<G: Rng>(rng: &mut G, deg: usize, p: &Pullbacks) -> Vec<(usize, usize, Rational)> {
    let terms = rng.gen_range(1..=5);
    (0..terms)
        .map(|_| {
            let (a, b) = if rng.gen_bool(0.8) && !p.functions.is_empty() {
                let (a, b, _) = &p.functions[rng.gen_range(0..p.functions.len())];
                (*a, *b)
            } else {
                let a = rng.gen_range(0..=deg);
                (a, rng.gen_range(0..=deg - a))
            };
            let c = if rng.gen_bool(0.5) {
                Rational::one()
            } else {
                random_nonzero(rng)
            };
            (a, b, c)
        })
        .collect()
}
