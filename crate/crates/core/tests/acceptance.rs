mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use planebranch::branch::PuiseuxParametrization;
use planebranch::decider::{decide, Evidence, Stage, Verdict};
use planebranch::forms::{eval_form_order, eval_form_orders_multi, lambda_of, OneForm};
use planebranch::poly::Polynomial;
use planebranch::ring::{rat, Rational};
use planebranch::semigroup::NumericalSemigroup;
use planebranch::series::Order;
use planebranch::strata::{stratify, StratifyOptions, StratumStatus};
use planebranch::valueset::ValueSet;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn vs(el: &[usize], c: usize) -> ValueSet {
    ValueSet::new(el.iter().copied(), c).unwrap()
}

fn poly(terms: &[(u32, u32, i64)]) -> Polynomial<Rational> {
    terms.iter().fold(Polynomial::zero(), |p, (i, j, c)| {
        p.add(&Polynomial::monomial(vec![*i, *j], rat(*c, 1)))
    })
}

fn form(a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> OneForm<Rational> {
    OneForm::new(vec![poly(a), poly(b)])
}

fn table_rows() -> Check {
    let start = Instant::now();
    for (i, (phi, row)) in table_6919().iter().zip(TABLE_6919).enumerate() {
        let got = lambda_of(phi).map_err(|e| e.to_string())?.lambda_minus_gamma();
        ensure!(got == row, "row {}: {:?} != {:?}", i + 1, got, row);
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(5), "took {t:?}");
    Ok(format!("four rows bit-exact in {t:.2?}"))
}

fn stratification() -> Check {
    let start = Instant::now();
    let gamma = NumericalSemigroup::from_small(&[6, 9, 19]).unwrap();
    let s = stratify(&gamma, &StratifyOptions::default()).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let mut rows: Vec<Vec<usize>> = s
        .distinct_lambdas()
        .iter()
        .map(|l| l.minus_semigroup(&gamma))
        .collect();
    rows.sort();
    let mut expected: Vec<Vec<usize>> = TABLE_6919.iter().map(|r| r.to_vec()).collect();
    expected.sort();
    ensure!(rows == expected, "lambdas {rows:?}");
    for st in &s.strata {
        ensure!(st.status == StratumStatus::Resolved, "unresolved stratum");
        let phi = st.witness_branch(&s.family).ok_or("stratum without witness")?;
        let l = lambda_of(&phi).map_err(|e| e.to_string())?.lambda;
        ensure!(Some(&l) == st.lambda.as_ref(), "witness disagrees");
    }
    ensure!(t < Duration::from_secs(60), "took {t:?}");
    Ok(format!(
        "{} strata, 4 distinct Lambda, {} splits, {t:.2?}",
        s.strata.len(),
        s.splits
    ))
}

fn decisions() -> Check {
    let base = [6, 9, 12, 15, 16, 18, 21, 22, 24, 25];
    let with = |extra: &[usize]| {
        let mut v: Vec<usize> = base.to_vec();
        v.extend_from_slice(extra);
        vs(&v, 27)
    };
    let l1 = with(&[17]);
    let l2 = with(&[17, 23]);
    let l3 = with(&[19, 23]);
    let l4 = with(&[19]);
    let opts = StratifyOptions::default();
    let d: Vec<_> = [&l1, &l2, &l3, &l4]
        .iter()
        .map(|l| decide(l, &opts))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure!(
        (d[0].verdict, d[0].stage, &d[0].evidence)
            == (Verdict::No, Stage::NotCovered, &Evidence::UncoveredElement(23)),
        "L1: {:?}",
        d[0]
    );
    ensure!(
        d[1].verdict == Verdict::No && d[1].stage == Stage::EtaOrBresinskyFailed,
        "L2: {:?}",
        d[1]
    );
    ensure!(
        d[1].evidence.to_string() == "17 = max(B_2) < eta_1*max(B_1) = 18",
        "L2 evidence {}",
        d[1].evidence
    );
    ensure!(
        (d[2].verdict, d[2].stage) == (Verdict::No, Stage::NoMatchingStratum),
        "L3: {:?}",
        d[2]
    );
    ensure!(
        (d[3].verdict, d[3].stage) == (Verdict::Yes, Stage::Matched),
        "L4: {:?}",
        d[3]
    );
    let w = d[3].witness.as_ref().ok_or("no witness")?;
    ensure!(lambda_of(w).map_err(|e| e.to_string())?.lambda == l4, "witness");
    Ok("no@not-covered(23), no@gate-2(17 < 18), no@no-matching-stratum, yes".into())
}

fn recovery() -> Check {
    let start = Instant::now();
    let corpus = random_corpus();
    for e in &corpus {
        let l = lambda_of(&e.phi)
            .map_err(|err| format!("{}: {err}", e.label))?
            .lambda;
        let g = l.recover_gamma().map_err(|err| format!("{}: {err}", e.label))?;
        let expected = e.phi.semigroup().map_err(|err| err.to_string())?;
        ensure!(g == expected, "{}: recovered {g:?}", e.label);
        ensure!(g.small_generators().unwrap() == e.gamma, "{}: class", e.label);
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(120), "took {t:?}");
    Ok(format!("{} branches over 9 classes in {t:.2?}", corpus.len()))
}

fn space_curves() -> Check {
    let p = |y: &[(usize, i64)], z: usize| {
        PuiseuxParametrization::with_extra(
            6,
            y.iter().map(|(k, c)| (*k, rat(*c, 1))).collect(),
            vec![vec![(z, rat(1, 1))]],
        )
        .unwrap()
    };
    let c1 = p(&[(14, 1), (17, 1)], 39);
    let c2 = p(&[(14, 1), (33, 1)], 23);
    // 3x dy - 7y dx
    let w = OneForm::new(vec![poly(&[(0, 1, -7)]), poly(&[(1, 0, 3)]), Polynomial::zero()]);
    let a = eval_form_order(&c1, &w, 128).map_err(|e| e.to_string())?;
    let b = eval_form_order(&c2, &w, 128).map_err(|e| e.to_string())?;
    ensure!((a, b) == (Order::Exact(23), Order::Exact(39)), "got {a:?}, {b:?}");
    Ok("nu(3xdy - 7ydx) = 23 on C1, 39 on C2".into())
}

fn two_branches() -> Check {
    let phi1 = branch(2, &[(3, 1, 1), (4, 1, 1)]);
    let phi2 = branch(2, &[(3, 1, 1)]);
    let pair = [phi1, phi2];
    let f1 = poly(&[(0, 2, 1), (2, 1, -2), (3, 0, -1), (4, 0, 1)]);
    let f2 = poly(&[(0, 2, 1), (3, 0, -1)]);
    let w1 = form(&[(0, 1, 3)], &[(1, 0, -2)]);
    let w2 = w1.add(&form(&[(2, 0, 1)], &[]));
    let df1 = OneForm::differential(&f1);
    let df2 = OneForm::differential(&f2);
    let x = Polynomial::var(0);
    let mut checked = 0;
    let mut tuple = |w: &OneForm<Rational>, expected: (usize, usize)| -> Result<(), String> {
        let got = eval_form_orders_multi(&pair, w, 64).map_err(|e| e.to_string())?;
        ensure!(
            got == vec![expected.0, expected.1],
            "expected {expected:?}, got {got:?}"
        );
        checked += 1;
        Ok(())
    };
    tuple(&w1.add(&df1), (6, 7))?;
    tuple(&w2.add(&df2), (7, 6))?;
    tuple(&w1.add(&df1).mul_poly(&x), (8, 9))?;
    tuple(&w2.add(&df2).mul_poly(&x), (9, 8))?;
    for i in 0..3u32 {
        for j in 0..3u32 {
            let g = 2 * i as usize + 3 * j as usize;
            let m = Polynomial::monomial(vec![i, j], rat(1, 1));
            tuple(&w1.add(&w2.mul_poly(&m)), (6, 6 + g))?;
            tuple(&w2.add(&w1.mul_poly(&m)), (6 + g, 6))?;
            tuple(&w1.add(&w2.mul_poly(&m)).mul_poly(&x), (8, 8 + g))?;
            tuple(&w2.add(&w1.mul_poly(&m)).mul_poly(&x), (8 + g, 8))?;
        }
    }
    // alpha = 4: phi_2 = (t^2, 2t^3), f_2 = y^2 - 4x^3.
    let pair4 = [pair[0].clone(), branch(2, &[(3, 2, 1)])];
    let f2 = poly(&[(0, 2, 1), (3, 0, -4)]);
    let df2 = OneForm::differential(&f2);
    let c = rat(-9, 1);
    let mut alpha = 0;
    for i in 0..3u32 {
        for j in 0..3u32 {
            let g = 2 * i as usize + 3 * j as usize;
            let m = Polynomial::monomial(vec![i, j], rat(1, 1));
            let a = df2.add(&w1.scale(&c)).add(&df1.mul_poly(&m));
            let b = df1.add(&w2.scale(&c)).add(&df2.mul_poly(&m));
            let got = (
                eval_form_orders_multi(&pair4, &a, 64).map_err(|e| e.to_string())?,
                eval_form_orders_multi(&pair4, &b, 64).map_err(|e| e.to_string())?,
            );
            ensure!(
                got == (vec![7, 6 + g], vec![6 + g, 7]),
                "alpha = 4, gamma = {g}: {got:?}"
            );
            alpha += 2;
        }
    }
    Ok(format!("{checked} tuples for alpha = 1, {alpha} for alpha = 4"))
}

fn corpus_properties() -> Check {
    let corpus = full_corpus();
    let mut checks = 0usize;
    for e in &corpus {
        let basis = lambda_of(&e.phi).map_err(|err| err.to_string())?;
        let g = &basis.gamma;
        let l = &basis.lambda;
        let gens = &e.gamma;
        let v0 = gens[0];
        let mu = basis.conductor;
        for z in 0..mu {
            ensure!(
                g.contains_small(z) ^ g.contains_small(mu - 1 - z),
                "{}: symmetry at {z}",
                e.label
            );
        }
        let ap = l.apery_set();
        ensure!(ap.len() == v0, "{}: |Ap| = {}", e.label, ap.len());
        ensure!(l.is_covered().covered, "{}: not covered", e.label);
        ensure!(
            l.cofinal() == ap.iter().max().unwrap() - v0 + 1,
            "{}: conductor",
            e.label
        );
        let top = l.cofinal() + gens.last().unwrap();
        for z in 1..=top {
            if g.contains_small(z) {
                ensure!(l.contains(z), "{}: {z} in Gamma not in Lambda", e.label);
            }
            if l.contains(z) {
                for v in gens {
                    ensure!(l.contains(z + v), "{}: {z} + {v} not in Lambda", e.label);
                }
            }
        }
        let extra = l.minus_semigroup(g);
        if gens.len() > 1 {
            if let Some(m) = extra.first() {
                ensure!(*m > v0 + gens[1], "{}: min(Lambda \\ Gamma) = {m}", e.label);
            }
        }
        for v in &gens[1..] {
            let mut k = 1;
            while k * v0 < *v {
                ensure!(!l.contains(v - k * v0), "{}: {v} - {k}*{v0} in Lambda", e.label);
                k += 1;
            }
        }
        checks += 6;
    }
    Ok(format!(
        "{checks} checks on {} branches, zero violations",
        corpus.len()
    ))
}

fn random_forms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let corpus = full_corpus();
    let mut below = 0usize;
    for e in &corpus {
        let basis = lambda_of(&e.phi).map_err(|err| err.to_string())?;
        let mu = basis.conductor;
        let p = Pullbacks::new(&e.phi, mu);
        for _ in 0..500 {
            let a = random_poly(&mut rng, mu, &p);
            let b = random_poly(&mut rng, mu, &p);
            if let Some(v) = p.form_value(&a, &b) {
                ensure!(
                    basis.lambda.contains(v),
                    "{}: sampled value {v} outside Lambda",
                    e.label
                );
                below += 1;
            }
        }
    }
    Ok(format!(
        "{} forms on {} branches, {below} values below the conductor, all in Lambda",
        500 * corpus.len(),
        corpus.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("<6,9,19> table reproduction", table_rows),
        ("<6,9,19> stratification", stratification),
        ("decision quadruple", decisions),
        ("Gamma recovery roundtrip", recovery),
        ("space curve evaluation", space_curves),
        ("two-branch evaluation", two_branches),
        ("property suites on corpus", corpus_properties),
        ("random form oracle", random_forms),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
