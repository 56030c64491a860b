mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use planebranch::branch::{random_branch, standard_basis_of_ring};
use planebranch::forms::lambda_of;
use planebranch::poly::Polynomial;
use planebranch::ring::{rat, Rational};
use planebranch::semigroup::{
    characteristic_from_semigroup, semigroup_from_characteristic, CharacteristicSequence, NumericalSemigroup,
};
use planebranch::series::{eval_poly, Order, TruncatedSeries};
use planebranch::valueset::ValueSet;

/// Characteristic sequences with `beta_0 <= max_v0`: `beta_i = beta_{i-1} +
/// e_i m_i` with `gcd(m_i, n_i) = 1`.
fn characteristic(max_v0: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec((2usize..=4, 1usize..=4), 1..=3)
        .prop_filter("multiplicity bound", move |v| {
            v.iter().map(|(n, _)| n).product::<usize>() <= max_v0
        })
        .prop_map(|v| {
            let ns: Vec<usize> = v.iter().map(|(n, _)| *n).collect();
            let v0: usize = ns.iter().product();
            let mut beta = vec![v0];
            let mut e = v0;
            for (n, m) in v {
                e /= n;
                let mut m = m;
                while m.gcd(&n) != 1 {
                    m += 1;
                }
                beta.push(beta.last().unwrap() + e * m);
            }
            beta
        })
}

fn plane_semigroup(max_v0: usize) -> impl Strategy<Value = NumericalSemigroup> {
    characteristic(max_v0)
        .prop_map(|b| semigroup_from_characteristic(&CharacteristicSequence::new(b).unwrap()))
}

fn small(v: &[BigInt]) -> Vec<usize> {
    v.iter().map(|x| x.try_into().unwrap()).collect()
}

/// Elements of `<gens>` up to `bound` by dynamic programming.
fn brute_members(gens: &[usize], bound: usize) -> Vec<bool> {
    let mut m = vec![false; bound + 1];
    m[0] = true;
    for z in 1..=bound {
        m[z] = gens.iter().any(|g| *g <= z && m[z - g]);
    }
    m
}

/// Covered sets: progressions `r_j + N a_0` over random representatives.
fn covered_set() -> impl Strategy<Value = (usize, ValueSet)> {
    (2usize..=8)
        .prop_flat_map(|a0| (Just(a0), prop::collection::vec(0usize..5, a0 - 1)))
        .prop_map(|(a0, lifts)| {
            let mut reps = vec![a0];
            reps.extend(lifts.iter().enumerate().map(|(r, k)| r + 1 + a0 * (k + 1)));
            let top = *reps.iter().max().unwrap() + a0;
            let member: Vec<bool> = (0..=top)
                .map(|z| z > 0 && reps.iter().any(|r| z >= *r && (z - r) % a0 == 0))
                .collect();
            (a0, ValueSet::from_indicator(&member).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn characteristic_roundtrip(beta in characteristic(12)) {
        let g = semigroup_from_characteristic(&CharacteristicSequence::new(beta.clone()).unwrap());
        prop_assert!(g.is_plane_branch());
        prop_assert_eq!(small(characteristic_from_semigroup(&g).unwrap().exponents()), beta);
    }

    #[test]
    fn semigroup_symmetry(g in plane_semigroup(12)) {
        let mu = g.small_conductor().unwrap();
        for z in 0..mu {
            prop_assert!(g.contains_small(z) ^ g.contains_small(mu - 1 - z), "z = {}", z);
        }
    }

    #[test]
    fn apery_formula_matches_listing(g in plane_semigroup(12)) {
        let mu = g.small_conductor().unwrap();
        let v0 = small(&[g.multiplicity().clone()])[0];
        let formula = small(&g.gamma_star_apery().unwrap());
        prop_assert_eq!(formula.len(), v0);
        let listing = ValueSet::new((1..mu + v0).filter(|z| g.contains_small(*z)), mu.max(1)).unwrap();
        prop_assert_eq!(formula, listing.apery_set());
    }

    #[test]
    fn membership_matches_brute_force(
        gens in prop::collection::vec(2usize..=30, 2..=4).prop_filter("v0 <= 8", |g| *g.iter().min().unwrap() <= 8)
    ) {
        let g0 = gens.iter().fold(0, |a, b| a.gcd(b));
        prop_assume!(g0 == 1);
        let g = NumericalSemigroup::from_small(&gens).unwrap();
        let min = small(g.generators());
        let bound = g.small_conductor().unwrap() + min.last().unwrap();
        let brute = brute_members(&gens, bound);
        for (z, m) in brute.iter().enumerate() {
            prop_assert_eq!(g.contains_small(z), *m, "z = {}", z);
        }
    }

    #[test]
    fn covered_conductor_from_apery((a0, s) in covered_set()) {
        let cov = s.is_covered();
        prop_assert!(cov.covered);
        let ap = s.apery_set();
        prop_assert_eq!(ap.len(), a0);
        prop_assert_eq!(s.cofinal(), ap.iter().max().unwrap() - a0 + 1);
    }

    #[test]
    fn series_valuation(
        a in prop::collection::vec(-3i64..=3, 1..30),
        b in prop::collection::vec(-3i64..=3, 1..30),
    ) {
        let p = 40;
        let sa = TruncatedSeries::from_coefficients(pad(&a, p));
        let sb = TruncatedSeries::from_coefficients(pad(&b, p));
        if let (Order::Exact(x), Order::Exact(y)) = (sa.order(), sb.order()) {
            if x + y < p {
                prop_assert_eq!(sa.mul(&sb).order(), Order::Exact(x + y));
            }
            let s = sa.add(&sb).order();
            if x != y {
                prop_assert_eq!(s, Order::Exact(x.min(y)));
            } else if let Order::Exact(z) = s {
                prop_assert!(z >= x);
            }
        }
    }

    #[test]
    fn eval_poly_matches_naive(
        terms in prop::collection::vec((0u32..=2, 0u32..=2, -4i64..=4), 1..6),
        x in prop::collection::vec(-2i64..=2, 1..8),
        y in prop::collection::vec(-2i64..=2, 1..8),
        precision in 1usize..=40,
    ) {
        let mut p = Polynomial::zero();
        for (i, j, c) in &terms {
            p = p.add(&Polynomial::monomial(vec![*i, *j], rat(*c, 1)));
        }
        let sx = TruncatedSeries::from_coefficients(pad(&x, precision));
        let sy = TruncatedSeries::from_coefficients(pad(&y, precision));
        let mut naive = TruncatedSeries::zero(precision);
        for (i, j, c) in &terms {
            let m = sx.pow(*i).mul(&sy.pow(*j)).scale(&rat(*c, 1));
            naive = naive.add(&m);
        }
        prop_assert_eq!(eval_poly(&p, &[sx, sy]).unwrap(), naive);
    }
}

fn pad(v: &[i64], p: usize) -> Vec<Rational> {
    (0..p).map(|i| rat(v.get(i).copied().unwrap_or(0), 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn branch_lambda_invariants(g in plane_semigroup(8), seed in any::<u64>(), density in 0.1f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = g.small_generators().unwrap();
        let mu = g.small_conductor().unwrap();
        let v0 = gens[0];
        let phi = random_branch(&g, mu + v0, density, &mut rng).unwrap();
        let basis = lambda_of(&phi).unwrap();
        prop_assert_eq!(&basis.gamma, &g);
        let l = &basis.lambda;

        // Gamma-monomodule shaped and covered with v_0 residues.
        prop_assert!(l.is_covered().covered);
        prop_assert_eq!(l.apery_set().len(), v0);
        let top = l.cofinal() + gens.last().unwrap();
        for z in 1..=top {
            if g.contains_small(z) {
                prop_assert!(l.contains(z), "gamma element {} missing", z);
            }
            if l.contains(z) {
                for v in &gens {
                    prop_assert!(z + v > l.cofinal() + v0 || l.contains(z + v));
                }
            }
        }

        let extra = l.minus_semigroup(&g);
        if let Some(m) = extra.first() {
            prop_assert!(*m > v0 + gens[1]);
        }
        prop_assert!(extra.iter().all(|x| *x < mu));
        for v in &gens[1..] {
            for k in 1..=v / v0 {
                if *v > k * v0 {
                    prop_assert!(!l.contains(v - k * v0), "{} - {}*{} in Lambda", v, k, v0);
                }
            }
        }
        prop_assert_eq!(l.recover_gamma().unwrap(), g.clone());

        let sb = standard_basis_of_ring(&phi, mu + v0 + 2).unwrap();
        prop_assert_eq!(&sb.values, &gens);
        for (h, v) in sb.polys.iter().zip(&gens) {
            prop_assert_eq!(phi.nu(h, mu + v0 + 2), Order::Exact(*v));
        }
        let p = 3 * (mu + v0);
        let h1 = sb.polys[0].add(&sb.polys[sb.polys.len() - 1]);
        let h2 = sb.polys[sb.polys.len() - 1].mul(&sb.polys[0]).add(&Polynomial::var(1));
        if let (Order::Exact(a), Order::Exact(b)) = (phi.nu(&h1, p), phi.nu(&h2, p)) {
            if a + b < p {
                prop_assert_eq!(phi.nu(&h1.mul(&h2), p), Order::Exact(a + b));
            }
        }
    }
}
