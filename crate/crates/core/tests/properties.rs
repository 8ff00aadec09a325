//! Randomized algebraic laws: Laurent arithmetic, the product on H_n, the bar
//! involution, tilde and flat, and Gram factorization.

use std::sync::OnceLock;

use monohecke::centre::factorize_gram;
use monohecke::*;
use proptest::prelude::*;

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i32..=4, -3i64..=3), 0..4).prop_map(LaurentPoly::from_terms)
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).eval_one(), a.eval_one() * b.eval_one());
    }
}

struct Fixture {
    alg: HeckeAlgebra,
    indices: Vec<Idx>,
}

fn fixture(preset: &str, n: u32) -> Fixture {
    let weyl = WeylGroup::new(RootDatum::preset(preset).unwrap()).unwrap();
    let space = CharSpace::new(weyl.clone(), n).unwrap();
    let indices = space
        .all_chars()
        .flat_map(|l| weyl.all_elements().into_iter().map(move |w| Idx::new(w, l)))
        .collect();
    Fixture { alg: HeckeAlgebra::new(space), indices }
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| vec![fixture("A1-SL2", 6), fixture("A2", 2), fixture("B2", 2), fixture("G2", 1)])
}

/// A random element of the `k`-th fixture algebra.
fn element(k: usize) -> impl Strategy<Value = HeckeElt> {
    let fx = &fixtures()[k];
    let len = fx.indices.len();
    prop::collection::vec((0..len, laurent()), 1..4).prop_map(move |terms| {
        let mut h = fx.alg.zero();
        for (i, f) in terms {
            h.add_term(fx.indices[i], &f);
        }
        h
    })
}

fn triple() -> impl Strategy<Value = (usize, HeckeElt, HeckeElt, HeckeElt)> {
    (0..4usize).prop_flat_map(|k| (Just(k), element(k), element(k), element(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_associative_and_unital((k, a, b, c) in triple()) {
        let alg = &fixtures()[k].alg;
        let ab_c = alg.t_mul(&alg.t_mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.t_mul(&a, &alg.t_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(alg.t_mul(&alg.unit(), &a).unwrap(), a.clone());
        prop_assert_eq!(alg.t_mul(&a, &alg.unit()).unwrap(), a.clone());
    }

    #[test]
    fn bar_is_a_ring_involution((k, a, b, _c) in triple()) {
        let alg = &fixtures()[k].alg;
        prop_assert_eq!(alg.bar(&alg.bar(&a)), a.clone());
        let ab = alg.t_mul(&a, &b).unwrap();
        prop_assert_eq!(alg.bar(&ab), alg.t_mul(&alg.bar(&a), &alg.bar(&b)).unwrap());
    }

    #[test]
    fn tilde_and_flat((k, a, b, _c) in triple()) {
        let alg = &fixtures()[k].alg;
        let ab = alg.t_mul(&a, &b).unwrap();
        prop_assert_eq!(alg.tilde(&alg.tilde(&a)), a.clone());
        prop_assert_eq!(alg.tilde(&ab), alg.t_mul(&alg.tilde(&a), &alg.tilde(&b)).unwrap());
        prop_assert_eq!(alg.flat(&alg.flat(&a)), a.clone());
        prop_assert_eq!(alg.flat(&ab), alg.t_mul(&alg.flat(&b), &alg.flat(&a)).unwrap());
        prop_assert_eq!(alg.bar(&alg.flat(&a)), alg.flat(&alg.bar(&a)));
    }
}

fn multiplicity_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop::collection::vec(0i64..=2, cols), rows)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Any N = M Mᵀ factors again, with no more columns than M and every
    /// solution reproducing N.
    #[test]
    fn gram_factorization_round_trip(m in multiplicity_matrix()) {
        let rows = m.len();
        let n: Vec<Vec<i64>> = (0..rows)
            .map(|a| (0..rows).map(|b| m[a].iter().zip(&m[b]).map(|(x, y)| x * y).sum()).collect())
            .collect();
        prop_assume!(n.iter().enumerate().all(|(a, r)| r[a] <= 16));
        let solutions = factorize_gram(&n, FactorBounds::default()).unwrap();
        prop_assert!(!solutions.is_empty());
        let nonzero_cols = (0..m[0].len()).filter(|&c| m.iter().any(|r| r[c] != 0)).count();
        for s in &solutions {
            prop_assert_eq!(s.gram(rows), n.clone());
            prop_assert!(s.columns.len() <= nonzero_cols);
            prop_assert_eq!(s.columns.len(), solutions[0].columns.len());
            let mut sorted = s.columns.clone();
            sorted.sort_by(|a, b| b.cmp(a));
            prop_assert_eq!(&sorted, &s.columns);
        }
    }
}
