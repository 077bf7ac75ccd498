mod common;

use common::*;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use parahiggs::exactlin::{Budget, PrimeField, Rationals};
use parahiggs::higgsbridge::{
    bundle_data, equivalence_check, invariant_degree, is_block_nilpotent, split_parabolic_degree,
};
use parahiggs::kronecker::{king_bruteforce, random_invertible, MatrixTuple, Status};
use parahiggs::multiweight::{holonomy, rat, Rat};
use parahiggs::realforms::{
    antisymmetric_even, congruence, elliptic_check, realform_check, sostar_construct,
    translation_length, EigenData, SymmetryClass,
};
use parahiggs::weightgen::{
    a_range, construct_constant, epsilon_caps, Construction, ConstructionInput,
};
use proptest::prelude::*;
use rand::Rng;

/// A constant construction whose total `ε` is below 1, if one exists for these shapes.
fn construction(p: usize, q: usize, s: usize, rng: &mut impl Rng) -> Option<Construction> {
    let range = a_range(p, q, s);
    if range.integers.is_empty() {
        return None;
    }
    let a = range.integers[rng.gen_range(0..range.integers.len())];
    let caps = epsilon_caps(p, q, s, a).ok()?;
    let budget = rat(rng.gen_range(1..100), 100 * s as i64);
    let eps: Vec<Rat> = caps
        .iter()
        .map(|c| c.clone().min(budget.clone()) * rat(rng.gen_range(1..100), 100))
        .collect();
    construct_constant(&ConstructionInput {
        p,
        q,
        s,
        a,
        epsilon_profile: Some(eps),
    })
    .ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariant_degree_matches_the_split_subbundle(p in 1usize..4, q in 1usize..4, s in 3usize..7, seed: u64) {
        let mut g = rng(seed);
        let Some(c) = construction(p, q, s, &mut g) else { return Ok(()); };
        let data = bundle_data(p, q, s, c.a).unwrap();
        for du in 0..=p {
            for dv in 0..=q {
                let deg = invariant_degree(&c.multiweight, du, dv).unwrap();
                prop_assert_eq!(&deg, &split_parabolic_degree(&data, &c.multiweight, du, dv));
                prop_assert_eq!(deg.is_positive(), q * du > p * dv);
            }
        }
    }

    #[test]
    fn invariant_degree_is_additive(p in 1usize..4, q in 1usize..4, s in 3usize..7, seed: u64) {
        let mut g = rng(seed);
        let Some(c) = construction(p, q, s, &mut g) else { return Ok(()); };
        let mw = &c.multiweight;
        let (u1, v1) = (g.gen_range(0..=p), g.gen_range(0..=q));
        let (u2, v2) = (g.gen_range(0..=p - u1), g.gen_range(0..=q - v1));
        let sum = invariant_degree(mw, u1, v1).unwrap() + invariant_degree(mw, u2, v2).unwrap();
        prop_assert_eq!(invariant_degree(mw, u1 + u2, v1 + v2).unwrap(), sum);
        prop_assert!(invariant_degree(mw, p, q).unwrap().is_zero());
    }

    #[test]
    fn higgs_and_king_verdicts_agree(p in 1usize..4, q in 1usize..4, s in 3usize..6, seed: u64) {
        let mut g = rng(seed);
        let Some(c) = construction(p, q, s, &mut g) else { return Ok(()); };
        let a = MatrixTuple::random(&prime(3), p, q, s - 2, &mut g);
        let rep = equivalence_check(&a, &c.multiweight, c.d, Budget::DEFAULT).unwrap();
        prop_assert!(rep.agree, "{:?} vs {:?}", rep.king.status, rep.higgs.status);
        prop_assert_eq!(rep.bundle.a, c.a);
    }

    #[test]
    fn higgs_field_squares_to_zero(p in 1usize..4, q in 1usize..4, r in 0usize..4, seed: u64) {
        let a = MatrixTuple::random_integer(p, q, r, 3, &mut rng(seed));
        prop_assert!(is_block_nilpotent(&a));
    }

    #[test]
    fn translation_length_ignores_inversion_and_unit_scalars(n in 1usize..6, theta in 0.0f64..std::f64::consts::TAU, seed: u64) {
        let mut g = rng(seed);
        let mut z: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(g.gen_range(0.2..5.0), g.gen_range(0.0..std::f64::consts::TAU))).collect();
        let det: Complex64 = z.iter().product();
        z.push(det.inv());
        let e = EigenData::new(z, 1e-9).unwrap();
        let l = translation_length(&e).unwrap();
        prop_assert!((translation_length(&e.inverse()).unwrap() - l).abs() < 1e-9);
        let unit = Complex64::from_polar(1.0, theta);
        let turned = EigenData { eigenvalues: e.eigenvalues.iter().map(|x| x * unit).collect() };
        prop_assert!((translation_length(&turned).unwrap() - l).abs() < 1e-9);
    }

    #[test]
    fn holonomy_is_elliptic(p in 1usize..4, q in 1usize..4, s in 1usize..6, seed: u64) {
        let mw = random_multiweight(p, q, s, 12, &mut rng(seed));
        for phases in holonomy(&mw).unwrap() {
            let e = EigenData::from_phases(&phases);
            prop_assert!(EigenData::new(e.eigenvalues.clone(), 1e-9).is_ok());
            prop_assert!(elliptic_check(&e, 1e-12));
            prop_assert!(translation_length(&e).unwrap() < 1e-12);
        }
    }

    #[test]
    fn congruence_preserves_the_symmetry_class(half in 1usize..3, r in 1usize..4, seed: u64) {
        let p = 2 * half;
        let a = antisymmetric_even(p, r, seed).unwrap();
        prop_assert!(realform_check(&a, SymmetryClass::Antisymmetric).unwrap());
        let f = prime(7);
        let red = a.reduce_mod(f).unwrap();
        let gm = random_invertible(&f, p, &mut rng(seed));
        prop_assert!(realform_check(&congruence(&red, &gm).unwrap(), SymmetryClass::Antisymmetric).unwrap());
    }

    #[test]
    fn even_antisymmetric_tuples_are_semistable(half in 1usize..3, r in 1usize..4, seed: u64) {
        let a = antisymmetric_even(2 * half, r, seed).unwrap();
        prop_assert_eq!(a.mats()[0].rank(), 2 * half);
        let red = a.reduce_mod(PrimeField::new(5).unwrap()).unwrap();
        prop_assert!(king_bruteforce(&red, Budget::DEFAULT).unwrap().status.is_semistable());
    }
}

#[test]
fn sostar_triples_are_antisymmetric_and_not_unstable() {
    for p in [3, 5] {
        for seed in 0..4 {
            let (a, res) = sostar_construct(p, seed).unwrap();
            assert!(realform_check(&a, SymmetryClass::Antisymmetric).unwrap());
            assert_eq!(res.checks.len(), 3);
            let red = a.reduce_mod(PrimeField::new(5).unwrap()).unwrap();
            assert_ne!(
                king_bruteforce(&red, Budget::DEFAULT).unwrap().status,
                Status::Unstable,
                "p = {p}, seed = {seed}"
            );
        }
    }
}

#[test]
fn identity_tuple_is_symmetric() {
    let a = MatrixTuple::from_i64(
        Rationals,
        2,
        2,
        &[vec![vec![1, 0], vec![0, 1]], vec![vec![2, 1], vec![1, 0]]],
    )
    .unwrap();
    assert!(realform_check(&a, SymmetryClass::Symmetric).unwrap());
    assert!(!realform_check(&a, SymmetryClass::Antisymmetric).unwrap());
}
