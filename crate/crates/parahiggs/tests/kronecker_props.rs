mod common;

use common::*;
use parahiggs::exactlin::{Budget, Field, FiniteField, Matrix, PrimeField, Rationals};
use parahiggs::kronecker::{
    blowup_certificate, decide_char0, existence_schur, for_each_invariant_pair, king_bruteforce,
    king_geometric, mu_chi, mu_chi_eigen, pencil, random_invertible, Char0Status, Existence,
    MatrixTuple, Mu, OneParamSubgroup, Status,
};
use parahiggs::multiweight::int;
use proptest::prelude::*;
use rand::Rng;

/// A diagonal 1-PS and a tuple with `A_j(U_n) ⊆ V_n` for all `n`.
fn adapted(
    f: &PrimeField,
    p: usize,
    q: usize,
    r: usize,
    rng: &mut impl Rng,
) -> (OneParamSubgroup<PrimeField>, MatrixTuple<PrimeField>) {
    let wp: Vec<i64> = (0..p).map(|_| rng.gen_range(-3..=3)).collect();
    let wq: Vec<i64> = (0..q).map(|_| rng.gen_range(-3..=3)).collect();
    let mats = (0..r)
        .map(|_| {
            Matrix::from_fn(*f, q, p, |i, k| {
                if wq[i] >= wp[k] {
                    f.element(rng.gen_range(0..f.order()))
                } else {
                    f.zero()
                }
            })
        })
        .collect();
    (
        OneParamSubgroup::diagonal(*f, &wp, &wq),
        MatrixTuple::new(*f, p, q, mats).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filtration_and_eigen_weights_agree(p in 1usize..4, q in 1usize..4, r in 1usize..4, seed: u64) {
        let f = prime(3);
        let (lambda, a) = adapted(&f, p, q, r, &mut rng(seed));
        prop_assert_eq!(mu_chi(&lambda, &a).unwrap(), Mu::Finite(mu_chi_eigen(&lambda, p, q)));
    }

    #[test]
    fn central_shift_leaves_the_weight_unchanged(p in 1usize..4, q in 1usize..4, r in 1usize..4, k in -5i64..5, seed: u64) {
        let f = prime(5);
        let mut g = rng(seed);
        let (lambda, a) = adapted(&f, p, q, r, &mut g);
        prop_assert_eq!(mu_chi(&lambda.shifted(k), &a).unwrap(), mu_chi(&lambda, &a).unwrap());
        // an unrelated random tuple, finite or not
        let b = MatrixTuple::random(&f, p, q, r, &mut g);
        prop_assert_eq!(mu_chi(&lambda.shifted(k), &b).unwrap(), mu_chi(&lambda, &b).unwrap());
    }

    #[test]
    fn projector_weights_match_the_king_verdict(l in prop::sample::select(vec![2u64, 3]), p in 1usize..4, q in 1usize..4, r in 0usize..4, seed: u64) {
        let f = prime(l);
        let a = MatrixTuple::random(&f, p, q, r, &mut rng(seed));
        let v = king_bruteforce(&a, Budget::DEFAULT).unwrap();
        let mut min_mu = None::<parahiggs::multiweight::Rat>;
        for_each_invariant_pair(&a, Budget::DEFAULT, |u, w| {
            let m = mu_chi(&OneParamSubgroup::projector(u, w), &a)?;
            let x = m.finite().expect("invariant pair has finite weight").clone();
            min_mu = Some(min_mu.take().map_or(x.clone(), |y| y.min(x)));
            Ok(true)
        })
        .unwrap();
        let min_mu = min_mu.unwrap();
        prop_assert_eq!(v.status == Status::Unstable, min_mu < int(0));
        if v.status == Status::Unstable {
            prop_assert!(v.mu_value.unwrap().is_negative());
        }
    }

    #[test]
    fn verdict_is_invariant_under_base_change(l in prop::sample::select(vec![2u64, 3, 5]), p in 1usize..4, q in 1usize..4, r in 1usize..4, seed: u64) {
        let f = prime(l);
        let mut g = rng(seed);
        let a = MatrixTuple::random(&f, p, q, r, &mut g);
        let b = a.act(&random_invertible(&f, p, &mut g), &random_invertible(&f, q, &mut g)).unwrap();
        let (va, vb) = (king_bruteforce(&a, Budget::DEFAULT).unwrap(), king_bruteforce(&b, Budget::DEFAULT).unwrap());
        prop_assert_eq!(va.status, vb.status);
        prop_assert_eq!(king_geometric(&a, Budget::DEFAULT).unwrap().status, king_geometric(&b, Budget::DEFAULT).unwrap().status);
    }

    #[test]
    fn pencil_form_matches_king_at_good_primes(p in 1usize..4, bound in 1i64..3, seed: u64) {
        let a = MatrixTuple::random_integer(p, p, 2, bound, &mut rng(seed));
        let res = pencil(&a.mats()[0], &a.mats()[1]).unwrap();
        for l in [5u64, 7, 11] {
            if !res.is_good_prime(l) {
                continue;
            }
            let red = a.reduce_mod(PrimeField::new(l).unwrap()).unwrap();
            let status = king_bruteforce(&red, Budget::DEFAULT).unwrap().status;
            prop_assert_eq!(status.is_semistable(), res.semistable, "l = {}", l);
        }
    }

    #[test]
    fn blowup_certificate_rules_out_instability(p in 1usize..4, r in 1usize..4, seed: u64) {
        let f = prime(3);
        let mut g = rng(seed);
        let a = MatrixTuple::random(&f, p, p, r, &mut g);
        if let Some(cert) = blowup_certificate(&a, 3, 20, &mut g) {
            prop_assert!(cert.verify(&a));
            prop_assert!(king_bruteforce(&a, Budget::DEFAULT).unwrap().status.is_semistable());
        }
    }

    #[test]
    fn char0_verdicts_are_sound(p in 1usize..4, q in 1usize..4, r in 0usize..4, bound in 0i64..3, seed: u64) {
        let a: MatrixTuple<Rationals> = MatrixTuple::random_integer(p, q, r, bound, &mut rng(seed));
        let v = decide_char0(&a, Budget::DEFAULT, 200, 1e-9).unwrap();
        // integer tuples reduce at every prime; semistability is read off the first one
        let red = a.reduce_mod(PrimeField::new(5).unwrap()).unwrap();
        let at5 = king_bruteforce(&red, Budget::DEFAULT).unwrap().status;
        match v.status {
            Char0Status::Unstable => {
                prop_assert!(!at5.is_semistable());
                prop_assert!(v.witness.is_some());
            }
            Char0Status::Stable | Char0Status::Semistable => prop_assert!(v.certificate_prime.is_some()),
            _ => {}
        }
    }
}

/// Draws random tuples over F_5 until one is geometrically stable.
fn finds_stable(p: usize, q: usize, r: usize, draws: usize, seed: u64) -> bool {
    let f = prime(5);
    let mut g = rng(seed);
    (0..draws).any(|_| {
        king_geometric(&MatrixTuple::random(&f, p, q, r, &mut g), Budget::DEFAULT)
            .unwrap()
            .status
            == Status::Stable
    })
}

#[test]
fn schur_classification_agrees_with_random_search() {
    for p in 1..=3 {
        for q in 1..=3 {
            for r in 1..=3 {
                let class = existence_schur(p, q, r).unwrap();
                let found = finds_stable(p, q, r, 60, (100 * p + 10 * q + r) as u64);
                match class {
                    Existence::HasStable => {
                        assert!(found, "({p},{q},{r}) should have stable points")
                    }
                    Existence::Empty | Existence::NonemptyNoStable => {
                        assert!(!found, "({p},{q},{r}) has no stable points")
                    }
                    Existence::SpecialSquare => unreachable!(),
                }
            }
        }
    }
}

#[test]
fn empty_cells_have_no_semistable_points() {
    let f = prime(3);
    let mut g = rng(9);
    for (p, q, r) in [(1, 3, 2), (2, 1, 1), (3, 1, 2), (1, 2, 1)] {
        assert_eq!(existence_schur(p, q, r).unwrap(), Existence::Empty);
        for _ in 0..30 {
            let a = MatrixTuple::random(&f, p, q, r, &mut g);
            assert_eq!(
                king_bruteforce(&a, Budget::DEFAULT).unwrap().status,
                Status::Unstable,
                "({p},{q},{r})"
            );
        }
    }
}

#[test]
fn rational_scalars_act_trivially() {
    let a = MatrixTuple::from_i64(
        Rationals,
        2,
        2,
        &[vec![vec![1, 2], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]],
    )
    .unwrap();
    let c = Rationals.from_i64(3);
    let b = a
        .act(
            &Matrix::identity(Rationals, 2).scale(&c),
            &Matrix::identity(Rationals, 2).scale(&c),
        )
        .unwrap();
    assert_eq!(a, b);
}
