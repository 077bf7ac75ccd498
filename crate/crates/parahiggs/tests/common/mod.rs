#![allow(dead_code)]

use parahiggs::exactlin::{FiniteField, PrimeField, Subspace};
use parahiggs::multiweight::{rat, MultiWeight, Rat};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn prime(l: u64) -> PrimeField {
    PrimeField::new(l).unwrap()
}

pub fn random_vector<F: FiniteField>(f: &F, n: usize, rng: &mut impl Rng) -> Vec<F::Elem> {
    (0..n)
        .map(|_| f.element(rng.gen_range(0..f.order())))
        .collect()
}

/// Span of `k` random vectors (dimension at most `k`).
pub fn random_subspace<F: FiniteField>(
    f: &F,
    n: usize,
    k: usize,
    rng: &mut impl Rng,
) -> Subspace<F> {
    let vs: Vec<_> = (0..k).map(|_| random_vector(f, n, rng)).collect();
    Subspace::span(f.clone(), n, &vs).unwrap()
}

/// A random member of the weight space with denominators dividing `den`.
pub fn random_multiweight(
    p: usize,
    q: usize,
    s: usize,
    den: i64,
    rng: &mut impl Rng,
) -> MultiWeight {
    let n = p + q;
    let mut alpha = Vec::with_capacity(s);
    let mut beta = Vec::with_capacity(s);
    for _ in 0..s {
        let row = loop {
            let k = rng.gen_range(0..n as i64);
            let mut w: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(0..den)).collect();
            let last = k * den - w.iter().sum::<i64>();
            if (0..den).contains(&last) {
                w.push(last);
                break w;
            }
        };
        let mut a: Vec<Rat> = row[..p].iter().map(|&x| rat(x, den)).collect();
        let mut b: Vec<Rat> = row[p..].iter().map(|&x| rat(x, den)).collect();
        a.sort();
        b.sort();
        alpha.push(a);
        beta.push(b);
    }
    MultiWeight {
        p,
        q,
        s,
        alpha,
        beta,
    }
}
