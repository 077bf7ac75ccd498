use rand::Rng;
use serde::{Deserialize, Serialize};

use super::tuple::MatrixTuple;
use crate::error::{Error, Result};
use crate::exactlin::{Field, FiniteField, Matrix, Rationals};

/// `Σ_j A_j ⊗ X_j`, block `(i, k)` of size `d × d` equal to `Σ_j (A_j)_{ik} X_j`.
pub fn blowup<F: Field>(a: &MatrixTuple<F>, xs: &[Matrix<F>]) -> Result<Matrix<F>> {
    let d = xs.first().map_or(0, Matrix::rows);
    if xs.len() != a.r() || xs.iter().any(|x| x.rows() != d || x.cols() != d) {
        return Err(Error::InvalidInput(format!(
            "need {} square blocks of one size",
            a.r()
        )));
    }
    let f = a.field();
    Ok(Matrix::from_fn(
        f.clone(),
        a.q() * d,
        a.p() * d,
        |row, col| {
            let (i, u) = (row / d, row % d);
            let (k, v) = (col / d, col % d);
            a.mats().iter().zip(xs).fold(f.zero(), |acc, (m, x)| {
                f.add(&acc, &f.mul(m.get(i, k), x.get(u, v)))
            })
        },
    ))
}

/// Blocks `X_j` making the blow-up of a square tuple invertible.
///
/// If `dim A(U) < dim U` then the blow-up maps `U ⊗ F^d` into `A(U) ⊗ F^d`, so an invertible
/// blow-up proves that no subspace is shrunk: the square tuple is semistable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupCertificate<F: Field> {
    pub d: usize,
    pub blocks: Vec<Matrix<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupCertificateJson {
    pub d: usize,
    pub blocks: Vec<Vec<Vec<String>>>,
}

impl<F: Field> BlowupCertificate<F> {
    pub fn verify(&self, a: &MatrixTuple<F>) -> bool {
        a.p() == a.q() && blowup(a, &self.blocks).is_ok_and(|m| m.rank() == m.rows())
    }

    pub fn to_json(&self) -> BlowupCertificateJson {
        BlowupCertificateJson {
            d: self.d,
            blocks: self.blocks.iter().map(Matrix::format_rows).collect(),
        }
    }
}

fn search<F: Field>(
    a: &MatrixTuple<F>,
    max_d: usize,
    attempts: usize,
    mut draw: impl FnMut(usize) -> Matrix<F>,
) -> Option<BlowupCertificate<F>> {
    if a.p() != a.q() || a.r() == 0 {
        return None;
    }
    for d in 1..=max_d.max(1) {
        for _ in 0..attempts {
            let blocks: Vec<_> = (0..a.r()).map(|_| draw(d)).collect();
            let cert = BlowupCertificate { d, blocks };
            if cert.verify(a) {
                return Some(cert);
            }
        }
    }
    None
}

/// Random search over block sizes `1..=max_d` with `attempts` draws each.
pub fn blowup_certificate<F: FiniteField>(
    a: &MatrixTuple<F>,
    max_d: usize,
    attempts: usize,
    rng: &mut impl Rng,
) -> Option<BlowupCertificate<F>> {
    let f = a.field().clone();
    search(a, max_d, attempts, |d| {
        Matrix::from_fn(f.clone(), d, d, |_, _| {
            f.element(rng.gen_range(0..f.order()))
        })
    })
}

/// The same search over Q with integer blocks in `-bound..=bound`.
pub fn blowup_certificate_q(
    a: &MatrixTuple<Rationals>,
    max_d: usize,
    attempts: usize,
    bound: i64,
    rng: &mut impl Rng,
) -> Option<BlowupCertificate<Rationals>> {
    search(a, max_d, attempts, |d| {
        Matrix::from_fn(Rationals, d, d, |_, _| {
            Rationals.from_i64(rng.gen_range(-bound..=bound))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{Budget, PrimeField};
    use crate::kronecker::{king_bruteforce, Status};
    use rand::SeedableRng;

    #[test]
    fn antisymmetric_three_by_three() {
        let f5 = PrimeField::new(5).unwrap();
        let lx = vec![vec![0, 0, 0], vec![0, 0, -1], vec![0, 1, 0]];
        let ly = vec![vec![0, 0, 1], vec![0, 0, 0], vec![-1, 0, 0]];
        let lz = vec![vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, 0]];
        let a = MatrixTuple::from_i64(f5, 3, 3, &[lx, ly, lz]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // every combination is singular, so d = 1 never works
        assert!(blowup_certificate(&a, 1, 50, &mut rng).is_none());
        let c = blowup_certificate(&a, 2, 200, &mut rng).unwrap();
        assert_eq!(c.d, 2);
        assert_ne!(
            king_bruteforce(&a, Budget::DEFAULT).unwrap().status,
            Status::Unstable
        );
    }

    #[test]
    fn unstable_tuple_has_no_certificate() {
        let f5 = PrimeField::new(5).unwrap();
        let n = vec![vec![0, 1], vec![0, 0]];
        let a = MatrixTuple::from_i64(f5, 2, 2, &[n.clone(), n]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        assert!(blowup_certificate(&a, 3, 50, &mut rng).is_none());
    }
}
