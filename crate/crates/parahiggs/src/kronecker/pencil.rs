use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rationals};
use crate::json;
use crate::multiweight::{int, Rat};

/// The binary form `det(X·A1 + Y·A2)` of a square pencil.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilResult {
    /// The form is not identically zero.
    pub semistable: bool,
    /// Coefficient `k` multiplies `X^{p−k} Y^k`.
    #[serde(with = "json::rat_vec")]
    pub coefficients: Vec<Rat>,
    /// Coefficients divided by the first nonzero one (all zero when the form vanishes).
    #[serde(with = "json::rat_vec")]
    pub normalized: Vec<Rat>,
}

/// Evaluates `det(A1 + t·A2)` at `t = 0..=p` and interpolates exactly.
pub fn pencil(a1: &Matrix<Rationals>, a2: &Matrix<Rationals>) -> Result<PencilResult> {
    let p = a1.rows();
    if a1.cols() != p || a2.rows() != p || a2.cols() != p {
        return Err(Error::InvalidInput(
            "pencil needs two square matrices of the same size".into(),
        ));
    }
    let values: Vec<Rat> = (0..=p as i64)
        .map(|t| {
            a1.add(&a2.scale(&int(t)))
                .expect("same shape")
                .det()
                .expect("square")
        })
        .collect();
    let coefficients = interpolate(&values);
    let lead = coefficients.iter().find(|c| !c.is_zero()).cloned();
    let normalized = match &lead {
        Some(l) => coefficients.iter().map(|c| c / l).collect(),
        None => coefficients.clone(),
    };
    Ok(PencilResult {
        semistable: lead.is_some(),
        coefficients,
        normalized,
    })
}

/// Monomial coefficients of the polynomial taking `values[t]` at `t = 0, 1, …`.
fn interpolate(values: &[Rat]) -> Vec<Rat> {
    let n = values.len();
    let vand = Matrix::from_fn(Rationals, n, n, |i, j| int((i as i64).pow(j as u32)));
    let inv = vand.inverse().expect("Vandermonde at distinct nodes");
    inv.apply(values)
}

impl PencilResult {
    /// A prime is good when reduction mod `l` keeps the form nonzero, or the form is zero.
    pub fn is_good_prime(&self, l: u64) -> bool {
        if !self.semistable {
            return true;
        }
        let l = BigInt::from(l);
        self.coefficients
            .iter()
            .any(|c| !c.is_zero() && !(c.numer() % &l).is_zero() && !(c.denom() % &l).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix<Rationals> {
        Matrix::from_i64(Rationals, rows).unwrap()
    }

    #[test]
    fn examples() {
        let id = m(&[vec![1, 0], vec![0, 1]]);
        let r = pencil(&id, &id).unwrap();
        assert!(r.semistable);
        assert_eq!(r.normalized, vec![int(1), int(2), int(1)]);

        let r = pencil(&m(&[vec![1, 0], vec![0, 0]]), &m(&[vec![0, 0], vec![0, 1]])).unwrap();
        assert_eq!(r.normalized, vec![int(0), int(1), int(0)]);

        let n = m(&[vec![0, 1], vec![0, 0]]);
        let r = pencil(&n, &n).unwrap();
        assert!(!r.semistable);
        assert!(r.coefficients.iter().all(Zero::is_zero));
    }

    #[test]
    fn good_primes() {
        let r = pencil(&m(&[vec![5, 0], vec![0, 0]]), &m(&[vec![0, 0], vec![0, 1]])).unwrap();
        assert!(!r.is_good_prime(5));
        assert!(r.is_good_prime(7));
    }
}
