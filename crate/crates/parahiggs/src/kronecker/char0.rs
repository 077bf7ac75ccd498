use serde::{Deserialize, Serialize};

use super::king::{king_bruteforce, king_geometric, Status};
use super::scaling::{exact_witness, king_scaling, lift_and_verify, ScalingStatus, ScalingVerdict};
use super::tuple::{MatrixTuple, SubspaceJson};
use crate::error::Result;
use crate::exactlin::{Budget, PrimeField, Rationals};

pub const CHAR0_PRIMES: [u64; 3] = [5, 7, 11];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Char0Status {
    /// Geometrically stable reduction at a good prime.
    Stable,
    /// Non-Unstable reduction at a good prime.
    Semistable,
    /// Destabilizing pair verified over Q.
    Unstable,
    /// Only numerical evidence for semistability.
    LikelySemistable,
    /// Every reduction is unstable and no witness lifted; numerical evidence only.
    LikelyUnstable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub prime: u64,
    /// `None` when an entry's denominator is divisible by the prime or the budget ran out.
    pub status: Option<Status>,
    /// Stability over the algebraic closure, when it was decided.
    pub geometric: Option<Status>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Char0Verdict {
    pub status: Char0Status,
    /// Prime whose reduction certifies the verdict.
    pub certificate_prime: Option<u64>,
    pub primes: Vec<PrimeReport>,
    pub witness: Option<(SubspaceJson, SubspaceJson)>,
    pub scaling: Option<ScalingVerdict>,
}

/// Semistability of a rational tuple over C.
///
/// A destabilizing pair over C may be taken over Q (the maximal one with the most
/// negative defect is unique, hence Galois invariant), and its reduction at a prime not
/// dividing any denominator keeps `dim U` while `dim V` can only drop. So a reduction
/// that is not Unstable proves semistability, and a reduction that is stable over the
/// algebraic closure of F_l proves stability. Unstable reductions are lifted and
/// checked exactly; when nothing is decided this way the scaling iteration runs.
pub fn decide_char0(
    a: &MatrixTuple<Rationals>,
    budget: Budget,
    iters: usize,
    tol: f64,
) -> Result<Char0Verdict> {
    let mut primes = Vec::new();
    let mut semistable_at = None;
    for l in CHAR0_PRIMES {
        let fl = PrimeField::new(l)?;
        let mut report = PrimeReport {
            prime: l,
            status: None,
            geometric: None,
        };
        let Some(red) = a.reduce_mod(fl) else {
            primes.push(report);
            continue;
        };
        let base = match king_bruteforce(&red, budget) {
            Ok(v) => v,
            Err(e) if e.is_budget() => {
                primes.push(report);
                continue;
            }
            Err(e) => return Err(e),
        };
        report.status = Some(base.status);
        match base.status {
            Status::Unstable => {
                primes.push(report);
                let (u, _) = base
                    .witness
                    .as_ref()
                    .expect("unstable verdict carries a witness");
                if let Some((u, v)) = lift_and_verify(a, u)? {
                    return Ok(Char0Verdict {
                        status: Char0Status::Unstable,
                        certificate_prime: Some(l),
                        primes,
                        witness: Some((
                            SubspaceJson::from_subspace(&u),
                            SubspaceJson::from_subspace(&v),
                        )),
                        scaling: None,
                    });
                }
            }
            Status::StrictlySemistable => {
                report.geometric = Some(Status::StrictlySemistable);
                primes.push(report);
                semistable_at.get_or_insert(l);
            }
            Status::Stable => {
                match king_geometric(&red, budget) {
                    Ok(g) => report.geometric = Some(g.status),
                    Err(e) if e.is_budget() => {}
                    Err(e) => return Err(e),
                }
                let stable = report.geometric == Some(Status::Stable);
                primes.push(report);
                if stable {
                    return Ok(Char0Verdict {
                        status: Char0Status::Stable,
                        certificate_prime: Some(l),
                        primes,
                        witness: None,
                        scaling: None,
                    });
                }
                semistable_at.get_or_insert(l);
            }
        }
    }
    if let Some(l) = semistable_at {
        return Ok(Char0Verdict {
            status: Char0Status::Semistable,
            certificate_prime: Some(l),
            primes,
            witness: None,
            scaling: None,
        });
    }
    if let Some((u, v)) = exact_witness(a)? {
        return Ok(Char0Verdict {
            status: Char0Status::Unstable,
            certificate_prime: None,
            primes,
            witness: Some((
                SubspaceJson::from_subspace(&u),
                SubspaceJson::from_subspace(&v),
            )),
            scaling: None,
        });
    }
    let s = king_scaling(a, iters, tol)?;
    let status = match s.status {
        ScalingStatus::LikelySemistable => Char0Status::LikelySemistable,
        ScalingStatus::LikelyUnstable => Char0Status::LikelyUnstable,
        ScalingStatus::Unstable => Char0Status::Unstable,
        ScalingStatus::Inconclusive => Char0Status::Inconclusive,
    };
    Ok(Char0Verdict {
        status,
        certificate_prime: None,
        primes,
        witness: s.witness.clone(),
        scaling: Some(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let id = MatrixTuple::from_i64(Rationals, 1, 1, &[vec![vec![1]]]).unwrap();
        assert_eq!(
            decide_char0(&id, Budget::DEFAULT, 100, 1e-9)
                .unwrap()
                .status,
            Char0Status::Stable
        );

        let n = MatrixTuple::from_i64(
            Rationals,
            2,
            2,
            &[vec![vec![0, 1], vec![0, 0]], vec![vec![0, 1], vec![0, 0]]],
        )
        .unwrap();
        assert_eq!(
            decide_char0(&n, Budget::DEFAULT, 100, 1e-9).unwrap().status,
            Char0Status::Unstable
        );

        // x^2 + 1 has roots mod 5, so this pencil is strictly semistable there.
        let rot = MatrixTuple::from_i64(
            Rationals,
            2,
            2,
            &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, -1], vec![1, 0]]],
        )
        .unwrap();
        let v = decide_char0(&rot, Budget::DEFAULT, 100, 1e-9).unwrap();
        assert_eq!(
            (v.status, v.certificate_prime),
            (Char0Status::Semistable, Some(5))
        );
    }

    #[test]
    fn all_bad_primes_fall_back_to_exact_search() {
        let half = num_rational::BigRational::new(1.into(), 385.into());
        let m = crate::exactlin::Matrix::from_rationals(
            2,
            2,
            vec![half.clone(), half.clone(), half.clone(), half],
        )
        .unwrap();
        let a = MatrixTuple::new(Rationals, 2, 2, vec![m]).unwrap();
        let v = decide_char0(&a, Budget::DEFAULT, 100, 1e-9).unwrap();
        assert!(v.primes.iter().all(|r| r.status.is_none()));
        assert_eq!(v.status, Char0Status::Unstable);
    }
}
