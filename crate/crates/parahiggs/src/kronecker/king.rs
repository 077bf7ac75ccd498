use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::onepsg::{mu_chi, Mu, OneParamSubgroup};
use super::tuple::{MatrixTuple, SubspaceJson};
use crate::error::Result;
use crate::exactlin::{
    enumerate_all, enumerate_subspaces, gaussian_binomial, total_subspaces, Budget, Field,
    FiniteField, GaloisField, PrimeField, Subspace,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Status {
    pub fn is_semistable(self) -> bool {
        self != Status::Unstable
    }
}

/// Outcome of a stability test with its witness pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict<F: Field> {
    pub status: Status,
    /// Destabilizing pair for `Unstable`, equality pair for `StrictlySemistable`.
    pub witness: Option<(Subspace<F>, Subspace<F>)>,
    /// Weight of the projector subgroup of the witness.
    pub mu_value: Option<Mu>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub u: SubspaceJson,
    pub v: SubspaceJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: Status,
    pub field: String,
    pub witness: Option<WitnessJson>,
    pub mu_value: Option<Mu>,
}

impl<F: Field> StabilityVerdict<F> {
    pub fn stable() -> Self {
        Self {
            status: Status::Stable,
            witness: None,
            mu_value: None,
        }
    }

    pub fn to_json(&self, field: &F) -> VerdictJson {
        VerdictJson {
            status: self.status,
            field: field.tag(),
            witness: self.witness.as_ref().map(|(u, v)| WitnessJson {
                u: SubspaceJson::from_subspace(u),
                v: SubspaceJson::from_subspace(v),
            }),
            mu_value: self.mu_value.clone(),
        }
    }
}

/// King's slope comparison: `p·dim V − q·dim U`.
pub fn king_defect(p: usize, q: usize, dim_u: usize, dim_v: usize) -> i64 {
    (p * dim_v) as i64 - (q * dim_u) as i64
}

/// Exhaustive King test over the subspaces of `F^p` whose dimension passes `keep`.
fn king_search<F: FiniteField>(
    a: &MatrixTuple<F>,
    budget: Budget,
    keep: impl Fn(usize) -> bool,
) -> Result<StabilityVerdict<F>> {
    let (p, q) = (a.p(), a.q());
    let dims: Vec<usize> = (0..=p).filter(|&d| keep(d)).collect();
    let required = dims.iter().fold(0u128, |acc, &d| {
        acc.saturating_add(gaussian_binomial(p, d, a.field().order()))
    });
    budget.check(required)?;
    let mut equality: Option<(Subspace<F>, Subspace<F>)> = None;
    for d in dims {
        for u in crate::exactlin::enumerate_subspaces(a.field(), p, d, Budget(u64::MAX))? {
            let v = a.image_span(&u)?;
            let defect = king_defect(p, q, u.dim(), v.dim());
            if defect < 0 {
                return finish(a, Status::Unstable, u, v);
            }
            if defect == 0 && equality.is_none() && !u.is_zero() && !u.is_full() {
                equality = Some((u, v));
            }
        }
    }
    match equality {
        Some((u, v)) => finish(a, Status::StrictlySemistable, u, v),
        None => Ok(StabilityVerdict::stable()),
    }
}

fn finish<F: Field>(
    a: &MatrixTuple<F>,
    status: Status,
    u: Subspace<F>,
    v: Subspace<F>,
) -> Result<StabilityVerdict<F>> {
    let mu = mu_chi(&OneParamSubgroup::projector(&u, &v), a)?;
    Ok(StabilityVerdict {
        status,
        witness: Some((u, v)),
        mu_value: Some(mu),
    })
}

/// King's criterion by enumerating every subspace `U` of `F^p` with `V = image_span(A, U)`.
///
/// Only subspaces rational over `F` are visited; see [`king_geometric`] for stability
/// over the algebraic closure. The first witness in canonical order is reported.
pub fn king_bruteforce<F: FiniteField>(
    a: &MatrixTuple<F>,
    budget: Budget,
) -> Result<StabilityVerdict<F>> {
    king_search(a, budget, |_| true)
}

/// King verdict over the algebraic closure of F_l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricVerdict {
    pub status: Status,
    /// The verdict for subspaces rational over F_l.
    pub base: StabilityVerdict<PrimeField>,
    /// Equality witness found only over GF(l^k).
    pub extension: Option<ExtensionWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionWitness {
    pub degree: u32,
    pub verdict: VerdictJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricVerdictJson {
    pub status: Status,
    pub base: VerdictJson,
    pub extension: Option<ExtensionWitness>,
}

impl GeometricVerdict {
    pub fn to_json(&self, field: &PrimeField) -> GeometricVerdictJson {
        GeometricVerdictJson {
            status: self.status,
            base: self.base.to_json(field),
            extension: self.extension.clone(),
        }
    }
}

/// Stability over the algebraic closure of F_l.
///
/// Instability is always visible over F_l (the maximal destabilizing pair is Galois
/// invariant). A stable subrepresentation of slope zero spanning `u` dimensions
/// of `F^p` has at most `p/u` Galois conjugates in direct sum, and `u` is a multiple
/// of `p/gcd(p,q)`, so it is defined over GF(l^k) with `k ≤ gcd(p,q)`. Those fields
/// are searched when the F_l verdict is `Stable`.
pub fn king_geometric(a: &MatrixTuple<PrimeField>, budget: Budget) -> Result<GeometricVerdict> {
    let base = king_bruteforce(a, budget)?;
    if base.status != Status::Stable {
        return Ok(GeometricVerdict {
            status: base.status,
            base,
            extension: None,
        });
    }
    let (p, q) = (a.p(), a.q());
    let g = p.gcd(&q);
    let step = p / g.max(1);
    for k in 2..=g as u32 {
        let gf = GaloisField::new(a.field().modulus(), k)?;
        let ext = a.embed(&gf);
        let v = king_search(&ext, budget, |d| d > 0 && d < p && d % step == 0)?;
        if v.status != Status::Stable {
            let verdict = v.to_json(&gf);
            return Ok(GeometricVerdict {
                status: v.status,
                base,
                extension: Some(ExtensionWitness { degree: k, verdict }),
            });
        }
    }
    Ok(GeometricVerdict {
        status: Status::Stable,
        base,
        extension: None,
    })
}

/// Pairs `(U, V)` with `V ⊇ image_span(A, U)`, visited in canonical order of `U`, then of `V`.
/// `visit` returns `false` to stop early. The budget is checked against the product of the
/// subspace counts of both sides.
pub fn for_each_invariant_pair<F: FiniteField>(
    a: &MatrixTuple<F>,
    budget: Budget,
    mut visit: impl FnMut(&Subspace<F>, &Subspace<F>) -> Result<bool>,
) -> Result<()> {
    let (p, q, ord) = (a.p(), a.q(), a.field().order());
    budget.check(total_subspaces(p, ord).saturating_mul(total_subspaces(q, ord)))?;
    let field = a.field();
    for u in enumerate_all(field, p, Budget(u64::MAX))? {
        let w = a.image_span(&u)?;
        let pivots = w.pivots();
        let free: Vec<usize> = (0..q).filter(|i| !pivots.contains(i)).collect();
        for d in 0..=free.len() {
            for x in enumerate_subspaces(field, free.len(), d, Budget(u64::MAX))? {
                let mut vs: Vec<Vec<F::Elem>> = w.basis_vectors().to_vec();
                for b in x.basis_vectors() {
                    let mut v = vec![field.zero(); q];
                    for (c, &i) in b.iter().zip(&free) {
                        v[i] = c.clone();
                    }
                    vs.push(v);
                }
                let v = Subspace::span(field.clone(), q, &vs)?;
                if !visit(&u, &v)? {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Matrix;
    use crate::multiweight::int;

    fn f(l: u64) -> PrimeField {
        PrimeField::new(l).unwrap()
    }

    #[test]
    fn examples() {
        let f5 = f(5);
        let zero = MatrixTuple::from_i64(f5, 1, 1, &[vec![vec![0]]]).unwrap();
        let v = king_bruteforce(&zero, Budget::DEFAULT).unwrap();
        assert_eq!(v.status, Status::Unstable);
        let (u, w) = v.witness.unwrap();
        assert!(u.is_full() && w.is_zero());
        assert_eq!(v.mu_value, Some(Mu::Finite(int(-1))));

        let f3 = f(3);
        let cols = MatrixTuple::from_i64(
            f3,
            1,
            2,
            &[
                vec![vec![1], vec![0]],
                vec![vec![0], vec![1]],
                vec![vec![1], vec![1]],
            ],
        )
        .unwrap();
        assert_eq!(
            king_bruteforce(&cols, Budget::DEFAULT).unwrap().status,
            Status::Stable
        );

        let id2 = MatrixTuple::from_i64(f5, 2, 2, &[vec![vec![1, 0], vec![0, 1]]]).unwrap();
        assert_eq!(
            king_bruteforce(&id2, Budget::DEFAULT).unwrap().status,
            Status::StrictlySemistable
        );
    }

    #[test]
    fn one_by_one_identity_is_stable() {
        let one = MatrixTuple::from_i64(f(5), 1, 1, &[vec![vec![1]]]).unwrap();
        assert_eq!(
            king_bruteforce(&one, Budget::DEFAULT).unwrap().status,
            Status::Stable
        );
    }

    #[test]
    fn irreducible_pencil_is_only_rationally_stable() {
        // (I, M) with x^2 - 2 irreducible over F_5: no F_5 eigenvector, but one over F_25.
        let f5 = f(5);
        let a = MatrixTuple::from_i64(
            f5,
            2,
            2,
            &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 2], vec![1, 0]]],
        )
        .unwrap();
        assert_eq!(
            king_bruteforce(&a, Budget::DEFAULT).unwrap().status,
            Status::Stable
        );
        let g = king_geometric(&a, Budget::DEFAULT).unwrap();
        assert_eq!(g.status, Status::StrictlySemistable);
        assert_eq!(g.extension.as_ref().unwrap().degree, 2);
    }

    #[test]
    fn witness_is_first_in_canonical_order() {
        let f5 = f(5);
        let n = Matrix::from_i64(f5, &[vec![0, 1], vec![0, 0]]).unwrap();
        let a = MatrixTuple::new(f5, 2, 2, vec![n]).unwrap();
        let v = king_bruteforce(&a, Budget::DEFAULT).unwrap();
        assert_eq!(v.status, Status::Unstable);
        let (u, w) = v.witness.unwrap();
        assert_eq!(u, Subspace::coordinate(f5, 2, &[0]));
        assert!(w.is_zero());
    }
}
