//! Dictionary between matrix tuples and split parabolic SU(p,q) Higgs bundles on the sphere.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Budget, Field, FiniteField, Matrix, Rationals, Subspace};
use crate::json;
use crate::kronecker::{
    for_each_invariant_pair, king_bruteforce, MatrixTuple, Status, SubspaceJson, VerdictJson,
    WitnessJson,
};
use crate::multiweight::{certificate, int, rat, MultiWeight, Rat};
use crate::weightgen::{a_range, ConstructionError};

/// `𝒰 = ℂ^p ⊗ 𝒪(−a+1)`, `𝒱 = ℂ^q ⊗ 𝒪(−a)`; the Higgs field lives in
/// `Hom(ℂ^p, ℂ^q) ⊗ H⁰(𝒪(s−3))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitBundleData {
    pub p: usize,
    pub q: usize,
    pub s: usize,
    pub a: i64,
    pub d: i64,
    pub deg_vec_u: Vec<i64>,
    pub deg_vec_v: Vec<i64>,
    pub sections_dim: usize,
    /// Basis of `H⁰(𝒪(s−3))` pairing with `A_1, …, A_{s−2}`.
    pub section_basis: Vec<String>,
}

impl SplitBundleData {
    pub fn deg_u(&self) -> i64 {
        self.deg_vec_u.iter().sum()
    }
    pub fn deg_v(&self) -> i64 {
        self.deg_vec_v.iter().sum()
    }
}

fn monomial(k: usize) -> String {
    match k {
        0 => "1".into(),
        1 => "z".into(),
        _ => format!("z^{k}"),
    }
}

pub fn bundle_data(p: usize, q: usize, s: usize, a: i64) -> Result<SplitBundleData> {
    if p == 0 || q == 0 {
        return Err(ConstructionError::EmptySide { p, q }.into());
    }
    if s < 3 {
        return Err(ConstructionError::TooFewPunctures { s }.into());
    }
    let range = a_range(p, q, s);
    if !range.integers.contains(&a) {
        return Err(ConstructionError::AOutOfRange {
            a,
            lo: range.lo,
            hi: range.hi,
        }
        .into());
    }
    Ok(SplitBundleData {
        p,
        q,
        s,
        a,
        d: (q as i64 - p as i64) * a + p as i64,
        deg_vec_u: vec![1 - a; p],
        deg_vec_v: vec![-a; q],
        sections_dim: s - 2,
        section_basis: (0..s - 2).map(monomial).collect(),
    })
}

/// `ε = Σ_j (β^j − α^j)` of a constant multiweight.
fn constant_epsilon(mw: &MultiWeight) -> Result<Rat> {
    mw.check()?;
    if !mw.is_constant() {
        return Err(ConstructionError::NotConstant.into());
    }
    Ok(mw
        .alpha
        .iter()
        .zip(&mw.beta)
        .map(|(a, b)| &b[0] - &a[0])
        .sum())
}

/// Parabolic degree of the split subbundle `U' ⊗ 𝒪(−a+1) ⊕ V' ⊗ 𝒪(−a)`:
/// `(q·dim U' − p·dim V')(1 − ε)/(p + q)`.
pub fn invariant_degree(mw: &MultiWeight, dim_u: usize, dim_v: usize) -> Result<Rat> {
    let eps = constant_epsilon(mw)?;
    if dim_u > mw.p || dim_v > mw.q {
        return Err(Error::InvalidInput(format!(
            "subspace dimensions ({dim_u}, {dim_v}) exceed ({}, {})",
            mw.p, mw.q
        )));
    }
    let (p, q) = (mw.p as i64, mw.q as i64);
    Ok(int(q * dim_u as i64 - p * dim_v as i64) * (Rat::one() - eps) / int(p + q))
}

/// Parabolic degree of the same subbundle computed from the bundle and the weights directly.
pub fn split_parabolic_degree(
    data: &SplitBundleData,
    mw: &MultiWeight,
    dim_u: usize,
    dim_v: usize,
) -> Rat {
    let (du, dv) = (int(dim_u as i64), int(dim_v as i64));
    let wa: Rat = mw.alpha.iter().map(|r| r[0].clone()).sum();
    let wb: Rat = mw.beta.iter().map(|r| r[0].clone()).sum();
    &du * int(1 - data.a) + &dv * int(-data.a) + du * wa + dv * wb
}

/// Higgs-side verdict: positive degree destabilizes, zero on a proper pair is strict semistability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiggsVerdict<F: Field> {
    pub status: Status,
    pub witness: Option<(Subspace<F>, Subspace<F>)>,
    pub degree: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiggsVerdictJson {
    pub status: Status,
    pub witness: Option<WitnessJson>,
    #[serde(with = "json::rat_opt")]
    pub degree: Option<Rat>,
}

impl<F: Field> HiggsVerdict<F> {
    pub fn to_json(&self) -> HiggsVerdictJson {
        HiggsVerdictJson {
            status: self.status,
            witness: self.witness.as_ref().map(|(u, v)| WitnessJson {
                u: SubspaceJson::from_subspace(u),
                v: SubspaceJson::from_subspace(v),
            }),
            degree: self.degree.clone(),
        }
    }
}

pub fn higgs_verdict<F: FiniteField>(
    a: &MatrixTuple<F>,
    mw: &MultiWeight,
    budget: Budget,
) -> Result<HiggsVerdict<F>> {
    let (p, q) = (a.p(), a.q());
    let mut unstable = None;
    let mut equality = None;
    for_each_invariant_pair(a, budget, |u, v| {
        let deg = invariant_degree(mw, u.dim(), v.dim())?;
        if deg.is_positive() {
            unstable = Some((u.clone(), v.clone(), deg));
            return Ok(false);
        }
        let trivial = (u.dim() == 0 && v.dim() == 0) || (u.dim() == p && v.dim() == q);
        if deg.is_zero() && !trivial && equality.is_none() {
            equality = Some((u.clone(), v.clone(), deg));
        }
        Ok(true)
    })?;
    Ok(match (unstable, equality) {
        (Some((u, v, d)), _) => HiggsVerdict {
            status: Status::Unstable,
            witness: Some((u, v)),
            degree: Some(d),
        },
        (None, Some((u, v, d))) => HiggsVerdict {
            status: Status::StrictlySemistable,
            witness: Some((u, v)),
            degree: Some(d),
        },
        (None, None) => HiggsVerdict {
            status: Status::Stable,
            witness: None,
            degree: None,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub agree: bool,
    pub bundle: SplitBundleData,
    pub king: VerdictJson,
    pub higgs: HiggsVerdictJson,
}

/// King verdict of `A` against the split-subbundle Higgs verdict of `(𝒰 ⊕ 𝒱, γ_A)`.
pub fn equivalence_check<F: FiniteField>(
    a: &MatrixTuple<F>,
    mw: &MultiWeight,
    d: i64,
    budget: Budget,
) -> Result<EquivalenceReport> {
    mw.check()?;
    if mw.p != a.p() || mw.q != a.q() {
        return Err(Error::DimensionMismatch {
            context: "multiweight vs tuple (p + q)",
            expected: a.p() + a.q(),
            found: mw.p + mw.q,
        });
    }
    if mw.s < 3 || a.r() != mw.s - 2 {
        return Err(Error::DimensionMismatch {
            context: "tuple length s - 2",
            expected: mw.s.saturating_sub(2),
            found: a.r(),
        });
    }
    let cert = certificate(mw, d)?;
    // deg 𝒰 = p(−a+1)
    let a_rat = Rat::one() - &cert.deg_u / int(mw.p as i64);
    if !a_rat.is_integer() {
        return Err(Error::InvalidInput(format!(
            "degree {} of U is not p(1 - a) for an integer a",
            crate::exactlin::format_rational(&cert.deg_u)
        )));
    }
    let bundle = bundle_data(
        mw.p,
        mw.q,
        mw.s,
        a_rat
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidInput("a out of range".into()))?,
    )?;
    let king = king_bruteforce(a, budget)?;
    let higgs = higgs_verdict(a, mw, budget)?;
    Ok(EquivalenceReport {
        agree: king.status == higgs.status,
        bundle,
        king: king.to_json(a.field()),
        higgs: higgs.to_json(),
    })
}

/// `γ_A(z) = Σ_j A_j z^{j−1}` in the lower-left block of a `(p+q)`-square matrix.
pub fn higgs_field_at(a: &MatrixTuple<Rationals>, z: &Rat) -> Matrix<Rationals> {
    let (p, q) = (a.p(), a.q());
    let mut zk = Rat::one();
    let mut gamma = Matrix::zeros(Rationals, q, p);
    for m in a.mats() {
        gamma = gamma.add(&m.scale(&zk)).expect("same shape");
        zk *= z;
    }
    Matrix::from_fn(Rationals, p + q, p + q, |i, j| {
        if i >= p && j < p {
            gamma.get(i - p, j).clone()
        } else {
            Rat::zero()
        }
    })
}

/// `Φ(z)² = 0` as a polynomial identity: `Φ²` has degree at most `2(r−1)` in `z`, so
/// vanishing at `2r − 1` points suffices.
pub fn is_block_nilpotent(a: &MatrixTuple<Rationals>) -> bool {
    let pts = (2 * a.r()).max(1) as i64;
    (0..pts).all(|t| {
        let phi = higgs_field_at(a, &int(t));
        phi.mul(&phi).expect("square").is_zero()
    })
}

/// The SU(1,1) component: `γ ∈ H⁰(𝒪(s−3))`, stable iff `γ ≠ 0`, classes form `ℙ^{s−3}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Su11Component {
    pub s: usize,
    pub dim: usize,
    #[serde(with = "json::rat")]
    pub stability_threshold: Rat,
    #[serde(with = "json::rat")]
    pub beta_sum: Rat,
    #[serde(with = "json::rat_vec")]
    pub alpha: Vec<Rat>,
    /// `deg 𝒰 = −(s−1)/2`.
    pub deg_u: i64,
    pub sections_dim: usize,
}

pub fn su11_component(s: usize, beta_profile: &[Rat]) -> Result<Su11Component> {
    if s < 3 || s.is_multiple_of(2) {
        return Err(ConstructionError::Su11Parity { s }.into());
    }
    if beta_profile.len() != s {
        return Err(ConstructionError::ProfileLength {
            expected: s,
            found: beta_profile.len(),
        }
        .into());
    }
    let half = rat(1, 2);
    if let Some(j) = beta_profile
        .iter()
        .position(|b| b <= &half || b >= &Rat::one())
    {
        return Err(ConstructionError::BetaOutOfRange { puncture: j }.into());
    }
    let beta_sum: Rat = beta_profile.iter().sum();
    let bound = rat(s as i64 + 1, 2);
    if beta_sum >= bound {
        return Err(ConstructionError::ThresholdViolated {
            sum: beta_sum,
            bound,
        }
        .into());
    }
    Ok(Su11Component {
        s,
        dim: s - 3,
        stability_threshold: bound,
        beta_sum,
        alpha: beta_profile.iter().map(|b| Rat::one() - b).collect(),
        deg_u: -((s as i64 - 1) / 2),
        sections_dim: s - 2,
    })
}

/// Stability of `(𝒰 ⊕ 𝒱, γ)` in the SU(1,1) model.
pub fn su11_stable(gamma: &[Rat]) -> bool {
    gamma.iter().any(|c| !c.is_zero())
}

/// Representative of `[γ] ∈ ℙ^{s−3}` with first nonzero coordinate 1.
pub fn su11_point(gamma: &[Rat]) -> Option<Vec<Rat>> {
    let lead = gamma.iter().find(|c| !c.is_zero())?;
    Some(gamma.iter().map(|c| c / lead).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;
    use crate::weightgen::{construct_constant, ConstructionInput};

    fn build(p: usize, q: usize, s: usize, a: i64) -> crate::weightgen::Construction {
        construct_constant(&ConstructionInput {
            p,
            q,
            s,
            a,
            epsilon_profile: None,
        })
        .unwrap()
    }

    #[test]
    fn bundle_examples() {
        let b = bundle_data(1, 2, 5, 2).unwrap();
        assert_eq!(
            (
                b.deg_vec_u.clone(),
                b.deg_vec_v.clone(),
                b.sections_dim,
                b.d
            ),
            (vec![-1], vec![-2, -2], 3, 3)
        );
        let b = bundle_data(1, 1, 5, 3).unwrap();
        assert_eq!(
            (
                b.deg_vec_u.clone(),
                b.deg_vec_v.clone(),
                b.sections_dim,
                b.d
            ),
            (vec![-2], vec![-3], 3, 1)
        );
        let b = bundle_data(2, 2, 5, 3).unwrap();
        assert_eq!(
            (
                b.deg_vec_u.clone(),
                b.deg_vec_v.clone(),
                b.sections_dim,
                b.d
            ),
            (vec![-2, -2], vec![-3, -3], 3, 2)
        );
        assert!(bundle_data(1, 2, 5, 9).is_err());
    }

    #[test]
    fn degrees_match_certificate() {
        for (p, q, s) in [(1, 2, 5), (2, 1, 5), (2, 3, 6), (1, 1, 5)] {
            for a in a_range(p, q, s).integers {
                let Ok(c) = construct_constant(&ConstructionInput {
                    p,
                    q,
                    s,
                    a,
                    epsilon_profile: None,
                }) else {
                    continue;
                };
                let b = bundle_data(p, q, s, a).unwrap();
                assert_eq!(int(b.deg_u()), c.certificate.deg_u);
                assert_eq!(int(b.deg_v()), c.certificate.deg_v);
                assert!((int(b.deg_u() + b.deg_v())
                    + c.multiweight.norm_alpha()
                    + c.multiweight.norm_beta())
                .is_zero());
            }
        }
    }

    #[test]
    fn invariant_degree_examples() {
        let c = build(1, 2, 5, 2);
        assert_eq!(c.certificate.epsilon, rat(1, 2));
        assert_eq!(invariant_degree(&c.multiweight, 0, 0).unwrap(), int(0));
        assert_eq!(invariant_degree(&c.multiweight, 1, 1).unwrap(), rat(1, 6));
        assert_eq!(invariant_degree(&c.multiweight, 1, 2).unwrap(), int(0));
        let b = bundle_data(1, 2, 5, 2).unwrap();
        for du in 0..=1 {
            for dv in 0..=2 {
                assert_eq!(
                    invariant_degree(&c.multiweight, du, dv).unwrap(),
                    split_parabolic_degree(&b, &c.multiweight, du, dv)
                );
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let f3 = PrimeField::new(3).unwrap();
        let c = build(1, 2, 5, 2);
        let a = MatrixTuple::from_i64(
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
        let r = equivalence_check(&a, &c.multiweight, c.d, Budget::DEFAULT).unwrap();
        assert!(r.agree);
        assert_eq!(r.king.status, Status::Stable);

        let z = MatrixTuple::from_i64(f3, 1, 2, &[vec![], vec![], vec![]]).unwrap();
        let r = equivalence_check(&z, &c.multiweight, c.d, Budget::DEFAULT).unwrap();
        assert!(r.agree);
        assert_eq!(r.higgs.status, Status::Unstable);
        let w = r.higgs.witness.unwrap();
        assert_eq!((w.u.basis.len(), w.v.basis.len()), (1, 0));
    }

    #[test]
    fn square_pencil_is_strictly_semistable_on_both_sides() {
        let f5 = PrimeField::new(5).unwrap();
        let c = build(2, 2, 4, 2);
        let a = MatrixTuple::from_i64(
            f5,
            2,
            2,
            &[vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 2]]],
        )
        .unwrap();
        let r = equivalence_check(&a, &c.multiweight, c.d, Budget::DEFAULT).unwrap();
        assert!(r.agree);
        assert_eq!(r.higgs.status, Status::StrictlySemistable);
    }

    #[test]
    fn su11_examples() {
        let c = su11_component(3, &vec![rat(3, 5); 3]).unwrap();
        assert_eq!((c.dim, c.beta_sum.clone()), (0, rat(9, 5)));
        let c = su11_component(5, &vec![rat(11, 20); 5]).unwrap();
        assert_eq!((c.dim, c.beta_sum.clone(), c.deg_u), (2, rat(11, 4), -2));
        let e = su11_component(5, &vec![rat(4, 5); 5]).unwrap_err();
        assert_eq!(
            e,
            ConstructionError::ThresholdViolated {
                sum: int(4),
                bound: int(3)
            }
            .into()
        );
        assert!(su11_component(4, &vec![rat(3, 5); 4]).is_err());
        assert!(!su11_stable(&[int(0), int(0)]));
        assert_eq!(
            su11_point(&[int(0), int(2), int(4)]).unwrap(),
            vec![int(0), int(1), int(2)]
        );
    }

    #[test]
    fn higgs_field_is_nilpotent() {
        let a = MatrixTuple::from_i64(
            Rationals,
            2,
            3,
            &[
                vec![vec![1, 2], vec![0, 1], vec![3, 0]],
                vec![vec![0, 1], vec![1, 1], vec![2, 2]],
            ],
        )
        .unwrap();
        assert!(is_block_nilpotent(&a));
        assert!(!higgs_field_at(&a, &int(1)).is_zero());
    }
}
