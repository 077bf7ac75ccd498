use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::king::{king_bruteforce, king_defect, Status};
use super::tuple::{MatrixTuple, SubspaceJson};
use crate::error::Result;
use crate::exactlin::{Budget, Field, PrimeField, Rationals, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalingStatus {
    LikelySemistable,
    LikelyUnstable,
    /// An exactly verified destabilizing pair over Q.
    Unstable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingVerdict {
    pub status: ScalingStatus,
    pub iterations: usize,
    /// `None` until one full normalization step has run.
    pub residual: Option<f64>,
    /// `det(q·ΣA_jA_jᵀ)^{1/q}` at the last left normalization; tends to 1 on convergence.
    pub capacity: f64,
    pub witness: Option<(SubspaceJson, SubspaceJson)>,
}

/// Residual at or above this after `iters` steps reads as instability.
pub fn unstable_threshold(p: usize, q: usize) -> f64 {
    1.0 / ((p + q) * (p + q)) as f64
}

fn gram(mats: &[DMatrix<f64>], left: bool) -> DMatrix<f64> {
    let n = if left {
        mats[0].nrows()
    } else {
        mats[0].ncols()
    };
    let mut out = DMatrix::zeros(n, n);
    for a in mats {
        out += if left {
            a * a.transpose()
        } else {
            a.transpose() * a
        };
    }
    out
}

fn residual(mats: &[DMatrix<f64>], p: usize, q: usize) -> f64 {
    let r = gram(mats, true) - DMatrix::identity(q, q) / q as f64;
    let c = gram(mats, false) - DMatrix::identity(p, p) / p as f64;
    (r.norm_squared() + c.norm_squared()).sqrt()
}

/// Alternating left/right normalization of `X ↦ Σ A_j X A_jᵀ` toward `ΣAAᵀ = I/q`, `ΣAᵀA = I/p`.
///
/// Semistability is equivalent to the infimum of the residual being zero. A
/// `LikelyUnstable` outcome triggers an exact witness search over Q; only a verified
/// pair yields `Unstable`.
pub fn king_scaling(a: &MatrixTuple<Rationals>, iters: usize, tol: f64) -> Result<ScalingVerdict> {
    let (p, q) = (a.p(), a.q());
    let mut verdict = ScalingVerdict {
        status: ScalingStatus::Inconclusive,
        iterations: 0,
        residual: None,
        capacity: 0.0,
        witness: None,
    };
    let mut mats: Vec<DMatrix<f64>> = a.mats().iter().map(|m| m.to_f64()).collect();
    let mut singular = mats.is_empty();
    for it in 0..iters {
        if singular {
            break;
        }
        verdict.iterations = it + 1;
        let r = gram(&mats, true) * q as f64;
        verdict.capacity = r.determinant().max(0.0).powf(1.0 / q as f64);
        let Some(ch) = r.cholesky() else {
            singular = true;
            break;
        };
        let l = ch.l();
        for m in &mut mats {
            *m = l
                .solve_lower_triangular(m)
                .expect("cholesky factor is invertible");
        }
        let c = gram(&mats, false) * p as f64;
        let Some(ch) = c.cholesky() else {
            singular = true;
            break;
        };
        let l = ch.l();
        for m in &mut mats {
            // A ← A·L⁻ᵀ, solved as (L⁻¹Aᵀ)ᵀ.
            *m = l
                .solve_lower_triangular(&m.transpose())
                .expect("cholesky factor is invertible")
                .transpose();
        }
        let res = residual(&mats, p, q);
        if !res.is_finite() {
            singular = true;
            break;
        }
        verdict.residual = Some(res);
        if res < tol {
            verdict.status = ScalingStatus::LikelySemistable;
            return Ok(verdict);
        }
    }
    if singular
        || verdict
            .residual
            .is_none_or(|r| r >= unstable_threshold(p, q))
    {
        verdict.status = ScalingStatus::LikelyUnstable;
    }
    if verdict.status == ScalingStatus::LikelyUnstable || singular {
        if let Some((u, v)) = exact_witness(a)? {
            verdict.status = ScalingStatus::Unstable;
            verdict.witness = Some((
                SubspaceJson::from_subspace(&u),
                SubspaceJson::from_subspace(&v),
            ));
        }
    }
    Ok(verdict)
}

/// Grows `U` to the largest subspace with the same span `V`, which only lowers the defect.
fn saturate(
    a: &MatrixTuple<Rationals>,
    u: Subspace<Rationals>,
) -> Result<(Subspace<Rationals>, Subspace<Rationals>)> {
    let v = a.image_span(&u)?;
    let u = a.preimage(&v)?;
    let v = a.image_span(&u)?;
    Ok((u, v))
}

fn destabilizes(
    a: &MatrixTuple<Rationals>,
    u: &Subspace<Rationals>,
    v: &Subspace<Rationals>,
) -> bool {
    king_defect(a.p(), a.q(), u.dim(), v.dim()) < 0
}

/// Searches exact destabilizing pairs over Q from a fixed list of candidate sources.
pub fn exact_witness(
    a: &MatrixTuple<Rationals>,
) -> Result<Option<(Subspace<Rationals>, Subspace<Rationals>)>> {
    let (p, q) = (a.p(), a.q());
    let mut seeds: Vec<Subspace<Rationals>> = vec![Subspace::full(Rationals, p)];
    // common kernel, then single kernels
    seeds.push(a.preimage(&Subspace::zero(Rationals, q))?);
    for m in a.mats() {
        seeds.push(Subspace::span(Rationals, p, &m.kernel())?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..4 {
        let coeffs: Vec<_> = (0..a.r())
            .map(|_| Rationals.from_i64(rng.gen_range(-3..=3)))
            .collect();
        seeds.push(Subspace::span(
            Rationals,
            p,
            &a.combination(&coeffs).kernel(),
        )?);
    }
    if p == q {
        seeds.extend(wong_chain(a)?);
    }
    for s in seeds {
        let (u, v) = saturate(a, s)?;
        if destabilizes(a, &u, &v) {
            return Ok(Some((u, v)));
        }
    }
    for l in [5u64, 7, 11] {
        if let Some(w) = lifted_witness(a, l)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// For a square tuple: `W_{k+1} = A_1^{-1}(Σ_{j≥2} A_j W_k)` from `W_0 = F^p`, the limit of the
/// second Wong sequence, together with its iterates.
fn wong_chain(a: &MatrixTuple<Rationals>) -> Result<Vec<Subspace<Rationals>>> {
    let Some((first, rest)) = a.mats().split_first() else {
        return Ok(vec![]);
    };
    if rest.is_empty() {
        return Ok(vec![]);
    }
    let mut w = Subspace::full(Rationals, a.p());
    let mut out = vec![];
    for _ in 0..=a.p() {
        let mut img = Subspace::zero(Rationals, a.q());
        for m in rest {
            img = img.sum(&w.image(m)?)?;
        }
        let next = img.preimage(first)?.intersect(&w)?;
        if next == w {
            break;
        }
        w = next;
        out.push(w.clone());
    }
    Ok(out)
}

/// Reduces mod `l`, runs the exhaustive test and verifies the lifted witness over Q.
pub fn lifted_witness(
    a: &MatrixTuple<Rationals>,
    l: u64,
) -> Result<Option<(Subspace<Rationals>, Subspace<Rationals>)>> {
    let fl = PrimeField::new(l)?;
    let Some(red) = a.reduce_mod(fl) else {
        return Ok(None);
    };
    let verdict = match king_bruteforce(&red, Budget::DEFAULT) {
        Ok(v) => v,
        Err(e) if e.is_budget() => return Ok(None),
        Err(e) => return Err(e),
    };
    if verdict.status != Status::Unstable {
        return Ok(None);
    }
    let (u, _) = verdict.witness.expect("unstable verdict carries a witness");
    lift_and_verify(a, &u)
}

/// Symmetric-residue lift of `U`; kept only when it destabilizes over Q.
pub fn lift_and_verify(
    a: &MatrixTuple<Rationals>,
    u: &Subspace<PrimeField>,
) -> Result<Option<(Subspace<Rationals>, Subspace<Rationals>)>> {
    let fl = *u.field();
    let lifted = u.map_field(Rationals, |x| Rationals.from_i64(fl.symmetric_lift(*x)));
    let (u, v) = saturate(a, lifted)?;
    Ok(destabilizes(a, &u, &v).then_some((u, v)))
}
