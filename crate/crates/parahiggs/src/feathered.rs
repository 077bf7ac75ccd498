//! Kronecker data decorated with complete flags, and its weighted stability.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{
    check_flag, flag_meet_dims, standard_flag, Budget, Field, FiniteField, Matrix, Subspace,
};
use crate::json;
use crate::kronecker::{
    for_each_invariant_pair, king_defect, mu_chi, Grading, MatrixTuple, Mu, OneParamSubgroup,
    StabilityVerdict, Status,
};
use crate::multiweight::{int, Rat};

/// `s` complete flags on each side; flag `j` lists `F_0 = ambient ⊋ F_1 ⊋ … ⊋ F_n = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagConfiguration<F: Field> {
    p: usize,
    q: usize,
    p_flags: Vec<Vec<Subspace<F>>>,
    q_flags: Vec<Vec<Subspace<F>>>,
}

fn check_complete<F: Field>(flag: &[Subspace<F>], n: usize) -> Result<()> {
    if flag.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            context: "complete flag length",
            expected: n + 1,
            found: flag.len(),
        });
    }
    check_flag(flag, n)
}

/// The flag `F_i = span(v_1, …, v_{n−i})` of an ordered basis.
pub fn flag_from_basis<F: Field>(
    field: &F,
    n: usize,
    basis: &[Vec<F::Elem>],
) -> Result<Vec<Subspace<F>>> {
    let flag = (0..=n)
        .map(|i| {
            Subspace::span(
                field.clone(),
                n,
                &basis[..n.saturating_sub(i).min(basis.len())],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    check_complete(&flag, n)?;
    Ok(flag)
}

impl<F: Field> FlagConfiguration<F> {
    pub fn new(
        p: usize,
        q: usize,
        p_flags: Vec<Vec<Subspace<F>>>,
        q_flags: Vec<Vec<Subspace<F>>>,
    ) -> Result<Self> {
        if p_flags.len() != q_flags.len() {
            return Err(Error::DimensionMismatch {
                context: "flag count",
                expected: p_flags.len(),
                found: q_flags.len(),
            });
        }
        for f in &p_flags {
            check_complete(f, p)?;
        }
        for h in &q_flags {
            check_complete(h, q)?;
        }
        Ok(Self {
            p,
            q,
            p_flags,
            q_flags,
        })
    }

    pub fn standard(field: F, p: usize, q: usize, s: usize) -> Self {
        Self {
            p,
            q,
            p_flags: vec![standard_flag(field.clone(), p); s],
            q_flags: vec![standard_flag(field, q); s],
        }
    }

    pub fn s(&self) -> usize {
        self.p_flags.len()
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn q(&self) -> usize {
        self.q
    }
    pub fn p_flags(&self) -> &[Vec<Subspace<F>>] {
        &self.p_flags
    }
    pub fn q_flags(&self) -> &[Vec<Subspace<F>>] {
        &self.q_flags
    }

    /// Moves every flag by `(g1, g2)`, matching `A ↦ g2 A g1⁻¹`.
    pub fn act(&self, g1: &Matrix<F>, g2: &Matrix<F>) -> Result<Self> {
        let mv = |flags: &[Vec<Subspace<F>>], g: &Matrix<F>| -> Result<Vec<Vec<Subspace<F>>>> {
            flags
                .iter()
                .map(|f| f.iter().map(|x| x.image(g)).collect())
                .collect()
        };
        Self::new(
            self.p,
            self.q,
            mv(&self.p_flags, g1)?,
            mv(&self.q_flags, g2)?,
        )
    }

    pub fn to_json(&self) -> FlagConfigurationJson {
        let enc = |flags: &[Vec<Subspace<F>>]| flags.iter().map(|f| adapted_basis(f)).collect();
        FlagConfigurationJson {
            p: self.p,
            q: self.q,
            p_flags: enc(&self.p_flags),
            q_flags: enc(&self.q_flags),
        }
    }

    pub fn from_json(field: &F, j: &FlagConfigurationJson) -> Result<Self> {
        let dec = |flags: &[Vec<Vec<String>>], n: usize| -> Result<Vec<Vec<Subspace<F>>>> {
            flags
                .iter()
                .map(|basis| {
                    if basis.len() != n || basis.iter().any(|v| v.len() != n) {
                        return Err(Error::DimensionMismatch {
                            context: "flag basis",
                            expected: n,
                            found: basis.len(),
                        });
                    }
                    let vs = basis
                        .iter()
                        .map(|v| {
                            v.iter()
                                .map(|x| field.parse_elem(x))
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    flag_from_basis(field, n, &vs)
                })
                .collect()
        };
        Self::new(j.p, j.q, dec(&j.p_flags, j.p)?, dec(&j.q_flags, j.q)?)
    }
}

impl<F: FiniteField> FlagConfiguration<F> {
    pub fn random(field: &F, p: usize, q: usize, s: usize, rng: &mut impl rand::Rng) -> Self {
        let mut one = |n: usize| {
            let g = crate::kronecker::random_invertible(field, n, rng);
            flag_from_basis(field, n, &(0..n).map(|j| g.column(j)).collect::<Vec<_>>())
                .expect("invertible columns give a complete flag")
        };
        let p_flags = (0..s).map(|_| one(p)).collect();
        let q_flags = (0..s).map(|_| one(q)).collect();
        Self {
            p,
            q,
            p_flags,
            q_flags,
        }
    }
}

/// Basis `v_1, …, v_n` with `F_i = span(v_1, …, v_{n−i})`: each new vector is the first
/// canonical basis vector of `F_{i}` outside `F_{i+1}`.
fn adapted_basis<F: Field>(flag: &[Subspace<F>]) -> Vec<Vec<String>> {
    let n = flag.len() - 1;
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let v = flag[i]
            .basis_vectors()
            .iter()
            .find(|v| !flag[i + 1].contains(v))
            .expect("strict flag");
        out.push(v.iter().map(|x| flag[i].field().format_elem(x)).collect());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagConfigurationJson {
    pub p: usize,
    pub q: usize,
    /// One adapted basis per flag.
    pub p_flags: Vec<Vec<Vec<String>>>,
    pub q_flags: Vec<Vec<Vec<String>>>,
}

/// Flag weights `η` (s × p) and `ζ` (s × q), strictly increasing along each row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "FeatherWeightsJson")]
pub struct FeatherWeights {
    #[serde(with = "json::rat_grid")]
    eta: Vec<Vec<Rat>>,
    #[serde(with = "json::rat_grid")]
    zeta: Vec<Vec<Rat>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FeatherWeightsJson {
    #[serde(with = "json::rat_grid")]
    eta: Vec<Vec<Rat>>,
    #[serde(with = "json::rat_grid")]
    zeta: Vec<Vec<Rat>>,
}

impl TryFrom<FeatherWeightsJson> for FeatherWeights {
    type Error = Error;
    fn try_from(j: FeatherWeightsJson) -> Result<Self> {
        let all_zero = j.eta.iter().chain(&j.zeta).flatten().all(Zero::is_zero);
        if all_zero && j.eta.len() == j.zeta.len() {
            return Ok(Self {
                eta: j.eta,
                zeta: j.zeta,
            });
        }
        Self::new(j.eta, j.zeta)
    }
}

fn increasing(rows: &[Vec<Rat>]) -> bool {
    rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]))
}

impl FeatherWeights {
    pub fn new(eta: Vec<Vec<Rat>>, zeta: Vec<Vec<Rat>>) -> Result<Self> {
        if eta.len() != zeta.len() {
            return Err(Error::DimensionMismatch {
                context: "feather weight rows",
                expected: eta.len(),
                found: zeta.len(),
            });
        }
        if !increasing(&eta) || !increasing(&zeta) {
            return Err(Error::InvalidInput(
                "feather weights must increase strictly at each puncture".into(),
            ));
        }
        Ok(Self { eta, zeta })
    }

    /// All weights zero: the degenerate limit where the flags are ignored.
    pub fn zero(p: usize, q: usize, s: usize) -> Self {
        Self {
            eta: vec![vec![Rat::zero(); p]; s],
            zeta: vec![vec![Rat::zero(); q]; s],
        }
    }

    pub fn eta(&self) -> &[Vec<Rat>] {
        &self.eta
    }
    pub fn zeta(&self) -> &[Vec<Rat>] {
        &self.zeta
    }
    pub fn is_zero(&self) -> bool {
        self.eta
            .iter()
            .chain(&self.zeta)
            .flatten()
            .all(Zero::is_zero)
    }

    pub fn scaled(&self, t: &Rat) -> Self {
        let sc = |rows: &[Vec<Rat>]| {
            rows.iter()
                .map(|r| r.iter().map(|x| x * t).collect())
                .collect()
        };
        Self {
            eta: sc(&self.eta),
            zeta: sc(&self.zeta),
        }
    }

    pub fn norm_eta(&self) -> Rat {
        self.eta.iter().flatten().sum()
    }
    pub fn norm_zeta(&self) -> Rat {
        self.zeta.iter().flatten().sum()
    }

    fn check<F: Field>(&self, cfg: &FlagConfiguration<F>) -> Result<()> {
        let shape = |rows: &[Vec<Rat>], n: usize| {
            rows.len() == cfg.s() && rows.iter().all(|r| r.len() == n)
        };
        if !shape(&self.eta, cfg.p) || !shape(&self.zeta, cfg.q) {
            return Err(Error::InvalidInput(format!(
                "feather weights must be {s}x{p} and {s}x{q}",
                s = cfg.s(),
                p = cfg.p,
                q = cfg.q
            )));
        }
        Ok(())
    }
}

/// `Σ_i w_i (dim U∩F_{i−1} − dim U∩F_i)`.
pub fn flag_weight_sum<F: Field>(u: &Subspace<F>, flag: &[Subspace<F>], w: &[Rat]) -> Result<Rat> {
    if w.len() + 1 != flag.len() {
        return Err(Error::DimensionMismatch {
            context: "flag weights",
            expected: flag.len().saturating_sub(1),
            found: w.len(),
        });
    }
    let d = flag_meet_dims(u, flag)?;
    Ok(w.iter()
        .zip(d.windows(2))
        .map(|(wi, pair)| wi * int((pair[0] - pair[1]) as i64))
        .sum())
}

/// `Σ_n [i·dim U_n − p·dim(U_n ∩ F)]` for `F` of dimension `i` and a grading of `F^p`.
pub fn mu_grassmannian<F: Field>(
    lambda: &Grading<F>,
    f: &Subspace<F>,
    i: usize,
    p: usize,
) -> Result<Rat> {
    if lambda.dim() != p || f.ambient_dim() != p {
        return Err(Error::DimensionMismatch {
            context: "grassmannian ambient",
            expected: p,
            found: f.ambient_dim(),
        });
    }
    if f.dim() != i {
        return Err(Error::InvalidInput(format!(
            "subspace has dimension {}, expected {i}",
            f.dim()
        )));
    }
    let (lo, hi) = weight_range(lambda.weights());
    let mut total = 0i64;
    for n in lo..=hi {
        let un = lambda.filtration(n);
        total += (i * un.dim()) as i64 - (p * un.intersect(f)?.dim()) as i64;
    }
    Ok(int(total))
}

fn weight_range(ws: impl Iterator<Item = i64>) -> (i64, i64) {
    ws.fold((i64::MAX, i64::MIN), |(lo, hi), w| (lo.min(w), hi.max(w)))
}

fn eta_sum<F: Field>(u: &Subspace<F>, flags: &[Vec<Subspace<F>>], w: &[Vec<Rat>]) -> Result<Rat> {
    flags
        .iter()
        .zip(w)
        .map(|(f, wj)| flag_weight_sum(u, f, wj))
        .sum()
}

/// `(‖η‖/p − q)·dim U − |η(U∩F)| + (‖ζ‖/q + p)·dim V − |ζ(V∩H)|`.
pub fn mu_pair<F: Field>(
    u: &Subspace<F>,
    v: &Subspace<F>,
    cfg: &FlagConfiguration<F>,
    fw: &FeatherWeights,
) -> Result<Rat> {
    let (k, f) = mu_pair_parts(u, v, cfg, fw)?;
    Ok(int(k) + f)
}

/// The Kronecker part `p·dim V − q·dim U` and the flag part of [`mu_pair`].
pub fn mu_pair_parts<F: Field>(
    u: &Subspace<F>,
    v: &Subspace<F>,
    cfg: &FlagConfiguration<F>,
    fw: &FeatherWeights,
) -> Result<(i64, Rat)> {
    fw.check(cfg)?;
    let (p, q) = (cfg.p, cfg.q);
    if u.ambient_dim() != p || v.ambient_dim() != q {
        return Err(Error::DimensionMismatch {
            context: "mu_pair subspaces",
            expected: p + q,
            found: u.ambient_dim() + v.ambient_dim(),
        });
    }
    let flag = fw.norm_eta() * int(u.dim() as i64) / int(p as i64)
        - eta_sum(u, &cfg.p_flags, &fw.eta)?
        + fw.norm_zeta() * int(v.dim() as i64) / int(q as i64)
        - eta_sum(v, &cfg.q_flags, &fw.zeta)?;
    Ok((king_defect(p, q, u.dim(), v.dim()), flag))
}

/// Weight of `λ` on the decorated point for the linearization of level `k`: `+∞` unless
/// `λ` preserves `A`, else the sum over `n` of the `k`-scaled pair formula on `(U_n, V_n)`.
pub fn mu_feathered<F: Field>(
    lambda: &OneParamSubgroup<F>,
    a: &MatrixTuple<F>,
    cfg: &FlagConfiguration<F>,
    fw: &FeatherWeights,
    k: &Rat,
) -> Result<Mu> {
    if let Mu::PlusInfinity = mu_chi(lambda, a)? {
        return Ok(Mu::PlusInfinity);
    }
    let (lo, hi) = weight_range(lambda.grading_p.weights().chain(lambda.grading_q.weights()));
    let mut total = Rat::zero();
    for n in lo..=hi {
        let (un, vn) = lambda.filtration(n);
        total += mu_pair(&un, &vn, cfg, fw)?;
    }
    Ok(Mu::Finite(total * k))
}

fn is_trivial_pair<F: Field>(u: &Subspace<F>, v: &Subspace<F>) -> bool {
    (u.is_zero() && v.is_zero()) || (u.is_full() && v.is_full())
}

fn verdict_by<F: FiniteField>(
    a: &MatrixTuple<F>,
    cfg: &FlagConfiguration<F>,
    fw: &FeatherWeights,
    budget: Budget,
    value: impl Fn(i64, Rat) -> Rat,
) -> Result<StabilityVerdict<F>> {
    if cfg.p != a.p() || cfg.q != a.q() {
        return Err(Error::DimensionMismatch {
            context: "flag configuration vs tuple",
            expected: a.p() + a.q(),
            found: cfg.p + cfg.q,
        });
    }
    fw.check(cfg)?;
    let mut unstable = None;
    let mut equality = None;
    for_each_invariant_pair(a, budget, |u, v| {
        let (k, f) = mu_pair_parts(u, v, cfg, fw)?;
        let mu = value(k, f);
        if mu.is_negative() {
            unstable = Some((u.clone(), v.clone(), mu));
            return Ok(false);
        }
        if mu.is_zero() && equality.is_none() && !is_trivial_pair(u, v) {
            equality = Some((u.clone(), v.clone(), mu));
        }
        Ok(true)
    })?;
    let (status, found) = match (unstable, equality) {
        (Some(w), _) => (Status::Unstable, Some(w)),
        (None, Some(w)) => (Status::StrictlySemistable, Some(w)),
        (None, None) => (Status::Stable, None),
    };
    Ok(match found {
        Some((u, v, mu)) => StabilityVerdict {
            status,
            witness: Some((u, v)),
            mu_value: Some(Mu::Finite(mu)),
        },
        None => StabilityVerdict::stable(),
    })
}

/// Exhaustive `(η, ζ)`-stability: every `U` and every `V ⊇ image_span(A, U)`.
pub fn feathered_verdict<F: FiniteField>(
    a: &MatrixTuple<F>,
    cfg: &FlagConfiguration<F>,
    fw: &FeatherWeights,
    budget: Budget,
) -> Result<StabilityVerdict<F>> {
    verdict_by(a, cfg, fw, budget, |k, f| int(k) + f)
}

/// The small-weight criterion: invariant pairs need `p·dim V > q·dim U`, or equality together
/// with `|η(U∩F)| + |ζ(V∩H)| ≤ (‖η‖ + ‖ζ‖)·dim V / q`.
///
/// The reported value is the Kronecker defect when it is nonzero and the flag slack otherwise.
pub fn small_perturbation_check<F: FiniteField>(
    a: &MatrixTuple<F>,
    cfg: &FlagConfiguration<F>,
    fw: &FeatherWeights,
    budget: Budget,
) -> Result<StabilityVerdict<F>> {
    verdict_by(a, cfg, fw, budget, |k, f| if k != 0 { int(k) } else { f })
}

/// Scale `t*` below which `t·fw` gives the same verdict as the small-weight criterion.
///
/// `K + t·Φ` keeps the sign of the Kronecker defect `K` unless `Φ` has the opposite sign and
/// `t ≥ |K|/|Φ|`; the minimum of those ratios over all pairs is returned, `None` if no pair
/// constrains `t`.
pub fn perturbation_threshold<F: FiniteField>(
    a: &MatrixTuple<F>,
    cfg: &FlagConfiguration<F>,
    fw: &FeatherWeights,
    budget: Budget,
) -> Result<Option<Rat>> {
    fw.check(cfg)?;
    let mut best: Option<Rat> = None;
    for_each_invariant_pair(a, budget, |u, v| {
        let (k, f) = mu_pair_parts(u, v, cfg, fw)?;
        if k != 0 && !f.is_zero() && (k < 0) != f.is_negative() {
            let t = int(k.abs()) / f.abs();
            if best.as_ref().is_none_or(|b| &t < b) {
                best = Some(t);
            }
        }
        Ok(true)
    })?;
    Ok(best)
}

/// A scale strictly below [`perturbation_threshold`], capped at 1.
pub fn safe_scale<F: FiniteField>(
    a: &MatrixTuple<F>,
    cfg: &FlagConfiguration<F>,
    fw: &FeatherWeights,
    budget: Budget,
) -> Result<Rat> {
    Ok(match perturbation_threshold(a, cfg, fw, budget)? {
        Some(t) => (t / int(2)).min(Rat::one()),
        None => Rat::one(),
    })
}

/// The level `k` making `(k/p)·η` and `(k/q)·ζ` integral.
pub fn integral_level(fw: &FeatherWeights, p: usize, q: usize) -> Rat {
    let (p, q) = (int(p as i64), int(q as i64));
    let k = fw
        .eta
        .iter()
        .flatten()
        .map(|x| (x / &p).denom().clone())
        .chain(fw.zeta.iter().flatten().map(|x| (x / &q).denom().clone()))
        .fold(num_bigint::BigInt::one(), |acc, d| acc.lcm(&d));
    Rat::from_integer(k)
}
