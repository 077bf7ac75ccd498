//! Constructors for multiweights with compact components: the constant recipe,
//! the Sp(2p,R) recipe and feathered perturbations.

#![allow(clippy::result_large_err)]

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Result;
use crate::exactlin::format_rational as fr;
use crate::json;
use crate::multiweight::{certificate, int, rat, CompactnessCertificate, MultiWeight, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionError {
    #[error("need p, q >= 1, got ({p}, {q})")]
    EmptySide { p: usize, q: usize },
    #[error("need at least 3 punctures, got {s}")]
    TooFewPunctures { s: usize },
    #[error("the Sp recipe needs an odd number of punctures >= 5, got {s}")]
    BadParity { s: usize },
    #[error("a = {a} outside [{}, {}]", fr(.lo), fr(.hi))]
    AOutOfRange {
        a: i64,
        #[serde(with = "json::rat")]
        lo: Rat,
        #[serde(with = "json::rat")]
        hi: Rat,
    },
    #[error("epsilon profile has {found} entries, expected {expected}")]
    ProfileLength { expected: usize, found: usize },
    #[error("epsilon at puncture {puncture} is not positive")]
    EpsilonNotPositive { puncture: usize },
    #[error("epsilon {} at puncture {puncture} is not below its cap {}", fr(.epsilon), fr(.cap))]
    EpsilonAboveCap {
        puncture: usize,
        #[serde(with = "json::rat")]
        epsilon: Rat,
        #[serde(with = "json::rat")]
        cap: Rat,
    },
    #[error("epsilon sum {} outside ({}, {})", fr(.sum), .lo.as_ref().map_or("-inf".to_string(), fr), fr(.hi))]
    SumOutOfRange {
        #[serde(with = "json::rat")]
        sum: Rat,
        #[serde(with = "json::rat_opt")]
        lo: Option<Rat>,
        #[serde(with = "json::rat")]
        hi: Rat,
    },
    #[error("no epsilon profile fits: caps sum to {}, lower bound {}", fr(.cap_sum), fr(.lo))]
    NoDefaultProfile {
        #[serde(with = "json::rat")]
        cap_sum: Rat,
        #[serde(with = "json::rat")]
        lo: Rat,
    },
    #[error("constructed weights fail the compactness certificate")]
    CertificateFailed,
    #[error("multiweight is not constant")]
    NotConstant,
    #[error("invalid feather perturbation: {reason}")]
    BadPerturbation { reason: String },
    #[error("perturbed weights invalid: {reason}")]
    PerturbedInvalid { reason: String },
    #[error("the SU(1,1) model needs an odd number of punctures >= 3, got {s}")]
    Su11Parity { s: usize },
    #[error("beta at puncture {puncture} is not in (1/2, 1)")]
    BetaOutOfRange { puncture: usize },
    #[error("beta sum {} is not below {}", fr(.sum), fr(.bound))]
    ThresholdViolated {
        #[serde(with = "json::rat")]
        sum: Rat,
        #[serde(with = "json::rat")]
        bound: Rat,
    },
}

/// Closed interval of admissible `a` and the integers inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ARange {
    #[serde(with = "json::rat")]
    pub lo: Rat,
    #[serde(with = "json::rat")]
    pub hi: Rat,
    pub integers: Vec<i64>,
}

pub fn a_range(p: usize, q: usize, s: usize) -> ARange {
    let (p, q, s) = (p as i64, q as i64, s as i64);
    let lo = rat(s + p, p + q);
    let hi = rat((p + q - 1) * s + p, p + q);
    let first = lo.ceil().to_integer().to_i64().unwrap_or(i64::MAX);
    let last = hi.floor().to_integer().to_i64().unwrap_or(i64::MIN);
    ARange {
        lo,
        hi,
        integers: (first..=last).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionInput {
    pub p: usize,
    pub q: usize,
    pub s: usize,
    pub a: i64,
    /// One positive ε^j per puncture; `None` selects the default profile.
    #[serde(
        default,
        with = "json::rat_opt_vec",
        skip_serializing_if = "Option::is_none"
    )]
    pub epsilon_profile: Option<Vec<Rat>>,
}

/// A constructed constant multiweight with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub multiweight: MultiWeight,
    pub d: i64,
    pub a: i64,
    /// `(p+q)a − p = k s + r`.
    pub k: i64,
    pub r: i64,
    /// `k^j = p α^j + q β^j`.
    pub k_j: Vec<i64>,
    #[serde(with = "json::rat_vec")]
    pub epsilon_profile: Vec<Rat>,
    pub certificate: CompactnessCertificate,
}

struct Shape {
    k: i64,
    r: i64,
    k_j: Vec<i64>,
    caps: Vec<Rat>,
    /// Open lower bound of Σε^j; `None` when the bound degenerates (p = q = 1).
    lower: Option<Rat>,
}

fn shape(p: usize, q: usize, s: usize, a: i64) -> std::result::Result<Shape, ConstructionError> {
    if p == 0 || q == 0 {
        return Err(ConstructionError::EmptySide { p, q });
    }
    if s < 3 {
        return Err(ConstructionError::TooFewPunctures { s });
    }
    let range = a_range(p, q, s);
    if !range.integers.contains(&a) {
        return Err(ConstructionError::AOutOfRange {
            a,
            lo: range.lo,
            hi: range.hi,
        });
    }
    let (pi, qi, si) = (p as i64, q as i64, s as i64);
    let (k, r) = ((pi + qi) * a - pi).div_mod_floor(&si);
    let k_j: Vec<i64> = (0..si).map(|j| if j < r { k + 1 } else { k }).collect();
    let caps = k_j
        .iter()
        .map(|&kj| rat(kj, qi).min(rat(pi + qi - kj, pi)))
        .collect();
    let den = 2 * pi * qi - pi - qi;
    let lower = (den != 0).then(|| rat(2 * pi * qi - 2 * pi - 2 * qi, den));
    Ok(Shape {
        k,
        r,
        k_j,
        caps,
        lower,
    })
}

/// Default ε-profile: caps scaled so that Σε^j is the midpoint of the feasible sum range.
pub fn default_profile(
    p: usize,
    q: usize,
    s: usize,
    a: i64,
) -> std::result::Result<Vec<Rat>, ConstructionError> {
    let sh = shape(p, q, s, a)?;
    let cap_sum: Rat = sh.caps.iter().sum();
    let lo = sh.lower.clone().unwrap_or_default().max(Rat::zero());
    let hi = cap_sum.clone().min(Rat::one());
    if lo >= hi {
        return Err(ConstructionError::NoDefaultProfile { cap_sum, lo });
    }
    let target = (lo + hi) / int(2);
    Ok(sh.caps.iter().map(|c| c * &target / &cap_sum).collect())
}

fn check_profile(sh: &Shape, eps: &[Rat]) -> std::result::Result<(), ConstructionError> {
    if eps.len() != sh.caps.len() {
        return Err(ConstructionError::ProfileLength {
            expected: sh.caps.len(),
            found: eps.len(),
        });
    }
    for (j, (e, cap)) in eps.iter().zip(&sh.caps).enumerate() {
        if !e.is_positive() {
            return Err(ConstructionError::EpsilonNotPositive { puncture: j });
        }
        if e >= cap {
            return Err(ConstructionError::EpsilonAboveCap {
                puncture: j,
                epsilon: e.clone(),
                cap: cap.clone(),
            });
        }
    }
    let sum: Rat = eps.iter().sum();
    let above_lower = sh.lower.as_ref().is_none_or(|l| sum > *l);
    if !above_lower || sum >= Rat::one() {
        return Err(ConstructionError::SumOutOfRange {
            sum,
            lo: sh.lower.clone(),
            hi: Rat::one(),
        });
    }
    Ok(())
}

/// Per-puncture caps `min(k^j/q, (p+q−k^j)/p)`: each ε^j must lie in `(0, cap_j)`.
pub fn epsilon_caps(
    p: usize,
    q: usize,
    s: usize,
    a: i64,
) -> std::result::Result<Vec<Rat>, ConstructionError> {
    Ok(shape(p, q, s, a)?.caps)
}

/// The formula alone, α^j = (k^j − qε^j)/(p+q), β^j = (k^j + pε^j)/(p+q), d = (q−p)a + p.
///
/// Only the shape is checked, so a sweep can certify profiles the construction would reject.
pub fn constant_multiweight(
    p: usize,
    q: usize,
    s: usize,
    a: i64,
    eps: &[Rat],
) -> std::result::Result<(MultiWeight, i64), ConstructionError> {
    let sh = shape(p, q, s, a)?;
    if eps.len() != s {
        return Err(ConstructionError::ProfileLength {
            expected: s,
            found: eps.len(),
        });
    }
    let n = int((p + q) as i64);
    let (pr, qr) = (int(p as i64), int(q as i64));
    let mut alpha = Vec::with_capacity(s);
    let mut beta = Vec::with_capacity(s);
    for (kj, e) in sh.k_j.iter().zip(eps) {
        alpha.push(vec![(int(*kj) - &qr * e) / &n; p]);
        beta.push(vec![(int(*kj) + &pr * e) / &n; q]);
    }
    let d = (q as i64 - p as i64) * a + p as i64;
    Ok((
        MultiWeight {
            p,
            q,
            s,
            alpha,
            beta,
        },
        d,
    ))
}

/// The constant multiweight with a checked ε-profile, certified.
pub fn construct_constant(inp: &ConstructionInput) -> Result<Construction> {
    let (p, q, s, a) = (inp.p, inp.q, inp.s, inp.a);
    let sh = shape(p, q, s, a)?;
    let eps = match &inp.epsilon_profile {
        Some(e) => e.clone(),
        None => default_profile(p, q, s, a)?,
    };
    check_profile(&sh, &eps)?;
    let (multiweight, d) = constant_multiweight(p, q, s, a, &eps)?;
    let cert = certificate(&multiweight, d)?;
    if !cert.pass {
        return Err(ConstructionError::CertificateFailed.into());
    }
    Ok(Construction {
        multiweight,
        d,
        a,
        k: sh.k,
        r: sh.r,
        k_j: sh.k_j,
        epsilon_profile: eps,
        certificate: cert,
    })
}

/// The self-dual SU(p,p) multiweight α^j = (1−ε^j)/2, β^j = (1+ε^j)/2 with a = (s+1)/2 and d = p.
pub fn construct_sp(p: usize, s: usize, epsilon_profile: Option<Vec<Rat>>) -> Result<Construction> {
    if s < 5 || s.is_multiple_of(2) {
        return Err(ConstructionError::BadParity { s }.into());
    }
    let a = (s as i64 + 1) / 2;
    if let Some(eps) = &epsilon_profile {
        if let Some(j) = eps.iter().position(|e| *e >= Rat::one()) {
            return Err(ConstructionError::EpsilonAboveCap {
                puncture: j,
                epsilon: eps[j].clone(),
                cap: Rat::one(),
            }
            .into());
        }
    }
    // For p = q the general bound (2pq−2p−2q)/(2pq−p−q) is 1 − 1/(p−1), and k^j = p.
    construct_constant(&ConstructionInput {
        p,
        q: p,
        s,
        a,
        epsilon_profile,
    })
}

/// Feather weights (η, ζ) used to perturb a constant multiweight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatherPerturbation {
    #[serde(with = "json::rat_grid")]
    pub eta: Vec<Vec<Rat>>,
    #[serde(with = "json::rat_grid")]
    pub zeta: Vec<Vec<Rat>>,
}

impl FeatherPerturbation {
    /// Checks strict increase in `i` and the per-puncture zero sum.
    pub fn validate(
        &self,
        p: usize,
        q: usize,
        s: usize,
    ) -> std::result::Result<(), ConstructionError> {
        let bad = |reason: String| Err(ConstructionError::BadPerturbation { reason });
        if self.eta.len() != s || self.zeta.len() != s {
            return bad(format!("expected {s} punctures"));
        }
        for j in 0..s {
            let (e, z) = (&self.eta[j], &self.zeta[j]);
            if e.len() != p || z.len() != q {
                return bad(format!(
                    "puncture {j}: expected {p} eta and {q} zeta entries"
                ));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) || z.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("puncture {j}: weights not strictly increasing"));
            }
            let sum: Rat = e.iter().chain(z).sum();
            if !sum.is_zero() {
                return bad(format!("puncture {j}: weights sum to {}", fr(&sum)));
            }
        }
        Ok(())
    }
}

/// `(α + t·η, β + t·ζ)` for a constant multiweight.
pub fn perturb(mw: &MultiWeight, f: &FeatherPerturbation, scale: &Rat) -> Result<MultiWeight> {
    mw.check()?;
    if !mw.is_constant() {
        return Err(ConstructionError::NotConstant.into());
    }
    f.validate(mw.p, mw.q, mw.s)?;
    if scale.is_negative() {
        return Err(ConstructionError::BadPerturbation {
            reason: "negative scale".into(),
        }
        .into());
    }
    let shift = |rows: &[Vec<Rat>], by: &[Vec<Rat>]| -> Vec<Vec<Rat>> {
        rows.iter()
            .zip(by)
            .map(|(r, b)| r.iter().zip(b).map(|(x, y)| x + scale * y).collect())
            .collect()
    };
    let out = MultiWeight {
        p: mw.p,
        q: mw.q,
        s: mw.s,
        alpha: shift(&mw.alpha, &f.eta),
        beta: shift(&mw.beta, &f.zeta),
    };
    if let Some(v) = out.validate().first() {
        return Err(ConstructionError::PerturbedInvalid {
            reason: v.to_string(),
        }
        .into());
    }
    for j in 0..out.s {
        if out.alpha[j].last() >= out.beta[j].first() {
            return Err(ConstructionError::PerturbedInvalid {
                reason: format!("puncture {j}: alpha_p >= beta_1"),
            }
            .into());
        }
    }
    Ok(out)
}

/// First scale at which some weight constraint of [`perturb`] reaches its boundary.
///
/// Every smaller positive scale succeeds. `None` when no constraint ever binds.
pub fn perturbation_limit(mw: &MultiWeight, f: &FeatherPerturbation) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    let mut bound = |slack: Rat, rate: Rat| {
        if rate.is_positive() {
            let t = slack / rate;
            best = Some(best.take().map_or(t.clone(), |b: BigRational| b.min(t)));
        }
    };
    for j in 0..mw.s.min(f.eta.len()).min(f.zeta.len()) {
        for (w, e) in mw.alpha[j]
            .iter()
            .chain(&mw.beta[j])
            .zip(f.eta[j].iter().chain(&f.zeta[j]))
        {
            bound(Rat::one() - w, e.clone());
            bound(w.clone(), -e.clone());
        }
        if let (Some(ap), Some(b1), Some(ep), Some(z1)) = (
            mw.alpha[j].last(),
            mw.beta[j].first(),
            f.eta[j].last(),
            f.zeta[j].first(),
        ) {
            bound(b1 - ap, ep - z1);
        }
    }
    best
}
