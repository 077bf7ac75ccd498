use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::tuple::{MatrixTuple, SubspaceJson};
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, unit, Field, Subspace};
use crate::multiweight::{int, Rat};

/// Hilbert–Mumford weight: an exact rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mu {
    Finite(Rat),
    PlusInfinity,
}

impl Mu {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Mu::Finite(x) => Some(x),
            Mu::PlusInfinity => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.finite().is_some_and(|x| *x < Rat::default())
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mu::Finite(x) => f.write_str(&format_rational(x)),
            Mu::PlusInfinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for Mu {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mu {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "+inf" {
            return Ok(Mu::PlusInfinity);
        }
        parse_rational(&s)
            .map(Mu::Finite)
            .map_err(serde::de::Error::custom)
    }
}

/// Integer weights on a direct sum decomposition of `F^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading<F: Field> {
    n: usize,
    field: F,
    parts: Vec<(i64, Subspace<F>)>,
}

impl<F: Field> Grading<F> {
    /// Weights must be strictly decreasing and the pieces must form a direct sum equal to `F^n`.
    pub fn new(field: F, n: usize, parts: Vec<(i64, Subspace<F>)>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::InvalidInput(
                "grading weights must be strictly decreasing".into(),
            ));
        }
        let mut total = Subspace::zero(field.clone(), n);
        let mut dims = 0;
        for (_, s) in &parts {
            if s.ambient_dim() != n {
                return Err(Error::DimensionMismatch {
                    context: "grading piece",
                    expected: n,
                    found: s.ambient_dim(),
                });
            }
            total = total.sum(s)?;
            dims += s.dim();
        }
        if dims != n || !total.is_full() {
            return Err(Error::InvalidInput(
                "grading pieces are not independent and spanning".into(),
            ));
        }
        Ok(Self { n, field, parts })
    }

    /// Coordinate grading: `weights[i]` on `e_i`.
    pub fn diagonal(field: F, weights: &[i64]) -> Self {
        let n = weights.len();
        let mut ws: Vec<i64> = weights.to_vec();
        ws.sort_unstable_by(|a, b| b.cmp(a));
        ws.dedup();
        let parts = ws
            .into_iter()
            .map(|w| {
                let idx: Vec<usize> = (0..n).filter(|&i| weights[i] == w).collect();
                let vs: Vec<_> = idx.iter().map(|&i| unit(&field, n, i)).collect();
                (
                    w,
                    Subspace::span(field.clone(), n, &vs).expect("unit vectors"),
                )
            })
            .collect();
        Self { n, field, parts }
    }

    /// Weight 1 on `u`, 0 on its standard complement.
    pub fn projector(u: &Subspace<F>) -> Self {
        let field = u.field().clone();
        let n = u.ambient_dim();
        let mut parts = Vec::new();
        if !u.is_zero() {
            parts.push((1, u.clone()));
        }
        if !u.is_full() {
            parts.push((0, u.standard_complement()));
        }
        Self { n, field, parts }
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn parts(&self) -> &[(i64, Subspace<F>)] {
        &self.parts
    }

    pub fn weights(&self) -> impl Iterator<Item = i64> + '_ {
        self.parts.iter().map(|(w, _)| *w)
    }

    /// `⊕_{m_i ≥ n} F_i`.
    pub fn filtration(&self, n: i64) -> Subspace<F> {
        let mut out = Subspace::zero(self.field.clone(), self.n);
        for (w, s) in &self.parts {
            if *w >= n {
                out = out.sum(s).expect("same ambient space");
            }
        }
        out
    }

    /// Adds `k` to every weight.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            n: self.n,
            field: self.field.clone(),
            parts: self.parts.iter().map(|(w, s)| (w + k, s.clone())).collect(),
        }
    }

    /// `Σ_i m_i · dim F_i`.
    pub fn weighted_dim(&self) -> i64 {
        self.parts.iter().map(|(w, s)| w * s.dim() as i64).sum()
    }

    pub fn to_json(&self) -> Vec<GradingPartJson> {
        self.parts
            .iter()
            .map(|(w, s)| GradingPartJson {
                weight: *w,
                space: SubspaceJson::from_subspace(s),
            })
            .collect()
    }

    pub fn from_json(field: &F, n: usize, parts: &[GradingPartJson]) -> Result<Self> {
        let ps = parts
            .iter()
            .map(|p| Ok((p.weight, p.space.to_subspace(field)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field.clone(), n, ps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingPartJson {
    pub weight: i64,
    pub space: SubspaceJson,
}

/// A one-parameter subgroup of GL_p × GL_q, given by gradings of both spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneParamSubgroup<F: Field> {
    pub grading_p: Grading<F>,
    pub grading_q: Grading<F>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneParamSubgroupJson {
    pub grading_p: Vec<GradingPartJson>,
    pub grading_q: Vec<GradingPartJson>,
}

impl<F: Field> OneParamSubgroup<F> {
    pub fn diagonal(field: F, weights_p: &[i64], weights_q: &[i64]) -> Self {
        Self {
            grading_p: Grading::diagonal(field.clone(), weights_p),
            grading_q: Grading::diagonal(field, weights_q),
        }
    }

    /// Weight 1 on `(U, V)` and 0 on standard complements, so that `U_1 = U`, `V_1 = V`.
    pub fn projector(u: &Subspace<F>, v: &Subspace<F>) -> Self {
        Self {
            grading_p: Grading::projector(u),
            grading_q: Grading::projector(v),
        }
    }

    /// `(U_n(λ), V_n(λ))`.
    pub fn filtration(&self, n: i64) -> (Subspace<F>, Subspace<F>) {
        (self.grading_p.filtration(n), self.grading_q.filtration(n))
    }

    /// Composition with the central subgroup `t ↦ (t^k Id_p, t^k Id_q)`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            grading_p: self.grading_p.shifted(k),
            grading_q: self.grading_q.shifted(k),
        }
    }

    /// Sorted distinct weights of both gradings; the filtrations only jump there.
    fn breakpoints(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self
            .grading_p
            .weights()
            .chain(self.grading_q.weights())
            .collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn to_json(&self) -> OneParamSubgroupJson {
        OneParamSubgroupJson {
            grading_p: self.grading_p.to_json(),
            grading_q: self.grading_q.to_json(),
        }
    }

    pub fn from_json(field: &F, p: usize, q: usize, j: &OneParamSubgroupJson) -> Result<Self> {
        Ok(Self {
            grading_p: Grading::from_json(field, p, &j.grading_p)?,
            grading_q: Grading::from_json(field, q, &j.grading_q)?,
        })
    }
}

/// `(p', q') = (p, q) / gcd(p, q)`.
pub fn coprime_pair(p: usize, q: usize) -> (i64, i64) {
    let g = p.gcd(&q).max(1);
    ((p / g) as i64, (q / g) as i64)
}

fn check_dims<F: Field>(lambda: &OneParamSubgroup<F>, a: &MatrixTuple<F>) -> Result<()> {
    if lambda.grading_p.dim() != a.p() {
        return Err(Error::DimensionMismatch {
            context: "1-PS on the p-space",
            expected: a.p(),
            found: lambda.grading_p.dim(),
        });
    }
    if lambda.grading_q.dim() != a.q() {
        return Err(Error::DimensionMismatch {
            context: "1-PS on the q-space",
            expected: a.q(),
            found: lambda.grading_q.dim(),
        });
    }
    Ok(())
}

/// Hilbert–Mumford weight for the character `det(g2)^{p'} det(g1)^{-q'}`, as the
/// filtration sum `Σ_n [p' dim V_n − q' dim U_n]`.
///
/// `+∞` unless `A_j(U_n) ⊆ V_n` for every `n` and `j`.
pub fn mu_chi<F: Field>(lambda: &OneParamSubgroup<F>, a: &MatrixTuple<F>) -> Result<Mu> {
    check_dims(lambda, a)?;
    let (pp, qq) = coprime_pair(a.p(), a.q());
    let bps = lambda.breakpoints();
    for &n in &bps {
        let (u, v) = lambda.filtration(n);
        if !a.is_invariant_pair(&u, &v)? {
            return Ok(Mu::PlusInfinity);
        }
    }
    // On (w_{t-1}, w_t] the filtrations equal their value at w_t; below w_1 the term vanishes.
    let mut total: i64 = 0;
    for w in bps.windows(2) {
        let (u, v) = lambda.filtration(w[1]);
        total += (w[1] - w[0]) * (pp * v.dim() as i64 - qq * u.dim() as i64);
    }
    Ok(Mu::Finite(int(total)))
}

/// The same weight in eigenvalue form, `p' Σ n_j dim H_j − q' Σ m_i dim F_i`.
///
/// Computed without the finiteness test.
pub fn mu_chi_eigen<F: Field>(lambda: &OneParamSubgroup<F>, p: usize, q: usize) -> Rat {
    let (pp, qq) = coprime_pair(p, q);
    int(pp * lambda.grading_q.weighted_dim() - qq * lambda.grading_p.weighted_dim())
}
