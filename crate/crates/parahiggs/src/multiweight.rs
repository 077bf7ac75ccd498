//! SU(p,q) multiweights, the compactness certificate, holonomy phases and
//! parabolic line bundles on the punctured sphere.

use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Weights `(α, β)` at `s` punctures. Row `j` of `alpha` is `(α_1^j, …, α_p^j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiWeight {
    pub p: usize,
    pub q: usize,
    pub s: usize,
    #[serde(with = "json::rat_grid")]
    pub alpha: Vec<Vec<Rat>>,
    #[serde(with = "json::rat_grid")]
    pub beta: Vec<Vec<Rat>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alpha,
    Beta,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Alpha => "alpha",
            Side::Beta => "beta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Wrong number of rows or of entries in a row.
    Shape {
        what: String,
        expected: usize,
        found: usize,
    },
    OutOfRange {
        puncture: usize,
        side: Side,
        index: usize,
    },
    Unsorted {
        puncture: usize,
        side: Side,
        index: usize,
    },
    NonIntegralSum {
        puncture: usize,
        #[serde(with = "json::rat")]
        sum: Rat,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected {expected}, found {found}"),
            Violation::OutOfRange {
                puncture,
                side,
                index,
            } => {
                write!(f, "puncture {puncture}: {side}[{index}] outside [0,1)")
            }
            Violation::Unsorted {
                puncture,
                side,
                index,
            } => {
                write!(f, "puncture {puncture}: {side} decreases at index {index}")
            }
            Violation::NonIntegralSum { puncture, sum } => {
                write!(
                    f,
                    "puncture {puncture}: weight sum {} is not a non-negative integer",
                    json_str(sum)
                )
            }
        }
    }
}

fn json_str(x: &Rat) -> String {
    crate::exactlin::format_rational(x)
}

impl MultiWeight {
    /// Every violated membership condition, in puncture order.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let shape = |out: &mut Vec<Violation>, what: &str, expected: usize, found: usize| {
            if expected != found {
                out.push(Violation::Shape {
                    what: what.into(),
                    expected,
                    found,
                });
            }
        };
        shape(&mut out, "alpha rows", self.s, self.alpha.len());
        shape(&mut out, "beta rows", self.s, self.beta.len());
        if !out.is_empty() {
            return out;
        }
        for j in 0..self.s {
            let before = out.len();
            shape(
                &mut out,
                &format!("alpha[{j}] length"),
                self.p,
                self.alpha[j].len(),
            );
            shape(
                &mut out,
                &format!("beta[{j}] length"),
                self.q,
                self.beta[j].len(),
            );
            if out.len() > before {
                continue;
            }
            for (side, row) in [(Side::Alpha, &self.alpha[j]), (Side::Beta, &self.beta[j])] {
                for (i, w) in row.iter().enumerate() {
                    if w.is_negative() || *w >= Rat::one() {
                        out.push(Violation::OutOfRange {
                            puncture: j,
                            side,
                            index: i,
                        });
                    }
                    if i > 0 && row[i - 1] > *w {
                        out.push(Violation::Unsorted {
                            puncture: j,
                            side,
                            index: i,
                        });
                    }
                }
            }
            let sum: Rat = self.alpha[j].iter().chain(&self.beta[j]).sum();
            if !sum.is_integer() || sum.is_negative() {
                out.push(Violation::NonIntegralSum { puncture: j, sum });
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidMultiWeight(v))
        }
    }

    /// ‖α‖ = Σ_{i,j} α_i^j.
    pub fn norm_alpha(&self) -> Rat {
        self.alpha.iter().flatten().sum()
    }

    pub fn norm_beta(&self) -> Rat {
        self.beta.iter().flatten().sum()
    }

    /// True when every puncture carries a single value on each side.
    pub fn is_constant(&self) -> bool {
        let flat = |rows: &[Vec<Rat>]| rows.iter().all(|r| r.iter().all(|x| x == &r[0]));
        flat(&self.alpha) && flat(&self.beta)
    }
}

/// Outcome of each condition of the compactness criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    /// α_p^j < β_1^j at every puncture.
    pub alpha_below_beta: bool,
    /// ε < 2.
    pub epsilon_below_two: bool,
    /// d lies in the open interval J.
    pub d_in_interval: bool,
}

/// Distance to failure of each condition; a condition holds iff its margin is positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Margins {
    #[serde(with = "json::rat")]
    pub alpha_below_beta: Rat,
    #[serde(with = "json::rat")]
    pub epsilon_below_two: Rat,
    #[serde(with = "json::rat")]
    pub d_in_interval: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactnessCertificate {
    #[serde(with = "json::rat")]
    pub epsilon: Rat,
    /// Open interval J = (‖β‖−‖α‖, ‖β‖−‖α‖+2−ε).
    #[serde(with = "json::rat_pair")]
    pub j_interval: (Rat, Rat),
    pub d: i64,
    #[serde(with = "json::rat")]
    pub deg_u: Rat,
    #[serde(with = "json::rat")]
    pub deg_v: Rat,
    #[serde(with = "json::rat")]
    pub toledo: Rat,
    pub conditions: Conditions,
    pub margins: Margins,
    pub pass: bool,
}

impl CompactnessCertificate {
    pub fn passed(&self) -> bool {
        self.pass
    }
}

/// Evaluates the compactness criterion for `(mw, d)`.
pub fn certificate(mw: &MultiWeight, d: i64) -> Result<CompactnessCertificate> {
    mw.check()?;
    let (na, nb) = (mw.norm_alpha(), mw.norm_beta());
    let dd = int(d);
    let mut epsilon = Rat::zero();
    let mut gap: Option<Rat> = None;
    for j in 0..mw.s {
        let (a, b) = (&mw.alpha[j], &mw.beta[j]);
        let (a_lo, a_hi) = (a.first(), a.last());
        let (b_lo, b_hi) = (b.first(), b.last());
        epsilon += b_hi.cloned().unwrap_or_default() - a_lo.cloned().unwrap_or_default();
        if let (Some(ap), Some(b1)) = (a_hi, b_lo) {
            let g = b1 - ap;
            gap = Some(gap.map_or(g.clone(), |x| x.min(g)));
        }
    }
    // With p=0 or q=0 the ordering condition is vacuous.
    let gap = gap.unwrap_or_else(Rat::one);
    let lo = &nb - &na;
    let hi = &lo + int(2) - &epsilon;
    let d_margin = (&dd - &lo).min(&hi - &dd);
    let two_margin = int(2) - &epsilon;
    let conditions = Conditions {
        alpha_below_beta: gap.is_positive(),
        epsilon_below_two: two_margin.is_positive(),
        d_in_interval: d_margin.is_positive(),
    };
    let pass =
        conditions.alpha_below_beta && conditions.epsilon_below_two && conditions.d_in_interval;
    let half = rat(1, 2);
    Ok(CompactnessCertificate {
        deg_u: -(&na + &nb - &dd) * &half,
        deg_v: -(&na + &nb + &dd) * &half,
        toledo: &nb - &na - &dd,
        epsilon,
        j_interval: (lo, hi),
        d,
        conditions,
        margins: Margins {
            alpha_below_beta: gap,
            epsilon_below_two: two_margin,
            d_in_interval: d_margin,
        },
        pass,
    })
}

/// Eigenphases of the boundary holonomy at each puncture, as rationals mod 1.
pub fn holonomy(mw: &MultiWeight) -> Result<Vec<Vec<Rat>>> {
    mw.check()?;
    Ok((0..mw.s)
        .map(|j| mw.alpha[j].iter().chain(&mw.beta[j]).cloned().collect())
        .collect())
}

/// The parabolic line bundle 𝒪(l + Σ_j w^j x_j).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicLine {
    pub degree: i64,
    #[serde(with = "json::rat_vec")]
    pub weights: Vec<Rat>,
}

impl ParabolicLine {
    pub fn new(degree: i64, weights: Vec<Rat>) -> Result<Self> {
        if let Some(w) = weights
            .iter()
            .find(|w| w.is_negative() || **w >= Rat::one())
        {
            return Err(Error::InvalidInput(format!(
                "line weight {} outside [0,1)",
                json_str(w)
            )));
        }
        Ok(Self { degree, weights })
    }

    pub fn trivial(s: usize) -> Self {
        Self {
            degree: 0,
            weights: vec![Rat::zero(); s],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.degree == 0 && self.weights.iter().all(Zero::is_zero)
    }

    pub fn parabolic_degree(&self) -> Rat {
        int(self.degree) + self.weights.iter().sum::<Rat>()
    }
}

fn same_s(a: &ParabolicLine, b: &ParabolicLine) -> Result<()> {
    if a.weights.len() != b.weights.len() {
        return Err(Error::DimensionMismatch {
            context: "line bundle punctures",
            expected: a.weights.len(),
            found: b.weights.len(),
        });
    }
    Ok(())
}

fn floor_i64(x: &Rat) -> i64 {
    x.floor().to_integer().to_i64().expect("carry fits in i64")
}

pub fn line_tensor(a: &ParabolicLine, b: &ParabolicLine) -> Result<ParabolicLine> {
    same_s(a, b)?;
    let mut degree = a.degree + b.degree;
    let mut weights = Vec::with_capacity(a.weights.len());
    for (x, y) in a.weights.iter().zip(&b.weights) {
        let t = x + y;
        let c = floor_i64(&t);
        degree += c;
        weights.push(t - int(c));
    }
    Ok(ParabolicLine { degree, weights })
}

/// `a^{⊗n}` for `n ≥ 0`.
pub fn line_power(a: &ParabolicLine, n: u32) -> ParabolicLine {
    let mut out = ParabolicLine::trivial(a.weights.len());
    for _ in 0..n {
        out = line_tensor(&out, a).expect("same puncture count");
    }
    out
}

/// Degree of Hom(a, b) = 𝒪(m − l − k), k the number of punctures with w_a ≥ w_b.
pub fn line_hom_degree(a: &ParabolicLine, b: &ParabolicLine) -> Result<i64> {
    same_s(a, b)?;
    let k = a
        .weights
        .iter()
        .zip(&b.weights)
        .filter(|(x, y)| x >= y)
        .count() as i64;
    Ok(b.degree - a.degree - k)
}

/// Twists `(mw, d)` by the torsion line bundle attached to `phi ∈ (Z_{p+q})^s`.
///
/// Returns the line bundle, the re-sorted multiweight and the new `d = deg 𝒰 − deg 𝒱`.
pub fn torsion_twist(
    phi: &[i64],
    mw: &MultiWeight,
    d: i64,
) -> Result<(ParabolicLine, MultiWeight, i64)> {
    mw.check()?;
    if phi.len() != mw.s {
        return Err(Error::DimensionMismatch {
            context: "torsion residues",
            expected: mw.s,
            found: phi.len(),
        });
    }
    let n = (mw.p + mw.q) as i64;
    let hat: Vec<i64> = phi.iter().map(|x| x.mod_floor(&n)).collect();
    let total: i64 = hat.iter().sum();
    if total % n != 0 {
        return Err(Error::InvalidInput(format!(
            "residues sum to {total}, not 0 mod {n}"
        )));
    }
    let l = -total / n;
    let line = ParabolicLine {
        degree: l,
        weights: hat.iter().map(|&h| rat(h, n)).collect(),
    };
    let mut carries = [0i64; 2];
    let mut shift_side = |rows: &[Vec<Rat>], slot: usize| -> Vec<Vec<Rat>> {
        rows.iter()
            .zip(&hat)
            .map(|(row, &h)| {
                let mut out: Vec<Rat> = row
                    .iter()
                    .map(|w| {
                        let t = w + rat(h, n);
                        let c = floor_i64(&t);
                        carries[slot] += c;
                        t - int(c)
                    })
                    .collect();
                out.sort();
                out
            })
            .collect()
    };
    let alpha = shift_side(&mw.alpha, 0);
    let beta = shift_side(&mw.beta, 1);
    let twisted = MultiWeight {
        p: mw.p,
        q: mw.q,
        s: mw.s,
        alpha,
        beta,
    };
    let new_d = d + (mw.p as i64 - mw.q as i64) * l + carries[0] - carries[1];
    Ok((line, twisted, new_d))
}

/// Parses a multiweight from JSON (shape only; use [`MultiWeight::validate`] for membership).
pub fn parse_multiweight(s: &str) -> Result<MultiWeight> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(p: usize, q: usize, s: usize, a: Rat, b: Rat) -> MultiWeight {
        MultiWeight {
            p,
            q,
            s,
            alpha: vec![vec![a; p]; s],
            beta: vec![vec![b; q]; s],
        }
    }

    #[test]
    fn validate_examples() {
        assert!(constant(1, 1, 3, int(0), int(0)).validate().is_empty());
        let good = constant(1, 2, 5, rat(4, 15), rat(11, 30));
        assert!(good.validate().is_empty());
        let mut bad = good.clone();
        for row in &mut bad.beta {
            row[1] = rat(12, 30);
        }
        let v = bad.validate();
        assert_eq!(v.len(), 5);
        assert!(v.iter().enumerate().all(|(j, x)| *x
            == Violation::NonIntegralSum {
                puncture: j,
                sum: rat(31, 30)
            }));
    }

    #[test]
    fn certificate_examples() {
        let c = certificate(&constant(1, 2, 5, rat(4, 15), rat(11, 30)), 3).unwrap();
        assert_eq!(c.epsilon, rat(1, 2));
        assert_eq!(c.j_interval, (rat(7, 3), rat(23, 6)));
        assert!(c.pass);
        assert_eq!(
            (c.deg_u.clone(), c.deg_v.clone(), c.toledo.clone()),
            (int(-1), int(-4), rat(-2, 3))
        );

        let z = certificate(&constant(1, 1, 3, int(0), int(0)), 0).unwrap();
        assert_eq!(z.j_interval, (int(0), int(2)));
        assert!(!z.conditions.d_in_interval && !z.conditions.alpha_below_beta && !z.pass);

        let mw = constant(1, 1, 5, rat(2, 5), rat(3, 5));
        for d in -3..6 {
            let c = certificate(&mw, d).unwrap();
            assert_eq!(c.epsilon, int(1));
            assert_eq!(c.j_interval, (int(1), int(2)));
            assert!(!c.pass);
        }
    }

    #[test]
    fn holonomy_examples() {
        let h = holonomy(&constant(2, 2, 5, rat(9, 20), rat(11, 20))).unwrap();
        assert!(h
            .iter()
            .all(|v| *v == vec![rat(9, 20), rat(9, 20), rat(11, 20), rat(11, 20)]));
    }

    #[test]
    fn line_examples() {
        let a = ParabolicLine::new(-2, vec![rat(1, 3), rat(1, 2)]).unwrap();
        let b = ParabolicLine::new(0, vec![rat(1, 4), rat(3, 4)]).unwrap();
        assert_eq!(
            line_tensor(&a, &b).unwrap(),
            ParabolicLine::new(-1, vec![rat(7, 12), rat(1, 4)]).unwrap()
        );
        assert_eq!(line_tensor(&a, &ParabolicLine::trivial(2)).unwrap(), a);
        assert_eq!(line_hom_degree(&a, &b).unwrap(), 1);
        assert_eq!(line_hom_degree(&a, &a).unwrap(), -2);
        let c = ParabolicLine::new(-1, vec![rat(1, 3); 3]).unwrap();
        assert!(line_power(&c, 3).is_trivial());
    }

    #[test]
    fn twist_examples() {
        let mw = constant(1, 2, 3, rat(1, 6), rat(5, 12));
        assert!(mw.validate().is_empty());
        let (l0, same, d0) = torsion_twist(&[0, 0, 0], &mw, 1).unwrap();
        assert!(l0.is_trivial());
        assert_eq!((same, d0), (mw.clone(), 1));
        let (l, _, _) = torsion_twist(&[1, 1, 1], &mw, 1).unwrap();
        assert_eq!(l, ParabolicLine::new(-1, vec![rat(1, 3); 3]).unwrap());
        assert!(line_power(&l, 3).is_trivial());
        assert!(torsion_twist(&[1, 0, 0], &mw, 1).is_err());
    }
}
