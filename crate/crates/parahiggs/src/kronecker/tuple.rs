use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{
    image_span, Field, FiniteField, GaloisField, Matrix, PrimeField, Rationals, Subspace,
};

/// A point `(A_1, …, A_r)` of `Hom(F^p, F^q)^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixTuple<F: Field> {
    field: F,
    p: usize,
    q: usize,
    mats: Vec<Matrix<F>>,
}

impl<F: Field> MatrixTuple<F> {
    pub fn new(field: F, p: usize, q: usize, mats: Vec<Matrix<F>>) -> Result<Self> {
        for m in &mats {
            if m.rows() != q || m.cols() != p {
                return Err(Error::DimensionMismatch {
                    context: "tuple matrix (q x p)",
                    expected: q * p,
                    found: m.rows() * m.cols(),
                });
            }
            if *m.field() != field {
                return Err(Error::InvalidInput(
                    "tuple matrices over different fields".into(),
                ));
            }
        }
        Ok(Self { field, p, q, mats })
    }

    pub fn from_i64(field: F, p: usize, q: usize, mats: &[Vec<Vec<i64>>]) -> Result<Self> {
        let ms = mats
            .iter()
            .map(|m| {
                if m.is_empty() {
                    Ok(Matrix::zeros(field.clone(), q, p))
                } else {
                    Matrix::from_i64(field.clone(), m)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, p, q, ms)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn q(&self) -> usize {
        self.q
    }
    pub fn r(&self) -> usize {
        self.mats.len()
    }
    pub fn mats(&self) -> &[Matrix<F>] {
        &self.mats
    }

    /// Smallest `V` with `A_j(U) ⊆ V` for all `j`.
    pub fn image_span(&self, u: &Subspace<F>) -> Result<Subspace<F>> {
        if u.ambient_dim() != self.p {
            return Err(Error::DimensionMismatch {
                context: "image_span source",
                expected: self.p,
                found: u.ambient_dim(),
            });
        }
        if self.mats.is_empty() {
            return Ok(Subspace::zero(self.field.clone(), self.q));
        }
        image_span(&self.mats, u)
    }

    /// `∩_j A_j^{-1}(V)`, the largest `U` mapped into `V`.
    pub fn preimage(&self, v: &Subspace<F>) -> Result<Subspace<F>> {
        let mut u = Subspace::full(self.field.clone(), self.p);
        for m in &self.mats {
            u = u.intersect(&v.preimage(m)?)?;
        }
        Ok(u)
    }

    pub fn is_invariant_pair(&self, u: &Subspace<F>, v: &Subspace<F>) -> Result<bool> {
        Ok(self.image_span(u)?.is_subspace_of(v))
    }

    /// The group action `A_j ↦ g2 A_j g1^{-1}`.
    pub fn act(&self, g1: &Matrix<F>, g2: &Matrix<F>) -> Result<Self> {
        let g1i = g1
            .inverse()
            .ok_or_else(|| Error::InvalidInput("g1 is not invertible".into()))?;
        if g2.rows() != self.q
            || g2.cols() != self.q
            || g2.det().is_some_and(|d| self.field.is_zero(&d))
        {
            return Err(Error::InvalidInput(
                "g2 must be an invertible q x q matrix".into(),
            ));
        }
        let mats = self
            .mats
            .iter()
            .map(|a| g2.mul(a)?.mul(&g1i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.field.clone(), self.p, self.q, mats)
    }

    /// Linear combination `Σ c_j A_j`.
    pub fn combination(&self, coeffs: &[F::Elem]) -> Matrix<F> {
        let mut out = Matrix::zeros(self.field.clone(), self.q, self.p);
        for (m, c) in self.mats.iter().zip(coeffs) {
            out = out.add(&m.scale(c)).expect("same shape");
        }
        out
    }

    pub fn to_json(&self) -> TupleJson {
        TupleJson {
            field: self.field.tag(),
            p: self.p,
            q: self.q,
            mats: self.mats.iter().map(Matrix::format_rows).collect(),
        }
    }
}

impl<F: FiniteField> MatrixTuple<F> {
    pub fn random(field: &F, p: usize, q: usize, r: usize, rng: &mut impl Rng) -> Self {
        let n = field.order();
        let mats = (0..r)
            .map(|_| {
                Matrix::from_fn(field.clone(), q, p, |_, _| {
                    field.element(rng.gen_range(0..n))
                })
            })
            .collect();
        Self {
            field: field.clone(),
            p,
            q,
            mats,
        }
    }
}

impl MatrixTuple<Rationals> {
    pub fn reduce_mod(&self, fl: PrimeField) -> Option<MatrixTuple<PrimeField>> {
        let mats = self
            .mats
            .iter()
            .map(|m| m.reduce_mod(fl))
            .collect::<Option<Vec<_>>>()?;
        Some(MatrixTuple {
            field: fl,
            p: self.p,
            q: self.q,
            mats,
        })
    }

    /// Integer entries drawn uniformly from `-bound..=bound`.
    pub fn random_integer(p: usize, q: usize, r: usize, bound: i64, rng: &mut impl Rng) -> Self {
        let mats = (0..r)
            .map(|_| {
                Matrix::from_fn(Rationals, q, p, |_, _| {
                    Rationals.from_i64(rng.gen_range(-bound..=bound))
                })
            })
            .collect();
        Self {
            field: Rationals,
            p,
            q,
            mats,
        }
    }
}

impl MatrixTuple<PrimeField> {
    /// The same tuple read in GF(l^k).
    pub fn embed(&self, g: &GaloisField) -> MatrixTuple<GaloisField> {
        let mats = self
            .mats
            .iter()
            .map(|m| m.map_field(g.clone(), |&x| x as u32))
            .collect();
        MatrixTuple {
            field: g.clone(),
            p: self.p,
            q: self.q,
            mats,
        }
    }

    /// Symmetric-residue integer lift.
    pub fn lift(&self) -> MatrixTuple<Rationals> {
        MatrixTuple {
            field: Rationals,
            p: self.p,
            q: self.q,
            mats: self.mats.iter().map(Matrix::lift).collect(),
        }
    }
}

/// Random invertible matrix by rejection sampling.
pub fn random_invertible<F: FiniteField>(field: &F, n: usize, rng: &mut impl Rng) -> Matrix<F> {
    loop {
        let m = Matrix::from_fn(field.clone(), n, n, |_, _| {
            field.element(rng.gen_range(0..field.order()))
        });
        if m.rank() == n {
            return m;
        }
    }
}

/// Wire form: `{"field": "q" | "f<l>", "p", "q", "mats": [[[entry]]]}`, each matrix q rows of p entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleJson {
    pub field: String,
    pub p: usize,
    pub q: usize,
    pub mats: Vec<Vec<Vec<String>>>,
}

/// A tuple over whichever field its JSON names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyTuple {
    Rational(MatrixTuple<Rationals>),
    Prime(MatrixTuple<PrimeField>),
}

/// Parses a field tag: `"q"` or `"f<prime>"`.
pub fn parse_field_tag(tag: &str) -> Result<Option<PrimeField>> {
    match tag {
        "q" | "Q" | "ql" => Ok(None),
        _ => {
            let l = tag
                .strip_prefix('f')
                .and_then(|x| x.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown field tag {tag:?}")))?;
            Ok(Some(PrimeField::new(l)?))
        }
    }
}

fn build<F: Field>(field: F, j: &TupleJson) -> Result<MatrixTuple<F>> {
    let mut mats = Vec::with_capacity(j.mats.len());
    for m in &j.mats {
        if m.len() != j.q || m.iter().any(|row| row.len() != j.p) {
            return Err(Error::DimensionMismatch {
                context: "tuple matrix (q x p)",
                expected: j.q * j.p,
                found: m.iter().map(Vec::len).sum(),
            });
        }
        let data = m
            .iter()
            .flatten()
            .map(|x| field.parse_elem(x))
            .collect::<Result<Vec<_>>>()?;
        mats.push(Matrix::new(field.clone(), j.q, j.p, data)?);
    }
    MatrixTuple::new(field, j.p, j.q, mats)
}

impl TupleJson {
    pub fn to_tuple(&self) -> Result<AnyTuple> {
        match parse_field_tag(&self.field)? {
            None => Ok(AnyTuple::Rational(build(Rationals, self)?)),
            Some(fl) => Ok(AnyTuple::Prime(build(fl, self)?)),
        }
    }
}

pub fn parse_tuple(s: &str) -> Result<AnyTuple> {
    let j: TupleJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_tuple()
}

/// Wire form of a subspace: the canonical basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<String>>,
}

impl SubspaceJson {
    pub fn from_subspace<F: Field>(s: &Subspace<F>) -> Self {
        Self {
            ambient_dim: s.ambient_dim(),
            basis: s.format_basis(),
        }
    }

    pub fn to_subspace<F: Field>(&self, field: &F) -> Result<Subspace<F>> {
        let vs = self
            .basis
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| field.parse_elem(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(field.clone(), self.ambient_dim, &vs)
    }
}
