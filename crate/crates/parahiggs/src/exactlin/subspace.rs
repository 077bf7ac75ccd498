use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Linear subspace of `F^n` in canonical form.
///
/// The basis is kept as the rows of a reduced row echelon matrix. Its transpose,
/// returned by [`Subspace::basis`], is the reduced column echelon basis, so equal
/// subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient_dim: usize,
    rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> std::hash::Hash for Subspace<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.rows.hash(state);
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: F, n: usize) -> Self {
        Self {
            ambient_dim: n,
            rows: Vec::new(),
            field,
        }
    }

    pub fn full(field: F, n: usize) -> Self {
        let rows = (0..n).map(|i| unit(&field, n, i)).collect();
        Self {
            ambient_dim: n,
            rows,
            field,
        }
    }

    /// Span of arbitrary vectors of length `n`.
    pub fn span(field: F, n: usize, vectors: &[Vec<F::Elem>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "spanning vector",
                expected: n,
                found: v.len(),
            });
        }
        let data = vectors.iter().flatten().cloned().collect();
        let m = Matrix::new(field.clone(), vectors.len(), n, data)?;
        Ok(Self::from_rref(&m))
    }

    /// Span of standard basis vectors.
    pub fn coordinate(field: F, n: usize, indices: &[usize]) -> Self {
        let vs: Vec<_> = indices.iter().map(|&i| unit(&field, n, i)).collect();
        Self::span(field, n, &vs).expect("unit vectors have length n")
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix<F>) -> Self {
        Self::from_rref(m)
    }

    /// Column space of `m`.
    pub fn column_space(m: &Matrix<F>) -> Self {
        Self::from_rref(&m.transpose())
    }

    fn from_rref(m: &Matrix<F>) -> Self {
        let (red, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| red.row(i).to_vec()).collect();
        Self {
            ambient_dim: m.cols(),
            rows,
            field: m.field().clone(),
        }
    }

    /// Builds a subspace from rows already in reduced row echelon form.
    pub(crate) fn from_echelon_rows(field: F, n: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        Self {
            ambient_dim: n,
            rows,
            field,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    /// Canonical basis vectors (rows of the reduced echelon form).
    pub fn basis_vectors(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// `ambient_dim × dim` matrix whose columns form the canonical basis.
    pub fn basis(&self) -> Matrix<F> {
        Matrix::from_columns(self.field().clone(), self.ambient_dim, &self.rows)
    }

    pub fn pivots(&self) -> Vec<usize> {
        let f = self.field();
        self.rows
            .iter()
            .map(|r| r.iter().position(|x| !f.is_zero(x)).expect("nonzero row"))
            .collect()
    }

    fn echelon_matrix(&self) -> Matrix<F> {
        let data = self.rows.iter().flatten().cloned().collect();
        Matrix::new(
            self.field().clone(),
            self.rows.len(),
            self.ambient_dim,
            data,
        )
        .expect("consistent shape")
    }

    fn check_same(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let f = self.field();
        let mut w = v.to_vec();
        for (row, piv) in self.rows.iter().zip(self.pivots()) {
            let c = w[piv].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&c, r));
            }
        }
        w.iter().all(|x| f.is_zero(x))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.rows.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "subspace sum")?;
        let mut vs = self.rows.clone();
        vs.extend(other.rows.iter().cloned());
        Self::span(self.field().clone(), self.ambient_dim, &vs)
    }

    /// Vectors orthogonal to every basis vector under the standard bilinear form.
    pub fn annihilator(&self) -> Self {
        let f = self.field().clone();
        let n = self.ambient_dim;
        if self.rows.is_empty() {
            return Self::full(f, n);
        }
        let ker = self.echelon_matrix().kernel();
        Self::span(f, n, &ker).expect("kernel vectors have ambient length")
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "subspace intersection")?;
        let mut eqs = self.annihilator().rows;
        eqs.extend(other.annihilator().rows);
        let f = self.field().clone();
        let n = self.ambient_dim;
        if eqs.is_empty() {
            return Ok(Self::full(f, n));
        }
        let data = eqs.iter().flatten().cloned().collect();
        let m = Matrix::new(f.clone(), eqs.len(), n, data)?;
        Self::span(f, n, &m.kernel())
    }

    /// `M(self)` for a matrix with `ambient_dim` columns.
    pub fn image(&self, m: &Matrix<F>) -> Result<Self> {
        if m.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "image",
                expected: self.ambient_dim,
                found: m.cols(),
            });
        }
        let vs: Vec<_> = self.rows.iter().map(|v| m.apply(v)).collect();
        Self::span(self.field().clone(), m.rows(), &vs)
    }

    /// `{x : M x ∈ self}` for a matrix with `ambient_dim` rows.
    pub fn preimage(&self, m: &Matrix<F>) -> Result<Self> {
        if m.rows() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                context: "preimage",
                expected: self.ambient_dim,
                found: m.rows(),
            });
        }
        let f = self.field().clone();
        let ann = self.annihilator();
        if ann.rows.is_empty() {
            return Ok(Self::full(f, m.cols()));
        }
        let cond = ann.echelon_matrix().mul(m)?;
        Self::span(f, m.cols(), &cond.kernel())
    }

    /// Complement spanned by the standard basis vectors at non-pivot positions.
    pub fn standard_complement(&self) -> Self {
        let piv = self.pivots();
        let idx: Vec<usize> = (0..self.ambient_dim).filter(|i| !piv.contains(i)).collect();
        Self::coordinate(self.field().clone(), self.ambient_dim, &idx)
    }

    /// Basis vectors formatted with the field's element syntax.
    pub fn format_basis(&self) -> Vec<Vec<String>> {
        let f = self.field();
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| f.format_elem(x)).collect())
            .collect()
    }

    /// Same subspace with coordinates mapped into another field.
    pub fn map_field<G: Field>(&self, g: G, map: impl Fn(&F::Elem) -> G::Elem) -> Subspace<G> {
        let vs: Vec<Vec<G::Elem>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(&map).collect())
            .collect();
        Subspace::span(g, self.ambient_dim, &vs).expect("same ambient dimension")
    }
}

pub(crate) fn unit<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

/// `span(⋃_j A_j(u))`.
pub fn image_span<F: Field>(tuple: &[Matrix<F>], u: &Subspace<F>) -> Result<Subspace<F>> {
    let Some(first) = tuple.first() else {
        return Err(Error::InvalidInput("empty matrix tuple".into()));
    };
    let (q, p) = (first.rows(), first.cols());
    if let Some(bad) = tuple.iter().find(|m| m.rows() != q || m.cols() != p) {
        return Err(Error::DimensionMismatch {
            context: "tuple matrix shape",
            expected: q * p,
            found: bad.rows() * bad.cols(),
        });
    }
    if u.ambient_dim() != p {
        return Err(Error::DimensionMismatch {
            context: "image_span source",
            expected: p,
            found: u.ambient_dim(),
        });
    }
    let vs: Vec<_> = tuple
        .iter()
        .flat_map(|m| u.basis_vectors().iter().map(move |v| m.apply(v)))
        .collect();
    Subspace::span(first.field().clone(), q, &vs)
}

/// `(dim(u ∩ F_0), …, dim(u ∩ F_m))` for a flag `F_0 = ambient ⊋ … ⊋ F_m = 0`.
pub fn flag_meet_dims<F: Field>(u: &Subspace<F>, flag: &[Subspace<F>]) -> Result<Vec<usize>> {
    check_flag(flag, u.ambient_dim())?;
    flag.iter()
        .map(|fi| u.intersect(fi).map(|s| s.dim()))
        .collect()
}

/// Checks that `flag` strictly decreases from the full space of dimension `n` to zero.
pub fn check_flag<F: Field>(flag: &[Subspace<F>], n: usize) -> Result<()> {
    let ok = flag
        .first()
        .is_some_and(|f| f.ambient_dim() == n && f.is_full())
        && flag.last().is_some_and(|f| f.is_zero())
        && flag.iter().all(|f| f.ambient_dim() == n)
        && flag
            .windows(2)
            .all(|w| w[1].dim() < w[0].dim() && w[1].is_subspace_of(&w[0]));
    if ok {
        Ok(())
    } else {
        Err(Error::NotNested)
    }
}

/// The standard complete flag `F_i = span(e_1, …, e_{n-i})`.
pub fn standard_flag<F: Field>(field: F, n: usize) -> Vec<Subspace<F>> {
    (0..=n)
        .map(|i| Subspace::coordinate(field.clone(), n, &(0..n - i).collect::<Vec<_>>()))
        .collect()
}
