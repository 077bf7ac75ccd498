use num_rational::BigRational;

use super::field::{Field, PrimeField, Rationals};
use crate::error::{Error, Result};

/// Dense row-major matrix over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_fn(
        field: F,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> F::Elem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_i64(field: F, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                context: "matrix row",
                expected: c,
                found: bad.len(),
            });
        }
        let data = rows.iter().flatten().map(|&x| field.from_i64(x)).collect();
        Self::new(field, r, c, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: F, n: usize, cols: &[Vec<F::Elem>]) -> Self {
        Self::from_fn(field, n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn row_vectors(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other.get(k, j));
                    let v = f.add(out.get(i, j), &t);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                context: "matrix sum",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Ok(Self {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Self {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| self.field.neg(a)).collect();
        Self {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.field.rank_of(self.rows, self.cols, &self.data)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if piv != r {
                for k in 0..cols {
                    m.data.swap(piv * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for k in c..cols {
                let v = f.mul(m.get(r, k), &inv);
                m.set(r, k, v);
            }
            for i in 0..rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for k in c..cols {
                    let t = f.mul(&factor, m.get(r, k));
                    let v = f.sub(m.get(i, k), &t);
                    m.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(red.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        let aug = Self::from_fn(f.clone(), n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                f.one()
            } else {
                f.zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(f.clone(), n, n, |i, j| {
            red.get(i, n + j).clone()
        }))
    }

    pub fn det(&self) -> Option<F::Elem> {
        if self.rows != self.cols {
            return None;
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !f.is_zero(&m[r * n + c])) else {
                return Some(f.zero());
            };
            if piv != c {
                for k in 0..n {
                    m.swap(piv * n + k, c * n + k);
                }
                det = f.neg(&det);
            }
            det = f.mul(&det, &m[c * n + c]);
            let inv = f.inv(&m[c * n + c]).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = f.mul(&m[r * n + c], &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for k in c..n {
                    let t = f.mul(&factor, &m[c * n + k]);
                    m[r * n + k] = f.sub(&m[r * n + k], &t);
                }
            }
        }
        Some(det)
    }

    /// Same entries read in another field through `map`.
    pub fn map_field<G: Field>(&self, g: G, mut map: impl FnMut(&F::Elem) -> G::Elem) -> Matrix<G> {
        let data = self.data.iter().map(&mut map).collect();
        Matrix {
            field: g,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn format_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| self.field.format_elem(x))
                    .collect()
            })
            .collect()
    }
}

impl Matrix<Rationals> {
    /// Reduction mod l; `None` if some denominator is divisible by l.
    pub fn reduce_mod(&self, fl: PrimeField) -> Option<Matrix<PrimeField>> {
        let data = self
            .data
            .iter()
            .map(|x| fl.reduce(x))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            field: fl,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        use num_traits::ToPrimitive;
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn from_rationals(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        Self::new(Rationals, rows, cols, data)
    }
}

impl Matrix<PrimeField> {
    /// Integer matrix of symmetric residues.
    pub fn lift(&self) -> Matrix<Rationals> {
        let fl = self.field;
        self.map_field(Rationals, |&x| {
            BigRational::from_integer(fl.symmetric_lift(x).into())
        })
    }
}
