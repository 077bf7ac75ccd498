use super::field::FiniteField;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Cap on the number of subspaces a single query may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(2_000_000);

    pub fn check(self, required: u128) -> Result<()> {
        if required > self.0 as u128 {
            Err(Error::BudgetExceeded {
                required,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Gaussian binomial `[n choose d]_q`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, d: usize, q: u64) -> u128 {
    if d > n {
        return 0;
    }
    // Pascal rule [n,d] = [n-1,d-1] + q^d [n-1,d], row by row.
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = vec![1u128; m + 1];
        for k in 1..m {
            let qk = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
            next[k] = row[k - 1].saturating_add(qk.saturating_mul(row[k]));
        }
        row = next;
    }
    row[d]
}

/// Number of subspaces of every dimension in `F_q^n`.
pub fn total_subspaces(n: usize, q: u64) -> u128 {
    (0..=n).fold(0u128, |acc, d| {
        acc.saturating_add(gaussian_binomial(n, d, q))
    })
}

/// Every `d`-dimensional subspace of `F^n`, in canonical order: pivot sets in
/// lexicographic order, then free entries counted in base `|F|` with the last
/// free position varying fastest.
pub fn enumerate_subspaces<F: FiniteField>(
    field: &F,
    n: usize,
    d: usize,
    budget: Budget,
) -> Result<SubspaceIter<F>> {
    if d > n {
        return Err(Error::InvalidInput(format!(
            "subspace dimension {d} exceeds ambient dimension {n}"
        )));
    }
    budget.check(gaussian_binomial(n, d, field.order()))?;
    Ok(SubspaceIter::new(field.clone(), n, d))
}

/// All subspaces of `F^n`, by increasing dimension.
pub fn enumerate_all<F: FiniteField>(
    field: &F,
    n: usize,
    budget: Budget,
) -> Result<impl Iterator<Item = Subspace<F>>> {
    budget.check(total_subspaces(n, field.order()))?;
    let f = field.clone();
    Ok((0..=n).flat_map(move |d| SubspaceIter::new(f.clone(), n, d)))
}

pub struct SubspaceIter<F: FiniteField> {
    field: F,
    n: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    counter: Vec<u64>,
}

impl<F: FiniteField> SubspaceIter<F> {
    fn new(field: F, n: usize, d: usize) -> Self {
        let pivots: Vec<usize> = (0..d).collect();
        let free = free_positions(n, &pivots);
        let counter = vec![0; free.len()];
        Self {
            field,
            n,
            pivots: Some(pivots),
            free,
            counter,
        }
    }

    fn current(&self, pivots: &[usize]) -> Subspace<F> {
        let f = &self.field;
        let mut rows = vec![vec![f.zero(); self.n]; pivots.len()];
        for (i, &c) in pivots.iter().enumerate() {
            rows[i][c] = f.one();
        }
        for (&(r, c), &x) in self.free.iter().zip(&self.counter) {
            rows[r][c] = f.element(x);
        }
        Subspace::from_echelon_rows(f.clone(), self.n, rows)
    }

    fn advance(&mut self) {
        let q = self.field.order();
        for x in self.counter.iter_mut().rev() {
            *x += 1;
            if *x < q {
                return;
            }
            *x = 0;
        }
        let pivots = self.pivots.as_mut().expect("iterator not finished");
        if !next_combination(pivots, self.n) {
            self.pivots = None;
            return;
        }
        self.free = free_positions(self.n, pivots);
        self.counter = vec![0; self.free.len()];
    }
}

impl<F: FiniteField> Iterator for SubspaceIter<F> {
    type Item = Subspace<F>;

    fn next(&mut self) -> Option<Subspace<F>> {
        let pivots = self.pivots.clone()?;
        let out = self.current(&pivots);
        self.advance();
        Some(out)
    }
}

fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                out.push((r, c));
            }
        }
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}
