//! Symmetric and antisymmetric tuples for Sp(2p,R) and SO*(2p), and eigenvalue diagnostics.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Budget, Field, Matrix, PrimeField, Rationals};
use crate::kronecker::{blowup_certificate, king_bruteforce, MatrixTuple, Status, TupleJson};
use crate::multiweight::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryClass {
    Symmetric,
    Antisymmetric,
}

/// Every `A_j` equals (or negates) its transpose.
pub fn realform_check<F: Field>(a: &MatrixTuple<F>, kind: SymmetryClass) -> Result<bool> {
    if a.p() != a.q() {
        return Err(Error::InvalidInput(format!(
            "real-form check needs square matrices, got {}x{}",
            a.q(),
            a.p()
        )));
    }
    Ok(a.mats().iter().all(|m| match kind {
        SymmetryClass::Symmetric => m.transpose() == *m,
        SymmetryClass::Antisymmetric => m.transpose() == m.neg(),
    }))
}

/// `g·A = (g A_j gᵀ)`, the congruence action.
pub fn congruence<F: Field>(a: &MatrixTuple<F>, g: &Matrix<F>) -> Result<MatrixTuple<F>> {
    let gt = g.transpose();
    let g1 = gt
        .inverse()
        .ok_or_else(|| Error::InvalidInput("g is not invertible".into()))?;
    // g A gᵀ = g2 A g1⁻¹ with g2 = g, g1 = g⁻ᵀ
    a.act(&g1, g)
}

/// Primes whose reductions must not be Unstable.
pub const VALIDATION_PRIMES: [u64; 3] = [5, 7, 11];

/// Attempts per prime of the blow-up search, for block sizes up to `p − 1`.
const BLOWUP_ATTEMPTS: usize = 40;

/// How a reduction was shown to be not Unstable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Evidence {
    /// Invertible blow-up of this block size.
    Blowup(usize),
    /// Exhaustive King test.
    Exhaustive(Status),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCheck {
    pub prime: u64,
    pub evidence: Evidence,
}

/// Shows the reduction mod `l` is not Unstable, or returns `None` if it is Unstable or undecided.
pub fn check_reduction(
    a: &MatrixTuple<Rationals>,
    l: u64,
    rng: &mut impl Rng,
    budget: Budget,
) -> Result<Option<PrimeCheck>> {
    let Some(red) = a.reduce_mod(PrimeField::new(l)?) else {
        return Ok(None);
    };
    if let Some(c) = blowup_certificate(&red, a.p().saturating_sub(1).max(1), BLOWUP_ATTEMPTS, rng)
    {
        return Ok(Some(PrimeCheck {
            prime: l,
            evidence: Evidence::Blowup(c.d),
        }));
    }
    match king_bruteforce(&red, budget) {
        Ok(v) if v.status != Status::Unstable => Ok(Some(PrimeCheck {
            prime: l,
            evidence: Evidence::Exhaustive(v.status),
        })),
        Ok(_) => Ok(None),
        Err(e) if e.is_budget() => Ok(None),
        Err(e) => Err(e),
    }
}

fn validate(
    a: &MatrixTuple<Rationals>,
    primes: &[u64],
    rng: &mut impl Rng,
    budget: Budget,
) -> Result<Option<Vec<PrimeCheck>>> {
    let mut out = Vec::with_capacity(primes.len());
    for &l in primes {
        match check_reduction(a, l, rng, budget)? {
            Some(c) => out.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SoStarPath {
    /// The three-matrix construction with a generic `A'_3`.
    Construction,
    /// Validated random antisymmetric triples (the generic block does not exist for p = 3).
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealFormResult {
    pub p: usize,
    pub seed: u64,
    pub attempts: u64,
    pub path: Option<SoStarPath>,
    pub tuple: TupleJson,
    pub checks: Vec<PrimeCheck>,
}

/// Antisymmetric triple `(A_1, A_2, A_3)` of odd size `p = 2p' + 1` with semistable reductions.
pub fn sostar_construct(p: usize, seed: u64) -> Result<(MatrixTuple<Rationals>, RealFormResult)> {
    sostar_construct_with(p, seed, 500, Budget::DEFAULT)
}

pub fn sostar_construct_with(
    p: usize,
    seed: u64,
    max_attempts: u64,
    budget: Budget,
) -> Result<(MatrixTuple<Rationals>, RealFormResult)> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "the SO* triple needs odd p >= 3, got {p}; use antisymmetric_even for even p"
        )));
    }
    let h = (p - 1) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let (a, path) = if h >= 2 {
            let Some(a3) = random_generic_block(h, &mut rng) else {
                continue;
            };
            (construction(p, &a3), SoStarPath::Construction)
        } else if attempt == 1 {
            (cross_product_triple(), SoStarPath::Fallback)
        } else {
            (
                random_antisymmetric_tuple(p, 3, 2, &mut rng),
                SoStarPath::Fallback,
            )
        };
        debug_assert!(realform_check(&a, SymmetryClass::Antisymmetric).unwrap_or(false));
        if let Some(checks) = validate(&a, &VALIDATION_PRIMES, &mut rng, budget)? {
            let res = RealFormResult {
                p,
                seed,
                attempts: attempt,
                path: Some(path),
                tuple: a.to_json(),
                checks,
            };
            return Ok((a, res));
        }
    }
    Err(Error::SearchExhausted {
        attempts: max_attempts,
        reason: format!("no antisymmetric triple of size {p} validated"),
    })
}

fn antisym(p: usize, entries: &[(usize, usize, i64)]) -> Matrix<Rationals> {
    let mut m = Matrix::zeros(Rationals, p, p);
    for &(i, j, v) in entries {
        m.set(i, j, Rationals.from_i64(v));
        m.set(j, i, Rationals.from_i64(-v));
    }
    m
}

/// `L_x, L_y, L_z`: `L_i v = e_i × v`.
pub fn cross_product_triple() -> MatrixTuple<Rationals> {
    let lx = antisym(3, &[(2, 1, 1)]);
    let ly = antisym(3, &[(0, 2, 1)]);
    let lz = antisym(3, &[(1, 0, 1)]);
    MatrixTuple::new(Rationals, 3, 3, vec![lx, ly, lz]).expect("3x3")
}

/// The explicit triple on the basis `e_0, …, e_{2p'}`. `A_1 e_{2k−1} = e_{2k}`, `A_2` the same
/// with factor `k`, `A_3 e_0 = −Σ e_{2k}` and `A_3 e_{2k} = A'_3 e_{2k} + e_0`.
pub fn construction(p: usize, a3_block: &Matrix<Rationals>) -> MatrixTuple<Rationals> {
    let h = (p - 1) / 2;
    let a1 = antisym(
        p,
        &(1..=h).map(|k| (2 * k, 2 * k - 1, 1)).collect::<Vec<_>>(),
    );
    let a2 = antisym(
        p,
        &(1..=h)
            .map(|k| (2 * k, 2 * k - 1, k as i64))
            .collect::<Vec<_>>(),
    );
    let mut a3 = antisym(p, &(1..=h).map(|k| (2 * k, 0, -1)).collect::<Vec<_>>());
    for i in 0..2 * h {
        for j in 0..2 * h {
            a3.set(i + 1, j + 1, a3_block.get(i, j).clone());
        }
    }
    MatrixTuple::new(Rationals, p, p, vec![a1, a2, a3]).expect("p x p")
}

/// For every nonempty `I ⊆ {1..p'}`, `A'_3(span(e_{2i−1}))` is not inside `span(e_{2i})`.
/// Indices are local to `span(e_1, …, e_{2p'})`.
pub fn is_generic_block(block: &Matrix<Rationals>) -> bool {
    let h = block.rows() / 2;
    if h >= usize::BITS as usize {
        return false;
    }
    (1u64..(1 << h)).all(|mask| {
        let members: Vec<usize> = (0..h).filter(|i| mask >> i & 1 == 1).collect();
        let even: Vec<usize> = members.iter().map(|i| 2 * i + 1).collect();
        members.iter().any(|i| {
            let col = block.column(2 * i);
            col.iter()
                .enumerate()
                .any(|(r, x)| !Rationals.is_zero(x) && !even.contains(&r))
        })
    })
}

fn random_generic_block(h: usize, rng: &mut impl Rng) -> Option<Matrix<Rationals>> {
    let n = 2 * h;
    let mut m = Matrix::zeros(Rationals, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-3i64..=3);
            m.set(i, j, Rationals.from_i64(v));
            m.set(j, i, Rationals.from_i64(-v));
        }
    }
    (m.rank() == n && is_generic_block(&m)).then_some(m)
}

fn random_antisymmetric_tuple(
    p: usize,
    r: usize,
    bound: i64,
    rng: &mut impl Rng,
) -> MatrixTuple<Rationals> {
    let mats = (0..r)
        .map(|_| {
            let mut m = Matrix::zeros(Rationals, p, p);
            for i in 0..p {
                for j in i + 1..p {
                    let v = rng.gen_range(-bound..=bound);
                    m.set(i, j, Rationals.from_i64(v));
                    m.set(j, i, Rationals.from_i64(-v));
                }
            }
            m
        })
        .collect();
    MatrixTuple::new(Rationals, p, p, mats).expect("p x p")
}

/// Even `p`: random antisymmetric tuple whose first matrix is the standard symplectic form.
pub fn antisymmetric_even(p: usize, r: usize, seed: u64) -> Result<MatrixTuple<Rationals>> {
    if p == 0 || p % 2 == 1 || r == 0 {
        return Err(Error::InvalidInput(format!(
            "need even p >= 2 and r >= 1, got p = {p}, r = {r}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = antisym(
        p,
        &(0..p / 2)
            .map(|k| (2 * k + 1, 2 * k, 1))
            .collect::<Vec<_>>(),
    );
    let rest = random_antisymmetric_tuple(p, r - 1, 3, &mut rng);
    let mut mats = vec![j];
    mats.extend(rest.mats().iter().cloned());
    MatrixTuple::new(Rationals, p, p, mats)
}

/// `s − 2` symmetric integer matrices with `A_1 = I`.
pub fn sp_generate(
    p: usize,
    s: usize,
    seed: u64,
) -> Result<(MatrixTuple<Rationals>, RealFormResult)> {
    if p == 0 || s < 5 || s.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "need p >= 1 and odd s >= 5, got p = {p}, s = {s}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mats = vec![Matrix::identity(Rationals, p)];
    for _ in 1..s - 2 {
        let mut m = Matrix::zeros(Rationals, p, p);
        for i in 0..p {
            for j in i..p {
                let v = Rationals.from_i64(rng.gen_range(-3i64..=3));
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        mats.push(m);
    }
    let a = MatrixTuple::new(Rationals, p, p, mats)?;
    let checks = validate(&a, &VALIDATION_PRIMES, &mut rng, Budget::DEFAULT)?.ok_or_else(|| {
        Error::SearchExhausted {
            attempts: 1,
            reason: "a tuple containing the identity failed validation".into(),
        }
    })?;
    let res = RealFormResult {
        p,
        seed,
        attempts: 1,
        path: None,
        tuple: a.to_json(),
        checks,
    };
    Ok((a, res))
}

/// Eigenvalues of an element of `SU(p, q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenData {
    pub eigenvalues: Vec<Complex64>,
}

impl EigenData {
    /// Checks that the product has modulus 1 within `tol`.
    pub fn new(eigenvalues: Vec<Complex64>, tol: f64) -> Result<Self> {
        let det: Complex64 = eigenvalues.iter().product();
        if (det.norm() - 1.0).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "eigenvalue product has modulus {}, not 1",
                det.norm()
            )));
        }
        Ok(Self { eigenvalues })
    }

    /// `exp(2πi·w)` for each phase `w`.
    pub fn from_phases(phases: &[Rat]) -> Self {
        let tau = std::f64::consts::TAU;
        Self {
            eigenvalues: phases
                .iter()
                .map(|w| Complex64::from_polar(1.0, tau * w.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            eigenvalues: self.eigenvalues.iter().map(|z| z.inv()).collect(),
        }
    }
}

/// `sqrt(Σ (ln|λ_i|)²)`.
pub fn translation_length(e: &EigenData) -> Result<f64> {
    let mut sum = 0.0;
    for z in &e.eigenvalues {
        let r = z.norm();
        if r == 0.0 {
            return Err(Error::InvalidInput("zero eigenvalue".into()));
        }
        sum += r.ln().powi(2);
    }
    Ok(sum.sqrt())
}

/// Every `|λ_i|` lies in `[1 − tol, 1 + tol]`.
pub fn elliptic_check(e: &EigenData, tol: f64) -> bool {
    e.eigenvalues.iter().all(|z| (z.norm() - 1.0).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiweight::{holonomy, int, rat, MultiWeight};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn realform_examples() {
        let id = vec![vec![1, 0], vec![0, 1]];
        let ii = MatrixTuple::from_i64(Rationals, 2, 2, &[id.clone(), id.clone()]).unwrap();
        assert!(realform_check(&ii, SymmetryClass::Symmetric).unwrap());
        let i1 = MatrixTuple::from_i64(Rationals, 2, 2, &[id]).unwrap();
        assert!(!realform_check(&i1, SymmetryClass::Antisymmetric).unwrap());
        assert!(realform_check(&cross_product_triple(), SymmetryClass::Antisymmetric).unwrap());
        let rect = MatrixTuple::from_i64(Rationals, 1, 2, &[vec![vec![1], vec![0]]]).unwrap();
        assert!(realform_check(&rect, SymmetryClass::Symmetric).is_err());
    }

    #[test]
    fn construction_entries() {
        let block = antisym(4, &[(1, 0, 1), (3, 2, 2), (2, 0, 1), (3, 1, 1)]);
        let a = construction(5, &block);
        let m = |k: usize, i: usize, j: usize| a.mats()[k].get(i, j).clone();
        assert_eq!(
            (m(0, 2, 1), m(0, 1, 2), m(1, 4, 3), m(1, 3, 4)),
            (int(1), int(-1), int(2), int(-2))
        );
        assert_eq!(
            (m(2, 2, 0), m(2, 0, 2), m(2, 4, 0), m(2, 0, 4)),
            (int(-1), int(1), int(-1), int(1))
        );
        assert!(realform_check(&a, SymmetryClass::Antisymmetric).unwrap());
    }

    #[test]
    fn two_by_two_block_is_never_generic() {
        let b = antisym(2, &[(1, 0, 3)]);
        assert!(!is_generic_block(&b));
    }

    #[test]
    fn sostar_paths() {
        let (a, r) = sostar_construct(3, 1).unwrap();
        assert_eq!((r.path, r.attempts), (Some(SoStarPath::Fallback), 1));
        assert_eq!(a, cross_product_triple());
        let (a, r) = sostar_construct(5, 1).unwrap();
        assert_eq!(r.path, Some(SoStarPath::Construction));
        assert!(realform_check(&a, SymmetryClass::Antisymmetric).unwrap());
        assert_eq!(r.checks.len(), 3);
        assert!(sostar_construct(4, 1).is_err());
    }

    #[test]
    fn sp_examples() {
        let (a, r) = sp_generate(1, 5, 0).unwrap();
        assert_eq!(*a.mats()[0].get(0, 0), int(1));
        assert_eq!(r.checks.len(), 3);
        let (a, _) = sp_generate(2, 5, 7).unwrap();
        assert_eq!(a.r(), 3);
        assert!(realform_check(&a, SymmetryClass::Symmetric).unwrap());
    }

    #[test]
    fn translation_length_examples() {
        let e = EigenData::new(vec![c(2.0, 0.0), c(0.5, 0.0)], 1e-12).unwrap();
        assert!((translation_length(&e).unwrap() - 2f64.sqrt() * 2f64.ln()).abs() < 1e-12);
        let x = std::f64::consts::E;
        let e = EigenData::new(vec![c(x, 0.0), c(x, 0.0), c(x.powi(-2), 0.0)], 1e-12).unwrap();
        assert!((translation_length(&e).unwrap() - 6f64.sqrt()).abs() < 1e-12);
        let e = EigenData::new(vec![c(0.0, 1.0), c(0.0, -1.0)], 1e-12).unwrap();
        assert_eq!(translation_length(&e).unwrap(), 0.0);
        assert!(translation_length(&EigenData {
            eigenvalues: vec![c(0.0, 0.0)]
        })
        .is_err());
    }

    #[test]
    fn elliptic_examples() {
        let mw = MultiWeight {
            p: 1,
            q: 2,
            s: 5,
            alpha: vec![vec![rat(4, 15)]; 5],
            beta: vec![vec![rat(11, 30); 2]; 5],
        };
        for phases in holonomy(&mw).unwrap() {
            assert!(elliptic_check(&EigenData::from_phases(&phases), 1e-12));
        }
        assert!(!elliptic_check(
            &EigenData {
                eigenvalues: vec![c(2.0, 0.0), c(0.5, 0.0)]
            },
            1e-12
        ));
        let z = c(1.0 + 1e-15, 0.0);
        assert!(elliptic_check(
            &EigenData {
                eigenvalues: vec![z, z.conj()]
            },
            1e-12
        ));
    }
}
