use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Scalar domain with exact arithmetic.
///
/// The field is a runtime value so that one matrix type covers Q and every F_l.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Parses `"n"` or `"n/d"`.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Short tag used in JSON: `"q"` or `"f<l>"`.
    fn tag(&self) -> String;

    /// Rank of a matrix. The default is plain Gaussian elimination.
    fn rank_of(&self, rows: usize, cols: usize, data: &[Self::Elem]) -> usize {
        gauss_rank(self, rows, cols, data)
    }
}

/// Finite fields whose elements can be listed by index `0..order`.
pub trait FiniteField: Field {
    fn order(&self) -> u64;
    fn characteristic(&self) -> u64;
    /// Element number `i`; index 0 is zero and index 1 is one.
    fn element(&self, i: u64) -> Self::Elem;
}

fn gauss_rank<F: Field>(f: &F, rows: usize, cols: usize, data: &[F::Elem]) -> usize {
    let mut m = data.to_vec();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !f.is_zero(&m[r * cols + c])) else {
            continue;
        };
        if piv != rank {
            for k in 0..cols {
                m.swap(piv * cols + k, rank * cols + k);
            }
        }
        let inv = f.inv(&m[rank * cols + c]).expect("nonzero pivot");
        for r in rank + 1..rows {
            let x = &m[r * cols + c];
            if f.is_zero(x) {
                continue;
            }
            let factor = f.mul(x, &inv);
            for k in c..cols {
                let t = f.mul(&factor, &m[rank * cols + k]);
                m[r * cols + k] = f.sub(&m[r * cols + k], &t);
            }
        }
        rank += 1;
    }
    rank
}

/// The rational numbers, backed by arbitrary precision integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let int = |x: &str| -> Result<BigInt> {
        let x = x.trim();
        let digits = x
            .strip_prefix('-')
            .or_else(|| x.strip_prefix('+'))
            .unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        x.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        None => Ok(BigRational::from_integer(int(t)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator: {s:?}")));
            }
            Ok(BigRational::new(int(n)?, d))
        }
    }
}

pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn format_elem(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn tag(&self) -> String {
        "q".into()
    }

    // Bareiss on the integer rows obtained by clearing denominators row by row.
    fn rank_of(&self, rows: usize, cols: usize, data: &[BigRational]) -> usize {
        let mut m: Vec<BigInt> = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let row = &data[r * cols..(r + 1) * cols];
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            m.extend(row.iter().map(|x| x.numer() * (&l / x.denom())));
        }
        bareiss_rank(rows, cols, &mut m)
    }
}

/// Fraction-free elimination; every intermediate entry is an exact minor.
pub(crate) fn bareiss_rank(rows: usize, cols: usize, m: &mut [BigInt]) -> usize {
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
            continue;
        };
        if piv != rank {
            for k in 0..cols {
                m.swap(piv * cols + k, rank * cols + k);
            }
        }
        let p = m[rank * cols + c].clone();
        for r in rank + 1..rows {
            let x = m[r * cols + c].clone();
            for k in c..cols {
                let v = (&p * &m[r * cols + k] - &x * &m[rank * cols + k]) / &prev;
                m[r * cols + k] = v;
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}

/// The prime field F_l for a prime `l < 2^64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduction of a rational, `None` when the denominator vanishes mod l.
    pub fn reduce(&self, x: &BigRational) -> Option<u64> {
        let l = BigInt::from(self.modulus);
        let n = x.numer().mod_floor(&l).to_u64()?;
        let d = x.denom().mod_floor(&l).to_u64()?;
        let di = self.inv(&d)?;
        Some(self.mul(&n, &di))
    }

    /// Representative in `(-l/2, l/2]`.
    pub fn symmetric_lift(&self, a: u64) -> i64 {
        let l = self.modulus;
        if a > l / 2 {
            -((l - a) as i64)
        } else {
            a as i64
        }
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    fn powmod(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulmod(r, b);
            }
            b = self.mulmod(b, b);
            e >>= 1;
        }
        r
    }
}

fn powmod_u64(b: u64, e: u64, m: u64) -> u64 {
    let mut r: u128 = 1;
    let mut b = b as u128 % m as u128;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    r as u64
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.modulus as i128) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.modulus as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.modulus as u128 - *b as u128) % self.modulus as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (!u64::is_multiple_of(*a, self.modulus)).then(|| self.powmod(*a, self.modulus - 2))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse_elem(&self, s: &str) -> Result<u64> {
        let x = parse_rational(s)?;
        self.reduce(&x)
            .ok_or_else(|| Error::Parse(format!("{s:?} has no residue mod {}", self.modulus)))
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn tag(&self) -> String {
        format!("f{}", self.modulus)
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> u64 {
        self.modulus
    }
    fn characteristic(&self) -> u64 {
        self.modulus
    }
    fn element(&self, i: u64) -> u64 {
        i
    }
}

/// The field with l^k elements, for small orders, via log tables.
///
/// Element `i` is the polynomial whose base-l digits are the coefficients of `i`,
/// so the prime subfield is `0..l` with its usual labels. Tables are shared, so
/// clones are cheap.
#[derive(Clone, Debug)]
pub struct GaloisField {
    char_: u64,
    degree: u32,
    order: u64,
    tables: Arc<Tables>,
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    /// Full addition table for orders up to [`ADD_TABLE_MAX`].
    add: Option<Vec<u32>>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.char_ == other.char_ && self.degree == other.degree
    }
}
impl Eq for GaloisField {}

/// Largest order accepted by [`GaloisField::new`].
pub const GALOIS_MAX_ORDER: u64 = 1 << 20;
const ADD_TABLE_MAX: u64 = 1 << 10;

impl GaloisField {
    pub fn new(char_: u64, degree: u32) -> Result<Self> {
        if !is_prime(char_) {
            return Err(Error::NotPrime(char_));
        }
        let order = char_
            .checked_pow(degree)
            .filter(|&q| degree >= 1 && q <= GALOIS_MAX_ORDER)
            .ok_or_else(|| Error::InvalidInput(format!("GF({char_}^{degree}) is too large")))?;
        let k = degree as usize;
        // Search monic polynomials of degree k for one where x has order q-1.
        for tail in 0..order {
            let modp: Vec<u64> = (0..k)
                .map(|i| (tail / char_.pow(i as u32)) % char_)
                .collect();
            if modp[0] == 0 {
                continue;
            }
            if let Some((exp, log)) = build_tables(char_, k, order, &modp) {
                let mut f = Self {
                    char_,
                    degree,
                    order,
                    tables: Arc::new(Tables {
                        exp,
                        log,
                        neg: Vec::new(),
                        add: None,
                    }),
                };
                let neg = (0..order).map(|a| f.neg_slow(a) as u32).collect();
                let add = (order <= ADD_TABLE_MAX).then(|| {
                    (0..order * order)
                        .map(|i| f.add_slow(i / order, i % order) as u32)
                        .collect()
                });
                let t = Arc::get_mut(&mut f.tables).expect("fresh tables");
                t.neg = neg;
                t.add = add;
                return Ok(f);
            }
        }
        Err(Error::InvalidInput(format!(
            "no primitive polynomial for GF({char_}^{degree})"
        )))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn add_slow(&self, mut a: u64, mut b: u64) -> u64 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.degree {
            out += ((a % self.char_ + b % self.char_) % self.char_) * place;
            a /= self.char_;
            b /= self.char_;
            place *= self.char_;
        }
        out
    }

    fn neg_slow(&self, mut a: u64) -> u64 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.degree {
            out += ((self.char_ - a % self.char_) % self.char_) * place;
            a /= self.char_;
            place *= self.char_;
        }
        out
    }
}

// Powers of x modulo f = x^k + sum_j modp[j] x^j; `None` unless x generates.
fn build_tables(l: u64, k: usize, q: u64, modp: &[u64]) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = (q - 1) as usize;
    let mut exp = vec![0u32; n];
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = vec![0u64; k];
    cur[0] = 1;
    let enc = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &x| acc * l + x);
    for (i, slot) in exp.iter_mut().enumerate() {
        let e = enc(&cur);
        if i > 0 && e == 1 {
            return None;
        }
        *slot = e as u32;
        log[e as usize] = i as u32;
        let top = cur[k - 1];
        for j in (1..k).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        for j in 0..k {
            let sub = top * modp[j] % l;
            cur[j] = (cur[j] + l - sub) % l;
        }
    }
    (enc(&cur) == 1).then_some((exp, log))
}

impl Field for GaloisField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, n: i64) -> u32 {
        (n as i128).rem_euclid(self.char_ as i128) as u32
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables.add {
            Some(t) => t[*a as usize * self.order as usize + *b as usize],
            None => self.add_slow(*a as u64, *b as u64) as u32,
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let e = (self.tables.log[*a as usize] as u64 + self.tables.log[*b as usize] as u64) % n;
        self.tables.exp[e as usize]
    }
    fn neg(&self, a: &u32) -> u32 {
        self.tables.neg[*a as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let n = self.order - 1;
        let e = (n - self.tables.log[*a as usize] as u64) % n;
        Some(self.tables.exp[e as usize])
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn parse_elem(&self, s: &str) -> Result<u32> {
        let n: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an element index: {s:?}")))?;
        if n >= self.order {
            return Err(Error::Parse(format!(
                "{n} out of range for order {}",
                self.order
            )));
        }
        Ok(n as u32)
    }
    fn format_elem(&self, a: &u32) -> String {
        a.to_string()
    }
    fn tag(&self) -> String {
        format!("gf{}^{}", self.char_, self.degree)
    }
}

impl FiniteField for GaloisField {
    fn order(&self) -> u64 {
        self.order
    }
    fn characteristic(&self) -> u64 {
        self.char_
    }
    fn element(&self, i: u64) -> u32 {
        i as u32
    }
}
