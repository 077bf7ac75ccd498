use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Existence {
    Empty,
    NonemptyNoStable,
    HasStable,
    SpecialSquare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub class: Existence,
    /// gcd(p, q) = 1, so every semistable point is stable.
    pub all_semistable_stable: bool,
    /// Description of the quotient in the square cases.
    pub moduli: Option<String>,
}

fn check(p: usize, q: usize) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidInput(format!(
            "need p, q >= 1, got ({p}, {q})"
        )));
    }
    Ok(())
}

/// The slope table: `SpecialSquare` for `r ∈ {1,2}` with `p = q`, `HasStable` when
/// `p/q + q/p < r`, `Empty` otherwise.
pub fn existence(p: usize, q: usize, r: usize) -> Result<ExistenceReport> {
    check(p, q)?;
    let special = p == q && (r == 1 || r == 2);
    let class = if special {
        Existence::SpecialSquare
    } else if p * p + q * q < r * p * q {
        Existence::HasStable
    } else {
        Existence::Empty
    };
    let moduli = match (special, r) {
        (true, 1) => Some("point".to_string()),
        (true, _) => Some(format!("P^{p}")),
        _ => None,
    };
    Ok(ExistenceReport {
        p,
        q,
        r,
        class,
        all_semistable_stable: class != Existence::Empty && p.gcd(&q) == 1,
        moduli,
    })
}

/// `p² + q² − r·p·q`, the Tits form of the r-arrow Kronecker quiver.
pub fn tits_form(p: usize, q: usize, r: usize) -> i64 {
    let (p, q, r) = (p as i64, q as i64, r as i64);
    p * p + q * q - r * p * q
}

/// Classification through Schur roots.
///
/// Semistable points exist iff the primitive vector `(p, q)/gcd` has Tits form ≤ 1
/// (a real or imaginary Schur root). Stable points exist iff `(p, q)` itself is a
/// Schur root: negative form, form 1 (real root), or the isotropic root `(1, 1)`.
pub fn existence_schur(p: usize, q: usize, r: usize) -> Result<Existence> {
    check(p, q)?;
    let g = p.gcd(&q);
    if tits_form(p / g, q / g, r) > 1 {
        return Ok(Existence::Empty);
    }
    let t = tits_form(p, q, r);
    if t < 0 || t == 1 || (t == 0 && p == 1 && q == 1) {
        Ok(Existence::HasStable)
    } else {
        Ok(Existence::NonemptyNoStable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        assert_eq!(existence(2, 1, 1).unwrap().class, Existence::Empty);
        let sq = existence(3, 3, 2).unwrap();
        assert_eq!(
            (sq.class, sq.moduli.as_deref()),
            (Existence::SpecialSquare, Some("P^3"))
        );
        let r = existence(1, 2, 3).unwrap();
        assert_eq!(r.class, Existence::HasStable);
        assert!(r.all_semistable_stable);
    }

    #[test]
    fn schur_examples() {
        assert_eq!(existence_schur(1, 2, 2).unwrap(), Existence::HasStable);
        assert_eq!(existence_schur(1, 1, 1).unwrap(), Existence::HasStable);
        assert_eq!(
            existence_schur(2, 2, 2).unwrap(),
            Existence::NonemptyNoStable
        );
        assert_eq!(
            existence_schur(3, 3, 1).unwrap(),
            Existence::NonemptyNoStable
        );
        assert_eq!(existence_schur(1, 3, 2).unwrap(), Existence::Empty);
        assert_eq!(
            existence_schur(2, 4, 2).unwrap(),
            Existence::NonemptyNoStable
        );
        assert_eq!(existence_schur(2, 3, 3).unwrap(), Existence::HasStable);
    }
}
