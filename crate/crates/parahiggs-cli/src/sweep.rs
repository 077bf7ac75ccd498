use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use parahiggs::exactlin::{format_rational, Budget, PrimeField};
use parahiggs::kronecker::{king_geometric, MatrixTuple, Status};
use parahiggs::multiweight::{certificate, Rat};
use parahiggs::weightgen::{
    a_range, constant_multiweight, construct_constant, epsilon_caps, ConstructionInput,
};
use parahiggs::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::{OutFormat, SweepArgs};
use crate::run::{to_value, Failure, Output};

/// One CSV row. Column order is the field order.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub index: usize,
    pub a: i64,
    /// ε^1;…;ε^s
    pub eps: String,
    pub eps_sum: String,
    /// `construct_constant` accepts the profile.
    pub feasible: bool,
    pub infeasible_reason: String,
    pub d: i64,
    pub epsilon: String,
    pub j_lo: String,
    pub j_hi: String,
    pub alpha_below_beta: bool,
    pub epsilon_below_two: bool,
    pub d_in_interval: bool,
    pub margin_alpha_beta: String,
    pub margin_epsilon: String,
    pub margin_d: String,
    pub pass: bool,
    pub stable_search: String,
}

const PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Van der Corput radical inverse of `i` in base `b`, exactly.
pub fn radical_inverse(mut i: u64, b: u64) -> Rat {
    let mut num = BigInt::zero();
    let mut den = BigInt::from(1);
    while i > 0 {
        num = num * b + i % b;
        den *= b;
        i /= b;
    }
    // digits were read least significant first, so num is already the mirrored numerator
    BigRational::new(num, den)
}

/// Point `i` (1-based) of the Halton sequence in dimension `dim`.
pub fn halton(i: u64, dim: usize) -> Vec<Rat> {
    PRIMES[..dim]
        .iter()
        .map(|&b| radical_inverse(i, b))
        .collect()
}

fn stable_search(p: usize, q: usize, r: usize, draws: usize, seed: u64, budget: Budget) -> String {
    if draws == 0 {
        return String::new();
    }
    let f5 = PrimeField::new(5).expect("5 is prime");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..draws {
        let a = MatrixTuple::random(&f5, p, q, r, &mut rng);
        match king_geometric(&a, budget) {
            Ok(v) if v.status == Status::Stable => return format!("found:{}", k + 1),
            Ok(_) => {}
            Err(e) if e.is_budget() => return "budget_exceeded".into(),
            Err(e) => return format!("error:{e}"),
        }
    }
    format!("not_found:{draws}")
}

fn row(
    index: usize,
    p: usize,
    q: usize,
    s: usize,
    a: i64,
    caps: &[Rat],
    stable: &str,
) -> Result<Row, Error> {
    let u = halton(index as u64 + 1, s);
    let eps: Vec<Rat> = u.iter().zip(caps).map(|(x, c)| x * c).collect();
    let sum: Rat = eps.iter().sum();
    let (mw, d) = constant_multiweight(p, q, s, a, &eps)?;
    let cert = certificate(&mw, d)?;
    let built = construct_constant(&ConstructionInput {
        p,
        q,
        s,
        a,
        epsilon_profile: Some(eps.clone()),
    });
    let infeasible_reason = match &built {
        Ok(_) => String::new(),
        Err(Error::Construction(e)) => e.to_string(),
        Err(e) => return Err(e.clone()),
    };
    Ok(Row {
        index,
        a,
        eps: eps
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(";"),
        eps_sum: format_rational(&sum),
        feasible: built.is_ok(),
        infeasible_reason,
        d,
        epsilon: format_rational(&cert.epsilon),
        j_lo: format_rational(&cert.j_interval.0),
        j_hi: format_rational(&cert.j_interval.1),
        alpha_below_beta: cert.conditions.alpha_below_beta,
        epsilon_below_two: cert.conditions.epsilon_below_two,
        d_in_interval: cert.conditions.d_in_interval,
        margin_alpha_beta: format_rational(&cert.margins.alpha_below_beta),
        margin_epsilon: format_rational(&cert.margins.epsilon_below_two),
        margin_d: format_rational(&cert.margins.d_in_interval),
        pass: cert.pass,
        stable_search: stable.to_string(),
    })
}

/// Rows for grid points `0..grid`, computed in parallel and returned in index order.
pub fn rows(args: &SweepArgs, budget: Budget) -> Result<(i64, Vec<Rat>, String, Vec<Row>), Error> {
    let (p, q, s) = (args.p, args.q, args.s);
    if s > PRIMES.len() {
        return Err(Error::InvalidInput(format!(
            "sweep supports at most {} punctures",
            PRIMES.len()
        )));
    }
    let a = match args.a {
        Some(a) => a,
        None => *a_range(p, q, s).integers.first().ok_or_else(|| {
            Error::InvalidInput(format!("no admissible a for (p, q, s) = ({p}, {q}, {s})"))
        })?,
    };
    let caps = epsilon_caps(p, q, s, a)?;
    let r = s
        .checked_sub(2)
        .ok_or_else(|| Error::InvalidInput("s < 2".into()))?;
    let stable = stable_search(p, q, r, args.search_draws, args.seed, budget);
    let out = (0..args.grid)
        .into_par_iter()
        .map(|i| row(i, p, q, s, a, &caps, &stable))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((a, caps, stable, out))
}

pub fn run(args: &SweepArgs, budget: Budget) -> Result<Output, Failure> {
    let (a, caps, stable, rows) = rows(args, budget)?;
    match args.out {
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            if rows.is_empty() {
                // header only
                w.write_record(HEADER)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Output::Csv(String::from_utf8(bytes).expect("csv is utf-8")))
        }
        OutFormat::Json => Ok(Output::Json {
            result: json!({
                "a": a,
                "caps": caps.iter().map(format_rational).collect::<Vec<_>>(),
                "stable_search": stable,
                "rows": to_value(&rows),
            }),
            seed: Some(args.seed),
        }),
    }
}

pub const HEADER: [&str; 18] = [
    "index",
    "a",
    "eps",
    "eps_sum",
    "feasible",
    "infeasible_reason",
    "d",
    "epsilon",
    "j_lo",
    "j_hi",
    "alpha_below_beta",
    "epsilon_below_two",
    "d_in_interval",
    "margin_alpha_beta",
    "margin_epsilon",
    "margin_d",
    "pass",
    "stable_search",
];

#[cfg(test)]
mod tests {
    use super::*;
    use parahiggs::multiweight::rat;

    #[test]
    fn radical_inverse_examples() {
        assert_eq!(radical_inverse(1, 2), rat(1, 2));
        assert_eq!(radical_inverse(3, 2), rat(3, 4));
        assert_eq!(radical_inverse(6, 2), rat(3, 8));
        assert_eq!(radical_inverse(5, 3), rat(7, 9));
    }
}
