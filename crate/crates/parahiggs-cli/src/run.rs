use std::fs;

use parahiggs::exactlin::{
    format_rational, parse_rational, Budget, Field, Matrix, PrimeField, Rationals,
};
use parahiggs::feathered::{
    feathered_verdict, mu_pair, perturbation_threshold, small_perturbation_check, FeatherWeights,
    FlagConfiguration, FlagConfigurationJson,
};
use parahiggs::higgsbridge::{equivalence_check, su11_component};
use parahiggs::kronecker::{
    decide_char0, existence, existence_schur, king_bruteforce, king_geometric, king_scaling,
    mu_chi, mu_chi_eigen, pencil, AnyTuple, Grading, GradingPartJson, MatrixTuple,
    OneParamSubgroup, OneParamSubgroupJson, SubspaceJson, TupleJson,
};
use parahiggs::multiweight::{certificate, parse_multiweight, torsion_twist, ParabolicLine, Rat};
use parahiggs::realforms::{sostar_construct_with, sp_generate};
use parahiggs::weightgen::{construct_constant, construct_sp, ConstructionInput};
use parahiggs::Error;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::args::*;
use crate::sweep;

/// A command failure and its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Budget(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::SearchExhausted { .. } => {
                Failure::Budget(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Out = Result<Output, Failure>;

/// What a command produced: a JSON payload (wrapped in a report) or raw CSV text.
pub enum Output {
    Json { result: Value, seed: Option<u64> },
    Csv(String),
}

fn json_out(v: impl serde::Serialize) -> Out {
    Ok(Output::Json {
        result: to_value(v),
        seed: None,
    })
}

pub fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("malformed JSON in {path}: {e}")))
}

fn rat_list(s: &str) -> Result<Vec<Rat>, Failure> {
    s.split(',')
        .map(|x| parse_rational(x).map_err(Failure::from))
        .collect()
}

fn int_list(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Usage(format!("not an integer: {x:?}")))
        })
        .collect()
}

/// Infeasible constructions are a computed outcome, not a failure.
fn construction(r: parahiggs::Result<parahiggs::weightgen::Construction>) -> Out {
    match r {
        Ok(c) => json_out(json!({ "status": "feasible", "construction": c })),
        Err(Error::Construction(e)) => {
            json_out(json!({ "status": "infeasible", "reason": e, "message": e.to_string() }))
        }
        Err(e) => Err(e.into()),
    }
}

fn prime_field(f: FieldArg) -> Result<Option<PrimeField>, Failure> {
    f.prime()
        .map(PrimeField::new)
        .transpose()
        .map_err(Failure::from)
}

/// Brings a tuple to a prime field: the requested one, or its own.
fn to_prime(t: AnyTuple, field: Option<FieldArg>) -> Result<MatrixTuple<PrimeField>, Failure> {
    let want = match field {
        Some(f) => prime_field(f)?,
        None => None,
    };
    match (t, want) {
        (AnyTuple::Prime(a), None) => Ok(a),
        (AnyTuple::Prime(a), Some(fl)) if fl.modulus() == a.field().modulus() => Ok(a),
        (AnyTuple::Prime(a), Some(fl)) => Err(Failure::Usage(format!(
            "tuple is over {}, not {}",
            a.field().tag(),
            fl.tag()
        ))),
        (AnyTuple::Rational(a), Some(fl)) => a.reduce_mod(fl).ok_or_else(|| {
            Failure::Usage(format!(
                "an entry has a denominator divisible by {}",
                fl.modulus()
            ))
        }),
        (AnyTuple::Rational(_), None) => Err(Failure::Usage(
            "this command needs a prime field; pass --field f<l>".into(),
        )),
    }
}

fn load_tuple(path: &str) -> Result<AnyTuple, Failure> {
    let j: TupleJson = read_json(path)?;
    Ok(j.to_tuple()?)
}

pub fn run(cli: &Cli) -> Out {
    let budget = Budget(cli.budget);
    match &cli.command {
        Command::Weights(w) => weights(w),
        Command::Stability(s) => stability(s, budget),
        Command::Mu(m) => mu(m),
        Command::Pencil(a) => pencil_cmd(a, budget),
        Command::Realform(r) => realform(r, budget),
        Command::Sweep(a) => sweep::run(a, budget),
        Command::Component(ComponentCmd::Su11(a)) => {
            let mut beta = rat_list(&a.beta)?;
            if beta.len() == 1 {
                beta = vec![beta[0].clone(); a.s];
            }
            match su11_component(a.s, &beta) {
                Ok(c) => json_out(json!({ "status": "feasible", "component": c })),
                Err(Error::Construction(e)) => json_out(
                    json!({ "status": "infeasible", "reason": e, "message": e.to_string() }),
                ),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn weights(w: &WeightsCmd) -> Out {
    match w {
        WeightsCmd::Construct(a) => {
            let epsilon_profile = a.eps_profile.as_deref().map(rat_list).transpose()?;
            construction(construct_constant(&ConstructionInput {
                p: a.p,
                q: a.q,
                s: a.s,
                a: a.a,
                epsilon_profile,
            }))
        }
        WeightsCmd::Sp(a) => {
            let eps = a.eps_profile.as_deref().map(rat_list).transpose()?;
            construction(construct_sp(a.p, a.s, eps))
        }
        WeightsCmd::Certify(a) => {
            let mw = parse_multiweight(&read(&a.file)?)?;
            json_out(certificate(&mw, a.d)?)
        }
        WeightsCmd::Twist(a) => {
            let phi = int_list(&a.phi)?;
            let mut mw = parse_multiweight(&read(&a.file)?)?;
            let mut d = a.d;
            let mut line = ParabolicLine::trivial(mw.s);
            for _ in 0..a.times {
                let (l, next, nd) = torsion_twist(&phi, &mw, d)?;
                line = parahiggs::multiweight::line_tensor(&line, &l)?;
                mw = next;
                d = nd;
            }
            json_out(json!({ "line": line, "multiweight": mw, "d": d }))
        }
    }
}

fn stability(s: &StabilityCmd, budget: Budget) -> Out {
    match s {
        StabilityCmd::King(a) => {
            let t = load_tuple(&a.file)?;
            let char0 = matches!(
                (&t, a.field),
                (_, Some(FieldArg::Ql)) | (AnyTuple::Rational(_), None)
            );
            if char0 {
                let q = match t {
                    AnyTuple::Rational(q) => q,
                    AnyTuple::Prime(f) => {
                        return Err(Failure::Usage(format!(
                            "tuple is over {}; cannot decide over Q",
                            f.field().tag()
                        )))
                    }
                };
                return json_out(
                    json!({ "field": "q", "char0": decide_char0(&q, budget, a.iters, a.tol)? }),
                );
            }
            let a = to_prime(t, a.field)?;
            let f = *a.field();
            let v = king_bruteforce(&a, budget)?;
            let g = king_geometric(&a, budget)?;
            json_out(
                json!({ "field": f.tag(), "verdict": v.to_json(&f), "geometric": g.to_json(&f) }),
            )
        }
        StabilityCmd::Feathered(a) => {
            let t = to_prime(load_tuple(&a.tuple)?, a.field)?;
            let f = *t.field();
            let cj: FlagConfigurationJson = read_json(&a.flags)?;
            let cfg = FlagConfiguration::from_json(&f, &cj)?;
            let fw: FeatherWeights = read_json(&a.feathers)?;
            let v = feathered_verdict(&t, &cfg, &fw, budget)?;
            let small = small_perturbation_check(&t, &cfg, &fw, budget)?;
            let thr = perturbation_threshold(&t, &cfg, &fw, budget)?;
            json_out(json!({
                "field": f.tag(),
                "verdict": v.to_json(&f),
                "small_perturbation": small.to_json(&f),
                "perturbation_threshold": thr.as_ref().map(format_rational),
            }))
        }
        StabilityCmd::Equivalence(a) => {
            let t = to_prime(load_tuple(&a.tuple)?, a.field)?;
            let mw = parse_multiweight(&read(&a.mw)?)?;
            json_out(equivalence_check(&t, &mw, a.d, budget)?)
        }
        StabilityCmd::Scaling(a) => match load_tuple(&a.file)? {
            AnyTuple::Rational(q) => json_out(king_scaling(&q, a.iters, a.tol)?),
            AnyTuple::Prime(_) => Err(Failure::Usage("scaling needs a tuple over q".into())),
        },
        StabilityCmd::Existence(a) => json_out(json!({
            "table": existence(a.p, a.q, a.r)?,
            "schur": existence_schur(a.p, a.q, a.r)?,
        })),
    }
}

fn mu(m: &MuCmd) -> Out {
    match m {
        MuCmd::Chi(a) => {
            let lj: OneParamSubgroupJson = read_json(&a.lambda)?;
            match load_tuple(&a.tuple)? {
                AnyTuple::Rational(t) => mu_chi_report(&t, &lj),
                AnyTuple::Prime(t) => mu_chi_report(&t, &lj),
            }
        }
        MuCmd::Grass(a) => {
            let lj: Vec<GradingPartJson> = read_json(&a.lambda)?;
            let sj: SubspaceJson = read_json(&a.subspace)?;
            match prime_field(a.field)? {
                None => grass_report(&Rationals, &lj, &sj, a.i, a.p),
                Some(f) => grass_report(&f, &lj, &sj, a.i, a.p),
            }
        }
        MuCmd::Pair(a) => {
            let u: SubspaceJson = read_json(&a.u)?;
            let v: SubspaceJson = read_json(&a.v)?;
            let cj: FlagConfigurationJson = read_json(&a.flags)?;
            let fw: FeatherWeights = read_json(&a.feathers)?;
            match prime_field(a.field)? {
                None => pair_report(&Rationals, &u, &v, &cj, &fw),
                Some(f) => pair_report(&f, &u, &v, &cj, &fw),
            }
        }
    }
}

fn mu_chi_report<F: Field>(t: &MatrixTuple<F>, lj: &OneParamSubgroupJson) -> Out {
    let lambda = OneParamSubgroup::from_json(t.field(), t.p(), t.q(), lj)?;
    let mu = mu_chi(&lambda, t)?;
    let eigen = mu
        .finite()
        .map(|_| format_rational(&mu_chi_eigen(&lambda, t.p(), t.q())));
    json_out(json!({ "mu": mu, "eigen_sum": eigen }))
}

fn grass_report<F: Field>(
    f: &F,
    lj: &[GradingPartJson],
    sj: &SubspaceJson,
    i: usize,
    p: usize,
) -> Out {
    let g = Grading::from_json(f, p, lj)?;
    let s = sj.to_subspace(f)?;
    json_out(
        json!({ "mu": format_rational(&parahiggs::feathered::mu_grassmannian(&g, &s, i, p)?) }),
    )
}

fn pair_report<F: Field>(
    f: &F,
    u: &SubspaceJson,
    v: &SubspaceJson,
    cj: &FlagConfigurationJson,
    fw: &FeatherWeights,
) -> Out {
    let cfg = FlagConfiguration::from_json(f, cj)?;
    let mu = mu_pair(&u.to_subspace(f)?, &v.to_subspace(f)?, &cfg, fw)?;
    json_out(json!({ "mu": format_rational(&mu) }))
}

fn parse_matrix(s: &str) -> Result<Matrix<Rationals>, Failure> {
    let rows: Vec<Vec<Value>> = serde_json::from_str(s)
        .map_err(|e| Failure::Usage(format!("malformed matrix {s:?}: {e}")))?;
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Failure::Usage("matrix rows differ in length".into()));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|x| match x {
            Value::String(t) => parse_rational(t).map_err(Failure::from),
            Value::Number(k) => parse_rational(&k.to_string()).map_err(Failure::from),
            _ => Err(Failure::Usage(format!("not a rational entry: {x}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rationals(n, cols, data)?)
}

const PENCIL_PRIMES: [u64; 3] = [5, 7, 11];

fn pencil_cmd(a: &PencilArgs, budget: Budget) -> Out {
    let (a1, a2) = (parse_matrix(&a.a1)?, parse_matrix(&a.a2)?);
    let res = pencil(&a1, &a2)?;
    let n = a1.rows();
    let tuple = MatrixTuple::new(Rationals, n, n, vec![a1, a2])?;
    let mut king = Vec::new();
    for l in PENCIL_PRIMES {
        if !res.is_good_prime(l) {
            continue;
        }
        let fl = PrimeField::new(l)?;
        if let Some(t) = tuple.reduce_mod(fl) {
            king.push(json!({ "prime": l, "status": king_bruteforce(&t, budget)?.status }));
        }
    }
    json_out(json!({ "pencil": res, "king": king }))
}

fn realform(r: &RealformCmd, budget: Budget) -> Out {
    let (res, seed) = match r {
        RealformCmd::Sostar(a) => (
            sostar_construct_with(a.p, a.seed, a.max_attempts, budget)?.1,
            a.seed,
        ),
        RealformCmd::Sp(a) => (sp_generate(a.p, a.s, a.seed)?.1, a.seed),
    };
    Ok(Output::Json {
        result: to_value(res),
        seed: Some(seed),
    })
}
