use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parahiggs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn schema_for(def: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas/parahiggs.schema.json");
    let mut bundle: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    bundle["$ref"] = Value::String(format!("#/$defs/{def}"));
    jsonschema::validator_for(&bundle).expect("schema compiles")
}

fn assert_valid(def: &str, v: &Value) {
    let s = schema_for(def);
    let errors: Vec<String> = s
        .iter_errors(v)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{def}: {errors:?}\n{v:#}");
}

#[test]
fn construct_example() {
    let r = report(&[
        "weights",
        "construct",
        "--p",
        "1",
        "--q",
        "2",
        "--s",
        "5",
        "--a",
        "2",
    ]);
    let c = &r["result"]["construction"];
    assert_eq!(r["command"], "weights construct");
    assert_eq!(c["multiweight"]["alpha"][0][0], "4/15");
    assert_eq!(c["multiweight"]["beta"][0][1], "11/30");
    assert_eq!(c["d"], 3);
    assert_eq!(c["certificate"]["pass"], true);
}

#[test]
fn infeasible_construction_is_computed() {
    let r = report(&[
        "weights",
        "construct",
        "--p",
        "1",
        "--q",
        "2",
        "--s",
        "5",
        "--a",
        "9",
    ]);
    assert_eq!(r["result"]["status"], "infeasible");
    assert_eq!(r["result"]["reason"]["kind"], "a_out_of_range");
}

#[test]
fn king_zero_tuple() {
    let r = report(&[
        "stability",
        "king",
        "--file",
        &data("zero_1x1_f5.json"),
        "--field",
        "f5",
    ]);
    let v = &r["result"]["verdict"];
    assert_eq!(v["status"], "Unstable");
    assert_eq!(v["witness"]["u"]["basis"].as_array().unwrap().len(), 1);
    assert_eq!(v["witness"]["v"]["basis"].as_array().unwrap().len(), 0);
}

#[test]
fn su11_example() {
    let r = report(&["component", "su11", "--s", "5", "--beta", "11/20"]);
    assert_eq!(r["result"]["component"]["dim"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["weights", "construct", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let bad = std::env::temp_dir().join("parahiggs_cli_malformed.json");
    std::fs::write(&bad, "{\"field\": \"f5\", \"p\": 1,").unwrap();
    assert_eq!(
        run(&["stability", "king", "--file", bad.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    let out = run(&[
        "--budget",
        "10",
        "stability",
        "king",
        "--file",
        &data("big_3x3_f7.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["realform", "sostar", "--p", "5", "--seed", "7"],
        vec![
            "sweep",
            "--p",
            "1",
            "--q",
            "2",
            "--s",
            "5",
            "--grid",
            "20",
            "--out",
            "json",
            "--search-draws",
            "3",
            "--seed",
            "2",
        ],
        vec!["stability", "king", "--file", "TUPLE_Q"],
    ] {
        let t = data("tuple_1_2_3_q.json");
        let args: Vec<&str> = args
            .iter()
            .map(|a| if *a == "TUPLE_Q" { t.as_str() } else { a })
            .collect();
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let args = ["stability", "existence", "--p", "2", "--q", "3", "--r", "3"];
    assert!(report(&args).get("wall_time_ms").is_none());
    let mut with = vec!["--timing"];
    with.extend(args);
    assert!(report(&with)["wall_time_ms"].is_number());
}

#[test]
fn sweep_csv_has_one_row_per_grid_point() {
    for grid in [0usize, 1, 37] {
        let g = grid.to_string();
        let out = run(&[
            "sweep", "--p", "2", "--q", "3", "--s", "5", "--grid", &g, "--out", "csv",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
        assert_eq!(rdr.headers().unwrap().len(), 18);
        let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), grid);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r[0].parse::<usize>().unwrap(), i);
        }
    }
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let base = [
        "sweep", "--p", "1", "--q", "3", "--s", "7", "--grid", "64", "--out", "csv",
    ];
    let one: Vec<&str> = ["--threads", "1"].into_iter().chain(base).collect();
    let four: Vec<&str> = ["--threads", "4"].into_iter().chain(base).collect();
    assert_eq!(run(&one).stdout, run(&four).stdout);
}

#[test]
fn sweep_default_profile_region_passes() {
    // points in the feasible box give PASS certificates
    let r = report(&[
        "sweep", "--p", "1", "--q", "2", "--s", "5", "--grid", "30", "--out", "json",
    ]);
    for row in r["result"]["rows"].as_array().unwrap() {
        if row["feasible"] == true {
            assert_eq!(row["pass"], true, "{row}");
        }
    }
}

#[test]
fn every_subcommand_matches_the_schema() {
    let (t_f5, t_q, mw) = (
        data("tuple_1_2_3_f5.json"),
        data("tuple_1_2_3_q.json"),
        data("mw_1_2_5.json"),
    );
    let (flags, feathers) = (data("flags_1_2_s2.json"), data("feathers_1_2_s2.json"));
    let cases: Vec<Vec<String>> = [
        vec![
            "weights",
            "construct",
            "--p",
            "1",
            "--q",
            "2",
            "--s",
            "5",
            "--a",
            "3",
        ],
        vec![
            "weights",
            "construct",
            "--p",
            "1",
            "--q",
            "2",
            "--s",
            "5",
            "--a",
            "2",
            "--eps-profile",
            "1/2,1/2,1/2,1/2,1/2",
        ],
        vec!["weights", "sp", "--p", "2", "--s", "5"],
        vec!["weights", "certify", "--file", &mw, "--d", "3"],
        vec![
            "weights",
            "twist",
            "--phi",
            "1,2,0,0,0",
            "--file",
            &mw,
            "--d",
            "3",
        ],
        vec!["stability", "king", "--file", &t_f5],
        vec!["stability", "king", "--file", &t_q],
        vec!["stability", "king", "--file", &t_q, "--field", "f7"],
        vec![
            "stability",
            "feathered",
            "--tuple",
            &t_f5,
            "--flags",
            &flags,
            "--feathers",
            &feathers,
        ],
        vec![
            "stability",
            "equivalence",
            "--tuple",
            &t_f5,
            "--mw",
            &mw,
            "--d",
            "3",
        ],
        vec!["stability", "scaling", "--file", &t_q],
        vec!["stability", "scaling", "--file", &data("nilpotent_q.json")],
        vec!["stability", "existence", "--p", "2", "--q", "2", "--r", "2"],
        vec![
            "mu",
            "chi",
            "--tuple",
            &t_q,
            "--lambda",
            &data("lambda_1_2.json"),
        ],
        vec![
            "mu",
            "grass",
            "--lambda",
            &data("grading_2.json"),
            "--subspace",
            &data("line_e1_2.json"),
            "--i",
            "1",
            "--p",
            "2",
        ],
        vec![
            "mu",
            "pair",
            "--u",
            &data("full_1.json"),
            "--v",
            &data("full_2.json"),
            "--flags",
            &flags,
            "--feathers",
            &feathers,
        ],
        vec![
            "pencil",
            "--a1",
            "[[1,0],[0,1]]",
            "--a2",
            "[[\"1/2\",0],[0,2]]",
        ],
        vec!["realform", "sostar", "--p", "3", "--seed", "1"],
        vec!["realform", "sp", "--p", "2", "--s", "5", "--seed", "1"],
        vec![
            "sweep",
            "--p",
            "1",
            "--q",
            "2",
            "--s",
            "5",
            "--grid",
            "5",
            "--out",
            "json",
            "--search-draws",
            "2",
        ],
        vec!["component", "su11", "--s", "5", "--beta", "11/20"],
        vec!["component", "su11", "--s", "5", "--beta", "3/4"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for c in &cases {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let r = report(&args);
        assert_valid("run_report", &r);
    }
}

#[test]
fn input_files_match_the_schema() {
    for (def, file) in [
        ("tuple", "tuple_1_2_3_f5.json"),
        ("tuple", "tuple_1_2_3_q.json"),
        ("tuple", "zero_1x1_f5.json"),
        ("multiweight", "mw_1_2_5.json"),
        ("flag_configuration", "flags_1_2_s2.json"),
        ("feather_weights", "feathers_1_2_s2.json"),
        ("one_param_subgroup", "lambda_1_2.json"),
        ("grading", "grading_2.json"),
        ("subspace", "line_e1_2.json"),
    ] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(data(file)).unwrap()).unwrap();
        assert_valid(def, &v);
    }
}

#[test]
fn schema_rejects_float_rationals() {
    let bad = serde_json::json!({"p": 1, "q": 1, "s": 3, "alpha": [[0.5]], "beta": [["1/2"]]});
    assert!(!schema_for("multiweight").is_valid(&bad));
}

#[test]
fn schema_checks_the_result_payload() {
    let mut r = report(&[
        "weights",
        "certify",
        "--file",
        &data("mw_1_2_5.json"),
        "--d",
        "3",
    ]);
    assert!(schema_for("run_report").is_valid(&r));
    r["result"]["pass"] = Value::String("yes".into());
    assert!(!schema_for("run_report").is_valid(&r));
}
