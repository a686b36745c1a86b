//! The command-line contract: exit codes, record files, density output and
//! determinism.

use std::fs;
use std::path::Path;
use std::process::Command;

use twocenter::cli::{self, EXIT_INVALID, EXIT_NONE_FOUND, EXIT_OK, EXIT_SYMMETRIC, EXIT_VERIFY_FAILED};
use twocenter::record::{self, AngularRecord, SolutionRecord};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("twocenter").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn records(json: &str) -> Vec<SolutionRecord> {
    record::read_records(json.as_bytes()).unwrap()
}

fn exact(n: &record::Number) -> Option<String> {
    n.exact.as_ref().map(|e| format!("{}/{}", e.num, e.den))
}

#[test]
fn solve_reports_the_worked_unequal_charge_solutions() {
    let (code, out, _) = run(&["solve", "--z1", "5", "--z2", "1", "--n-max", "6"]);
    assert_eq!(code, EXIT_OK);
    let recs = records(&out);
    let first = recs.iter().find(|r| exact(&r.r).as_deref() == Some("3/8")).unwrap();
    assert_eq!(exact(&first.energy).as_deref(), Some("-8/1"));
    assert_eq!(exact(&first.lambda).as_deref(), Some("-7/16"));
    let mut drop: Vec<f64> = recs.iter().filter(|r| r.energy.value == -2.0).map(|r| r.r.value).collect();
    drop.sort_by(f64::total_cmp);
    let want = [3.0 / 16.0, 0.292, 0.435, 1.643];
    assert_eq!(drop.len(), 4);
    for (got, w) in drop.iter().zip(want) {
        assert!((got - w).abs() <= 5e-4, "{drop:?}");
    }
    for r in &recs {
        let rep = r.residual.as_ref().unwrap();
        assert!(rep.max_relative < 1e-6);
    }
    // canonical order: larger |E| first, then smaller R
    for w in recs.windows(2) {
        let (a, b) = (w[0].energy.value.abs(), w[1].energy.value.abs());
        assert!(a > b || (a == b && w[0].r.value < w[1].r.value));
    }

    let (code, out, _) = run(&["solve", "--z1", "2", "--z2", "1"]);
    assert_eq!(code, EXIT_OK);
    let recs = records(&out);
    let r = recs.iter().find(|r| exact(&r.r).as_deref() == Some("3/4")).unwrap();
    assert_eq!(exact(&r.lambda).as_deref(), Some("-31/64"));
    assert_eq!(exact(&r.energy).as_deref(), Some("-1/2"));
}

#[test]
fn equal_charges_are_routed_to_symmetric() {
    let (code, out, err) = run(&["solve", "--z1", "3", "--z2", "3"]);
    assert_eq!(code, EXIT_SYMMETRIC);
    assert!(out.is_empty());
    assert!(err.contains("symmetric --z 3"), "{err}");
    // same value written differently
    let (code, _, _) = run(&["solve", "--z1", "6/2", "--z2", "3"]);
    assert_eq!(code, EXIT_SYMMETRIC);
}

#[test]
fn invalid_flags() {
    assert_eq!(run(&["solve", "--z1", "x", "--z2", "1"]).0, EXIT_INVALID);
    assert_eq!(run(&["solve", "--z1", "5", "--z2", "1", "--tol", "-1"]).0, EXIT_INVALID);
    assert_eq!(run(&["symmetric", "--z", "0"]).0, EXIT_INVALID);
    assert_eq!(run(&["mathieu", "--parity", "c", "--order", "1", "--p", "0"]).0, EXIT_INVALID);
    assert_eq!(run(&["mathieu", "--parity", "b", "--order", "0", "--p", "0"]).0, EXIT_INVALID);
    assert_eq!(run(&["frobnicate"]).0, EXIT_INVALID);
}

#[test]
fn symmetric_reports_mixed_solutions() {
    let (code, out, _) = run(&["symmetric", "--z", "3", "--nr-max", "1", "--mathieu-n-max", "2"]);
    assert_eq!(code, EXIT_OK);
    let recs = records(&out);
    let mathieu = |r: &SolutionRecord| match &r.angular {
        AngularRecord::Mathieu(m) => m.clone(),
        AngularRecord::Polynomial(_) => panic!("polynomial angular factor for equal charges"),
    };
    let has = |e: f64, r: f64, order: usize, value: f64| {
        recs.iter().any(|rec| {
            let m = mathieu(rec);
            (rec.energy.value - e).abs() < 1e-12
                && (rec.r.value - r).abs() <= 5e-4
                && m.order == order
                && (m.value - value).abs() <= 5e-4
        })
    };
    assert!(has(-8.0, 1.335, 1, 2.298));
    assert!(has(-18.0, 0.329, 1, 0.750));
    assert!(has(-4.5, 0.870, 2, 3.985));
}

#[test]
fn tiny_search_range_finds_nothing() {
    let (code, out, _) = run(&["symmetric", "--z", "1", "--nr-max", "0", "--r-max", "0.001"]);
    assert_eq!(code, EXIT_NONE_FOUND);
    assert_eq!(out.trim(), "[]");
}

#[test]
fn verify_accepts_good_records_and_rejects_tampered_ones() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    assert_eq!(run(&["solve", "--z1", "5", "--z2", "1", "--out", path_str(&good)]).0, EXIT_OK);
    let (code, out, _) = run(&["verify", "--solution-file", path_str(&good), "--tolerance", "1e-5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().all(|l| l.ends_with("PASS")));

    let mut recs = record::read_records(fs::File::open(&good).unwrap()).unwrap();
    recs[0].energy.value *= 1.0 + 1e-3;
    recs[0].energy.exact = None;
    let bad = dir.path().join("bad.json");
    record::write_records(&recs, fs::File::create(&bad).unwrap()).unwrap();
    let (code, out, _) = run(&["verify", "--solution-file", path_str(&bad)]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    assert!(out.lines().next().unwrap().ends_with("FAIL"));

    let empty = dir.path().join("empty.json");
    fs::write(&empty, "").unwrap();
    assert_eq!(run(&["verify", "--solution-file", path_str(&empty)]).0, EXIT_INVALID);
    fs::write(&empty, "[]\n").unwrap();
    assert_eq!(run(&["verify", "--solution-file", path_str(&empty)]).0, EXIT_INVALID);
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["verify", "--solution-file", path_str(&missing)]).0, EXIT_INVALID);
}

#[test]
fn records_round_trip_through_the_loader() {
    let (_, out, _) = run(&["solve", "--z1", "2", "--z2", "1"]);
    for rec in records(&out) {
        let sol = rec.to_solution().unwrap();
        let again = SolutionRecord::from_solution(&sol, rec.residual.clone());
        assert_eq!(again, rec);
    }
    let (_, out, _) = run(&["symmetric", "--z", "2", "--nr-max", "0", "--mathieu-n-max", "1"]);
    for rec in records(&out) {
        let again = SolutionRecord::from_solution(&rec.to_solution().unwrap(), rec.residual.clone());
        assert_eq!(again, rec);
    }
}

#[test]
fn density_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let sols = dir.path().join("sols.json");
    run(&["solve", "--z1", "5", "--z2", "1", "--out", path_str(&sols)]);
    let csv = dir.path().join("rho.csv");
    let args = ["density", "--solution-file", path_str(&sols), "--index", "0", "--nx", "21", "--ny", "11"];
    let mut with_out = args.to_vec();
    with_out.extend(["--window", "-1,1,-0.5,0.5", "--out", path_str(&csv)]);
    assert_eq!(run(&with_out).0, EXIT_OK);

    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,rho");
    assert_eq!(lines.len(), 1 + 21 * 11);
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!((first[0], first[1]), (-1.0, -0.5));
    assert!(lines[1..].iter().all(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap() >= 0.0));

    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    assert_eq!(side["nx"], 21);
    assert_eq!(side["ny"], 11);
    assert_eq!(side["index"], 0);
    assert!(side["normalization"].as_f64().unwrap() > 0.0);

    // stdout mode prints the same grid
    let mut to_stdout = args.to_vec();
    to_stdout.extend(["--window", "-1,1,-0.5,0.5"]);
    let (code, out, _) = run(&to_stdout);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, text);

    let mut bad = args.to_vec();
    bad[4] = "99";
    assert_eq!(run(&bad).0, EXIT_INVALID);
    let mut bad = args.to_vec();
    bad.extend(["--window", "1,-1,0,1"]);
    assert_eq!(run(&bad).0, EXIT_INVALID);
}

#[test]
fn mathieu_values() {
    let value = |args: &[&str]| -> f64 {
        let (code, out, _) = run(args);
        assert_eq!(code, EXIT_OK);
        let first = out.lines().next().unwrap();
        assert!(out.lines().nth(1).unwrap().starts_with("truncation = "));
        first.rsplit(' ').next().unwrap().parse().unwrap()
    };
    assert!((value(&["mathieu", "--parity", "b", "--order", "1", "--p", "-1.783"]) - 2.298).abs() <= 5e-4);
    assert!((value(&["mathieu", "--parity", "a", "--order", "2", "--p", "0"]) - 4.0).abs() <= 1e-12);
    assert!((value(&["mathieu", "--parity", "a", "--order", "0", "--p", "1"]) + 0.455139).abs() <= 1e-6);
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let bin = env!("CARGO_BIN_EXE_twocenter");
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let json = dir.path().join(format!("s{i}.json"));
        let status = Command::new(bin)
            .args(["solve", "--z1", "5", "--z2", "1", "--out", path_str(&json)])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(EXIT_OK));
        let csv = dir.path().join(format!("d{i}.csv"));
        let status = Command::new(bin)
            .args(["density", "--solution-file", path_str(&json), "--index", "2", "--nx", "31", "--ny", "31"])
            .args(["--out", path_str(&csv)])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(EXIT_OK));
        outputs.push((fs::read(&json).unwrap(), fs::read(&csv).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let status = Command::new(bin).args(["solve", "--z1", "1", "--z2", "1"]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_SYMMETRIC));
}
