use kloosterman_codes::classical::{dc_trace_histogram, Family, GroupContext, DEFAULT_BUDGET};
use kloosterman_codes::cli::cache::{CacheEntry, HistogramCache};
use kloosterman_codes::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use kloosterman_codes::gf2r::FieldDescriptor;
use serde_json::Value;

fn ktrace(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ktrace").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = ktrace(args);
    (code, serde_json::from_str(&out).expect("json report"))
}

#[test]
fn recursion_reports() {
    let (code, r) = report(&["recursion", "--n", "3", "--q", "2", "--h", "1", "--compare"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["results"]["t1k_recursive"], "1");
    assert_eq!(r["results"]["t1k_direct"], "1");
    assert_eq!(r["results"]["match"], true);

    let (code, r) = report(&["recursion", "--n", "1", "--q", "8", "--h", "3", "--compare"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["results"]["t1k_recursive"], "-44");
    assert_eq!(r["results"]["t1k_direct"], "-44");
}

#[test]
fn recursion_out_of_range() {
    let (code, _, err) = ktrace(&["recursion", "--n", "1", "--q", "4", "--h", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("n = 1 with q >= 8"), "{err}");
    let (code, _, _) = ktrace(&["recursion", "--n", "3", "--q", "2", "--h", "2"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = ktrace(&["recursion", "--n", "3", "--q", "6", "--h", "1"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn verify_suites() {
    let (code, r) = report(&["verify", "groups"]);
    assert_eq!(code, EXIT_PASS);
    let checks = r["verdicts"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["actual"] == "720 = [48, 288, 384]"));
    let (code, r) = report(&["verify", "thma"]);
    assert_eq!(code, EXIT_PASS);
    assert!(r["verdicts"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    let (code, _, err) = ktrace(&["verify", "badname"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("badname"));
}

#[test]
fn verify_reports_budget_failures() {
    let (code, r) = report(&["verify", "groups", "--budget", "1000"]);
    assert_eq!(code, EXIT_FAIL);
    let failed: Vec<_> = r["verdicts"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c["actual"].as_str().unwrap().contains("budget")));
}

#[test]
fn histogram_reports() {
    let (code, r) = report(&["histogram", "--n", "3", "--r-coset", "2", "--q", "2"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["results"]["histogram"]["0"], "293888");
    assert_eq!(r["results"]["histogram"]["1"], "308224");
    assert_eq!(r["verdicts"].as_array().unwrap().len(), 2);

    let (code, r) = report(&["histogram", "--n", "1", "--r-coset", "0", "--q", "8"]);
    assert_eq!(code, EXIT_PASS);
    let h = r["results"]["histogram"].as_object().unwrap();
    assert_eq!(h.len(), 8);
    let total: u64 = h.values().map(|v| v.as_str().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 56);

    let (code, _, err) = ktrace(&["histogram", "--n", "3", "--r-coset", "2", "--q", "4"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("budget"));

    let (code, r) = report(&["histogram", "--n", "3", "--r-coset", "2", "--q", "4", "--closed-form"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["results"]["source"], "closed_form");

    let (code, _, _) = ktrace(&["histogram", "--n", "2", "--r-coset", "1", "--q", "2", "--closed-form"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn tables_output() {
    let (code, out, _) = ktrace(&["tables", "--q", "8", "--csv"]);
    assert_eq!(code, EXIT_PASS);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("a_bits,trace,K"));
    let mut ks: Vec<i64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    ks.sort();
    assert_eq!(ks, vec![-5, -1, -1, -1, 3, 3, 3]);

    let (_, out, _) = ktrace(&["tables", "--q", "2", "--csv"]);
    assert_eq!(out, "a_bits,trace,K\n1,1,1\n");

    let (code, r) = report(&["tables", "--q", "4", "--h", "2"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["results"]["moments"][1]["MK"], "1");
    assert_eq!(r["results"]["moments"][2]["MK"], "11");

    let (code, _, _) = ktrace(&["tables", "--q", "2048"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = ktrace(&["recursion", "--n", "3", "--q", "2", "--h", "1", "--csv"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn modulus_override() {
    let (code, r) = report(&["tables", "--q", "16", "--modulus", "0x19", "--h", "3"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["params"]["modulus"], "0x19");
    let (_, base) = report(&["tables", "--q", "16", "--h", "3"]);
    assert_eq!(r["results"]["moments"], base["results"]["moments"]);
    let (code, _, _) = ktrace(&["tables", "--q", "16", "--modulus", "0x1b"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn reports_are_deterministic() {
    let args = ["weights", "--n", "3", "--q", "2", "--jmax", "3"];
    let (_, mut a) = report(&args);
    let (_, mut b) = report(&args);
    a["wall_time_ms"] = Value::Null;
    b["wall_time_ms"] = Value::Null;
    assert_eq!(a, b);
    assert_eq!(a["results"]["c_hat"][1], "308224");
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dir_arg = dir.path().to_str().unwrap();
    let args = ["histogram", "--n", "2", "--r-coset", "1", "--q", "4", "--cache-dir", dir_arg];
    let (code, first) = report(&args);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(first["results"]["source"], "enumeration");
    let (_, second) = report(&args);
    assert_eq!(second["results"]["source"], "cache");
    assert_eq!(first["results"]["histogram"], second["results"]["histogram"]);

    let f = FieldDescriptor::new(2).unwrap();
    let cache = HistogramCache::new(dir.path());
    let direct = dc_trace_histogram(&GroupContext::orthogonal(2, f).unwrap(), 1, DEFAULT_BUDGET, 1).unwrap();
    assert_eq!(cache.load(Family::Orthogonal, 2, 1, &f).unwrap(), direct);
    assert!(cache.load(Family::Symplectic, 2, 1, &f).is_none());
}

#[test]
fn cache_invalidated_by_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let cache = HistogramCache::new(dir.path());
    let a = FieldDescriptor::with_modulus(4, 0x13).unwrap();
    let b = FieldDescriptor::with_modulus(4, 0x19).unwrap();
    let h = dc_trace_histogram(&GroupContext::orthogonal(1, a).unwrap(), 0, DEFAULT_BUDGET, 1).unwrap();
    let path = cache.store(Family::Orthogonal, 1, 0, &h).unwrap();
    assert_eq!(cache.load(Family::Orthogonal, 1, 0, &a).unwrap(), h);
    assert!(cache.load(Family::Orthogonal, 1, 0, &b).is_none());

    let entry: CacheEntry = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(entry.modulus, 0x13);
    assert!(entry.to_histogram(&b).is_err());

    let dir_arg = dir.path().to_str().unwrap();
    let (_, r) = report(&["histogram", "--n", "1", "--r-coset", "0", "--q", "16", "--modulus", "0x19", "--cache-dir", dir_arg]);
    assert_eq!(r["results"]["source"], "enumeration");
    assert_eq!(r["params"]["modulus"], "0x19");
    let entry: CacheEntry = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(entry.modulus, 0x19);
}

#[test]
fn corrupt_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = HistogramCache::new(dir.path());
    std::fs::write(cache.path(Family::Orthogonal, 1, 0, 8), "{ not json").unwrap();
    let dir_arg = dir.path().to_str().unwrap();
    let (code, r) = report(&["histogram", "--n", "1", "--r-coset", "0", "--q", "8", "--cache-dir", dir_arg]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["results"]["source"], "enumeration");
}
