use std::fs;
use std::path::Path;

use lefint_cli::{run, Outcome, EXIT_OK, EXIT_PRECONDITION, EXIT_VALIDATION};
use serde_json::Value;
use tempfile::TempDir;

const BUNDLE: &str = "\
complex E { vertices: a b; simplices: (a b); }
complex H { vertices: x y z; simplices: (x y) (y z) (x z); }
complex P { vertices: p q r; simplices: (p q) (q r); }
set open on E { (a b) }
set whole on E closed { (a b) }
set ends on E { (a) (b) }
set hollow on H closed { (x y) (y z) (x z) }
map swap on E { a -> b; b -> a; }
map id on E { a -> a; b -> b; }
map rot on H { x -> y; y -> z; z -> x; }
map flip on H { x -> y; y -> x; z -> z; }
map squash on P { p -> q; q -> q; r -> r; }
function h on E { 2 open; -1 whole; }
scenario two on E { symmetry: swap; supports: whole whole; truth: 2; }
scenario liar on E { symmetry: swap; supports: whole; truth: 5; }
scenario mixed on E { symmetry: swap; supports: whole ends; }
";

fn setup() -> (TempDir, String) {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("b.lef");
    fs::write(&path, BUNDLE).unwrap();
    let p = path.display().to_string();
    (dir, p)
}

fn lefint(args: &[&str]) -> Outcome {
    run(std::iter::once("lefint").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = lefint(&full);
    (out.code, serde_json::from_str(&out.stdout).expect("valid JSON"))
}

fn value(report: &Value, name: &str) -> (String, String) {
    let v = report["values"].as_array().unwrap().iter().find(|v| v["name"] == name).unwrap_or_else(|| panic!("no {name}"));
    (v["num"].as_str().unwrap().to_owned(), v["den"].as_str().unwrap().to_owned())
}

fn int(report: &Value, name: &str) -> i64 {
    let (n, d) = value(report, name);
    assert_eq!(d, "1");
    n.parse().unwrap()
}

#[test]
fn validate_counts_objects() {
    let (_d, p) = setup();
    let (code, r) = json(&["validate", "-i", &p]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(r["command"], "validate");
    assert_eq!(int(&r, "complexes"), 3);
    assert_eq!(int(&r, "scenarios"), 3);
}

#[test]
fn report_shape() {
    let (_d, p) = setup();
    let (_, r) = json(&["lefschetz", "-i", &p, "--map", "swap", "--set", "open"]);
    let obj = r.as_object().unwrap();
    for key in ["command", "inputs", "values", "diagnostics"] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert_eq!(r["inputs"][0], p.as_str());
    let v = &r["values"][0];
    assert_eq!(v["name"], "lambda");
    assert!(v["num"].is_string() && v["den"].is_string());
}

#[test]
fn lefschetz_numbers() {
    let (_d, p) = setup();
    let cases = [("swap", Some("open"), 1), ("id", Some("open"), -1), ("swap", Some("ends"), 0), ("rot", None, 0), ("flip", None, 2)];
    for (map, set, want) in cases {
        let mut args = vec!["lefschetz", "-i", &p, "--map", map];
        if let Some(s) = set {
            args.extend(["--set", s]);
        }
        let (code, r) = json(&args);
        assert_eq!(code, EXIT_OK);
        assert_eq!(int(&r, "lambda"), want, "{map} {set:?}");
        if set.is_none() {
            assert_eq!(int(&r, "homological_lambda"), want);
        }
    }
}

#[test]
fn homology_of_hollow_triangle() {
    let (_d, p) = setup();
    let (_, r) = json(&["homology", "-i", &p, "--complex", "H"]);
    assert_eq!((int(&r, "betti_0"), int(&r, "betti_1")), (1, 1));
    assert_eq!(int(&r, "euler_characteristic"), 0);
}

#[test]
fn integral_agrees_with_levels() {
    let (_d, p) = setup();
    let (code, r) = json(&["integrate", "-i", &p, "--function", "h", "--map", "swap"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(int(&r, "integral"), int(&r, "level_integral"));
    assert_eq!(int(&r, "integral"), 1);
}

#[test]
fn euler_of_function_and_set() {
    let (_d, p) = setup();
    let (_, r) = json(&["euler", "-i", &p, "--function", "h"]);
    assert_eq!(int(&r, "euler_integral"), -3);
    let (_, r) = json(&["euler", "-i", &p, "--set", "open"]);
    assert_eq!(int(&r, "euler"), -1);
}

#[test]
fn counting_exit_codes() {
    let (_d, p) = setup();
    let (code, r) = json(&["count", "-i", &p, "--scenario", "two"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(int(&r, "count"), 2);
    let (code, r) = json(&["count", "-i", &p, "--scenario", "liar"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert_eq!(int(&r, "count"), 1);
    let (code, r) = json(&["count", "-i", &p, "--scenario", "mixed"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(!r["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn precondition_failures_exit_three() {
    let (_d, p) = setup();
    let out = lefint(&["lefschetz", "-i", &p, "--map", "swap", "--set", "ends"]);
    assert_eq!(out.code, EXIT_OK);
    let dir = TempDir::new().unwrap();
    let q = dir.path().join("bad.lef");
    fs::write(&q, "complex E { vertices: a b; simplices: (a b); }\nset A on E { (a) }\nmap swap on E { a -> b; b -> a; }\n").unwrap();
    let out = lefint(&["lefschetz", "-i", q.to_str().unwrap(), "--map", "swap", "--set", "A"]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    assert!(out.stderr.starts_with("error:"));
}

#[test]
fn input_errors_exit_two() {
    let (_d, p) = setup();
    assert_eq!(lefint(&["lefschetz", "-i", &p, "--map", "ghost"]).code, EXIT_VALIDATION);
    assert_eq!(lefint(&["lefschetz", "-i", &p, "--map", "rot", "--set", "open"]).code, EXIT_VALIDATION);
    assert_eq!(lefint(&["lefschetz", "-i", "/nonexistent/x.lef", "--map", "f"]).code, EXIT_VALIDATION);
    assert_eq!(lefint(&["frobnicate"]).code, EXIT_VALIDATION);
    let dir = TempDir::new().unwrap();
    let q = dir.path().join("broken.lef");
    fs::write(&q, "complex E {\n vertices: a b;\n simplices: (a z);\n}\n").unwrap();
    let out = lefint(&["validate", "-i", q.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_VALIDATION);
    assert!(out.stderr.contains("broken.lef:3:"), "{}", out.stderr);
}

#[test]
fn help_exits_zero() {
    let out = lefint(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("scenario-batch"));
}

#[test]
fn subdivision_output_reparses() {
    let (d, p) = setup();
    let out = lefint(&["subdivide", "-i", &p, "--complex", "H", "--depth", "2"]);
    assert_eq!(out.code, EXIT_OK);
    let q = d.path().join("sd.lef");
    fs::write(&q, &out.stdout).unwrap();
    let (_, r) = json(&["homology", "-i", q.to_str().unwrap(), "--complex", "H_sd2"]);
    assert_eq!(int(&r, "betti_1"), 1);
    assert_eq!(int(&r, "euler_characteristic"), 0);
    assert_eq!(lefint(&["subdivide", "-i", &p, "--complex", "H", "--depth", "4"]).code, EXIT_VALIDATION);
}

#[test]
fn product_rule_from_cli() {
    let (_d, p) = setup();
    let args = ["product", "-i", &p, "--left", "E", "--right", "H", "--left-map", "swap", "--left-set", "open", "--right-map", "flip", "--right-set", "hollow"];
    let (code, r) = json(&args);
    assert_eq!(code, EXIT_OK);
    let want = int(&r, "lambda_left") * int(&r, "lambda_right");
    assert_eq!(int(&r, "lambda_tensor"), want);
    assert_eq!(int(&r, "lambda_triangulated"), want);
    assert!(r["document"].as_str().unwrap().starts_with("complex E_x_H"));
}

#[test]
fn fixed_point_reported() {
    let (_d, p) = setup();
    let (code, r) = json(&["fixedpoint", "-i", &p, "--map", "swap", "--set", "open"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&r, "weight_a"), ("1".into(), "2".into()));
    assert!(r["diagnostics"][0].as_str().unwrap().contains("(a,b)"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn generated_scenarios_roundtrip() {
    let dir = TempDir::new().unwrap();
    for kind in ["identity", "mirror", "product-swap"] {
        for seed in 0..4 {
            let s = seed.to_string();
            let out = lefint(&["scenario-gen", "--seed", &s, "--kind", kind, "--targets", "4"]);
            assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
            let again = lefint(&["scenario-gen", "--seed", &s, "--kind", kind, "--targets", "4"]);
            assert_eq!(out.stdout, again.stdout);
            let p = write(dir.path(), "g.lef", &out.stdout);
            let (code, r) = json(&["count", "-i", &p, "--scenario", "generated"]);
            assert_eq!(code, EXIT_OK);
            assert_eq!(int(&r, "count"), 4);
            assert_eq!(int(&r, "truth"), 4);
        }
    }
}

#[test]
fn batch_is_deterministic_and_ordered() {
    let a = lefint(&["scenario-batch", "--start", "10", "--count", "40"]);
    let b = lefint(&["scenario-batch", "--start", "10", "--count", "40"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    let rows: Vec<&str> = a.stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "seed,kind,n,integral,count,truth,status");
    assert_eq!(rows.len(), 41);
    for (i, row) in rows[1..].iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], (10 + i).to_string());
        assert_eq!(cols[6], "pass");
        assert_eq!(cols[4], cols[5]);
    }
    assert_eq!(lefint(&["scenario-batch", "--kind", "spiral"]).code, EXIT_VALIDATION);
    assert_eq!(lefint(&["scenario-gen", "--seed", "1", "--targets", "0"]).code, EXIT_VALIDATION);
}

#[test]
fn multiple_inputs_share_names() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.lef", "complex E { vertices: a b; simplices: (a b); }\n");
    let b = write(dir.path(), "b.lef", "set open on E { (a b) }\nmap swap on E { a -> b; b -> a; }\n");
    let (code, r) = json(&["lefschetz", "-i", &a, "-i", &b, "--map", "swap", "--set", "open"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(int(&r, "lambda"), 1);
}
