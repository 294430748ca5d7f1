use std::fs;

use serde_json::Value;

use renewt::cli::{run_with, EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["renewt"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn re(v: &Value) -> f64 {
    v["re"].as_f64().unwrap()
}

#[test]
fn analyze_reports_multipliers() {
    let v = json(&["analyze", "--factored", "(1^1,-1^2);1", "--h", "1.5"]);
    let roots = v["roots"].as_array().unwrap();
    let at = |x: f64| roots.iter().find(|r| (re(&r["value"]) - x).abs() < 1e-9).unwrap();
    assert!((re(&at(1.0)["multiplier"]) + 0.5).abs() < 1e-12);
    assert_eq!(at(1.0)["class"], "attracting");
    assert!((re(&at(-1.0)["multiplier"]) - 0.25).abs() < 1e-12);
    assert_eq!(at(-1.0)["multiplicity"], 2);
    assert!((re(&v["infinity"]["multiplier"]) - 2.0).abs() < 1e-12);
    assert_eq!(v["infinity"]["class"], "repelling");
    assert!((re(&v["index_sum"]) - 1.0).abs() < 1e-12);
}

#[test]
fn dense_and_factored_inputs_agree() {
    let a = json(&["analyze", "--coeffs", "-1,0,0,1", "--h", "0.5+0.7853981633974483i"]);
    let b = json(&["analyze", "--class", "unicritical:3", "--h", "0.5+0.7853981633974483i"]);
    assert_eq!(a["class"], "unicritical");
    assert_eq!(a["roots"].as_array().unwrap().len(), 3);
    assert!((re(&a["infinity"]["multiplier"]) - re(&b["infinity"]["multiplier"])).abs() < 1e-12);
}

#[test]
fn classify_and_construct() {
    let v = json(&["classify", "--class", "composite:1,3", "--h", "1.5"]);
    assert_eq!(v["status"], "convergent-evidence");
    let v = json(&["construct-nonconvergent", "--h", "0.5+0i", "--sign", "+"]);
    assert!((re(&v["a"]) - 8.148857911297979).abs() < 1e-9);
    assert!(v["residuals"]["fix"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["verdict"]["status"], "non-convergent");
    let v = json(&["classify", "--class", "nonconvergent:-", "--h", "0.5"]);
    assert_eq!(v["status"], "non-convergent");
}

#[test]
fn characterize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let (code, out, _) = run(&["analyze", "--factored", "(1^2,-1^3,2i^1);1", "--h", "0.7+0.2i"]);
    assert_eq!(code, EXIT_OK);
    fs::write(&path, out).unwrap();
    let v = json(&["characterize", "--input", path.to_str().unwrap()]);
    let mults: Vec<u64> =
        v["polynomial"]["roots"].as_array().unwrap().iter().map(|r| r["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mults, [2, 3, 1]);
    assert!(v["reconstruction_error"].as_f64().unwrap() < 1e-10);

    fs::write(&path, r#"{"quadratic": {"index_ratio": 2}}"#).unwrap();
    let v = json(&["characterize", "--input", path.to_str().unwrap()]);
    assert_eq!((v["k"].as_u64(), v["m"].as_u64()), (Some(2), Some(1)));
}

#[test]
fn characterize_rejects_unrealizable_data() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"h": 1, "fixed_points": [{"location": 0, "multiplier": 0.3}, {"location": 1, "multiplier": 0}]}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["characterize", "--input", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_VERIFICATION, "{err}");
    let e: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["error"]["code"], "verification");
}

#[test]
fn geometry_commands() {
    let v = json(&["line-test", "--class", "two-root:1,1", "--h", "0.7", "--samples", "500"]);
    assert_eq!(v["predicate"]["is_line"], true);
    assert_eq!(v["numeric"]["is_line"], true);
    let v = json(&["line-test", "--class", "two-root:1,2", "--h", "1.5", "--samples", "500"]);
    assert_eq!(v["numeric"]["is_line"], false);
    let v = json(&["symmetry", "--class", "unicritical:4", "--h", "1", "--max-order", "6", "--samples", "4000"]);
    assert_eq!(v["order"], 4);
}

#[test]
fn render_writes_image_and_legend() {
    let dir = tempfile::tempdir().unwrap();
    let ppm = dir.path().join("b.ppm");
    let (code, _, err) = run(&[
        "render", "--class", "two-root:1,1", "--h", "1", "--out", ppm.to_str().unwrap(), "--width", "40", "--height",
        "30",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let bytes = fs::read(&ppm).unwrap();
    assert!(bytes.starts_with(b"P6\n40 30\n255\n"));
    assert_eq!(bytes.len(), "P6\n40 30\n255\n".len() + 40 * 30 * 3);
    let legend: Value = serde_json::from_str(&fs::read_to_string(ppm.with_extension("json")).unwrap()).unwrap();
    assert_eq!(legend["attractors"].as_array().unwrap().len(), 2);

    let png = dir.path().join("b.png");
    let (code, _, _) = run(&[
        "render", "--class", "unicritical:3", "--h", "1", "--out", png.to_str().unwrap(), "--width", "16", "--height",
        "16", "--shading", "iterations",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(fs::read(&png).unwrap().starts_with(b"\x89PNG"));
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["analyze", "--h", "1"],
        vec!["analyze", "--coeffs", "1,1", "--class", "unicritical:2", "--h", "1"],
        vec!["analyze", "--coeffs", "1,,1", "--h", "1"],
        vec!["analyze", "--coeffs", "-1,0,1", "--h", "1 + 2i"],
        vec!["analyze", "--coeffs", "-1,0,1", "--h", "2"],
        vec!["construct-nonconvergent", "--h", "3", "--sign", "+"],
        vec!["construct-nonconvergent", "--h", "0.5", "--sign", "x"],
        vec!["characterize", "--input", "/nonexistent/file.json"],
        vec!["bogus"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_INPUT, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_exits_0() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Complex literals"));
}

#[test]
fn probe_finds_unbounded_basin() {
    let v = json(&["probe", "--class", "two-root:1,1", "--h", "1", "--root", "1", "--radius", "50"]);
    assert_eq!(v["found"], true);
}
