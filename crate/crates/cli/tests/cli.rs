use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;
use toric_core::asymptotics::hhat;
use toric_core::cohomology::h_all;
use toric_core::fixtures;
use toric_core::gkz::enumerate_maximal_chambers;
use toric_core::rational::{format_q, frac, q};
use toric_core::{Fan, TWeilDivisor, Q};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("toric runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = toric(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad report ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().expect("exit code"), doc)
}

fn write_fan(dir: &TempDir, name: &str, fan: &Fan) -> String {
    let doc = json!({
        "dim": fan.dim(),
        "rays": fan.rays(),
        "cones": fan.max_cones().iter().map(|c| c.to_vec()).collect::<Vec<_>>(),
    });
    let path = dir.path().join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn write_divisor(dir: &TempDir, name: &str, coeffs: &[Q]) -> String {
    let doc = json!({ "coeffs": coeffs.iter().map(format_q).collect::<Vec<_>>() });
    let path = dir.path().join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn s(p: PathBuf) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn asym_on_p2_three_d0() {
    let (code, doc) = run_json(&[
        "asym",
        "--fan",
        &s(data("fans/p2.json")),
        "--divisor",
        &s(data("divisors/p2_3d0.json")),
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["result"]["hhat"], json!(["9", "0", "0"]));
    assert_eq!(doc["result"]["hhat_decimal"][0], "9.00000000000");
    assert_eq!(doc["tool"]["name"], "toric");
    assert_eq!(doc["inputs"]["fan_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn structure_sheaf_cohomology() {
    let (code, doc) = run_json(&[
        "cohom",
        "--check-oracle",
        "--fan",
        &s(data("fans/p2.json")),
        "--divisor",
        &s(data("divisors/p2_zero.json")),
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["h"], json!(["1", "0", "0"]));
    assert_eq!(doc["result"]["oracle_agrees"], true);
}

#[test]
fn validate_rejects_non_primitive_rays() {
    let (code, doc) = run_json(&["validate", "--fan", &s(data("fans/nonprimitive.json"))]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "error");
    assert_eq!(doc["error"]["diagnostics"], json!(["ray 0 not primitive"]));
}

#[test]
fn validate_accepts_fixtures() {
    let (code, doc) = run_json(&["validate", "--fan", &s(data("fans/bl3p2.json"))]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["valid"], true);
    assert_eq!(doc["result"]["cone_counts"], json!([1, 6, 6]));
}

#[test]
fn computation_rescales_non_primitive_rays() {
    let (code, doc) = run_json(&[
        "cohom",
        "--fan",
        &s(data("fans/nonprimitive.json")),
        "--divisor",
        &s(data("divisors/p2_3d0.json")),
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["h"], json!(["10", "0", "0"]));
    assert_eq!(doc["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn ample_on_pullback_of_the_hyperplane_class() {
    let (code, doc) = run_json(&[
        "ample",
        "--fan",
        &s(data("fans/f1.json")),
        "--divisor",
        &s(data("divisors/f1_pullback_h.json")),
    ]);
    assert_eq!(code, 0);
    let r = &doc["result"];
    assert_eq!(r["is_ample"], false);
    assert_eq!(r["via_asymptotics"], false);
    assert_eq!(r["agree"], true);
    // Σ_D is the fan of P² and the class sits on the wall of its chamber
    assert_eq!(r["chamber"]["sigma_rays"], json!([0, 1, 2]));
    assert_eq!(r["chamber"]["interior"], false);
    assert_eq!(r["higher_vanishing"]["at_divisor"], true);
    assert_eq!(r["higher_vanishing"]["neighborhood"], false);
}

#[test]
fn ample_and_p2_chamber_on_f1() {
    let args = |d: &str| vec!["ample".to_string(), "--fan".into(), s(data("fans/f1.json")), "--divisor".into(), s(data(d))];
    let a = args("divisors/f1_ample.json");
    let (_, doc) = run_json(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(doc["result"]["is_ample"], true);
    assert_eq!(doc["result"]["via_asymptotics"], true);
    assert_eq!(doc["result"]["chamber"]["ample_chamber"], true);
    let (code, doc) = run_json(&[
        "gkz-locate",
        "--fan",
        &s(data("fans/f1.json")),
        "--divisor",
        &s(data("divisors/f1_p2_chamber.json")),
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["I"], json!([3]));
    assert_eq!(doc["result"]["sigma_rays"], json!([0, 1, 2]));
    assert_eq!(doc["result"]["interior"], true);
}

#[test]
fn exit_codes() {
    let (code, doc) = run_json(&[
        "cohom",
        "--fan",
        &s(data("fans/affine_plane.json")),
        "--divisor",
        &s(data("divisors/p2_zero.json")),
    ]);
    assert_eq!(code, 2, "{doc}");
    assert_eq!(doc["error"]["kind"], "divisor_length");

    let dir = TempDir::new().unwrap();
    let zero = write_divisor(&dir, "z.json", &[q(0), q(0)]);
    let (code, doc) = run_json(&["cohom", "--fan", &s(data("fans/affine_plane.json")), "--divisor", &zero]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["kind"], "not_complete");

    let (code, _) = run_json(&["gkz-enumerate", "--fan", &s(data("fans/p3.json"))]);
    assert_eq!(code, 3);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2").unwrap();
    let (code, doc) = run_json(&["validate", "--fan", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "input");

    assert_eq!(toric(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(toric(&["probe", "--fan", "x", "--divisor", "y", "--mmax", "0"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    for cmd in ["cohom", "asym", "gkz-locate", "ample", "probe"] {
        let mut outs = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{cmd}{k}.json"));
            let o = toric(&[
                cmd,
                "--fan",
                &s(data("fans/f1.json")),
                "--divisor",
                &s(data("divisors/f1_ample.json")),
                "--out",
                out.to_str().unwrap(),
            ]);
            assert!(o.status.success(), "{cmd}");
            outs.push(std::fs::read(out).unwrap());
        }
        assert_eq!(outs[0], outs[1], "{cmd}");
    }
}

#[test]
fn numbers_equal_library_calls() {
    let dir = TempDir::new().unwrap();
    let fan = fixtures::bl2_p2();
    let f = write_fan(&dir, "fan.json", &fan);
    let coeffs = vec![frac(3, 2), q(-1), q(2), frac(-1, 3), q(1)];
    let d = TWeilDivisor::new(coeffs.clone());
    let dp = write_divisor(&dir, "d.json", &coeffs);
    let (_, doc) = run_json(&["asym", "--fan", &f, "--divisor", &dp]);
    let expected: Vec<String> = hhat(&fan, &d).unwrap().0.iter().map(format_q).collect();
    assert_eq!(doc["result"]["hhat"], json!(expected));

    let int = vec![q(2), q(-1), q(3), q(0), q(-2)];
    let ip = write_divisor(&dir, "i.json", &int);
    let (_, doc) = run_json(&["cohom", "--fan", &f, "--divisor", &ip]);
    let expected: Vec<String> = h_all(&fan, &TWeilDivisor::new(int)).unwrap().0.iter().map(|x| x.to_string()).collect();
    assert_eq!(doc["result"]["h"], json!(expected));

    let (_, doc) = run_json(&["gkz-enumerate", "--fan", &f]);
    let lib = enumerate_maximal_chambers(&fan, Default::default()).unwrap();
    assert_eq!(doc["result"]["count"], json!(lib.len()));
    for (c, l) in doc["result"]["chambers"].as_array().unwrap().iter().zip(&lib) {
        assert_eq!(c["I"], json!(l.subset().to_vec()));
        assert_eq!(c["sample_divisor"], json!(l.sample.coeffs().iter().map(format_q).collect::<Vec<_>>()));
    }
}

#[test]
fn fixture_round_trip() {
    let out = toric(&["fixture", "p1xp1xp1"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rays"].as_array().unwrap().len(), 6);
    assert_eq!(toric(&["fixture", "nope"]).status.code(), Some(2));
}
