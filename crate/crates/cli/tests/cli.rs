use std::path::PathBuf;
use std::process::Command;

use pcm_cli::config::{self, SpaceConfig};
use proptest::prelude::*;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn shipped() -> Vec<PathBuf> {
    ["heaviside", "fraction", "exp_ratio", "rational_pair"]
        .iter()
        .map(|n| root().join("configs").join(format!("{n}.toml")))
        .collect()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn pcm(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pcm")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn without_elapsed(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn shipped_configs_pass_full_suite_deterministically() {
    for path in shipped() {
        let p = path.to_str().unwrap();
        let (code, first, err) = pcm(&["full-suite", p, "--seed", "7"]);
        assert_eq!(code, 0, "{p}: {err}\n{first}");
        let (_, second, _) = pcm(&["full-suite", p, "--seed", "7"]);
        assert_eq!(without_elapsed(&first), without_elapsed(&second));
        let v: Value = serde_json::from_str(&first).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["checks", "elapsed_ms", "suite", "summary"]);
    }
}

#[test]
fn summary_matches_check_tallies() {
    let (_, out, _) = pcm(&["full-suite", shipped()[0].to_str().unwrap()]);
    let v: Value = serde_json::from_str(&out).unwrap();
    for status in ["pass", "fail", "degenerate"] {
        let n = v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == status).count();
        assert_eq!(v["summary"][status], n as u64);
    }
}

#[test]
fn fixed_point_reports_quad_root() {
    let (code, out, _) = pcm(&["fixed-point", shipped()[0].to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let check = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["axiom_id"] == "common-fixed-point")
        .unwrap();
    let x = check["witness"][0].as_f64().unwrap();
    assert!((x - 0.633_974_596_2).abs() < 1e-9);
}

#[test]
fn broken_metric_exits_one_with_witness() {
    let (code, out, _) = pcm(&["check-axioms", fixture("squared_metric.toml").to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let cm4 = v["checks"].as_array().unwrap().iter().find(|c| c["axiom_id"] == "cm4-triangle").unwrap();
    assert_eq!(cm4["status"], "fail");
    assert_eq!(cm4["witness"], serde_json::json!([0.0, 0.6, 1.0]));
    for c in v["checks"].as_array().unwrap() {
        if c["status"] == "fail" {
            assert!(c["witness"].is_array());
        }
    }
}

#[test]
fn incompatible_kernel_exits_two() {
    let (code, out, err) = pcm(&["check-axioms", fixture("rational_on_interval.toml").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("kernel family incompatible with carrier"));
    assert!(err.contains("line 11"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pcm(&["no-such-command"]).0, 2);
    assert_eq!(pcm(&["check-axioms"]).0, 2);
    assert_eq!(pcm(&["check-axioms", "/nonexistent.toml"]).0, 2);
    let p = shipped()[1].clone();
    assert_eq!(pcm(&["check-axioms", p.to_str().unwrap(), "--tol", "-1"]).0, 2);
    assert_eq!(pcm(&["check-axioms", p.to_str().unwrap(), "--json", "--text"]).0, 2);
    // rational-pair declares neither a structure nor maps
    let r = shipped()[3].clone();
    assert_eq!(pcm(&["convexity", r.to_str().unwrap()]).0, 2);
    assert_eq!(pcm(&["fixed-point", r.to_str().unwrap()]).0, 2);
}

#[test]
fn every_subcommand_runs_on_fraction() {
    let p = shipped()[1].clone();
    for sub in ["check-axioms", "diameter", "hausdorff-witness", "convexity", "fixed-point"] {
        let (code, out, err) = pcm(&[sub, p.to_str().unwrap(), "--text"]);
        assert_eq!(code, 0, "{sub}: {err}");
        assert!(out.starts_with(&format!("suite {sub}/fraction")));
    }
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let (code, out, _) = pcm(&["check-axioms", shipped()[1].to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), out);
}

#[test]
fn shipped_configs_round_trip() {
    for path in shipped() {
        let parsed = config::load(&path).unwrap();
        assert_eq!(config::parse(&parsed.to_toml()).unwrap(), parsed);
    }
}

fn arb_config() -> impl Strategy<Value = SpaceConfig> {
    (
        0.0..1.0_f64,
        0.1..2.0_f64,
        2usize..20,
        prop::collection::vec(0.01..5.0_f64, 1..4),
        prop::collection::vec(0.01..0.99_f64, 1..4),
        any::<bool>(),
    )
        .prop_map(|(lo, width, samples, ts, lambdas, affine)| {
            let source = format!(
                "name = \"gen\"\nstructure = \"{}\"\n[carrier]\nkind = \"interval\"\nlo = {lo:?}\nhi = {:?}\nsamples = {samples}\n[kernel]\nfamily = \"fraction\"\nscale = 2.0\n[grids]\nt_values = {ts:?}\nlambda_values = {lambdas:?}\n",
                if affine { "affine" } else { "none" },
                lo + width
            );
            config::parse(&source).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_configs_round_trip(c in arb_config()) {
        prop_assert_eq!(config::parse(&c.to_toml()).unwrap(), c);
    }
}
