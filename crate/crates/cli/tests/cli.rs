//! End-to-end runs of the `relfix` binary on the shipped fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn relfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relfix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn step_variant(name: &str, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let text = std::fs::read_to_string(fixture("step-maps.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    edit(&mut v);
    let path = scratch(name);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    path
}

fn fact<'a>(text: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no `{key}` line in\n{text}"))
}

#[test]
fn verify_step_fixture_reaches_the_top_rank() {
    let f = fixture("step-maps.json");
    let out = relfix(&[
        "verify",
        path_str(&f),
        "--require",
        "common-fixed-point-unique",
    ]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(fact(&text, "rank"), "common-fixed-point-unique");
    assert_eq!(fact(&text, "coincidence points"), "{0, 0.5}");
    assert_eq!(fact(&text, "common fixed points"), "{0}");
    assert_eq!(fact(&text, "digest").len(), 64);
}

#[test]
fn failing_contraction_exits_one_with_witness() {
    let f = step_variant("k99.json", |v| {
        v["contraction"] = serde_json::json!({"kind": "catalog", "id": "I", "params": {"k": 0.99}});
    });
    let out = relfix(&["verify", path_str(&f)]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    assert_eq!(fact(&text, "rank"), "none");
    let d = text.lines().find(|l| l.starts_with("d ")).unwrap();
    assert!(d.contains("fails") && d.contains("(1, 2)"), "{d}");
}

#[test]
fn bad_input_exits_two() {
    let text = std::fs::read_to_string(fixture("step-maps.json")).unwrap();
    let truncated = scratch("truncated.json");
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&relfix(&["verify", path_str(&truncated)])), 2);
    assert_eq!(code(&relfix(&["verify", "/nonexistent/instance.json"])), 2);
    assert_eq!(code(&relfix(&["verify"])), 2);
    let undefined = step_variant("undefined-map.json", |v| {
        v["t"].as_object_mut().unwrap().remove("2");
    });
    assert_eq!(code(&relfix(&["verify", path_str(&undefined)])), 2);
}

#[test]
fn solve_certifies_coincidence_and_common_fixed_point() {
    let f = fixture("step-maps.json");
    let out = relfix(&["solve", path_str(&f), "--x0", "0.5"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(fact(&text, "coincidence").starts_with("0.5 "), "{text}");
    assert!(fact(&text, "point-of-coincidence").starts_with("0 "));
    assert!(fact(&text, "common-fixed-point").starts_with("0 "));
    assert_eq!(fact(&text, "a priori bound"), "holds");

    // from 2 the iteration moves g x = 2 to T 2 = 1 and then to 0
    let out = relfix(&["solve", path_str(&f), "--x0", "2"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    let coincidence = fact(&text, "coincidence");
    assert!(
        coincidence.starts_with("0 ") || coincidence.starts_with("0.5 "),
        "{text}"
    );
}

#[test]
fn machine_report_is_json() {
    let f = fixture("step-maps.json");
    let out = relfix(&["--report", "machine", "solve", path_str(&f)]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "solve");
    assert_eq!(v["exit_status"], 0);
    assert_eq!(v["certificates"][0]["kind"], "coincidence");
    assert_eq!(v["certificates"][2]["kind"], "common-fixed-point");
}

#[test]
fn digest_ignores_formatting() {
    let original = fixture("step-maps.json");
    let compact = step_variant("compact.json", |_| {});
    let digest = |p: &Path| {
        let out = relfix(&["--report", "machine", "verify", path_str(p)]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["digest"].as_str().unwrap().to_string()
    };
    assert_eq!(digest(&original), digest(&compact));
    let changed = step_variant("changed.json", |v| {
        v["solver"]["x0"] = serde_json::json!("2");
    });
    assert_ne!(digest(&original), digest(&changed));
}

#[test]
fn path_search_finds_direct_hop() {
    let f = fixture("step-maps.json");
    let out = relfix(&["path", path_str(&f), "0", "1"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(fact(&text, "length"), "1");
    let out = relfix(&["path", path_str(&f), "0", "nowhere"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn urysohn_desk_problem_converges() {
    let f = fixture("desk-volterra.json");
    let csv = scratch("desk.csv");
    let out = relfix(&["urysohn", path_str(&f), "--out", path_str(&csv)]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    let err: f64 = fact(&text, "sup error vs exact").parse().unwrap();
    assert!(err <= 5e-3, "{err}");
    let written = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(written.lines().next(), Some("t,u"));
    assert_eq!(written.lines().count(), 1 + 201);

    let out = relfix(&["--grid", "50", "urysohn", path_str(&f)]);
    let text = stdout(&out);
    assert_eq!(fact(&text, "grid size"), "50");

    let out = relfix(&["--max-iter", "2", "urysohn", path_str(&f)]);
    assert_eq!(code(&out), 3, "{}", stdout(&out));
}

#[test]
fn urysohn_horizon_at_one_is_rejected() {
    let text = std::fs::read_to_string(fixture("desk-volterra.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["horizon"] = serde_json::json!(1.0);
    let f = scratch("horizon-one.json");
    std::fs::write(&f, v.to_string()).unwrap();
    let out = relfix(&["urysohn", path_str(&f)]);
    let text = stdout(&out);
    assert_eq!(code(&out), 1, "{text}");
    assert!(
        text.lines()
            .any(|l| l.starts_with("H5") && l.contains("fails")),
        "{text}"
    );
}

#[test]
fn continuous_fixture_verifies_and_solves() {
    let f = fixture("square-map.json");
    let out = relfix(&["verify", path_str(&f)]);
    assert_eq!(code(&out), 0);
    let out = relfix(&["solve", path_str(&f), "--x0", "0.9"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0, "{text}");
    assert!(fact(&text, "coincidence").starts_with("0 "), "{text}");
}

#[test]
fn catalog_lists_every_form() {
    let out = relfix(&["catalog"]);
    let text = stdout(&out);
    assert_eq!(code(&out), 0);
    for id in ["I", "IX", "XVI", "(16)", "(25)", "(35)"] {
        assert!(
            text.lines()
                .any(|l| l.trim_start().starts_with(&format!("{id}: "))),
            "{id} missing"
        );
    }
    assert!(text.contains("a1 + a2 + a3 + 2 a4 < 1"));
}

#[test]
fn fuzz_with_seed_file_is_clean_and_reproducible() {
    let f = fixture("fuzz-seed.json");
    let run = || {
        let out = relfix(&["fuzz", path_str(&f), "--instances", "20"]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        stdout(&out)
    };
    let first = run();
    assert_eq!(fact(&first, "accepted"), "20");
    assert_eq!(first, run());
    let other = relfix(&["--seed", "7", "fuzz", "--instances", "20"]);
    assert_eq!(fact(&stdout(&other), "seed"), "7");
}
