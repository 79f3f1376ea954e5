use std::path::Path;

use pnk::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("pnk").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name).to_str().unwrap().to_string()
}

fn constructed(args: &[&str], name: &str) -> std::path::PathBuf {
    let (code, text, _) = run(args);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("pnk-cli-{}-{name}.toml", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_enriques_is_exceptional() {
    let p = constructed(&["construct", "enriques", "--n", "2"], "enriques");
    let (code, out, _) = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("classification: exceptional; ω order 3"), "{out}");
}

#[test]
fn check_nonexample_reports_generation_failure() {
    let p = constructed(&["construct", "nonexample-product"], "nonexample");
    let (code, out, _) = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("classification: none (generation fails at x^2)"), "{out}");
}

#[test]
fn violations_exit_one_and_parse_errors_exit_two() {
    let (code, out, _) = run(&["check", &scenario("invalid/symplectic-free-order3.toml")]);
    assert_eq!(code, 1);
    assert!(out.contains("[hk-free-auto]"));
    let (code, _, err) = run(&["check", &scenario("invalid/malformed.toml")]);
    assert_eq!(code, 2);
    assert!(err.contains("line 7"), "{err}");
    let (code, _, _) = run(&["check", "/nonexistent/file.toml"]);
    assert_eq!(code, 2);
}

#[test]
fn expectation_mismatch_exits_one() {
    let text = std::fs::read_to_string(scenario("enriques-3.toml")).unwrap().replace("omega_order = 3", "omega_order = 2");
    let path = std::env::temp_dir().join(format!("pnk-cli-{}-mismatch.toml", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let (code, out, _) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("mismatch: ω order is 3, expected 2"), "{out}");
}

#[test]
fn construct_outputs() {
    let (code, out, _) = run(&["construct", "product-cover", "--n", "2", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("param = 2").count(), 2);
    let p = constructed(&["construct", "product-cover", "--n", "2", "--k", "2"], "pc");
    let (_, out, _) = run(&["check", p.to_str().unwrap()]);
    assert!(out.contains("group: order 3"), "{out}");

    let (_, out, _) = run(&["construct", "symmetric-stack", "--n", "3", "--e", "4"]);
    assert!(out.contains("stack_mode = true"));
    let (_, out, _) = run(&["construct", "k6", "--n", "2"]);
    assert!(out.contains("existence_unknown = true"));

    let (code, _, err) = run(&["construct", "nosuch"]);
    assert_eq!(code, 2);
    assert!(err.contains("enriques"), "{err}");
    let (code, _, err) = run(&["construct", "wreath", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("usage"), "{err}");
}

#[test]
fn enumerate_outputs() {
    let (code, out, _) = run(&["enumerate", "--n", "3", "--k", "4"]);
    assert_eq!(code, 0);
    let kept: Vec<&str> = out.lines().filter(|l| l.contains("  constructible  ") || l.contains("  undetermined  ")).collect();
    assert_eq!(kept.len(), 1, "{out}");
    assert!(kept[0].starts_with("HK(3)×HK(3)"));
    assert!(out.ends_with("28 eliminated, 1 constructible, 0 undetermined\n"));

    let (_, out, _) = run(&["enumerate", "--n", "2", "--k", "4"]);
    assert!(out.lines().any(|l| l.starts_with("K3×K3×HK(2)") && l.contains("constructible")));

    let (code, _, _) = run(&["enumerate", "--n", "3", "--k", "3"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["enumerate", "--n", "1", "--k", "4"]);
    assert_eq!(code, 2);

    let (_, out, _) = run(&["--format", "json", "enumerate", "--n", "3", "--k", "4"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["entries"].as_array().unwrap().len(), 29);

    let (_, traced, _) = run(&["enumerate", "--n", "3", "--k", "4", "--traces"]);
    assert!(traced.lines().count() > 29 * 3);
    assert!(traced.contains("R1 kept"));
}

#[test]
fn invariants_listing() {
    let p = scenario("product-cover-n2-k2.toml");
    assert_eq!(run(&["invariants", &p, "--degree", "4"]).1, "y1·y2\n");
    assert_eq!(run(&["invariants", &p, "--degree", "2"]).1, "");
    assert_eq!(run(&["invariants", &p, "--degree", "0"]).1, "1\n");
    let (_, out, _) = run(&["--format", "json", "invariants", &p, "--degree", "8"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["basis"][0], "y1^2·y2^2");
}

#[test]
fn quiet_and_cap_flags() {
    let p = scenario("wreath-n2-k1.toml");
    let (code, out, _) = run(&["--quiet", "check", &p]);
    assert_eq!((code, out.as_str()), (0, ""));
    let (code, _, err) = run(&["--cap", "10", "check", &p]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["check", "construct", "enumerate", "invariants"] {
        assert!(out.contains(sub));
    }
}
