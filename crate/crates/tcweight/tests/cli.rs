use std::path::PathBuf;
use std::process::{Command, Output};

fn doc(name: &str) -> PathBuf { PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../documents").join(name) }

fn tcweight(args: &[&str]) -> Output { Command::new(env!("CARGO_BIN_EXE_tcweight")).args(args).output().unwrap() }

fn with_space(cmd: &str, name: &str, extra: &[&str]) -> Output {
  let path = doc(name);
  let mut args = vec![cmd, "--space", path.to_str().unwrap()];
  args.extend_from_slice(extra);
  tcweight(&args)
}

fn stdout(o: &Output) -> String { String::from_utf8_lossy(&o.stdout).into_owned() }

fn stderr(o: &Output) -> String { String::from_utf8_lossy(&o.stderr).into_owned() }

#[test]
fn cohomology_profiles() {
  let torus = with_space("cohomology", "torus.json", &[]);
  assert!(torus.status.success());
  assert!(stdout(&torus).contains(": 1 2 1\n"), "{}", stdout(&torus));

  let g2 = with_space("cohomology", "genus2.json", &[]);
  assert!(stdout(&g2).contains(": 1 4 1\n"));
}

#[test]
fn char_override_changes_the_field() {
  let path = std::env::temp_dir().join(format!("tcweight-rp2-{}.json", std::process::id()));
  std::fs::write(&path, r#"{"schema_version": 1, "field": {"characteristic": 0}, "space": {"type": "bundled", "name": "rp2"}}"#).unwrap();
  let p = path.to_str().unwrap();
  let q = tcweight(&["cohomology", "--space", p]);
  let f2 = tcweight(&["cohomology", "--space", p, "--char", "2"]);
  std::fs::remove_file(&path).unwrap();
  assert!(stdout(&q).contains(": 1 0 0\n"), "{}", stdout(&q));
  assert!(stdout(&f2).contains("over F_2: 1 1 1\n"), "{}", stdout(&f2));
  assert_eq!(tcweight(&["cohomology", "--space", doc("torus.json").to_str().unwrap(), "--char", "4"]).status.code(), Some(1));
}

#[test]
fn malformed_document_names_the_path() {
  let o = with_space("cohomology", "malformed_facet.json", &[]);
  assert_eq!(o.status.code(), Some(1));
  assert!(stderr(&o).contains("space.facets[1][1]"), "{}", stderr(&o));
  let missing = tcweight(&["cohomology", "--space", "/nonexistent/space.json"]);
  assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn certify_exit_codes() {
  let exact = with_space("certify", "genus2.json", &[]);
  assert_eq!(exact.status.code(), Some(0));
  assert!(stdout(&exact).contains("TC in [4, 4]"));

  let open = with_space("certify", "torus.json", &[]);
  assert_eq!(open.status.code(), Some(2));
  assert!(stdout(&open).contains("TC in [2, 4]"));

  let char2 = with_space("certify", "genus2_power2.json", &["--char", "2"]);
  assert_eq!(char2.status.code(), Some(2));
  assert!(stdout(&char2).contains("THM_SPECIAL genus2^2: characteristic(F) = 2"), "{}", stdout(&char2));

  assert_eq!(with_space("certify", "malformed_facet.json", &[]).status.code(), Some(1));
}

#[test]
fn certificate_file_replays() {
  let dir = tempfile::tempdir().unwrap();
  let out = dir.path().join("cert.json");
  let o = with_space("certify", "genus2_power3.json", &["--out", out.to_str().unwrap()]);
  assert_eq!(o.status.code(), Some(0));
  let r = tcweight(&["replay", "--certificate", out.to_str().unwrap()]);
  assert!(r.status.success(), "{}", stderr(&r));
  assert!(stdout(&r).contains("[12, 12] replayed"));

  // a tampered bound must be rejected
  let text = std::fs::read_to_string(&out).unwrap().replacen("\"lower\": 12", "\"lower\": 11", 1);
  std::fs::write(&out, text).unwrap();
  let r = tcweight(&["replay", "--certificate", out.to_str().unwrap()]);
  assert_eq!(r.status.code(), Some(1));
}

#[test]
fn json_flag_prints_the_certificate() {
  let o = with_space("certify", "circle.json", &["--json"]);
  assert_eq!(o.status.code(), Some(2));
  let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
  assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(1), Some(2)));
}

#[test]
fn depth_limits_the_zero_divisor_search() {
  let o = with_space("certify", "torus.json", &["--depth", "1", "--json"]);
  let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
  assert_eq!(v["lower"].as_u64(), Some(1));
  assert_eq!(v["search"]["depth"].as_u64(), Some(1));
}

#[test]
fn ring_lists_products() {
  let o = with_space("ring", "torus.json", &[]);
  assert!(o.status.success());
  let text = stdout(&o);
  assert!(text.contains("dimensions 1 2 1"));
  assert!(text.contains("nonzero products:"));
}

#[test]
fn verify_core_runs() {
  let o = tcweight(&["verify-core"]);
  assert!(o.status.success());
  assert!(stdout(&o).contains("PASS prism identity k=4"));
  assert!(!stdout(&o).contains("FAIL"));

  let k0 = tcweight(&["verify-core", "--max-prism-k", "0"]);
  assert!(k0.status.success());
  assert!(!stdout(&k0).contains("k=1"));

  for fault in ["prism:2:1", "torus:3"] {
    let bad = tcweight(&["verify-core", "--inject-fault", fault]);
    assert_eq!(bad.status.code(), Some(1), "{fault}");
    assert!(stdout(&bad).contains("FAIL"));
  }
}

#[test]
fn output_is_deterministic() {
  for name in ["genus2_power2.json", "torus.json", "a5b5_squared.json"] {
    let a = with_space("certify", name, &["--json"]);
    let b = with_space("certify", name, &["--json"]);
    assert_eq!(a.stdout, b.stdout, "{name}");
  }
}
