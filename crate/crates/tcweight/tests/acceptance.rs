//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tcweight::certificate::CertificateDoc;
use tcweight::commands::{self, Certified};
use tcweight::replay;
use tcweight::schema::{parse_document, SpaceDocument};
use tcweight_core::field::{binomial_in_field, FieldSpec, Scalar};
use tcweight_core::ring::{self, GradedAlgebra};
use tcweight_core::simplicial::BUNDLED_NAMES;
use tcweight_core::verify::Fault;

type Outcome = Result<String, String>;

fn documents() -> PathBuf { PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../documents") }

fn load(name: &str) -> SpaceDocument {
  commands::read_document(&documents().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn inline(text: &str) -> SpaceDocument { parse_document(text).expect("inline document parses") }

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> { if cond { Ok(()) } else { Err(msg()) } }

/// Every certificate produced during the run, kept for the replay criterion.
struct Run {
  emitted: Vec<(String, SpaceDocument, Option<u64>, String)>,
}

impl Run {
  fn certify(&mut self, label: &str, doc: &SpaceDocument, characteristic: Option<u64>) -> Result<(Certified, Duration), String> {
    let t = Instant::now();
    let c = commands::certify(doc, characteristic, None).map_err(|e| format!("{label}: {e}"))?;
    let elapsed = t.elapsed();
    self.emitted.push((label.to_string(), doc.clone(), characteristic, c.doc.to_json()));
    Ok((c, elapsed))
  }

  fn expect_bounds(&mut self, label: &str, doc: &SpaceDocument, ch: u64, want: (usize, usize, bool), limit: Duration) -> Result<Duration, String> {
    let (c, t) = self.certify(&format!("{label} char {ch}"), doc, Some(ch))?;
    let got = (c.doc.lower, c.doc.upper, c.doc.exact);
    ensure(got == want, || format!("{label} over char {ch}: got {got:?}, want {want:?}"))?;
    ensure(t < limit, || format!("{label} over char {ch}: {t:?} exceeds {limit:?}"))?;
    Ok(t)
  }
}

fn genus_two_certification(run: &mut Run) -> Outcome {
  let mut slowest = Duration::ZERO;
  for file in ["genus2_triangulated.json", "genus2.json"] {
    let doc = load(file);
    for ch in [0, 3, 5] {
      slowest = slowest.max(run.expect_bounds(file, &doc, ch, (4, 4, true), Duration::from_secs(1))?);
    }
  }
  Ok(format!("[4,4] for triangulation and presentation over Q, F_3, F_5; slowest {slowest:.2?}"))
}

fn products(run: &mut Run) -> Outcome {
  let mut times = Vec::new();
  for (file, b, limit) in [("genus2_power2.json", 8, 10), ("genus2_power3.json", 12, 10)] {
    let doc = load(file);
    for ch in [3, 0] {
      times.push(run.expect_bounds(file, &doc, ch, (b, b, true), Duration::from_secs(limit))?);
    }
  }
  Ok(format!("[8,8] and [12,12] over F_3 and Q; n = 3 took {:.2?} and {:.2?}", times[2], times[3]))
}

fn characteristic_gates(run: &mut Run) -> Outcome {
  let (c, _) = run.certify("genus2_power2 char 2", &load("genus2_power2.json"), Some(2))?;
  ensure(!c.doc.exact, || format!("char 2 closed the interval [{}, {}]", c.doc.lower, c.doc.upper))?;
  let refusal = c
    .doc
    .refusals
    .iter()
    .find(|r| r.rule == "THM_SPECIAL" && r.reason.contains("characteristic(F) = 2"))
    .ok_or("no THM_SPECIAL refusal naming characteristic 2")?;

  // F[u]/(u^3) with |u| = 2: the (4,4) block of ū^4 is 6·u²⊗u²
  let mut blocks = Vec::new();
  for (field, nonzero) in [(FieldSpec::rationals(), true), (FieldSpec::new(3).unwrap(), false)] {
    let a = Arc::new(ring::truncated_polynomial(field, 2, 2).map_err(|e| e.to_string())?);
    let aa = ring::tensor(&a, &a).map_err(|e| e.to_string())?;
    let ubar = ring::zero_divisor(&aa, &a.basis_element(1)).map_err(|e| e.to_string())?;
    let block = ring::bidegree_component(&ubar.power(4).map_err(|e| e.to_string())?, 4, 4).map_err(|e| e.to_string())?;
    let u2 = a.basis_element(2);
    let six = ring::pure_tensor(&aa, &u2, &u2).map_err(|e| e.to_string())?.scale(&field.from_i64(6));
    ensure(block == ring::bidegree_component(&six, 4, 4).map_err(|e| e.to_string())?, || format!("block over {field} is not 6·u²⊗u²"))?;
    ensure(block.iter().any(|x| !x.is_zero()) == nonzero, || format!("block over {field} has the wrong vanishing"))?;
    blocks.push(if nonzero { format!("nonzero over {field}") } else { format!("zero over {field}") });
  }
  Ok(format!("char 2 gives [{}, {}] with refusal \"{}\"; 6·u²⊗u² {}", c.doc.lower, c.doc.upper, refusal.reason, blocks.join(", ")))
}

fn one_relator(run: &mut Run) -> Outcome {
  let single = inline(
    r#"{"schema_version": 1, "field": {"characteristic": 5},
        "space": {"type": "presentation", "name": "a5b5", "generators": ["a", "b"], "relators": ["aaaaabbbbb"]}}"#,
  );
  let h2 = |ch: u64| -> Result<usize, String> {
    let field = single.field(Some(ch)).map_err(|e| e.to_string())?;
    let space = single.to_space(field).map_err(|e| e.to_string())?;
    Ok(space.betti_profile(field).map_err(|e| e.to_string())?.get(2).copied().unwrap_or(0))
  };
  let (p, q) = (h2(5)?, h2(0)?);
  ensure((p, q) == (1, 0), || format!("dim H² over F_5 and Q: ({p}, {q}), want (1, 0)"))?;
  run.expect_bounds("a5b5_squared.json", &load("a5b5_squared.json"), 5, (8, 8, true), Duration::from_secs(10))?;
  Ok("dim H² is 1 over F_5 and 0 over Q; the square certifies [8,8] over F_5".into())
}

/// A random tensor product of truncated polynomial and exterior pieces.
fn random_algebra(rng: &mut StdRng, field: FieldSpec) -> Arc<GradedAlgebra> {
  let mut acc = Arc::new(ring::truncated_polynomial(field, 2, rng.gen_range(1..=3)).unwrap());
  for _ in 0..rng.gen_range(0..=2) {
    let factor = match rng.gen_range(0..3) {
      0 => ring::exterior_algebra(field, &["x"]).unwrap(),
      1 => ring::exterior_algebra(field, &["x", "y"]).unwrap(),
      _ => ring::truncated_polynomial(field, 2, rng.gen_range(1..=3)).unwrap(),
    };
    acc = Arc::new(ring::tensor(&acc, &Arc::new(factor)).unwrap().to_explicit());
  }
  acc
}

fn component_formula(_: &mut Run) -> Outcome {
  let mut rng = StdRng::seed_from_u64(0x7c_2024);
  let (mut checked, mut nonzero) = (0, 0);
  for n in 1..=3u32 {
    for &ch in &[0u64, 3, 5, 7, 11] {
      let field = FieldSpec::new(ch).unwrap();
      for _ in 0..4 {
        let a = random_algebra(&mut rng, field);
        let d = 2 * n as usize;
        if d >= a.dims().len() {
          continue;
        }
        let terms: Vec<(usize, Scalar)> = a.degree_range(2).map(|i| (i, field.from_i64(rng.gen_range(-3..=3)))).collect();
        let u = a.element(&terms);
        if u.is_zero() {
          continue;
        }
        let aa = ring::tensor(&a, &a).map_err(|e| e.to_string())?;
        let full = ring::zero_divisor(&aa, &u).map_err(|e| e.to_string())?.power(2 * n).map_err(|e| e.to_string())?;
        let un = u.power(n).map_err(|e| e.to_string())?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let c = binomial_in_field(2 * u64::from(n), u64::from(n), field).map_err(|e| e.to_string())?.times(sign);
        let expected = ring::pure_tensor(&aa, &un, &un).map_err(|e| e.to_string())?.scale(&c);
        let got = ring::bidegree_component(&full, d, d).map_err(|e| e.to_string())?;
        ensure(got == ring::bidegree_component(&expected, d, d).map_err(|e| e.to_string())?, || {
          format!("mismatch for n = {n} over {field} on an algebra with dims {:?}", a.dims())
        })?;
        checked += 1;
        if got.iter().any(|x| !x.is_zero()) {
          nonzero += 1;
        }
      }
    }
  }
  ensure(nonzero > 0, || "every sampled component vanished".into())?;
  Ok(format!("{checked} random algebras for n = 1..3 agree exactly ({nonzero} with a nonzero component)"))
}

fn honest_intervals(run: &mut Run) -> Outcome {
  run.expect_bounds("torus.json", &load("torus.json"), 0, (2, 4, false), Duration::from_secs(10))?;
  run.expect_bounds("circle.json", &load("circle.json"), 0, (1, 2, false), Duration::from_secs(10))?;
  let mut count = 0;
  for name in BUNDLED_NAMES {
    let doc = inline(&format!(
      r#"{{"schema_version": 1, "field": {{"characteristic": 0}}, "space": {{"type": "bundled", "name": "{name}"}}}}"#
    ));
    for ch in [0, 2, 3, 5] {
      let (c, _) = run.certify(&format!("{name} char {ch}"), &doc, Some(ch))?;
      ensure(c.doc.lower <= c.doc.upper, || format!("{name} over char {ch}: lower {} > upper {}", c.doc.lower, c.doc.upper))?;
      ensure(c.doc.upper == 2 * c.doc.dimension, || format!("{name} over char {ch}: upper is not 2·dim"))?;
      count += 1;
    }
  }
  Ok(format!("torus [2,4] and circle [1,2] stay open; {count} bundled runs all have lower <= upper"))
}

fn core_verification(_: &mut Run) -> Outcome {
  let t = Instant::now();
  let (ok, text) = commands::verify_core(4, None);
  let elapsed = t.elapsed();
  ensure(ok, || format!("verify-core failed:\n{text}"))?;
  ensure(elapsed < Duration::from_secs(1), || format!("verify-core took {elapsed:?}"))?;
  let (ok0, _) = commands::verify_core(0, None);
  ensure(ok0, || "verify-core with max k = 0 failed".into())?;
  let mut faults: Vec<Fault> = (0..=4).flat_map(|k| (0..=k).map(move |j| Fault::Prism { k, simplex: j })).collect();
  faults.extend((0..4).map(|term| Fault::Torus { term }));
  for &fault in &faults {
    let (ok, _) = commands::verify_core(4, Some(fault));
    ensure(!ok, || format!("fault {fault:?} went undetected"))?;
  }
  Ok(format!("{} checks pass in {elapsed:.2?}; all {} injected sign flips detected", text.lines().count(), faults.len()))
}

fn table(a: &GradedAlgebra) -> Vec<Vec<(usize, Scalar)>> {
  let n = a.len();
  (0..n * n).map(|k| a.mul_basis(k / n, k % n).unwrap()).collect()
}

fn normalized(a: &Arc<GradedAlgebra>) -> Result<GradedAlgebra, String> {
  let basis = ring::product_normal_basis(a).map_err(|e| e.to_string())?;
  ring::change_basis(a, &basis).map_err(|e| e.to_string())
}

fn oracle_equivalence(_: &mut Run) -> Outcome {
  let torus = load("torus.json");
  let circles = inline(
    r#"{"schema_version": 1, "field": {"characteristic": 0},
        "space": {"type": "product", "factors": [{"space": {"type": "bundled", "name": "circle"}, "copies": 2}]}}"#,
  );
  for ch in [0, 2, 3] {
    let field = FieldSpec::new(ch).unwrap();
    let ring_of = |doc: &SpaceDocument| -> Result<Arc<GradedAlgebra>, String> {
      doc.to_space(field).map_err(|e| e.to_string())?.cohomology_ring(field).map_err(|e| e.to_string())
    };
    let (aw, kunneth) = (ring_of(&torus)?, ring_of(&circles)?);
    ensure(aw.dims() == kunneth.dims(), || format!("dimensions differ over {field}"))?;
    let (x, y) = (table(&normalized(&aw)?), table(&normalized(&kunneth)?));
    ensure(x == y, || format!("normalized structure constants differ over {field}"))?;
    ensure(x.iter().any(|v| !v.is_empty() && v.iter().any(|(k, _)| *k == 3)), || format!("no nonzero product into H² over {field}"))?;
  }
  Ok("Alexander-Whitney torus ring equals the circle tensor square after normalization over Q, F_2, F_3".into())
}

fn certificate_replay(run: &mut Run) -> Outcome {
  for (label, doc, ch, json) in &run.emitted {
    let parsed = CertificateDoc::from_json(json).map_err(|e| format!("{label}: {e}"))?;
    replay::replay(&parsed).map_err(|e| format!("{label}: replay rejected: {e}"))?;
    ensure(parsed.to_json() == *json, || format!("{label}: JSON does not round-trip"))?;
    let again = commands::certify(doc, *ch, None).map_err(|e| format!("{label}: {e}"))?;
    ensure(again.doc.to_json() == *json, || format!("{label}: second run differs"))?;
  }
  // the binary too: two runs, same stdout and same file
  let dir = std::env::temp_dir().join(format!("tcweight-acceptance-{}", std::process::id()));
  std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
  let mut outputs = Vec::new();
  for i in 0..2 {
    let out = dir.join(format!("run{i}.json"));
    let o = Command::new(env!("CARGO_BIN_EXE_tcweight"))
      .args(["certify", "--space"])
      .arg(documents().join("genus2_power2.json"))
      .arg("--out")
      .arg(&out)
      .output()
      .map_err(|e| e.to_string())?;
    ensure(o.status.code() == Some(0), || format!("binary exit {:?}", o.status.code()))?;
    outputs.push((o.stdout, std::fs::read(&out).map_err(|e| e.to_string())?));
  }
  let _ = std::fs::remove_dir_all(&dir);
  ensure(outputs[0] == outputs[1], || "binary output differs between runs".into())?;
  Ok(format!("{} certificates replay and are byte-identical across runs", run.emitted.len()))
}

type Criterion = fn(&mut Run) -> Outcome;

fn main() -> ExitCode {
  let criteria: [(&str, Criterion); 9] = [
    ("genus-2 certification", genus_two_certification),
    ("products of genus-2 surfaces", products),
    ("characteristic gates", characteristic_gates),
    ("one-relator torsion over F_p", one_relator),
    ("component formula", component_formula),
    ("honest intervals", honest_intervals),
    ("core verification", core_verification),
    ("oracle equivalence", oracle_equivalence),
    ("certificate replay", certificate_replay),
  ];
  let mut run = Run { emitted: Vec::new() };
  let mut failed = 0;
  for (i, (name, check)) in criteria.iter().enumerate() {
    let outcome = catch_unwind(AssertUnwindSafe(|| check(&mut run))).unwrap_or_else(|p| {
      Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    match outcome {
      Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
      Err(reason) => {
        failed += 1;
        println!("FAIL {} {name}: {reason}", i + 1);
      },
    }
  }
  println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
  if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
