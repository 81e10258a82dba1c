//! Plain-text rendering for standard output.

use std::fmt::Write;

use tcweight_core::field::FieldSpec;
use tcweight_core::ring::GradedAlgebra;
use tcweight_core::verify::CheckResult;

use crate::certificate::{CertificateDoc, FactorTable, WitnessDoc};

pub fn betti(name: &str, field: FieldSpec, profile: &[usize], euler: i64) -> String {
  let numbers: Vec<String> = profile.iter().map(ToString::to_string).collect();
  format!("betti numbers of {name} over {field}: {}\neuler characteristic: {euler}\n", numbers.join(" "))
}

fn table(out: &mut String, t: &FactorTable) {
  let degree = |i: usize| t.dims.iter().scan(0, |acc, &n| { *acc += n; Some(*acc) }).position(|end| i < end).unwrap_or(0);
  let _ = writeln!(out, "  basis:");
  for (i, l) in t.labels.iter().enumerate() {
    let _ = writeln!(out, "    [{i}] {l} (degree {})", degree(i));
  }
  if !t.products.is_empty() {
    let _ = writeln!(out, "  nonzero products:");
  }
  for e in &t.products {
    let value: Vec<String> = e.value.iter().map(|(k, c)| format!("({c})·{}", t.labels[*k])).collect();
    let _ = writeln!(out, "    {} · {} = {}", t.labels[e.left], t.labels[e.right], value.join(" + "));
  }
  if !t.unknown.is_empty() {
    let pairs: Vec<String> = t.unknown.iter().map(|[i, j]| format!("{}·{}", t.labels[*i], t.labels[*j])).collect();
    let _ = writeln!(out, "  unknown products: {}", pairs.join(", "));
  }
}

pub fn ring(name: &str, ring: &std::sync::Arc<GradedAlgebra>, tables: &[FactorTable]) -> String {
  let mut out = String::new();
  let dims: Vec<String> = ring.dims().iter().map(ToString::to_string).collect();
  let _ = writeln!(out, "cohomology ring of {name} over {}: dimensions {}", ring.field(), dims.join(" "));
  if tables.len() > 1 {
    let _ = writeln!(out, "graded tensor product of {} factors", tables.len());
  }
  for (i, t) in tables.iter().enumerate() {
    if tables.len() > 1 {
      let _ = writeln!(out, "factor {}:", i + 1);
    }
    table(&mut out, t);
  }
  for m in ring.marked() {
    let _ = writeln!(out, "marked class {} (degree {}, {})", m.name, m.degree, m.tag.as_str());
  }
  out
}

pub fn certificate(doc: &CertificateDoc) -> String {
  let mut out = String::new();
  let field = if doc.field.characteristic == 0 { "Q".to_string() } else { format!("F_{}", doc.field.characteristic) };
  let _ = writeln!(out, "space: {}  field: {field}  dimension: {}", doc.space, doc.dimension);
  let _ = writeln!(out, "TC in [{}, {}]  exact: {}  route: {}", doc.lower, doc.upper, doc.exact, doc.route);
  let _ = writeln!(out, "steps:");
  for (i, s) in doc.steps.iter().enumerate() {
    let bound = s.bound.map(|b| format!(" [{b}]")).unwrap_or_default();
    let _ = writeln!(out, "  {i:>3}. {} {}{bound}", s.rule, s.subject);
    for line in &s.inputs {
      let _ = writeln!(out, "         from: {line}");
    }
    for line in &s.outputs {
      let _ = writeln!(out, "         gives: {line}");
    }
    if let Some(WitnessDoc::Product { value, .. }) = &s.witness {
      let _ = writeln!(out, "         witness: nonzero product with {} terms", value.len());
    }
  }
  if !doc.refusals.is_empty() {
    let _ = writeln!(out, "refused:");
    for r in &doc.refusals {
      let _ = writeln!(out, "  {} {}: {}", r.rule, r.subject, r.reason);
    }
  }
  for (name, r) in [("weighted", &doc.search.weighted), ("zero-divisor", &doc.search.zero_divisor)] {
    if r.skipped {
      let _ = writeln!(out, "{name} search: skipped (interval already closed)");
    } else {
      let _ = writeln!(
        out,
        "{name} search: {} products explored, {} unknown skips, budget hit: {}",
        r.explored, r.unknown_skips, r.capped
      );
    }
  }
  out
}

pub fn checks(results: &[CheckResult]) -> String {
  let mut out = String::new();
  for r in results {
    let _ = writeln!(out, "{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
  }
  out
}
