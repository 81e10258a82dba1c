use std::path::PathBuf;

use tcweight::certificate::{CertificateDoc, FactorDoc, WitnessDoc};
use tcweight::commands;
use tcweight::replay::{replay, ReplayError};

fn certified(name: &str, characteristic: Option<u64>) -> CertificateDoc {
  let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../documents").join(name);
  commands::certify(&commands::read_document(&path).unwrap(), characteristic, None).unwrap().doc
}

fn step_index(doc: &CertificateDoc, rule: &str) -> usize { doc.steps.iter().position(|s| s.rule == rule).unwrap() }

#[test]
fn untouched_certificates_replay() {
  for (name, ch) in [("genus2.json", None), ("genus2_power2.json", Some(2)), ("torus.json", None), ("a5b5_squared.json", None)] {
    let doc = certified(name, ch);
    let report = replay(&doc).unwrap();
    assert_eq!(report.steps, doc.steps.len());
  }
}

#[test]
fn altered_witness_value_is_rejected() {
  let mut doc = certified("torus.json", None);
  let k = step_index(&doc, "ZD_PRODUCT_LOWER");
  if let Some(WitnessDoc::Product { value, .. }) = &mut doc.steps[k].witness {
    value[0].coefficient = format!("{}1", value[0].coefficient.trim_start_matches('-'));
  }
  assert!(matches!(replay(&doc), Err(ReplayError::Step { .. })));
}

#[test]
fn inflated_weight_is_rejected() {
  let mut doc = certified("genus2.json", None);
  let k = step_index(&doc, "WEIGHTED_LOWER");
  if let Some(WitnessDoc::Product { weight, .. }) = &mut doc.steps[k].witness {
    *weight += 1;
  }
  doc.steps[k].bound = doc.steps[k].bound.map(|b| b + 1);
  assert!(replay(&doc).is_err());
}

#[test]
fn class_without_provenance_is_rejected() {
  let mut doc = certified("genus2.json", None);
  doc.steps.retain(|s| s.rule != "ATOROIDAL_PROMOTION");
  match replay(&doc) {
    Err(ReplayError::Step { rule, reason, .. }) => {
      assert_eq!(rule, "WEIGHTED_LOWER");
      assert!(reason.contains("atoroidal"), "{reason}");
    },
    other => panic!("{other:?}"),
  }
}

#[test]
fn theorem_gate_is_rechecked() {
  // relabelling an F_3 certificate as F_2 must trip the characteristic gate
  let mut doc = certified("genus2_power2.json", None);
  doc.field.characteristic = 2;
  assert!(replay(&doc).is_err());
}

#[test]
fn zero_divisor_steps_cannot_use_classes() {
  let mut doc = certified("torus.json", None);
  let k = step_index(&doc, "ZD_PRODUCT_LOWER");
  if let Some(WitnessDoc::Product { factors, .. }) = &mut doc.steps[k].witness {
    factors[0] = FactorDoc::Class { class: "u".into(), exponent: 1 };
  }
  assert!(replay(&doc).is_err());
}

#[test]
fn header_must_match_steps() {
  let mut doc = certified("torus.json", None);
  doc.exact = true;
  assert!(matches!(replay(&doc), Err(ReplayError::Bounds(_))));

  let mut doc = certified("circle.json", None);
  doc.upper = 1;
  assert!(replay(&doc).is_err());

  let mut doc = certified("circle.json", None);
  doc.schema_version = 7;
  assert_eq!(replay(&doc), Err(ReplayError::Version(7)));
}

#[test]
fn json_round_trip_is_stable() {
  let doc = certified("genus2_power3.json", None);
  let text = doc.to_json();
  let back = CertificateDoc::from_json(&text).unwrap();
  assert_eq!(back, doc);
  assert_eq!(back.to_json(), text);
}
