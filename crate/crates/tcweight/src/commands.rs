//! Subcommand implementations, independent of argument parsing.

use std::path::Path;

use tcweight_core::engine::{self, SearchLimits};
use tcweight_core::verify::{self, Fault};

use crate::certificate::{factor_tables, CertificateDoc};
use crate::error::CliError;
use crate::replay::{self, ReplayReport};
use crate::report;
use crate::schema::{parse_document, SpaceDocument};

pub fn read_document(path: &Path) -> Result<SpaceDocument, CliError> {
  let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
  parse_document(&text)
}

pub fn cohomology(doc: &SpaceDocument, characteristic: Option<u64>) -> Result<String, CliError> {
  let field = doc.field(characteristic)?;
  let space = doc.to_space(field)?;
  let profile = space.betti_profile(field)?;
  Ok(report::betti(space.name(), field, &profile, space.euler_characteristic(field)?))
}

pub fn ring(doc: &SpaceDocument, characteristic: Option<u64>) -> Result<String, CliError> {
  let field = doc.field(characteristic)?;
  let space = doc.to_space(field)?;
  let ring = space.cohomology_ring(field)?;
  let tables = factor_tables(&ring).map_err(|e| CliError::Engine(e.into()))?;
  Ok(report::ring(space.name(), &ring, &tables))
}

pub struct Certified {
  pub doc:    CertificateDoc,
  pub replay: ReplayReport,
  pub text:   String,
}

/// Certifies and replays the result before returning it.
pub fn certify(doc: &SpaceDocument, characteristic: Option<u64>, depth: Option<usize>) -> Result<Certified, CliError> {
  let field = doc.field(characteristic)?;
  let space = doc.to_space(field)?;
  let limits = SearchLimits { depth, ..SearchLimits::default() };
  let cert = engine::certify_with(&space, field, &limits)?;
  let doc = CertificateDoc::from_certificate(&cert).map_err(|e| CliError::Engine(e.into()))?;
  let replay = replay::replay(&doc)?;
  let mut text = report::certificate(&doc);
  text.push_str(&format!(
    "replay: ok ({} products, {} theorem checks)\n",
    replay.products_checked, replay.theorems_checked
  ));
  Ok(Certified { doc, replay, text })
}

pub fn replay_file(path: &Path) -> Result<(CertificateDoc, ReplayReport), CliError> {
  let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
  let doc = CertificateDoc::from_json(&text)?;
  let report = replay::replay(&doc)?;
  Ok((doc, report))
}

/// Parses `prism:K:J` or `torus:I`.
pub fn parse_fault(s: &str) -> Result<Fault, String> {
  let parts: Vec<&str> = s.split(':').collect();
  let num = |x: &str| x.parse::<usize>().map_err(|e| format!("{s}: {e}"));
  match parts.as_slice() {
    ["prism", k, j] => Ok(Fault::Prism { k: num(k)?, simplex: num(j)? }),
    ["torus", i] => Ok(Fault::Torus { term: num(i)? }),
    _ => Err(format!("expected prism:K:J or torus:I, found {s}")),
  }
}

pub fn verify_core(max_k: usize, fault: Option<Fault>) -> (bool, String) {
  let results = verify::run_all(max_k, fault);
  let ok = results.iter().all(|r| r.passed);
  (ok, report::checks(&results))
}
