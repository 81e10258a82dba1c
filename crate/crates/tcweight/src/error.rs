use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
  #[error("schema error at {path}: {message}")]
  Schema { path: String, message: String },
  #[error(transparent)]
  Engine(#[from] tcweight_core::engine::EngineError),
  #[error(transparent)]
  Build(#[from] tcweight_core::error::BuildError),
  #[error("replay failed: {0}")]
  Replay(#[from] crate::replay::ReplayError),
  #[error("{path}: {source}")]
  Io { path: String, source: std::io::Error },
  #[error("invalid certificate JSON: {0}")]
  Json(#[from] serde_json::Error),
}
