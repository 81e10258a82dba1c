use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tcweight::commands;
use tcweight::error::CliError;

/// Cohomology rings and topological complexity certificates for finite complexes.
#[derive(Parser)]
#[command(name = "tcweight", version)]
struct Cli {
  #[command(subcommand)]
  command: Command,
}

#[derive(Subcommand)]
enum Command {
  /// Print Betti numbers over the document's field.
  Cohomology {
    #[arg(long)]
    space: PathBuf,
    /// Override the field characteristic (0 or a prime).
    #[arg(long = "char")]
    characteristic: Option<u64>,
  },
  /// Print the cohomology ring's structure constants.
  Ring {
    #[arg(long)]
    space: PathBuf,
    #[arg(long = "char")]
    characteristic: Option<u64>,
  },
  /// Certify bounds on TC; exit 0 if exact, 2 if only an interval, 1 on error.
  Certify {
    #[arg(long)]
    space: PathBuf,
    #[arg(long = "char")]
    characteristic: Option<u64>,
    /// Write the certificate JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Maximum number of zero-divisor factors (default 2·dim).
    #[arg(long)]
    depth: Option<usize>,
    /// Print the certificate JSON instead of the report.
    #[arg(long)]
    json: bool,
  },
  /// Check a certificate file with the independent replay checker.
  Replay {
    #[arg(long)]
    certificate: PathBuf,
  },
  /// Run the prism and torus-cycle identities.
  VerifyCore {
    #[arg(long, default_value_t = 4)]
    max_prism_k: usize,
    /// Negative control: `prism:K:J` or `torus:I` flips one sign.
    #[arg(long, hide = true, value_parser = commands::parse_fault)]
    inject_fault: Option<tcweight_core::verify::Fault>,
  },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
  match cli.command {
    Command::Cohomology { space, characteristic } => {
      print!("{}", commands::cohomology(&commands::read_document(&space)?, characteristic)?);
      Ok(ExitCode::SUCCESS)
    },
    Command::Ring { space, characteristic } => {
      print!("{}", commands::ring(&commands::read_document(&space)?, characteristic)?);
      Ok(ExitCode::SUCCESS)
    },
    Command::Certify { space, characteristic, out, depth, json } => {
      let certified = commands::certify(&commands::read_document(&space)?, characteristic, depth)?;
      let text = certified.doc.to_json();
      if let Some(path) = &out {
        std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
      }
      if json {
        print!("{text}");
      } else {
        print!("{}", certified.text);
      }
      Ok(if certified.doc.exact { ExitCode::SUCCESS } else { ExitCode::from(2) })
    },
    Command::Replay { certificate } => {
      let (doc, report) = commands::replay_file(&certificate)?;
      println!(
        "{}: [{}, {}] replayed ({} steps, {} products, {} theorem checks)",
        doc.space, doc.lower, doc.upper, report.steps, report.products_checked, report.theorems_checked
      );
      Ok(ExitCode::SUCCESS)
    },
    Command::VerifyCore { max_prism_k, inject_fault } => {
      let (ok, text) = commands::verify_core(max_prism_k, inject_fault);
      print!("{text}");
      Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
    },
  }
}

fn main() -> ExitCode {
  match run(Cli::parse()) {
    Ok(code) => code,
    Err(e) => {
      eprintln!("error: {e}");
      ExitCode::FAILURE
    },
  }
}
