//! File formats, certificate serialization, replay checking and reports for
//! the `tcweight` command-line tool.

pub mod certificate;
pub mod commands;
pub mod error;
pub mod replay;
pub mod report;
pub mod schema;
