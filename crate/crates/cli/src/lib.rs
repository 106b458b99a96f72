//! Command-line front end for `nsrank-core`: curve expressions, the
//! certificate file format, and the `certify` / `count` / `lpoly` / `verify`
//! subcommands.

pub mod app;
pub mod certificate_file;
pub mod expr;

pub use app::{run, ExitCode};
pub use certificate_file::{CertificateFile, FileError};
pub use expr::{parse_polynomial, render, ParseError};
