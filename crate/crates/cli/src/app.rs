use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use nsrank_core::certify::{certify, verify_certificate, CertifyError, CertifyOptions};
use nsrank_core::curve::CurveError;
use nsrank_core::endo::EndoError;
use nsrank_core::{lpoly_from_counts, EndRingVerdict, HyperellipticCurve, DEFAULT_Q_CAP};

use crate::certificate_file::{CertificateFile, FileError};
use crate::expr::parse_polynomial;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Inconclusive = 1,
    InputError = 2,
    VerificationFailure = 3,
}

#[derive(Parser, Debug)]
#[command(name = "nsrank", version, about = "Certify End(J) = Z and Néron–Severi rank 1 for hyperelliptic Jacobians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full pipeline and write a certificate.
    Certify {
        #[command(flatten)]
        curve: CurveArgs,
        /// Use exactly these two primes instead of searching.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Largest prime examined by the automatic search.
        #[arg(long, default_value_t = 100)]
        p_max: u64,
        #[arg(long, default_value_t = DEFAULT_Q_CAP)]
        q_cap: u64,
        /// Certificate path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accept non-ordinary reductions (the verdict becomes Inconclusive).
        #[arg(long)]
        relax_ordinary: bool,
    },
    /// Print N_n, the number of points over F_{p^n}.
    Count {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        prime: u64,
        #[arg(long, short = 'n', default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_Q_CAP)]
        q_cap: u64,
    },
    /// Print the Frobenius characteristic polynomial at one prime.
    Lpoly {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = DEFAULT_Q_CAP)]
        q_cap: u64,
    },
    /// Re-check an existing certificate from scratch.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_Q_CAP)]
        q_cap: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CurveArgs {
    /// Right-hand side f of y^2 = f(x), e.g. "x^2*(x-1)^2*(x^2+1)+3".
    #[arg(long)]
    curve: Option<String>,
    /// Coefficients of f, constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<String>>,
}

struct Failure {
    code: ExitCode,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self { code: ExitCode::InputError, message: message.to_string() }
    }
}

impl CurveArgs {
    fn load(&self) -> Result<(HyperellipticCurve, Option<String>), Failure> {
        let coeffs = match (&self.curve, &self.coeffs) {
            (Some(text), _) => parse_polynomial(text).map_err(Failure::input)?,
            (None, Some(list)) => list
                .iter()
                .map(|c| c.trim().parse::<BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::input(format!("bad --coeffs entry: {e}")))?,
            (None, None) => return Err(Failure::input("one of --curve or --coeffs is required")),
        };
        let curve = HyperellipticCurve::new(coeffs).map_err(Failure::input)?;
        Ok((curve, self.curve.clone()))
    }
}

fn certify_failure(e: CertifyError) -> Failure {
    let code = match &e {
        CertifyError::BadReduction { .. }
        | CertifyError::InvalidPair(_)
        | CertifyError::WrongPrimeCount(_) => ExitCode::InputError,
        CertifyError::Count { source, .. } => match source {
            CurveError::ResourceLimit { .. } | CurveError::BadReduction { .. } => ExitCode::InputError,
            _ => ExitCode::VerificationFailure,
        },
        CertifyError::Endo { source: EndoError::UnsupportedDegree(_), .. } => ExitCode::InputError,
        CertifyError::Unusable { .. } | CertifyError::SearchExhausted { .. } | CertifyError::NotTrivial => {
            ExitCode::Inconclusive
        }
        CertifyError::Lpoly { .. } | CertifyError::Endo { .. } => ExitCode::VerificationFailure,
    };
    Failure { code, message: e.to_string() }
}

fn file_failure(e: FileError) -> Failure {
    let code = match e {
        FileError::Inconsistent(_) => ExitCode::VerificationFailure,
        FileError::Io(_) | FileError::Json(_) => ExitCode::InputError,
    };
    Failure { code, message: e.to_string() }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<ExitCode, Failure> {
    match command {
        Command::Certify { curve, primes, p_max, q_cap, out: path, relax_ordinary } => {
            let (curve, expression) = curve.load()?;
            if primes.is_none() && p_max < 3 {
                return Err(Failure::input("--p-max must be at least 3"));
            }
            let opts = CertifyOptions { q_cap, relax_ordinary };
            let cert = certify(&curve, primes.as_deref(), p_max, &opts).map_err(certify_failure)?;
            let file = CertificateFile::from_certificate(&cert, expression.as_deref());
            match path {
                Some(path) => {
                    file.write_atomic(&path).map_err(file_failure)?;
                    let ps: Vec<String> = cert.prime_certs.iter().map(|c| c.p.to_string()).collect();
                    let _ = writeln!(out, "primes: {}", ps.join(", "));
                    for c in &cert.prime_certs {
                        let _ = writeln!(out, "f_{} = {}", c.p, c.weil);
                    }
                    let _ = writeln!(out, "disc_gcd: {}", cert.disc_gcd);
                    let _ = writeln!(out, "end_ring: {}", cert.end_ring);
                    let _ = writeln!(out, "certificate written to {}", path.display());
                }
                None => {
                    let _ = out.write_all(file.to_json().as_bytes());
                }
            }
            Ok(match cert.end_ring {
                EndRingVerdict::TrivialZ => ExitCode::Success,
                EndRingVerdict::Inconclusive => ExitCode::Inconclusive,
            })
        }
        Command::Count { curve, prime, degree, q_cap } => {
            let (curve, _) = curve.load()?;
            let n = curve.count_points(prime, degree, q_cap).map_err(Failure::input)?;
            let _ = writeln!(out, "{n}");
            Ok(ExitCode::Success)
        }
        Command::Lpoly { curve, prime, q_cap } => {
            let (curve, _) = curve.load()?;
            let counts = (1..=curve.genus())
                .map(|n| curve.count_points(prime, n, q_cap))
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::input)?;
            let w = lpoly_from_counts(prime, curve.genus(), &counts).map_err(|e| Failure {
                code: ExitCode::VerificationFailure,
                message: e.to_string(),
            })?;
            let counts: Vec<String> = counts.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "counts: {}", counts.join(", "));
            let _ = writeln!(out, "f_{prime} = {w}");
            let _ = match w.check() {
                Ok(()) => writeln!(out, "weil_valid: true"),
                Err(defect) => writeln!(out, "weil_valid: false ({defect})"),
            };
            let _ = writeln!(out, "ordinary: {}", w.is_ordinary());
            Ok(ExitCode::Success)
        }
        Command::Verify { input, q_cap } => {
            let file = CertificateFile::read(&input).map_err(file_failure)?;
            let cert = file.to_certificate().map_err(file_failure)?;
            let report = verify_certificate(&cert, q_cap);
            match report.first_divergence {
                None => {
                    let _ = writeln!(out, "verified: end_ring = {}", cert.end_ring);
                    Ok(ExitCode::Success)
                }
                Some(why) => Err(Failure { code: ExitCode::VerificationFailure, message: format!("verification failed: {why}") }),
            }
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { ExitCode::InputError as i32 } else { 0 };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code as i32,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code as i32
        }
    }
}
