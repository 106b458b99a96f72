//! # nsrank-core
//!
//! Exact certification that the Jacobian of a hyperelliptic curve
//! `y^2 = f(x)` over Q has geometric endomorphism ring Z, and therefore
//! Néron–Severi rank 1 with the theta class as a free generator.
//!
//! The pipeline, at each of two primes p of good reduction:
//!
//! 1. [`curve`]: count points over F_{p^n}, n = 1..g, by enumeration.
//! 2. [`lpoly`]: rebuild the Frobenius polynomial f_p from the counts and
//!    check it is a Weil polynomial.
//! 3. [`endo`]: test absolute simplicity and compute disc(f_p).
//! 4. [`certify`]: coprime discriminants leave Q as the only common subfield
//!    of the two Frobenius fields, so End = Z.
//!
//! Everything on the certification path is exact; there is no floating
//! point.

pub mod arith;
pub mod certify;
pub mod curve;
pub mod endo;
pub mod finite_field;
pub mod lpoly;
pub mod poly;

pub use certify::{
    certify, certify_prime, conclude_end_ring, conclude_picard_rank, search_primes,
    verify_certificate, Certificate, CertifyError, CertifyOptions, DeductionStep, EndRingVerdict,
    PrimeCertificate, VerifyReport,
};
pub use curve::{CurveError, HyperellipticCurve, DEFAULT_Q_CAP};
pub use endo::{SimplicityReport, SimplicityWitness};
pub use finite_field::{make_extension, FieldElement, FiniteField};
pub use lpoly::{lpoly_from_counts, WeilPolynomial};
pub use poly::IntegerPolynomial;
