//! Hyperelliptic curves `y^2 = f(x)` with integer `f`, their reductions, and
//! naive point counting on the smooth projective model over F_{p^n}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::is_prime;
use crate::finite_field::{fp_poly, make_extension, FieldError, FiniteField, Scratch};
use crate::poly::{resultant, IntegerPolynomial};

/// Default bound on q = p^n for brute-force enumeration.
pub const DEFAULT_Q_CAP: u64 = 2_000_000;

const CHUNK: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("f is zero")]
    ZeroPolynomial,
    #[error("deg f = {degree} is below 3, genus would be 0")]
    UnsupportedGenus { degree: usize },
    #[error("f is not squarefree over Q, the curve is singular")]
    Singular,
    #[error("curve has bad reduction at p = {p}")]
    BadReduction { p: u64 },
    #[error("enumeration over q = {q} elements exceeds the cap {cap}")]
    ResourceLimit { q: u64, cap: u64 },
    #[error("point count at n = 0 is undefined")]
    ZeroDegree,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The curve `y^2 = f(x)`, f with integer coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    f: IntegerPolynomial,
    genus: usize,
}

impl HyperellipticCurve {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, CurveError> {
        let f = IntegerPolynomial::new(coeffs);
        let degree = f.degree().ok_or(CurveError::ZeroPolynomial)?;
        if degree < 3 {
            return Err(CurveError::UnsupportedGenus { degree });
        }
        if resultant(&f, &f.derivative()).is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(Self { genus: (degree - 1) / 2, f })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, CurveError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn polynomial(&self) -> &IntegerPolynomial {
        &self.f
    }

    pub fn coeffs(&self) -> &[BigInt] {
        self.f.coeffs()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        self.f.coeffs().len() - 1
    }

    /// Coefficient-wise reduction mod p, trimmed.
    pub fn reduce(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        fp_poly::trim(
            self.f
                .coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
                .collect(),
        )
    }

    /// Odd prime, degree preserved mod p, and f mod p squarefree.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        if p == 2 || !is_prime(p) {
            return false;
        }
        let reduced = self.reduce(p);
        reduced.len() == self.f.coeffs().len() && fp_poly::is_squarefree(p, &reduced)
    }

    /// Number of F_{p^n}-points on the smooth projective model.
    pub fn count_points(&self, p: u64, n: usize, q_cap: u64) -> Result<u64, CurveError> {
        if n == 0 {
            return Err(CurveError::ZeroDegree);
        }
        if !self.has_good_reduction(p) {
            return Err(CurveError::BadReduction { p });
        }
        let q = u32::try_from(n)
            .ok()
            .and_then(|n| p.checked_pow(n))
            .unwrap_or(u64::MAX);
        if q > q_cap {
            return Err(CurveError::ResourceLimit { q, cap: q_cap });
        }
        let field = make_extension(p, n)?;
        Ok(self.count_points_in(&field))
    }

    /// Point count over a caller-supplied presentation of F_q. Good reduction
    /// at the field's characteristic is the caller's responsibility.
    pub fn count_points_in(&self, field: &FiniteField) -> u64 {
        let q = field.cardinality();
        let affine_sum = self.character_sum(field);
        let lc = field.from_residue(*self.reduce(field.characteristic()).last().unwrap());
        let at_infinity: i64 = if self.degree() % 2 == 1 {
            1
        } else {
            1 + i64::from(field.quadratic_character(&lc))
        };
        let total = q as i64 + affine_sum + at_infinity;
        u64::try_from(total).expect("point count is nonnegative")
    }

    /// Sum of chi(f(x)) over all x in F_q, split into contiguous chunks.
    pub fn character_sum(&self, field: &FiniteField) -> i64 {
        let reduced = self.reduce(field.characteristic());
        let q = field.cardinality();
        let chunks = q.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let start = chunk * CHUNK;
                let end = (start + CHUNK).min(q);
                chunk_sum(field, &reduced, start, end)
            })
            .sum()
    }
}

fn chunk_sum(field: &FiniteField, f: &[u64], start: u64, end: u64) -> i64 {
    let n = field.degree();
    let mut scratch = Scratch::new(n);
    let mut x = field.element_at(start).coeffs().to_vec();
    let mut acc = vec![0u64; n];
    let mut tmp = vec![0u64; n];
    let p = field.characteristic();
    let mut sum = 0i64;
    for _ in start..end {
        // Horner: acc = (...(f_d x + f_{d-1}) x + ...) + f_0
        acc.iter_mut().for_each(|c| *c = 0);
        for &c in f.iter().rev() {
            field.mul_into(&acc, &x, &mut tmp, &mut scratch);
            acc.copy_from_slice(&tmp);
            acc[0] = (acc[0] + c) % p;
        }
        sum += i64::from(field.character_of(&acc, &mut scratch));
        field.step(&mut x);
    }
    sum
}
