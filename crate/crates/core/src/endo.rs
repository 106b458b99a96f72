//! Exact computations in the number field Q[x]/(f_p).
//!
//! The absolute-simplicity test: f_p irreducible over Q, and the residue
//! class pi of x generates the same field as pi^d for every d with
//! phi(d) <= 2g. A drop in degree of Q(pi^d) means some power of Frobenius
//! splits the Jacobian over an extension of F_p.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{euler_phi, exact_sqrt, gcd_abs, positive_divisors};
use crate::lpoly::{WeilDefect, WeilPolynomial};
pub use crate::poly::{resultant, IntegerPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndoError {
    #[error("degree {0} is not supported here")]
    UnsupportedDegree(usize),
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("power d must be at least 1")]
    ZeroPower,
    #[error("zero discriminant, the Weil polynomial has a repeated root")]
    ZeroDiscriminant,
    #[error("not a Weil polynomial: {0}")]
    InvalidWeil(WeilDefect),
}

/// `disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)`.
pub fn poly_discriminant(f: &IntegerPolynomial) -> Result<BigInt, EndoError> {
    let d = f.degree().unwrap_or(0);
    if d < 2 {
        return Err(EndoError::UnsupportedDegree(d));
    }
    let res = resultant(f, &f.derivative());
    let (quot, rem) = res.div_rem(f.leading().unwrap());
    debug_assert!(rem.is_zero());
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -quot } else { quot })
}

/// Irreducibility over Q for monic polynomials of degree 2 to 4.
pub fn is_irreducible_over_q(f: &IntegerPolynomial) -> Result<bool, EndoError> {
    let d = f.degree().unwrap_or(0);
    if !(2..=4).contains(&d) {
        return Err(EndoError::UnsupportedDegree(d));
    }
    if !f.is_monic() {
        return Err(EndoError::NotMonic);
    }
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Ok(false);
    }
    let candidates = positive_divisors(&c0);
    let has_root = candidates
        .iter()
        .any(|r| f.eval(r).is_zero() || f.eval(&-r).is_zero());
    if has_root {
        return Ok(false);
    }
    if d < 4 {
        return Ok(true);
    }
    // (x^2 + a x + b)(x^2 + c x + e):
    //   a + c = f3, b + e + a c = f2, a e + b c = f1, b e = f0
    let (f1, f2, f3) = (f.coeff(1), f.coeff(2), f.coeff(3));
    for pos in &candidates {
        for b in [pos.clone(), -pos] {
            let e = &c0 / &b;
            // a, c are the roots of z^2 - f3 z + (f2 - b - e)
            let disc = &f3 * &f3 - BigInt::from(4) * (&f2 - &b - &e);
            let Some(root) = exact_sqrt(&disc) else { continue };
            let twice_a = &f3 + &root;
            if twice_a.is_odd() {
                continue;
            }
            let a = twice_a / 2;
            let c = &f3 - &a;
            if &a * &e + &b * &c == f1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn reduce_mod(mut v: Vec<BigRational>, f: &[BigRational]) -> Vec<BigRational> {
    let n = f.len() - 1;
    while v.len() > n {
        let c = v.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let shift = v.len() - n;
        for (k, fk) in f[..n].iter().enumerate() {
            v[shift + k] -= &c * fk;
        }
    }
    v.resize(n, BigRational::zero());
    v
}

fn mul_mod(a: &[BigRational], b: &[BigRational], f: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce_mod(out, f)
}

/// Kernel vector of a matrix given by columns, if the columns are dependent.
/// Assumes all but the last column are independent, so the kernel has
/// dimension at most one.
fn last_column_dependency(columns: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let rows = columns[0].len();
    let cols = columns.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..cols {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() == cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

fn to_primitive_integer(v: &[BigRational]) -> IntegerPolynomial {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    IntegerPolynomial::new(ints).primitive_part()
}

/// Minimal polynomial over Q of `x^d` in Q[x]/(f), primitive with positive
/// leading coefficient.
pub fn minpoly_power(f: &IntegerPolynomial, d: u64) -> Result<IntegerPolynomial, EndoError> {
    if d == 0 {
        return Err(EndoError::ZeroPower);
    }
    if !f.is_monic() {
        return Err(EndoError::NotMonic);
    }
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Err(EndoError::UnsupportedDegree(0));
    }
    if n > 1 && poly_discriminant(f)?.is_zero() {
        return Err(EndoError::NotSquarefree);
    }
    let fq = f.to_rational();

    // t = x^d mod f by square-and-multiply
    let mut t = reduce_mod(vec![BigRational::one()], &fq);
    let mut base = reduce_mod(
        vec![BigRational::zero(), BigRational::one()],
        &fq,
    );
    let mut e = d;
    while e > 0 {
        if e & 1 == 1 {
            t = mul_mod(&t, &base, &fq);
        }
        base = mul_mod(&base, &base, &fq);
        e >>= 1;
    }

    let mut powers = vec![reduce_mod(vec![BigRational::one()], &fq)];
    loop {
        let next = mul_mod(powers.last().unwrap(), &t, &fq);
        powers.push(next);
        if let Some(dep) = last_column_dependency(&powers) {
            return Ok(to_primitive_integer(&dep));
        }
    }
}

/// `{ d >= 1 : phi(d) <= 2g }`, increasing.
pub fn simplicity_test_set(genus: usize) -> Vec<u64> {
    let bound = 2 * genus as u64;
    // phi(d) >= sqrt(d / 2), so d <= 2 bound^2 covers every candidate
    (1..=2 * bound * bound + 2)
        .filter(|&d| euler_phi(d) <= bound)
        .collect()
}

/// Why a Weil polynomial fails the absolute-simplicity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityWitness {
    Reducible,
    /// Smallest d with `[Q(pi^d) : Q] < 2g`, and that degree.
    DegreeDrop { d: u64, degree: usize },
}

impl fmt::Display for SimplicityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Reducible => write!(f, "reducible"),
            Self::DegreeDrop { d, degree } => write!(f, "d={d}, degree={degree}"),
        }
    }
}

impl std::str::FromStr for SimplicityWitness {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "reducible" {
            return Ok(Self::Reducible);
        }
        let bad = || format!("unrecognized simplicity witness {s:?}");
        let (d, degree) = s.split_once(", ").ok_or_else(bad)?;
        let d = d.strip_prefix("d=").and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let degree = degree
            .strip_prefix("degree=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(bad)?;
        Ok(Self::DegreeDrop { d, degree })
    }
}

/// Outcome of the absolute-simplicity test, with the degree of Q(pi^d) for
/// every tested d when f_p is irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    pub witness: Option<SimplicityWitness>,
    pub degrees: Vec<(u64, usize)>,
}

impl SimplicityReport {
    pub fn is_absolutely_simple(&self) -> bool {
        self.witness.is_none()
    }

    /// All tested d at which the field degree dropped.
    pub fn offending(&self) -> Vec<u64> {
        let full = self.degrees.first().map(|&(_, deg)| deg).unwrap_or(0);
        self.degrees
            .iter()
            .filter(|&&(_, deg)| deg < full)
            .map(|&(d, _)| d)
            .collect()
    }
}

pub fn is_absolutely_simple(w: &WeilPolynomial) -> Result<SimplicityReport, EndoError> {
    w.check().map_err(EndoError::InvalidWeil)?;
    let f = w.to_polynomial();
    if !is_irreducible_over_q(&f)? {
        return Ok(SimplicityReport { witness: Some(SimplicityWitness::Reducible), degrees: Vec::new() });
    }
    let full = 2 * w.genus();
    let degrees = simplicity_test_set(w.genus())
        .into_par_iter()
        .map(|d| minpoly_power(&f, d).map(|m| (d, m.degree().unwrap_or(0))))
        .collect::<Result<Vec<_>, _>>()?;
    let witness = degrees
        .iter()
        .find(|&&(_, deg)| deg != full)
        .map(|&(d, degree)| SimplicityWitness::DegreeDrop { d, degree });
    Ok(SimplicityReport { witness, degrees })
}

/// Gcd of absolute values; both inputs must be nonzero.
pub fn discriminant_gcd(a: &BigInt, b: &BigInt) -> Result<BigInt, EndoError> {
    if a.is_zero() || b.is_zero() {
        return Err(EndoError::ZeroDiscriminant);
    }
    Ok(gcd_abs(a, b).abs())
}
