//! Characteristic polynomial of Frobenius from point counts.
//!
//! For a genus g curve with `N_n` points over F_{p^n}, the power sums of the
//! Frobenius eigenvalues are `s_n = p^n + 1 - N_n`. Newton's identities turn
//! `s_1..s_g` into the elementary symmetric values `e_1..e_g`, and the
//! functional equation `e_{2g-k} = p^{g-k} e_k` supplies the rest. The
//! polynomial is
//!
//! ```text
//! f_p(x) = sum_{k=0}^{2g} (-1)^k e_k x^{2g-k}
//! ```
//!
//! Validation is exact: the real Weil polynomial `h` with
//! `f_p(x) = x^g h(x + p/x)` must have all roots real and inside
//! `[-2 sqrt p, 2 sqrt p]`, decided by Sturm sequences over Q.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::bigint_pow;
use crate::poly::rational::{self, QPoly};
use crate::poly::IntegerPolynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpolyError {
    #[error("expected {expected} point counts, got {got}")]
    WrongCountLength { expected: usize, got: usize },
    #[error("N_{n} = {count} violates the Weil bound for p = {p}, g = {genus}")]
    InvalidCounts { n: usize, count: u64, p: u64, genus: usize },
    #[error("Newton identity division {numerator} / {k} is not exact; counts are corrupt")]
    CorruptCounts { k: usize, numerator: BigInt },
    #[error("Weil polynomial needs {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("Weil polynomial must be monic")]
    NotMonic,
    #[error("genus must be at least 1")]
    ZeroGenus,
}

/// Why a candidate fails to be a Weil polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeilDefect {
    /// `e_{2g-k} != p^{g-k} e_k` at this k.
    FunctionalEquation { k: usize },
    /// Some root of the real Weil polynomial is not real.
    NonRealRoots { distinct_real: usize, distinct: usize },
    /// A real root of the real Weil polynomial lies beyond `2 sqrt p`.
    OutsideBound,
}

impl fmt::Display for WeilDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FunctionalEquation { k } => write!(f, "functional equation fails at k = {k}"),
            Self::NonRealRoots { distinct_real, distinct } => write!(
                f,
                "real Weil polynomial has {distinct_real} real roots out of {distinct} distinct"
            ),
            Self::OutsideBound => write!(f, "real Weil polynomial has a root beyond 2*sqrt(p)"),
        }
    }
}

/// Frobenius characteristic polynomial data for one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPolynomial {
    p: u64,
    genus: usize,
    e: Vec<BigInt>,
}

impl WeilPolynomial {
    /// From `e_0..e_{2g}`, with `e_0 = 1`. Symmetry is not enforced here;
    /// see [`WeilPolynomial::check`].
    pub fn from_elementary(p: u64, genus: usize, e: Vec<BigInt>) -> Result<Self, LpolyError> {
        if genus == 0 {
            return Err(LpolyError::ZeroGenus);
        }
        if e.len() != 2 * genus + 1 {
            return Err(LpolyError::WrongLength { expected: 2 * genus + 1, got: e.len() });
        }
        if !e[0].is_one() {
            return Err(LpolyError::NotMonic);
        }
        Ok(Self { p, genus, e })
    }

    /// From the coefficients of f_p in descending order, leading 1 first.
    pub fn from_descending(p: u64, genus: usize, coeffs: &[BigInt]) -> Result<Self, LpolyError> {
        let e = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self::from_elementary(p, genus, e)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn elementary(&self) -> &[BigInt] {
        &self.e
    }

    /// Coefficients of f_p, descending and signed.
    pub fn descending_coefficients(&self) -> Vec<BigInt> {
        self.e
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
            .collect()
    }

    pub fn to_polynomial(&self) -> IntegerPolynomial {
        let mut c = self.descending_coefficients();
        c.reverse();
        IntegerPolynomial::new(c)
    }

    /// Power sums `s_1..s_m` of the roots, exact for every m.
    pub fn power_sums(&self, m: usize) -> Vec<BigInt> {
        let two_g = 2 * self.genus;
        let mut s: Vec<BigInt> = Vec::with_capacity(m);
        for n in 1..=m {
            let mut acc = BigInt::zero();
            for i in 1..n.min(two_g + 1) {
                let term = &self.e[i] * &s[n - i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if n <= two_g {
                let term = &self.e[n] * BigInt::from(n);
                if n % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            s.push(acc);
        }
        s
    }

    /// `N_n = p^n + 1 - s_n`.
    pub fn predicted_count(&self, n: usize) -> BigInt {
        assert!(n >= 1, "counts start at n = 1");
        let s_n = self.power_sums(n).pop().unwrap();
        bigint_pow(&BigInt::from(self.p), n) + 1 - s_n
    }

    /// Exact validity: functional equation, then real roots of the real Weil
    /// polynomial inside `[-2 sqrt p, 2 sqrt p]`.
    pub fn check(&self) -> Result<(), WeilDefect> {
        let p = BigInt::from(self.p);
        let g = self.genus;
        for k in 0..g {
            if self.e[2 * g - k] != bigint_pow(&p, g - k) * &self.e[k] {
                return Err(WeilDefect::FunctionalEquation { k });
            }
        }
        let h = self.real_weil_polynomial().to_rational();
        let sqf = rational::squarefree_part(&h);
        let distinct = sqf.len() - 1;
        let distinct_real = sturm_count_all(&sqf);
        if distinct_real != distinct {
            return Err(WeilDefect::NonRealRoots { distinct_real, distinct });
        }
        // roots of H(u) = P(u)^2 - u Q(u)^2 are the squares of the roots of
        // sqf(t) = P(t^2) + t Q(t^2); none may exceed 4p
        let squared = rational::squarefree_part(&squared_root_polynomial(&sqf));
        let bound = BigRational::from_integer(BigInt::from(4) * &p);
        if sturm_count_above(&squared, &bound) != 0 {
            return Err(WeilDefect::OutsideBound);
        }
        Ok(())
    }

    pub fn validate_weil(&self) -> bool {
        self.check().is_ok()
    }

    /// `p` does not divide the middle coefficient `e_g`.
    pub fn is_ordinary(&self) -> bool {
        self.e[self.genus]
            .gcd(&BigInt::from(self.p))
            .is_one()
    }

    /// The degree-g polynomial `h` with `f_p(x) = x^g h(x + p/x)`, assuming
    /// the functional equation.
    ///
    /// Uses `x^m + p^m x^-m = D_m(t)` for `t = x + p/x`, where `D_0 = 2`,
    /// `D_1 = t` and `D_m = t D_{m-1} - p D_{m-2}`.
    pub fn real_weil_polynomial(&self) -> IntegerPolynomial {
        let g = self.genus;
        let p = IntegerPolynomial::new(vec![BigInt::from(self.p)]);
        let t = IntegerPolynomial::x();
        let mut d = vec![IntegerPolynomial::from_i64(&[2]), t.clone()];
        for m in 2..=g {
            let next = &(&t * &d[m - 1]) - &(&p * &d[m - 2]);
            d.push(next);
        }
        let mut h = IntegerPolynomial::new(vec![signed(g, &self.e[g])]);
        for k in 0..g {
            let c = IntegerPolynomial::new(vec![signed(k, &self.e[k])]);
            h = &h + &(&c * &d[g - k]);
        }
        h
    }
}

fn signed(k: usize, c: &BigInt) -> BigInt {
    if k % 2 == 1 {
        -c
    } else {
        c.clone()
    }
}

impl fmt::Display for WeilPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_polynomial().fmt(f)
    }
}

/// Reconstructs f_p from `N_1..N_g`.
pub fn lpoly_from_counts(p: u64, genus: usize, counts: &[u64]) -> Result<WeilPolynomial, LpolyError> {
    if genus == 0 {
        return Err(LpolyError::ZeroGenus);
    }
    if counts.len() != genus {
        return Err(LpolyError::WrongCountLength { expected: genus, got: counts.len() });
    }
    let pb = BigInt::from(p);
    let mut s = Vec::with_capacity(genus);
    for (i, &count) in counts.iter().enumerate() {
        let n = i + 1;
        let q = bigint_pow(&pb, n);
        let trace = &q + 1 - BigInt::from(count);
        // (N_n - q - 1)^2 <= 4 g^2 q
        let bound = BigInt::from(4 * genus * genus) * &q;
        if &trace * &trace > bound {
            return Err(LpolyError::InvalidCounts { n, count, p, genus });
        }
        s.push(trace);
    }

    let mut e = vec![BigInt::one()];
    for k in 1..=genus {
        let mut numerator = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                numerator += term;
            } else {
                numerator -= term;
            }
        }
        let (quot, rem) = numerator.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(LpolyError::CorruptCounts { k, numerator });
        }
        e.push(quot);
    }
    for k in (0..genus).rev() {
        let v = bigint_pow(&pb, genus - k) * &e[k];
        e.push(v);
    }
    WeilPolynomial::from_elementary(p, genus, e)
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_sequence(f: &[BigRational]) -> Vec<QPoly> {
    let mut seq = vec![f.to_vec(), rational::derivative(f)];
    while seq.last().is_some_and(|p| !p.is_empty()) {
        let n = seq.len();
        let r = rational::rem(&seq[n - 2], &seq[n - 1]);
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq.pop();
    seq
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_at_pos_infinity(p: &[BigRational]) -> i8 {
    sign(p.last().unwrap())
}

fn sign_at_neg_infinity(p: &[BigRational]) -> i8 {
    let s = sign(p.last().unwrap());
    if (p.len() - 1) % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Number of distinct real roots of a squarefree polynomial.
fn sturm_count_all(f: &[BigRational]) -> usize {
    let seq = sturm_sequence(f);
    let lo = variations(seq.iter().map(|p| sign_at_neg_infinity(p)));
    let hi = variations(seq.iter().map(|p| sign_at_pos_infinity(p)));
    lo - hi
}

/// Number of distinct real roots strictly greater than `a`, for squarefree `f`.
fn sturm_count_above(f: &[BigRational], a: &BigRational) -> usize {
    let mut f = f.to_vec();
    if rational::eval(&f, a).is_zero() {
        let lin = vec![-a.clone(), BigRational::one()];
        f = rational::div_rem(&f, &lin).0;
    }
    if f.len() <= 1 {
        return 0;
    }
    let seq = sturm_sequence(&f);
    let at_a = variations(seq.iter().map(|p| sign(&rational::eval(p, a))));
    let hi = variations(seq.iter().map(|p| sign_at_pos_infinity(p)));
    at_a - hi
}

/// Splits `h(t) = P(t^2) + t Q(t^2)` and returns `H(u) = P(u)^2 - u Q(u)^2`,
/// whose roots are the squares of the roots of `h`.
fn squared_root_polynomial(h: &[BigRational]) -> QPoly {
    let even: QPoly = h.iter().step_by(2).cloned().collect();
    let odd: QPoly = h.iter().skip(1).step_by(2).cloned().collect();
    let mul = |a: &[BigRational], b: &[BigRational]| -> QPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let pp = mul(&even, &even);
    let mut uqq = vec![BigRational::zero()];
    uqq.extend(mul(&odd, &odd));
    let n = pp.len().max(uqq.len());
    rational::trim(
        (0..n)
            .map(|k| {
                let a = pp.get(k).cloned().unwrap_or_else(BigRational::zero);
                let b = uqq.get(k).cloned().unwrap_or_else(BigRational::zero);
                a - b
            })
            .collect(),
    )
}
