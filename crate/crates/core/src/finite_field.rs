//! Arithmetic in F_p and F_{p^n}.
//!
//! An extension field is represented as F_p[t]/(m(t)) for a fixed monic
//! irreducible `m` of degree n. Elements are coefficient vectors of length n
//! with residues normalized into `[0, p)`, so equality is structural. For
//! n = 1 the modulus is `t` and elements are plain residues.

use thiserror::Error;

use crate::arith::{is_prime, prime_divisors};

/// Largest supported characteristic. Keeps every product of two residues plus
/// an accumulator inside a `u64`.
pub const MAX_CHARACTERISTIC: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element has {got} coefficients, field degree is {expected}")]
    DegreeMismatch { expected: usize, got: usize },
}

/// F_{p^n} presented as F_p[t]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
    q: u64,
}

/// An element of some [`FiniteField`]: `n` residues, ascending powers of the
/// generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

fn check_characteristic(p: u64) -> Result<(), FieldError> {
    if p == 2 {
        return Err(FieldError::InvalidParameter(
            "characteristic 2 is not supported".into(),
        ));
    }
    if !is_prime(p) {
        return Err(FieldError::InvalidParameter(format!("{p} is not prime")));
    }
    if p > MAX_CHARACTERISTIC {
        return Err(FieldError::InvalidParameter(format!(
            "characteristic {p} exceeds {MAX_CHARACTERISTIC}"
        )));
    }
    Ok(())
}

/// Builds F_{p^n} using the lexicographically first monic irreducible of
/// degree n, scanning the non-leading coefficients as a base-p counter with
/// the constant term least significant.
pub fn make_extension(p: u64, n: usize) -> Result<FiniteField, FieldError> {
    check_characteristic(p)?;
    if n < 1 {
        return Err(FieldError::InvalidParameter("extension degree must be >= 1".into()));
    }
    let q = checked_cardinality(p, n)?;
    if n == 1 {
        return Ok(FiniteField { p, n, modulus: vec![0, 1], q });
    }
    let mut candidate = vec![0u64; n + 1];
    candidate[n] = 1;
    loop {
        if fp_poly::is_irreducible_unchecked(p, &candidate) {
            return Ok(FiniteField { p, n, modulus: candidate, q });
        }
        // base-p increment of candidate[0..n]; a monic irreducible always
        // exists, so this terminates before wrapping
        let mut k = 0;
        loop {
            candidate[k] += 1;
            if candidate[k] < p {
                break;
            }
            candidate[k] = 0;
            k += 1;
            assert!(k < n, "no irreducible polynomial of degree {n} over F_{p}");
        }
    }
}

fn checked_cardinality(p: u64, n: usize) -> Result<u64, FieldError> {
    u32::try_from(n)
        .ok()
        .and_then(|n| p.checked_pow(n))
        .ok_or_else(|| FieldError::InvalidParameter(format!("{p}^{n} does not fit in 64 bits")))
}

/// Rabin's test. `poly` is ascending, must be monic of degree >= 1.
pub fn is_irreducible(p: u64, poly: &[u64]) -> Result<bool, FieldError> {
    check_characteristic(p)?;
    let poly = fp_poly::normalize(p, poly);
    match poly.last() {
        None => Err(FieldError::InvalidParameter("zero polynomial".into())),
        Some(&lc) if lc != 1 => Err(FieldError::InvalidParameter("polynomial is not monic".into())),
        _ if poly.len() == 1 => Err(FieldError::InvalidParameter("constant polynomial".into())),
        _ => Ok(fp_poly::is_irreducible_unchecked(p, &poly)),
    }
}

impl FiniteField {
    /// F_{p^n} with a caller-chosen modulus, which must be monic irreducible.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, FieldError> {
        if !is_irreducible(p, modulus)? {
            return Err(FieldError::InvalidParameter("modulus is reducible".into()));
        }
        let modulus = fp_poly::normalize(p, modulus);
        let n = modulus.len() - 1;
        let q = checked_cardinality(p, n)?;
        Ok(Self { p, n, modulus, q })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn cardinality(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.n {
            return Err(FieldError::DegreeMismatch { expected: self.n, got: coeffs.len() });
        }
        Ok(FieldElement { coeffs: coeffs.iter().map(|c| c % self.p).collect() })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.n] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, a: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = a.rem_euclid(self.p as i64) as u64;
        e
    }

    /// Image of a residue already reduced mod p.
    pub fn from_residue(&self, r: u64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = r % self.p;
        e
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % p).collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement { coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect() }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = self.zero();
        let mut scratch = Scratch::new(self.n);
        self.mul_into(&a.coeffs, &b.coeffs, &mut out.coeffs, &mut scratch);
        out
    }

    pub fn pow(&self, a: &FieldElement, exp: u64) -> FieldElement {
        let mut out = self.zero();
        let mut scratch = Scratch::new(self.n);
        self.pow_into(&a.coeffs, exp, &mut out.coeffs, &mut scratch);
        out
    }

    /// Multiplicative inverse `a^(q-2)`; `None` for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        (!self.is_zero(a)).then(|| self.pow(a, self.q - 2))
    }

    /// 0 at zero, +1 on nonzero squares, -1 otherwise; computed as the
    /// Euler criterion `a^((q-1)/2)`.
    pub fn quadratic_character(&self, a: &FieldElement) -> i8 {
        let mut scratch = Scratch::new(self.n);
        self.character_of(&a.coeffs, &mut scratch)
    }

    /// Element whose coefficient vector is the base-p expansion of `index`,
    /// constant term least significant.
    pub fn element_at(&self, mut index: u64) -> FieldElement {
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        e
    }

    /// All q elements, in lexicographic order of coefficient vectors.
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.element_at(i))
    }

    /// Advances `coeffs` to the next element in enumeration order; returns
    /// false after wrapping to zero.
    pub(crate) fn step(&self, coeffs: &mut [u64]) -> bool {
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < self.p {
                return true;
            }
            *c = 0;
        }
        false
    }

    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut Scratch) {
        let p = self.p;
        let n = self.n;
        let prod = &mut scratch.prod;
        prod.iter_mut().for_each(|c| *c = 0);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        // fold degrees >= n back using t^n = -(m_0 + ... + m_{n-1} t^{n-1})
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (k, &mk) in self.modulus[..n].iter().enumerate() {
                let idx = d - n + k;
                prod[idx] = (prod[idx] + (p - c) * mk) % p;
            }
            prod[d] = 0;
        }
        out.copy_from_slice(&prod[..n]);
    }

    pub(crate) fn pow_into(&self, a: &[u64], mut exp: u64, out: &mut [u64], scratch: &mut Scratch) {
        out.iter_mut().for_each(|c| *c = 0);
        out[0] = 1;
        let mut base = std::mem::take(&mut scratch.base);
        base.clear();
        base.extend_from_slice(a);
        let mut tmp = std::mem::take(&mut scratch.tmp);
        while exp > 0 {
            if exp & 1 == 1 {
                self.mul_into(out, &base, &mut tmp, scratch);
                out.copy_from_slice(&tmp);
            }
            exp >>= 1;
            if exp > 0 {
                self.mul_into(&base, &base, &mut tmp, scratch);
                base.copy_from_slice(&tmp);
            }
        }
        scratch.base = base;
        scratch.tmp = tmp;
    }

    pub(crate) fn character_of(&self, a: &[u64], scratch: &mut Scratch) -> i8 {
        if a.iter().all(|&c| c == 0) {
            return 0;
        }
        let mut r = std::mem::take(&mut scratch.result);
        self.pow_into(a, (self.q - 1) / 2, &mut r, scratch);
        let rest_zero = r[1..].iter().all(|&c| c == 0);
        let value = match (r[0], rest_zero) {
            (1, true) => 1,
            (c, true) if c == self.p - 1 => -1,
            _ => unreachable!("Euler criterion produced a non-sign value"),
        };
        scratch.result = r;
        value
    }
}

/// Reusable buffers for allocation-free multiplication in hot loops.
#[derive(Debug)]
pub(crate) struct Scratch {
    prod: Vec<u64>,
    base: Vec<u64>,
    tmp: Vec<u64>,
    result: Vec<u64>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            prod: vec![0; 2 * n - 1],
            base: Vec::with_capacity(n),
            tmp: vec![0; n],
            result: vec![0; n],
        }
    }
}

/// Polynomials over F_p as ascending residue vectors, trimmed.
pub mod fp_poly {
    use super::prime_divisors;

    pub fn normalize(p: u64, a: &[u64]) -> Vec<u64> {
        trim(a.iter().map(|c| c % p).collect())
    }

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        assert!(a % p != 0, "inverse of zero");
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|k| {
                    let x = a.get(k).copied().unwrap_or(0);
                    let y = b.get(k).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    pub fn mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = r[r.len() - 1] * lead_inv % p;
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p - c) * bk % p) % p;
            }
            r = trim(r);
        }
        r
    }

    /// Monic gcd.
    pub fn gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(p, &a, &b);
            a = b;
            b = r;
        }
        if let Some(&lc) = a.last() {
            let inv = inv_mod(lc, p);
            a.iter_mut().for_each(|c| *c = *c * inv % p);
        }
        a
    }

    pub fn derivative(p: u64, a: &[u64]) -> Vec<u64> {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| (k as u64 % p) * c % p)
                .collect(),
        )
    }

    /// Squarefree over F_p: gcd(a, a') is a nonzero constant.
    pub fn is_squarefree(p: u64, a: &[u64]) -> bool {
        let a = normalize(p, a);
        if a.is_empty() {
            return false;
        }
        gcd(p, &a, &derivative(p, &a)).len() == 1
    }

    /// `base^exp mod m`.
    pub fn pow_mod(p: u64, base: &[u64], mut exp: u64, m: &[u64]) -> Vec<u64> {
        let mut result = rem(p, &[1], m);
        let mut b = rem(p, base, m);
        while exp > 0 {
            if exp & 1 == 1 {
                result = rem(p, &mul(p, &result, &b), m);
            }
            b = rem(p, &mul(p, &b, &b), m);
            exp >>= 1;
        }
        result
    }

    /// `x^(p^k) mod m` by k successive p-th powers.
    pub fn frobenius_power_of_x(p: u64, k: usize, m: &[u64]) -> Vec<u64> {
        (0..k).fold(rem(p, &[0, 1], m), |acc, _| pow_mod(p, &acc, p, m))
    }

    /// Rabin's test on a normalized monic polynomial of degree >= 1.
    pub fn is_irreducible_unchecked(p: u64, f: &[u64]) -> bool {
        let d = f.len() - 1;
        if d == 1 {
            return true;
        }
        let x = rem(p, &[0, 1], f);
        if frobenius_power_of_x(p, d, f) != x {
            return false;
        }
        prime_divisors(d as u64).into_iter().all(|r| {
            let h = sub(p, &frobenius_power_of_x(p, d / r as usize, f), &x);
            gcd(p, &h, f).len() == 1
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive root search oracle for quadratics.
    fn has_root(p: u64, poly: &[u64]) -> bool {
        (0..p).any(|x| poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_extension(2, 1).is_err());
        assert!(make_extension(9, 1).is_err());
        assert!(make_extension(5, 0).is_err());
        assert!(is_irreducible(5, &[1, 2]).is_err());
        assert!(is_irreducible(5, &[3]).is_err());
    }

    #[test]
    fn prime_field_is_trivial() {
        let f = make_extension(5, 1).unwrap();
        assert_eq!(f.cardinality(), 5);
        assert_eq!(f.modulus(), &[0, 1]);
        let elems: Vec<u64> = f.enumerate().map(|e| e.coeffs()[0]).collect();
        assert_eq!(elems, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn first_quadratic_mod_5() {
        let f = make_extension(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 0, 1]);
        // oracle: x^2 + c irreducible iff -c not in the squares {0, 1, 4}
        let squares: Vec<u64> = (0..5).map(|a| a * a % 5).collect();
        for c in 0..2 {
            assert!(squares.contains(&((5 - c) % 5)));
        }
        assert!(!squares.contains(&3));
    }

    #[test]
    fn quadratic_mod_13_has_nonsquare_discriminant() {
        let f = make_extension(13, 2).unwrap();
        let m = f.modulus();
        let disc = (m[1] * m[1] + 13 * 4 - 4 * m[0] % 13) % 13;
        let squares: Vec<u64> = (0..13).map(|a| a * a % 13).collect();
        assert!(!squares.contains(&disc));
        assert!(!has_root(13, m));
    }

    #[test]
    fn irreducibility_matches_root_search() {
        assert!(!is_irreducible(5, &[1, 0, 1]).unwrap());
        assert!(is_irreducible(5, &[2, 0, 1]).unwrap());
        assert!(is_irreducible(5, &[4, 1]).unwrap());
        for p in [3u64, 5, 7, 11] {
            for b in 0..p {
                for c in 0..p {
                    let poly = [c, b, 1];
                    assert_eq!(is_irreducible(p, &poly).unwrap(), !has_root(p, &poly));
                }
            }
        }
    }

    #[test]
    fn irreducible_quartic_count_mod_3() {
        // number of monic irreducible quartics over F_3 is (81 - 9) / 4 = 18
        let mut count = 0;
        for idx in 0..81u64 {
            let poly = [idx % 3, idx / 3 % 3, idx / 9 % 3, idx / 27, 1];
            if is_irreducible(3, &poly).unwrap() {
                count += 1;
            }
        }
        assert_eq!(count, 18);
    }

    #[test]
    fn character_examples() {
        let f = make_extension(5, 1).unwrap();
        assert_eq!(f.quadratic_character(&f.from_i64(4)), 1);
        assert_eq!(f.quadratic_character(&f.from_i64(3)), -1);
        assert_eq!(f.quadratic_character(&f.zero()), 0);
        let g = make_extension(13, 3).unwrap();
        assert_eq!(g.quadratic_character(&g.zero()), 0);
    }

    #[test]
    fn enumeration_order_and_count() {
        let f = make_extension(5, 2).unwrap();
        let first: Vec<FieldElement> = f.enumerate().take(5).collect();
        let expected: Vec<FieldElement> = (0..5).map(|a| f.from_i64(a)).collect();
        assert_eq!(first, expected);
        assert_eq!(make_extension(13, 2).unwrap().enumerate().count(), 169);
    }

    #[test]
    fn deterministic_modulus() {
        for (p, n) in [(5, 3), (7, 2), (13, 4), (3, 5)] {
            assert_eq!(make_extension(p, n).unwrap(), make_extension(p, n).unwrap());
        }
    }

    #[test]
    fn inverse_and_zero() {
        let f = make_extension(7, 3).unwrap();
        assert!(f.inv(&f.zero()).is_none());
        for a in f.enumerate().skip(1) {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }

    #[test]
    fn squarefree_mod_p() {
        // (x - 1)^2 (x + 1) mod 5
        assert!(!fp_poly::is_squarefree(5, &fp_poly::mul(5, &[4, 1], &fp_poly::mul(5, &[4, 1], &[1, 1]))));
        assert!(fp_poly::is_squarefree(5, &[4, 0, 1]));
        // x^5 - x over F_5 is squarefree; x^5 has zero derivative
        assert!(fp_poly::is_squarefree(5, &[0, 4, 0, 0, 0, 1]));
        assert!(!fp_poly::is_squarefree(5, &[0, 0, 0, 0, 0, 1]));
    }
}
