use std::collections::HashMap;

use num_bigint::BigInt;
use nsrank_core::finite_field::{make_extension, FieldElement, FiniteField};
use nsrank_core::{HyperellipticCurve, IntegerPolynomial, DEFAULT_Q_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample_curve() -> HyperellipticCurve {
    HyperellipticCurve::from_i64(&[3, 0, 1, -2, 2, -2, 1]).unwrap()
}

/// Brute-force oracle: tally y^2 over all y, then count (x, y) pairs with
/// y^2 = f(x). Points at infinity: 1 for odd degree, else the number of
/// square roots of the leading coefficient. Uses no character evaluation.
fn brute_force_count(f_coeffs: &[i64], field: &FiniteField) -> u64 {
    let mut square_roots: HashMap<FieldElement, u64> = HashMap::new();
    for y in field.enumerate() {
        *square_roots.entry(field.mul(&y, &y)).or_default() += 1;
    }
    let coeffs: Vec<FieldElement> = f_coeffs.iter().map(|&c| field.from_i64(c)).collect();
    let eval = |x: &FieldElement| {
        let mut acc = field.zero();
        let mut power = field.one();
        for c in &coeffs {
            acc = field.add(&acc, &field.mul(c, &power));
            power = field.mul(&power, x);
        }
        acc
    };
    let affine: u64 = field
        .enumerate()
        .map(|x| square_roots.get(&eval(&x)).copied().unwrap_or(0))
        .sum();
    let degree = f_coeffs.len() - 1;
    let infinity = if degree % 2 == 1 {
        1
    } else {
        square_roots.get(&field.from_i64(*f_coeffs.last().unwrap())).copied().unwrap_or(0)
    };
    affine + infinity
}

#[test]
fn sample_curve_prime_field_counts() {
    let c = sample_curve();
    // x = 4 is the only x in F_5 with f(x) a nonzero square (f(4) = 1)
    assert_eq!(c.count_points(5, 1, DEFAULT_Q_CAP).unwrap(), 4);
    assert_eq!(c.count_points(13, 1, DEFAULT_Q_CAP).unwrap(), 21);
    for (p, n) in [(5, 1), (5, 2), (5, 3), (13, 1), (13, 2)] {
        let field = make_extension(p, n).unwrap();
        assert_eq!(
            c.count_points(p, n, DEFAULT_Q_CAP).unwrap(),
            brute_force_count(&[3, 0, 1, -2, 2, -2, 1], &field),
            "p = {p}, n = {n}"
        );
    }
}

#[test]
fn quintic_over_f3() {
    let c = HyperellipticCurve::from_i64(&[1, 0, 0, 0, 0, 1]).unwrap();
    assert_eq!(c.count_points(3, 1, DEFAULT_Q_CAP).unwrap(), 4);
    let field = make_extension(3, 1).unwrap();
    assert_eq!(brute_force_count(&[1, 0, 0, 0, 0, 1], &field), 4);
}

#[test]
fn brute_force_agrees_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 12 {
        let deg = rng.gen_range(3..=6);
        let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-5..=5)).collect();
        if coeffs[deg] == 0 {
            coeffs[deg] = 1;
        }
        let Ok(curve) = HyperellipticCurve::from_i64(&coeffs) else { continue };
        for (p, n) in [(3, 2), (5, 2), (7, 1), (7, 2), (11, 1)] {
            if !curve.has_good_reduction(p) {
                continue;
            }
            let field = make_extension(p, n).unwrap();
            assert_eq!(
                curve.count_points(p, n, DEFAULT_Q_CAP).unwrap(),
                brute_force_count(&coeffs, &field),
                "{coeffs:?} over F_{p}^{n}"
            );
        }
        checked += 1;
    }
}

#[test]
fn weil_bound_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut curves = vec![sample_curve()];
    while curves.len() < 10 {
        let coeffs: Vec<i64> = (0..7).map(|_| rng.gen_range(-5..=5)).collect();
        if let Ok(c) = HyperellipticCurve::from_i64(&coeffs) {
            curves.push(c);
        }
    }
    for c in &curves {
        let g = c.genus() as i128;
        for p in [3u64, 5, 7, 11, 13] {
            if !c.has_good_reduction(p) {
                continue;
            }
            for n in 1..=3u32 {
                let q = (p as i128).pow(n);
                let count = c.count_points(p, n as usize, DEFAULT_Q_CAP).unwrap() as i128;
                let dev = count - q - 1;
                assert!(dev * dev <= 4 * g * g * q, "p = {p}, n = {n}, N = {count}");

                // affine character sum bounded by (deg f - 1) sqrt q
                let field = make_extension(p, n as usize).unwrap();
                let s = c.character_sum(&field) as i128;
                let d = c.degree() as i128 - 1;
                assert!(s * s <= d * d * q);
            }
        }
    }
}

#[test]
fn translation_invariance() {
    let bases: [&[i64]; 3] = [&[3, 0, 1, -2, 2, -2, 1], &[1, 0, 0, 0, 0, 1], &[0, -1, 0, 1]];
    for base in bases {
        let curve = HyperellipticCurve::from_i64(base).unwrap();
        for c in [-3i64, 1, 2, 7] {
            let shifted_poly = IntegerPolynomial::from_i64(base).shift(&BigInt::from(c));
            let shifted = HyperellipticCurve::new(shifted_poly.into_coeffs()).unwrap();
            for p in [5u64, 7, 13] {
                if !curve.has_good_reduction(p) {
                    continue;
                }
                assert!(shifted.has_good_reduction(p));
                for n in 1..=2 {
                    assert_eq!(
                        curve.count_points(p, n, DEFAULT_Q_CAP).unwrap(),
                        shifted.count_points(p, n, DEFAULT_Q_CAP).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn count_is_independent_of_modulus() {
    let standard = make_extension(5, 2).unwrap();
    let alternate = FiniteField::with_modulus(5, &[3, 0, 1]).unwrap();
    assert_ne!(standard.modulus(), alternate.modulus());
    let other = FiniteField::with_modulus(5, &[2, 1, 1]).unwrap();
    for coeffs in [&[3i64, 0, 1, -2, 2, -2, 1][..], &[1, 0, 0, 0, 0, 1], &[1, 2, 0, -1, 0, 3]] {
        let c = HyperellipticCurve::from_i64(coeffs).unwrap();
        if !c.has_good_reduction(5) {
            continue;
        }
        let a = c.count_points_in(&standard);
        assert_eq!(a, c.count_points_in(&alternate));
        assert_eq!(a, c.count_points_in(&other));
    }
}
