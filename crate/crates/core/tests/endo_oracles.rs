use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use nsrank_core::endo::{
    discriminant_gcd, is_absolutely_simple, is_irreducible_over_q, minpoly_power,
    poly_discriminant, simplicity_test_set, SimplicityWitness,
};
use nsrank_core::poly::{resultant, sylvester_matrix};
use nsrank_core::{IntegerPolynomial, WeilPolynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(c: &[i64]) -> IntegerPolynomial {
    IntegerPolynomial::from_i64(c)
}

fn weil(prime: u64, desc: &[i64]) -> WeilPolynomial {
    let c: Vec<BigInt> = desc.iter().map(|&v| BigInt::from(v)).collect();
    WeilPolynomial::from_descending(prime, (desc.len() - 1) / 2, &c).unwrap()
}

/// Plain Gaussian elimination over Q, independent of the fraction-free path.
fn rational_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= a[k][k].clone();
        for i in k + 1..n {
            let factor = &a[i][k] / &a[k][k];
            for j in k..n {
                let d = &factor * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

/// Lagrange interpolation through (x_i, y_i) with integer nodes.
fn interpolate(points: &[(i64, BigInt)]) -> Vec<BigRational> {
    let n = points.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b.clone();
                next[k] -= b * BigRational::from_integer(BigInt::from(*xj));
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(xi - xj));
        }
        let scale = BigRational::from_integer(yi.clone()) / denom;
        for (k, b) in basis.into_iter().enumerate() {
            out[k] += b * &scale;
        }
    }
    out
}

/// `Res_y(f(y), X - y^d)` as a polynomial in X, by evaluating at integer X
/// and interpolating.
fn power_resultant(f: &IntegerPolynomial, d: usize) -> Vec<BigRational> {
    let n = f.degree().unwrap();
    let points: Vec<(i64, BigInt)> = (0..=n as i64)
        .map(|x| {
            let mut g = vec![BigInt::zero(); d + 1];
            g[0] = BigInt::from(x);
            g[d] = BigInt::from(-1);
            (x, resultant(f, &IntegerPolynomial::new(g)))
        })
        .collect();
    interpolate(&points)
}

fn divides(a: &IntegerPolynomial, b: &[BigRational]) -> bool {
    // remainder of b modulo a over Q
    let a: Vec<BigRational> = a.to_rational();
    let mut r: Vec<BigRational> = b.to_vec();
    while r.last().is_some_and(Zero::is_zero) {
        r.pop();
    }
    let da = a.len() - 1;
    while r.len() > da {
        let c = r.last().unwrap() / a.last().unwrap();
        let shift = r.len() - 1 - da;
        for (k, ak) in a.iter().enumerate() {
            r[shift + k] -= &c * ak;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r.is_empty()
}

#[test]
fn discriminants_of_frobenius_polynomials() {
    // values frozen from an independent symbolic computation
    let d5 = poly_discriminant(&p(&[25, -10, 3, -2, 1])).unwrap();
    let d13 = poly_discriminant(&p(&[169, 91, 35, 7, 1])).unwrap();
    assert_eq!(d5, BigInt::from(2_278_400));
    assert_eq!(d13, BigInt::from(33_502_053));
    assert_eq!(discriminant_gcd(&d5, &d13).unwrap(), BigInt::one());
}

#[test]
fn discriminant_matches_rational_determinant() {
    for f in [p(&[25, -10, 3, -2, 1]), p(&[169, 91, 35, 7, 1]), p(&[1, 0, 1])] {
        let d = f.degree().unwrap();
        let res = rational_determinant(&sylvester_matrix(&f, &f.derivative()));
        let expected = if (d * (d - 1) / 2) % 2 == 1 { -res } else { res };
        assert_eq!(poly_discriminant(&f).unwrap(), expected);
    }
}

#[test]
fn fraction_free_and_rational_elimination_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let df = rng.gen_range(1..=4);
        let dg = rng.gen_range(1..=4);
        let mut fc: Vec<i64> = (0..=df).map(|_| rng.gen_range(-9..=9)).collect();
        let mut gc: Vec<i64> = (0..=dg).map(|_| rng.gen_range(-9..=9)).collect();
        fc[df] = if fc[df] == 0 { 1 } else { fc[df] };
        gc[dg] = if gc[dg] == 0 { -2 } else { gc[dg] };
        let (f, g) = (p(&fc), p(&gc));
        assert_eq!(resultant(&f, &g), rational_determinant(&sylvester_matrix(&f, &g)));
    }
}

#[test]
fn squares_have_zero_discriminant() {
    let f = &p(&[1, -1]).pow(2) * &p(&[1, 0, 1]);
    assert!(poly_discriminant(&f).unwrap().is_zero());
    let g = &p(&[3, 1, 1]).pow(2) * &p(&[-2, 1]);
    assert!(poly_discriminant(&g).unwrap().is_zero());
    assert!(!poly_discriminant(&p(&[3, 1, 1])).unwrap().is_zero());
}

#[test]
fn minpoly_divides_power_resultant() {
    let cases = [p(&[25, -10, 3, -2, 1]), p(&[169, 91, 35, 7, 1]), p(&[25, 0, 0, 0, 1]), p(&[1, 0, 1]), p(&[2, 0, 3, 0, 1])];
    for f in &cases {
        for d in [1usize, 2, 3, 4, 6, 8] {
            let m = minpoly_power(f, d as u64).unwrap();
            let r = power_resultant(f, d);
            assert!(divides(&m, &r), "f = {f}, d = {d}, minpoly {m}");
        }
    }
}

#[test]
fn minpoly_degree_divides_field_degree() {
    for f in [p(&[25, -10, 3, -2, 1]), p(&[169, 91, 35, 7, 1]), p(&[25, 0, 0, 0, 1]), p(&[-2, 0, 0, 1])] {
        assert!(is_irreducible_over_q(&f).unwrap());
        let n = f.degree().unwrap();
        for d in 1..=12 {
            let deg = minpoly_power(&f, d).unwrap().degree().unwrap();
            assert_eq!(n % deg, 0, "f = {f}, d = {d}");
        }
    }
}

#[test]
fn absolute_simplicity_of_frobenius_polynomials() {
    for w in [weil(5, &[1, -2, 3, -10, 25]), weil(13, &[1, 7, 35, 91, 169])] {
        let report = is_absolutely_simple(&w).unwrap();
        assert!(report.is_absolutely_simple());
        let tested: Vec<u64> = report.degrees.iter().map(|&(d, _)| d).collect();
        assert_eq!(tested, simplicity_test_set(2));
        assert!(report.degrees.iter().all(|&(_, deg)| deg == 4));
    }
}

#[test]
fn supersingular_counterexample() {
    let report = is_absolutely_simple(&weil(5, &[1, 0, 0, 0, 25])).unwrap();
    assert!(!report.is_absolutely_simple());
    // pi^2 already satisfies y^2 + 25, so the first drop is at d = 2
    assert_eq!(report.witness, Some(SimplicityWitness::DegreeDrop { d: 2, degree: 2 }));
    assert_eq!(report.offending(), vec![2, 4, 6, 8, 10, 12]);
    assert!(report.degrees.contains(&(8, 1)));
    assert_eq!(minpoly_power(&p(&[25, 0, 0, 0, 1]), 8).unwrap(), p(&[-625, 1]));
}

#[test]
fn reducible_weil_polynomial_witness() {
    // (x^2 - 2x + 5)(x^2 + 5): both factors are Weil polynomials for p = 5
    let f = &p(&[5, -2, 1]) * &p(&[5, 0, 1]);
    let mut desc: Vec<BigInt> = f.coeffs().to_vec();
    desc.reverse();
    let w = WeilPolynomial::from_descending(5, 2, &desc).unwrap();
    assert!(w.validate_weil());
    let report = is_absolutely_simple(&w).unwrap();
    assert_eq!(report.witness, Some(SimplicityWitness::Reducible));
}

#[test]
fn simplicity_invariant_under_twist() {
    for w in [weil(5, &[1, -2, 3, -10, 25]), weil(13, &[1, 7, 35, 91, 169]), weil(5, &[1, 0, 0, 0, 25])] {
        let twisted = w.to_polynomial().negate_variable();
        let mut desc: Vec<BigInt> = twisted.coeffs().to_vec();
        desc.reverse();
        let tw = WeilPolynomial::from_descending(w.prime(), 2, &desc).unwrap();
        assert!(tw.validate_weil());
        assert_eq!(
            is_absolutely_simple(&w).unwrap().is_absolutely_simple(),
            is_absolutely_simple(&tw).unwrap().is_absolutely_simple()
        );
    }
}

#[test]
fn invalid_weil_is_rejected() {
    assert!(is_absolutely_simple(&weil(5, &[1, 0, 0, 0, 1])).is_err());
}
