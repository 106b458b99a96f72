use nsrank_core::finite_field::{make_extension, FiniteField};
use proptest::prelude::*;

/// Every field with q <= 169 that the invariants are checked on exhaustively.
fn small_fields() -> Vec<FiniteField> {
    [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2), (7, 2), (11, 2), (13, 2), (3, 3), (3, 4), (5, 3)]
        .into_iter()
        .map(|(p, n)| make_extension(p, n).unwrap())
        .filter(|f| f.cardinality() <= 169)
        .collect()
}

#[test]
fn character_is_multiplicative() {
    for f in small_fields() {
        let elems: Vec<_> = f.enumerate().skip(1).collect();
        let chars: Vec<i8> = elems.iter().map(|a| f.quadratic_character(a)).collect();
        for (a, ca) in elems.iter().zip(&chars) {
            for (b, cb) in elems.iter().zip(&chars) {
                assert_eq!(f.quadratic_character(&f.mul(a, b)), ca * cb, "q = {}", f.cardinality());
            }
        }
    }
}

#[test]
fn half_the_units_are_squares() {
    for f in small_fields() {
        let q = f.cardinality();
        let plus = f.enumerate().filter(|a| f.quadratic_character(a) == 1).count() as u64;
        assert_eq!(plus, (q - 1) / 2);
        // and they are exactly the squares
        let mut squares: Vec<_> = f.enumerate().skip(1).map(|a| f.mul(&a, &a)).collect();
        squares.sort();
        squares.dedup();
        assert_eq!(squares.len() as u64, plus);
        assert!(squares.iter().all(|s| f.quadratic_character(s) == 1));
    }
}

#[test]
fn fermat_little_theorem() {
    for f in small_fields() {
        let q = f.cardinality();
        for a in f.enumerate() {
            assert_eq!(f.pow(&a, q), a);
        }
    }
}

#[test]
fn enumeration_visits_each_element_once() {
    for f in small_fields() {
        let mut all: Vec<_> = f.enumerate().collect();
        let q = all.len() as u64;
        assert_eq!(q, f.cardinality());
        assert!(all.windows(2).all(|w| w[0].coeffs().iter().rev().cmp(w[1].coeffs().iter().rev()).is_lt()));
        all.dedup();
        assert_eq!(all.len() as u64, q);
    }
}

#[test]
fn alternate_modulus_is_a_field() {
    // x^2 + 3 is also irreducible over F_5 (-3 = 2 is a non-square)
    let f = FiniteField::with_modulus(5, &[3, 0, 1]).unwrap();
    assert_eq!(f.cardinality(), 25);
    assert!(FiniteField::with_modulus(5, &[1, 0, 1]).is_err());
    for a in f.enumerate().skip(1) {
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
    }
}

fn field_strategy() -> impl Strategy<Value = FiniteField> {
    prop::sample::select(vec![(5u64, 3usize), (7, 2), (13, 4), (101, 2), (3, 7)])
        .prop_map(|(p, n)| make_extension(p, n).unwrap())
}

proptest! {
    #[test]
    fn ring_laws_hold(f in field_strategy(), seeds in prop::array::uniform3(any::<u64>())) {
        let [a, b, c] = seeds.map(|s| f.element_at(s % f.cardinality()));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        if let Some(inv) = f.inv(&a) {
            prop_assert_eq!(f.mul(&a, &inv), f.one());
        }
    }
}
