#![allow(dead_code)]

use a1_core::{Elem, Field};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

pub fn field(desc: &str) -> Field {
    Field::parse(desc).unwrap()
}

/// A nonzero element from a seed: small rationals over Q, an element index
/// over a finite field.
pub fn nonzero(f: &Field, seed: (i64, i64)) -> Elem {
    if f.is_finite() {
        let q = f.size().unwrap();
        return f.element_from_index(1 + (seed.0.unsigned_abs() as u128) % (q - 1));
    }
    let mut n = seed.0 % 40;
    if n == 0 {
        n = 1;
    }
    let d = 1 + seed.1.rem_euclid(9);
    f.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d))).unwrap()
}

pub fn any_elem(f: &Field, seed: (i64, i64)) -> Elem {
    if seed.1 % 5 == 0 {
        f.zero()
    } else {
        nonzero(f, seed)
    }
}

pub fn seed() -> impl Strategy<Value = (i64, i64)> {
    (-1000i64..1000, 0i64..1000)
}

use a1_core::poly::{jacobian_determinant, standard_vars};
use a1_core::Polynomial;
use rand::Rng;

pub fn finite_elem<R: Rng>(f: &Field, rng: &mut R) -> Elem {
    f.element_from_index(rng.gen_range(0..f.size().unwrap()))
}

/// A random square system over a finite field, shifted to vanish at a random
/// point where the Jacobian is a unit. Returns `(system, point)`.
pub fn random_simple_system<R: Rng>(f: &Field, rng: &mut R) -> (Vec<Polynomial>, Vec<Elem>) {
    loop {
        let n = rng.gen_range(1..=3);
        let vars = standard_vars(n);
        let point: Vec<Elem> = (0..n).map(|_| finite_elem(f, rng)).collect();
        let fs: Vec<Polynomial> = (0..n)
            .map(|_| {
                let terms: Vec<(Vec<u32>, Elem)> = (0..rng.gen_range(1..=5))
                    .map(|_| ((0..n).map(|_| rng.gen_range(0..=2)).collect(), finite_elem(f, rng)))
                    .collect();
                let p = Polynomial::from_terms(f, &vars, terms).unwrap();
                let c = p.evaluate(&point).unwrap();
                p.sub(&Polynomial::constant(f, &vars, c))
            })
            .collect();
        let j = jacobian_determinant(&fs).unwrap().evaluate(&point).unwrap();
        if !f.is_zero(&j) {
            return (fs, point);
        }
    }
}

/// A random pair `(A, B)` in `z` with `deg B < deg A ≤ max_deg`, `B ≠ 0`,
/// not checked for coprimality.
pub fn random_p1_pair<R: Rng>(f: &Field, rng: &mut R, max_deg: usize) -> (Polynomial, Polynomial) {
    let vars = vec!["z".to_string()];
    let da = rng.gen_range(1..=max_deg);
    let db = rng.gen_range(0..da);
    let poly = |d: usize, rng: &mut R| {
        let mut terms: Vec<(Vec<u32>, Elem)> = (0..d).map(|i| (vec![i as u32], finite_elem(f, rng))).collect();
        terms.push((vec![d as u32], nonzero(f, (rng.gen_range(1..1000), 1))));
        Polynomial::from_terms(f, &vars, terms).unwrap()
    };
    (poly(da, rng), poly(db, rng))
}
