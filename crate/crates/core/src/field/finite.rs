//! Finite-field utilities: sizes, enumeration, Euler and Tonelli-Shanks,
//! Rabin's irreducibility test and construction of 𝔽_{q^r}.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{upoly, Elem, Field, Irreducibility, Kind};
use crate::arith;
use crate::error::{Error, Result};

/// Default bound on the size of a field that may be enumerated.
pub const ENUMERATION_BOUND: u128 = 10_000;

/// Exhaustive root search is used up to this size.
const ROOT_SEARCH_BOUND: u128 = 2_000_000;

impl Field {
    pub fn is_finite(&self) -> bool {
        match &*self.0 {
            Kind::Prime { .. } => true,
            Kind::Extension(e) => e.base.is_finite(),
            _ => false,
        }
    }

    /// Number of elements of a finite field (saturating).
    pub fn size(&self) -> Option<u128> {
        match &*self.0 {
            Kind::Prime { p, .. } => Some(*p as u128),
            Kind::Extension(e) => {
                let q = e.base.size()?;
                let d = (e.modulus.len() - 1) as u32;
                Some(q.checked_pow(d).unwrap_or(u128::MAX))
            }
            _ => None,
        }
    }

    fn size_big(&self) -> Option<BigUint> {
        match &*self.0 {
            Kind::Prime { p, .. } => Some(BigUint::from(*p)),
            Kind::Extension(e) => {
                let q = e.base.size_big()?;
                Some(q.pow((e.modulus.len() - 1) as u32))
            }
            _ => None,
        }
    }

    /// Element with the given enumeration index: base digits little-endian.
    pub fn element_from_index(&self, mut n: u128) -> Elem {
        match &*self.0 {
            Kind::Prime { p, .. } => Elem::Mod((n % *p as u128) as u64),
            Kind::Extension(e) => {
                let q = e.base.size().expect("finite base");
                let d = e.modulus.len() - 1;
                let mut coeffs = Vec::with_capacity(d);
                for _ in 0..d {
                    coeffs.push(e.base.element_from_index(n % q));
                    n /= q;
                }
                Elem::Poly(upoly::trim(&e.base, coeffs))
            }
            _ => panic!("element_from_index on an infinite field"),
        }
    }

    pub fn element_index(&self, a: &Elem) -> u128 {
        match (&*self.0, a) {
            (Kind::Prime { .. }, Elem::Mod(m)) => *m as u128,
            (Kind::Extension(e), Elem::Poly(v)) => {
                let q = e.base.size().expect("finite base");
                v.iter()
                    .rev()
                    .fold(0u128, |acc, c| acc * q + e.base.element_index(c))
            }
            _ => panic!("element_index on an infinite field"),
        }
    }

    /// Every element, in enumeration order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        self.elements_bounded(ENUMERATION_BOUND)
    }

    pub fn elements_bounded(&self, bound: u128) -> Result<Vec<Elem>> {
        match self.size() {
            Some(q) if q <= bound => Ok((0..q).map(|i| self.element_from_index(i)).collect()),
            _ => Err(Error::InfiniteField),
        }
    }

    /// `a^q` for `q` the size of the parent field (relative Frobenius).
    pub fn frobenius(&self, a: &Elem) -> Result<Elem> {
        let base = self.base().ok_or(Error::NotAnExtension)?;
        let q = base.size_big().ok_or(Error::InfiniteField)?;
        Ok(self.pow_big(a, &q))
    }

    /// Absolute Frobenius `a ↦ a^p`.
    pub fn absolute_frobenius(&self, a: &Elem) -> Elem {
        self.pow(a, self.characteristic())
    }

    /// The first irreducible monic polynomial of degree `r` in enumeration
    /// order defines 𝔽_{q^r} over this finite field.
    pub fn finite_extension(&self, r: usize, name: &str) -> Result<Field> {
        if !self.is_finite() {
            return Err(Error::InfiniteField);
        }
        if r == 1 {
            return Ok(self.clone());
        }
        let q = self.size().ok_or(Error::InfiniteField)?;
        let count = q.checked_pow(r as u32).ok_or(Error::InfiniteField)?;
        for idx in 0..count {
            let mut n = idx;
            let mut coeffs = Vec::with_capacity(r + 1);
            for _ in 0..r {
                coeffs.push(self.element_from_index(n % q));
                n /= q;
            }
            coeffs.push(self.one());
            if rabin_irreducible(self, &coeffs)? {
                return Field::extension(self, name, coeffs);
            }
        }
        unreachable!("irreducible polynomials of every degree exist")
    }

    /// Roots in this finite field of a univariate polynomial, in
    /// enumeration order.
    pub fn roots(&self, poly: &[Elem]) -> Result<Vec<Elem>> {
        let poly = upoly::trim(self, poly.to_vec());
        if poly.is_empty() {
            return Err(Error::ZeroInput);
        }
        if upoly::degree(&poly) == Some(0) {
            return Ok(Vec::new());
        }
        let q = self.size_big().ok_or(Error::InfiniteField)?;
        let x = vec![self.zero(), self.one()];
        let xq = upoly::pow_mod(self, &x, &q, &poly)?;
        let g = upoly::gcd(self, &poly, &upoly::sub(self, &xq, &x))?;
        if upoly::degree(&g).unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        if upoly::degree(&g) == Some(1) {
            return Ok(vec![self.neg(&g[0])]);
        }
        let elems = self.elements_bounded(ROOT_SEARCH_BOUND)?;
        Ok(elems
            .into_iter()
            .filter(|a| self.is_zero(&upoly::eval(self, &g, a)))
            .collect())
    }
}

pub fn is_square(f: &Field, a: &Elem) -> bool {
    let q = f.size_big().expect("finite field");
    let e = (q - 1u32) >> 1;
    f.is_one(&f.pow_big(a, &e))
}

pub fn first_nonresidue(f: &Field) -> Result<Elem> {
    let q = f.size().ok_or(Error::InfiniteField)?;
    (1..q)
        .map(|i| f.element_from_index(i))
        .find(|a| !is_square(f, a))
        .ok_or(Error::InfiniteField)
}

fn nonresidue(f: &Field) -> Elem {
    match &*f.0 {
        Kind::Prime { nonresidue, .. } => Elem::Mod(*nonresidue),
        Kind::Extension(e) => e.nonresidue.clone().expect("finite extension"),
        _ => unreachable!(),
    }
}

/// Tonelli-Shanks.
pub fn sqrt(f: &Field, a: &Elem) -> Result<Option<Elem>> {
    if f.is_zero(a) {
        return Ok(Some(f.zero()));
    }
    if !is_square(f, a) {
        return Ok(None);
    }
    let q = f.size_big().ok_or(Error::InfiniteField)?;
    let qm1 = &q - 1u32;
    let s = qm1.trailing_zeros().unwrap_or(0);
    let odd = &qm1 >> s;
    let z = nonresidue(f);
    let mut m = s;
    let mut c = f.pow_big(&z, &odd);
    let mut t = f.pow_big(a, &odd);
    let mut r = f.pow_big(a, &((&odd + 1u32) >> 1));
    while !f.is_one(&t) {
        let mut i = 0;
        let mut t2 = t.clone();
        while !f.is_one(&t2) {
            t2 = f.mul(&t2, &t2);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = f.mul(&b, &b);
        }
        m = i;
        c = f.mul(&b, &b);
        t = f.mul(&t, &c);
        r = f.mul(&r, &b);
    }
    Ok(Some(r))
}

fn prime_divisors(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Rabin's test for a monic polynomial over a finite field.
pub fn rabin_irreducible(f: &Field, poly: &[Elem]) -> Result<bool> {
    let d = upoly::degree(poly).ok_or(Error::ZeroInput)?;
    if d == 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    let q = f.size_big().ok_or(Error::InfiniteField)?;
    let x = vec![f.zero(), f.one()];
    // x^{q^k} mod poly for k = 1..d
    let mut powers = Vec::with_capacity(d);
    let mut cur = x.clone();
    for _ in 0..d {
        cur = upoly::pow_mod(f, &cur, &q, poly)?;
        powers.push(cur.clone());
    }
    if upoly::sub(f, &powers[d - 1], &upoly::rem(f, &x, poly)?) != Vec::<Elem>::new() {
        return Ok(false);
    }
    for l in prime_divisors(d) {
        let h = upoly::sub(f, &powers[d / l - 1], &x);
        let g = upoly::gcd(f, &h, poly)?;
        if upoly::degree(&g) != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    let mut out = vec![BigUint::one()];
    for (p, e) in arith::factor(n)? {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    Ok(out)
}

/// Rational roots of a polynomial with rational coefficients.
pub(crate) fn rational_roots(poly: &[Elem]) -> Result<Vec<BigRational>> {
    let coeffs: Vec<BigRational> = poly
        .iter()
        .map(|c| c.as_rational().cloned().ok_or(Error::FieldMismatch))
        .collect::<Result<_>>()?;
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let mut roots = Vec::new();
    let shift = ints.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        roots.push(BigRational::zero());
    }
    let ints = &ints[shift..];
    if ints.len() <= 1 {
        return Ok(roots);
    }
    let c0 = ints[0].magnitude().clone();
    let cd = ints[ints.len() - 1].magnitude().clone();
    let eval = |x: &BigRational| {
        ints.iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    };
    for p in divisors(&c0)? {
        for q in divisors(&cd)? {
            for sign in [1i32, -1] {
                let x = BigRational::new(BigInt::from(p.clone()) * sign, BigInt::from(q.clone()));
                if eval(&x).is_zero() && !roots.contains(&x) {
                    roots.push(x);
                }
            }
        }
    }
    Ok(roots)
}

/// Irreducibility of a monic separable modulus over `base`, as far as it can
/// be decided.
pub(crate) fn check_irreducible(base: &Field, modulus: &[Elem]) -> Result<Irreducibility> {
    let d = upoly::degree(modulus).unwrap_or(0);
    if d == 1 {
        return Ok(Irreducibility::Verified);
    }
    if base.is_finite() {
        return if rabin_irreducible(base, modulus)? {
            Ok(Irreducibility::Verified)
        } else {
            Err(Error::ReducibleModulus)
        };
    }
    match &*base.0 {
        Kind::Rationals => {
            if !rational_roots(modulus)?.is_empty() {
                return Err(Error::ReducibleModulus);
            }
            if d <= 3 {
                return Ok(Irreducibility::Verified);
            }
            Ok(irreducible_mod_some_prime(modulus))
        }
        Kind::Reals => {
            let disc = quadratic_discriminant(base, modulus);
            match disc {
                Some(Elem::Rat(r)) if r.is_negative() => Ok(Irreducibility::Verified),
                _ => Err(Error::ReducibleModulus),
            }
        }
        _ => {
            if d != 2 {
                return Ok(Irreducibility::Asserted);
            }
            let disc = quadratic_discriminant(base, modulus).expect("degree two");
            if base.is_zero(&disc) {
                return Err(Error::NotSeparable);
            }
            match base.is_square(&disc)? {
                super::Ternary::True => Err(Error::ReducibleModulus),
                super::Ternary::False => Ok(Irreducibility::Verified),
                super::Ternary::Unknown => Ok(Irreducibility::Asserted),
            }
        }
    }
}

fn quadratic_discriminant(base: &Field, m: &[Elem]) -> Option<Elem> {
    if m.len() != 3 {
        return None;
    }
    let four = base.from_i64(4);
    Some(base.sub(&base.mul(&m[1], &m[1]), &base.mul(&four, &base.mul(&m[2], &m[0]))))
}

/// A monic rational polynomial that stays irreducible of the same degree
/// modulo some prime is irreducible over ℚ.
fn irreducible_mod_some_prime(modulus: &[Elem]) -> Irreducibility {
    for p in (3u64..400).filter(|&p| arith::is_prime_u64(p)) {
        let Ok(fp) = Field::prime(p) else { continue };
        let reduced: Option<Vec<Elem>> = modulus
            .iter()
            .map(|c| fp.from_rational(c.as_rational()?).ok())
            .collect();
        let Some(reduced) = reduced else { continue };
        let reduced = upoly::trim(&fp, reduced);
        if reduced.len() != modulus.len() {
            continue;
        }
        if let Ok(true) = rabin_irreducible(&fp, &reduced) {
            return Irreducibility::Verified;
        }
    }
    Irreducibility::Asserted
}

/// Orbit of `a` under the Frobenius of `field` relative to `base`.
pub fn frobenius_orbit(field: &Field, base: &Field, a: &[Elem]) -> Result<Vec<Vec<Elem>>> {
    let q = base.size_big().ok_or(Error::InfiniteField)?;
    let mut orbit = vec![a.to_vec()];
    loop {
        let next: Vec<Elem> = orbit
            .last()
            .expect("nonempty")
            .iter()
            .map(|x| field.pow_big(x, &q))
            .collect();
        if next == orbit[0] {
            return Ok(orbit);
        }
        orbit.push(next);
        if orbit.len() > 64 {
            return Err(Error::Unsupported("Frobenius orbit longer than 64".into()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.elements().unwrap().len(), 5);
        let f49 = Field::parse("F7(a):a^2-3").unwrap();
        let all = f49.elements().unwrap();
        assert_eq!(all.len(), 49);
        let mut idx: Vec<u128> = all.iter().map(|a| f49.element_index(a)).collect();
        idx.dedup();
        assert_eq!(idx.len(), 49);
        let f125 = f5.finite_extension(3, "c").unwrap();
        assert_eq!(f125.elements().unwrap().len(), 125);
        assert_eq!(Field::rationals().elements(), Err(Error::InfiniteField));
    }

    #[test]
    fn half_the_units_are_squares() {
        for d in ["F3", "F5", "F7", "F11", "F13", "F5(b):b^2-2", "F7(a):a^2-3", "F3(c):c^2+1"] {
            let f = Field::parse(d).unwrap();
            let q = f.size().unwrap() as usize;
            let squares = f
                .elements()
                .unwrap()
                .iter()
                .filter(|a| !f.is_zero(a) && f.is_square(a).unwrap() == super::super::Ternary::True)
                .count();
            assert_eq!(squares, (q - 1) / 2, "{d}");
            // exhaustive squaring cross-check
            let mut image: Vec<u128> = f
                .elements()
                .unwrap()
                .iter()
                .filter(|a| !f.is_zero(a))
                .map(|a| f.element_index(&f.mul(a, a)))
                .collect();
            image.sort();
            image.dedup();
            assert_eq!(image.len(), (q - 1) / 2, "{d}");
        }
    }

    #[test]
    fn tonelli_shanks_roots() {
        let f = Field::parse("F5(b):b^2-2").unwrap();
        for a in f.elements().unwrap() {
            if let Some(r) = f.sqrt(&a).unwrap() {
                assert_eq!(f.mul(&r, &r), a);
            }
        }
        let f13 = Field::prime(13).unwrap();
        let r = f13.sqrt(&f13.from_i64(10)).unwrap().unwrap();
        assert_eq!(f13.mul(&r, &r), f13.from_i64(10));
    }

    #[test]
    fn trace_of_one_in_f25() {
        let f5 = Field::prime(5).unwrap();
        let f25 = f5.finite_extension(2, "b").unwrap();
        assert_eq!(f25.field_trace(&f25.one(), &f5).unwrap(), f5.from_i64(2));
        // Frobenius oracle: Tr(a) = a + a^5
        for a in f25.elements().unwrap() {
            let conj = f25.frobenius(&a).unwrap();
            let sum = f25.add(&a, &conj);
            assert_eq!(f25.lift_from_base(&f25.field_trace(&a, &f5).unwrap()), sum);
        }
    }

    #[test]
    fn rabin_detects_reducible() {
        let f5 = Field::prime(5).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f5.from_i64(x)).collect::<Vec<_>>();
        assert!(rabin_irreducible(&f5, &e(&[2, 0, 1])).unwrap()); // x^2 + 2
        assert!(!rabin_irreducible(&f5, &e(&[1, 0, 1])).unwrap()); // x^2 + 1 = (x-2)(x+2)
        assert!(!rabin_irreducible(&f5, &e(&[4, 0, 0, 0, 1])).unwrap());
        assert_eq!(Field::parse("F5(b):b^2+1"), Err(Error::ReducibleModulus));
        assert_eq!(Field::parse("Q(a):a^2-4"), Err(Error::ReducibleModulus));
    }

    #[test]
    fn roots_in_extension() {
        let f7 = Field::prime(7).unwrap();
        let f49 = f7.finite_extension(2, "a").unwrap();
        // x^2 + 1 has no roots in F7 but two in F49
        let p7 = vec![f7.one(), f7.zero(), f7.one()];
        assert!(f7.roots(&p7).unwrap().is_empty());
        let p49: Vec<Elem> = p7.iter().map(|c| f49.lift_from_base(c)).collect();
        assert_eq!(f49.roots(&p49).unwrap().len(), 2);
    }
}
