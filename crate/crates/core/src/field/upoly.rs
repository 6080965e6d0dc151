//! Dense univariate polynomials over a [`Field`], stored low degree first.
//!
//! Vectors are kept trimmed: the zero polynomial is empty and the last entry
//! of any other polynomial is nonzero.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Elem, Field};
use crate::error::{Error, Result};

pub fn trim(f: &Field, mut v: Vec<Elem>) -> Vec<Elem> {
    while v.last().is_some_and(|c| f.is_zero(c)) {
        v.pop();
    }
    v
}

pub fn degree(a: &[Elem]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant(f: &Field, c: Elem) -> Vec<Elem> {
    trim(f, vec![c])
}

pub fn monomial(f: &Field, c: Elem, deg: usize) -> Vec<Elem> {
    if f.is_zero(&c) {
        return Vec::new();
    }
    let mut v = vec![f.zero(); deg + 1];
    v[deg] = c;
    v
}

pub fn add(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(f, out)
}

pub fn neg(f: &Field, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    add(f, a, &neg(f, b))
}

pub fn scale(f: &Field, a: &[Elem], c: &Elem) -> Vec<Elem> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &Field, a: &[Elem], b: &[Elem]) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let db = degree(b).ok_or(Error::DivisionByZero)?;
    let lead_inv = f.inv(&b[db])?;
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return Ok((Vec::new(), rem));
    }
    let mut quot = vec![f.zero(); rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = f.mul(&rem[rem.len() - 1], &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, bj));
        }
        quot[k] = c;
        rem.pop();
        rem = trim(f, rem);
    }
    Ok((trim(f, quot), rem))
}

pub fn rem(f: &Field, a: &[Elem], b: &[Elem]) -> Result<Vec<Elem>> {
    Ok(divrem(f, a, b)?.1)
}

pub fn monic(f: &Field, a: &[Elem]) -> Result<Vec<Elem>> {
    match a.last() {
        None => Ok(Vec::new()),
        Some(lc) => Ok(scale(f, a, &f.inv(lc)?)),
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(f: &Field, a: &[Elem], b: &[Elem]) -> Result<Vec<Elem>> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(f, &x, &y)?;
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Returns `(g, s)` with `s*a ≡ g (mod b)` and `g` the monic gcd.
pub fn half_ext_gcd(f: &Field, a: &[Elem], b: &[Elem]) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1)?;
        let s = sub(f, &s0, &mul(f, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    match r0.last() {
        None => Ok((Vec::new(), s0)),
        Some(lc) => {
            let inv = f.inv(lc)?;
            Ok((scale(f, &r0, &inv), scale(f, &s0, &inv)))
        }
    }
}

pub fn derivative(f: &Field, a: &[Elem]) -> Vec<Elem> {
    trim(
        f,
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
            .collect(),
    )
}

pub fn eval(f: &Field, a: &[Elem], x: &Elem) -> Elem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn pow_mod(f: &Field, base: &[Elem], exp: &BigUint, modulus: &[Elem]) -> Result<Vec<Elem>> {
    let mut result = constant(f, f.one());
    result = rem(f, &result, modulus)?;
    let mut b = rem(f, base, modulus)?;
    let mut e = exp.clone();
    while !e.is_zero() {
        if e.bit(0) {
            result = rem(f, &mul(f, &result, &b), modulus)?;
        }
        b = rem(f, &mul(f, &b, &b), modulus)?;
        e >>= 1u32;
    }
    Ok(result)
}

pub fn pow(f: &Field, base: &[Elem], exp: u32) -> Vec<Elem> {
    let mut out = constant(f, f.one());
    for _ in 0..exp {
        out = mul(f, &out, base);
    }
    out
}

/// Square root of a polynomial, if it is a perfect square over the field.
/// `Err(Unsupported)` when the coefficient field cannot decide squares.
pub fn sqrt(f: &Field, a: &[Elem]) -> Result<Option<Vec<Elem>>> {
    let Some(d) = degree(a) else {
        return Ok(Some(Vec::new()));
    };
    if d % 2 == 1 {
        return Ok(None);
    }
    let Some(lead_root) = f.sqrt(&a[d])? else {
        return Ok(None);
    };
    let h = d / 2;
    // root coefficients from the top: r_h = sqrt(lc), then solve downwards
    let mut r = vec![f.zero(); h + 1];
    r[h] = lead_root;
    let two_lead_inv = f.inv(&f.add(&r[h], &r[h]))?;
    for k in (0..h).rev() {
        // coefficient of x^{h+k} in r^2 equals a[h+k]
        let mut acc = a[h + k].clone();
        for i in (k + 1)..h {
            let j = h + k - i;
            if j > h || j <= k {
                continue;
            }
            acc = f.sub(&acc, &f.mul(&r[i], &r[j]));
        }
        r[k] = f.mul(&acc, &two_lead_inv);
    }
    let r = trim(f, r);
    if mul(f, &r, &r) == trim(f, a.to_vec()) {
        Ok(Some(r))
    } else {
        Ok(None)
    }
}

/// Product of the irreducible factors occurring with odd multiplicity, via
/// Yun's squarefree decomposition. Returns `None` when the characteristic
/// interferes (a factor with vanishing derivative shows up).
pub fn odd_multiplicity_part(f: &Field, a: &[Elem]) -> Result<Option<Vec<Elem>>> {
    let a = monic(f, a)?;
    if degree(&a).unwrap_or(0) == 0 {
        return Ok(Some(a));
    }
    let da = derivative(f, &a);
    if da.is_empty() {
        return Ok(None);
    }
    let mut b = gcd(f, &a, &da)?;
    let mut c = divrem(f, &a, &b)?.0;
    let mut d = sub(f, &divrem(f, &da, &b)?.0, &derivative(f, &c));
    let mut out = constant(f, f.one());
    let mut mult = 1usize;
    let mut total = 0usize;
    while degree(&c).unwrap_or(0) > 0 {
        let g = gcd(f, &c, &d)?;
        if mult % 2 == 1 {
            out = mul(f, &out, &g);
        }
        total += mult * degree(&g).unwrap_or(0);
        c = divrem(f, &c, &g)?.0;
        d = sub(f, &divrem(f, &d, &g)?.0, &derivative(f, &c));
        mult += 1;
        b = divrem(f, &b, &g).map(|(q, _)| q).unwrap_or(b);
    }
    if total != degree(&a).unwrap_or(0) {
        return Ok(None);
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn p(f: &Field, c: &[i64]) -> Vec<Elem> {
        trim(f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f = q();
        let a = p(&f, &[-1, 0, 1]); // x^2 - 1
        let b = p(&f, &[1, 1]); // x + 1
        let (quo, r) = divrem(&f, &a, &b).unwrap();
        assert_eq!(quo, p(&f, &[-1, 1]));
        assert!(r.is_empty());
        let g = gcd(&f, &a, &p(&f, &[-1, 0, 0, 1])).unwrap();
        assert_eq!(g, p(&f, &[-1, 1]));
    }

    #[test]
    fn inverse_mod() {
        let f = q();
        let m = p(&f, &[-2, 0, 1]);
        let a = p(&f, &[1, 1]);
        let (g, s) = half_ext_gcd(&f, &a, &m).unwrap();
        assert_eq!(g, p(&f, &[1]));
        let check = rem(&f, &mul(&f, &s, &a), &m).unwrap();
        assert_eq!(check, p(&f, &[1]));
    }

    #[test]
    fn sqrt_of_square_and_nonsquare() {
        let f = q();
        let r = p(&f, &[3, -2, 1]);
        let sq = mul(&f, &r, &r);
        assert_eq!(sqrt(&f, &sq).unwrap(), Some(r));
        assert_eq!(sqrt(&f, &p(&f, &[0, -1, 0, 1])).unwrap(), None);
        assert_eq!(sqrt(&f, &p(&f, &[2, 0, 1])).unwrap(), None);
    }

    #[test]
    fn yun_odd_part() {
        let f = q();
        // (x-1)^3 (x+2)^2 x  -> odd part (x-1) x
        let a = mul(
            &f,
            &mul(&f, &pow(&f, &p(&f, &[-1, 1]), 3), &pow(&f, &p(&f, &[2, 1]), 2)),
            &p(&f, &[0, 1]),
        );
        let odd = odd_multiplicity_part(&f, &a).unwrap().unwrap();
        assert_eq!(odd, p(&f, &[0, -1, 1]));
    }
}
