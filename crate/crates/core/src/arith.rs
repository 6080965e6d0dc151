//! Integer number theory used by the square-class and Hasse-Witt machinery.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_BOUND: u32 = 10_000;
const RHO_BUDGET: u64 = 1 << 22;

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    is_probable_prime(&BigUint::from(n))
}

/// Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    let small = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &small {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &small {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut budget = RHO_BUDGET;
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if g == *n {
                break;
            }
            if !g.is_one() {
                return Some(g);
            }
            budget = budget.checked_sub(1)?;
        }
    }
    None
}

/// Prime factorization of a positive integer, sorted by prime.
pub fn factor(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut rest = n.clone();
    let mut p = 2u32;
    while p < TRIAL_BOUND {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            match out.iter_mut().find(|(q, _)| *q == m) {
                Some(entry) => entry.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(&m).ok_or(Error::FactorizationLimit)?;
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    Ok(out)
}

/// The squarefree integer in the rational square class of `n` (sign kept).
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut core = BigInt::one();
    for (p, e) in factor(n.magnitude())? {
        if e % 2 == 1 {
            core *= BigInt::from(p);
        }
    }
    Ok(if n.sign() == Sign::Minus { -core } else { core })
}

/// Splits `n = p^v * u` with `p` not dividing `u`.
pub fn split_valuation(n: &BigInt, p: &BigUint) -> (u32, BigInt) {
    let p = BigInt::from(p.clone());
    let mut u = n.clone();
    let mut v = 0;
    while !u.is_zero() && (&u % &p).is_zero() {
        u /= &p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol (a/p) for odd prime p; 0 when p divides a.
pub fn legendre(a: &BigInt, p: &BigUint) -> i8 {
    let pp = BigInt::from(p.clone());
    let r = a.mod_floor(&pp).to_biguint().unwrap_or_default();
    if r.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Hilbert symbol (a, b)_p of nonzero integers at a finite prime p.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, p: &BigUint) -> i8 {
    let (alpha, u) = split_valuation(a, p);
    let (beta, v) = split_valuation(b, p);
    if *p == BigUint::from(2u32) {
        let eps = |x: &BigInt| -> u32 {
            let r = x.mod_floor(&BigInt::from(4)).to_u32().unwrap_or(0);
            if r == 3 {
                1
            } else {
                0
            }
        };
        let omega = |x: &BigInt| -> u32 {
            let r = x.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(0);
            if r == 3 || r == 5 {
                1
            } else {
                0
            }
        };
        let exp = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        if exp % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let eps_p = ((p - 1u32) >> 1u32).is_odd() as u32;
        let mut sign: i8 = if (alpha * beta * eps_p) % 2 == 1 { -1 } else { 1 };
        if beta % 2 == 1 {
            sign *= legendre(&u, p);
        }
        if alpha % 2 == 1 {
            sign *= legendre(&v, p);
        }
        sign
    }
}

/// Hilbert symbol at the real place.
pub fn hilbert_symbol_real(a: &BigInt, b: &BigInt) -> i8 {
    if a.is_negative() && b.is_negative() {
        -1
    } else {
        1
    }
}
