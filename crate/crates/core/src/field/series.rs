//! Truncated Laurent series in a uniformizer `s`, used for Puiseux fields.
//!
//! A series stores its known terms and the absolute order `prec` below which
//! every coefficient is known; `prec == EXACT` marks a finite exact sum.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::{Elem, Field, PuiseuxData};
use crate::error::{Error, Result};

pub const EXACT: i64 = i64::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    terms: BTreeMap<i64, Elem>,
    prec: i64,
}

impl Series {
    pub fn zero() -> Series {
        Series {
            terms: BTreeMap::new(),
            prec: EXACT,
        }
    }

    /// `O(s^prec)`.
    pub fn big_o(prec: i64) -> Series {
        Series {
            terms: BTreeMap::new(),
            prec,
        }
    }

    pub fn monomial(c: Elem, e: i64) -> Series {
        let mut terms = BTreeMap::new();
        terms.insert(e, c);
        Series { terms, prec: EXACT }
    }

    /// Builds a series from terms; zero coefficients and terms at or above
    /// `prec` are dropped.
    pub fn from_terms(base: &Field, terms: impl IntoIterator<Item = (i64, Elem)>, prec: i64) -> Series {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e >= prec {
                continue;
            }
            let entry = map.entry(e).or_insert_with(|| base.zero());
            *entry = base.add(entry, &c);
        }
        map.retain(|_, c| !base.is_zero(c));
        Series { terms: map, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// Absolute precision, `None` when exact.
    pub fn precision(&self) -> Option<i64> {
        (!self.is_exact()).then_some(self.prec)
    }

    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading(&self) -> Option<&Elem> {
        self.terms.values().next()
    }

    pub fn coeff(&self, e: i64) -> Option<&Elem> {
        self.terms.get(&e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Elem)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Drops everything at or above `p`.
    pub fn truncate(&self, p: i64) -> Series {
        Series {
            terms: self.terms.range(..p).map(|(e, c)| (*e, c.clone())).collect(),
            prec: self.prec.min(p),
        }
    }

    /// Forgets the error term; the caller vouches that the known terms are
    /// the whole series.
    pub fn into_exact(mut self) -> Series {
        self.prec = EXACT;
        self
    }

    /// Valuation, treating a zero known only up to `O(s^p)` as valuation `p`.
    fn effective_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }
}

pub fn add(base: &Field, a: &Series, b: &Series) -> Series {
    let prec = a.prec.min(b.prec);
    let mut terms: BTreeMap<i64, Elem> = a.terms.range(..prec).map(|(e, c)| (*e, c.clone())).collect();
    for (e, c) in b.terms.range(..prec) {
        match terms.get_mut(e) {
            Some(x) => *x = base.add(x, c),
            None => {
                terms.insert(*e, c.clone());
            }
        }
    }
    terms.retain(|_, c| !base.is_zero(c));
    Series { terms, prec }
}

pub fn neg(base: &Field, a: &Series) -> Series {
    Series {
        terms: a.terms.iter().map(|(e, c)| (*e, base.neg(c))).collect(),
        prec: a.prec,
    }
}

pub fn mul(base: &Field, cap: i64, a: &Series, b: &Series) -> Series {
    if (a.is_exact() && a.is_zero()) || (b.is_exact() && b.is_zero()) {
        return Series::zero();
    }
    let prec = if a.is_exact() && b.is_exact() {
        EXACT
    } else {
        let p1 = a.effective_valuation().saturating_add(b.prec);
        let p2 = b.effective_valuation().saturating_add(a.prec);
        p1.min(p2).min(cap)
    };
    let mut terms: BTreeMap<i64, Elem> = BTreeMap::new();
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let e = ea + eb;
            if e >= prec {
                break;
            }
            let p = base.mul(ca, cb);
            match terms.get_mut(&e) {
                Some(x) => *x = base.add(x, &p),
                None => {
                    terms.insert(e, p);
                }
            }
        }
    }
    terms.retain(|_, c| !base.is_zero(c));
    Series { terms, prec }
}

pub fn inv(base: &Field, cap: i64, a: &Series) -> Result<Series> {
    let Some(v) = a.valuation() else {
        return Err(if a.is_exact() {
            Error::DivisionByZero
        } else {
            Error::PrecisionExhausted(format!("inverting O(s^{})", a.prec))
        });
    };
    let c0_inv = base.inv(a.leading().expect("nonzero"))?;
    if a.is_exact() && a.terms.len() == 1 {
        return Ok(Series::monomial(c0_inv, -v));
    }
    let relative = if a.is_exact() { EXACT } else { a.prec - v };
    let prec = (-v).saturating_add(relative).min(cap.max(1 - v));
    let n = prec - (-v);
    let unit: Vec<(i64, &Elem)> = a.terms.iter().map(|(e, c)| (e - v, c)).collect();
    let mut out: Vec<Elem> = Vec::with_capacity(n.max(0) as usize);
    for k in 0..n {
        let mut acc = if k == 0 { base.one() } else { base.zero() };
        for &(j, cj) in unit.iter().skip(1) {
            if j > k {
                break;
            }
            acc = base.sub(&acc, &base.mul(cj, &out[(k - j) as usize]));
        }
        out.push(base.mul(&acc, &c0_inv));
    }
    Ok(Series::from_terms(
        base,
        out.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c)),
        prec,
    ))
}

/// Square root with leading coefficient the base-field root of the leading
/// coefficient. `Ok(None)` for odd valuation or a nonsquare leading term.
pub fn sqrt(base: &Field, cap: i64, a: &Series) -> Result<Option<Series>> {
    let Some(v) = a.valuation() else {
        if a.is_exact() {
            return Ok(Some(Series::zero()));
        }
        return Err(Error::PrecisionExhausted(format!("square root of O(s^{})", a.prec)));
    };
    if v % 2 != 0 {
        return Ok(None);
    }
    let Some(w0) = base.sqrt(a.leading().expect("nonzero"))? else {
        return Ok(None);
    };
    let half = v / 2;
    let relative = if a.is_exact() {
        (cap - half).max(1)
    } else {
        a.prec - v
    };
    let two_w0_inv = base.inv(&base.add(&w0, &w0))?;
    let mut w: Vec<Elem> = vec![w0];
    for k in 1..relative {
        let mut acc = a.coeff(v + k).cloned().unwrap_or_else(|| base.zero());
        for j in 1..k {
            acc = base.sub(&acc, &base.mul(&w[j as usize], &w[(k - j) as usize]));
        }
        w.push(base.mul(&acc, &two_w0_inv));
    }
    let root = Series::from_terms(
        base,
        w.into_iter().enumerate().map(|(k, c)| (half + k as i64, c)),
        half + relative,
    );
    if a.is_exact() {
        let candidate = root.clone().into_exact();
        if mul(base, EXACT, &candidate, &candidate) == *a {
            return Ok(Some(candidate));
        }
    }
    Ok(Some(root))
}

pub fn map_coefficients(
    target: &Field,
    a: &Series,
    mut f: impl FnMut(&Elem) -> Result<Elem>,
) -> Result<Series> {
    let mut terms = Vec::new();
    for (e, c) in &a.terms {
        terms.push((*e, f(c)?));
    }
    Ok(Series::from_terms(target, terms, a.prec))
}

/// Trace from `k((s))`, `s^m = t/λ`, down to `k((t))`.
pub fn ramified_trace(pd: &PuiseuxData, parent_cap: &i64, a: &Series) -> Result<Series> {
    let base = &pd.base;
    let m = pd.ramification as i64;
    let lambda_inv = base.inv(&pd.twist)?;
    let prec = if a.is_exact() {
        EXACT
    } else {
        num_integer::Integer::div_ceil(&a.prec, &m).min(*parent_cap)
    };
    let factor = base.from_i64(m);
    let mut terms = Vec::new();
    for (e, c) in &a.terms {
        if e.rem_euclid(m) != 0 {
            continue;
        }
        let j = e / m;
        let scale = if j >= 0 {
            base.pow(&lambda_inv, j as u64)
        } else {
            base.pow(&pd.twist, j.unsigned_abs())
        };
        terms.push((j, base.mul(&factor, &base.mul(c, &scale))));
    }
    Ok(Series::from_terms(base, terms, prec))
}

/// Re-expresses an element of one Puiseux field in another whose
/// uniformizer is a root of the first one's.
pub fn convert(target: &PuiseuxData, src: &PuiseuxData, a: &Elem) -> Result<Elem> {
    let Elem::Series(s) = a else {
        return Err(Error::FieldMismatch);
    };
    let tb = &target.base;
    let coeff = |c: &Elem| tb.embed(&src.base, c);
    let src_twist = coeff(&src.twist)?;
    let (k, scale) = if src_twist == target.twist && target.ramification % src.ramification == 0 {
        ((target.ramification / src.ramification) as i64, None)
    } else if src.ramification == 1 {
        // s_src = t / λ_src = (λ_target / λ_src) s^m
        (
            target.ramification as i64,
            Some(tb.div(&target.twist, &src_twist)?),
        )
    } else {
        return Err(Error::Unsupported(
            "changing both the twist and the ramification of a Puiseux field".into(),
        ));
    };
    let mut terms = Vec::new();
    for (e, c) in &s.terms {
        let mut c = coeff(c)?;
        if let Some(r) = &scale {
            c = tb.mul(&c, &tb.pow_int(r, *e)?);
        }
        terms.push((e * k, c));
    }
    let prec = if s.is_exact() { EXACT } else { s.prec.saturating_mul(k) };
    Ok(Elem::Series(Series::from_terms(tb, terms, prec)))
}

fn exponent_text(pd: &PuiseuxData, e: i64) -> String {
    let m = pd.ramification as i64;
    let g = e.gcd(&m);
    let (num, den) = (e / g, m / g);
    let var = if pd.base.is_one(&pd.twist) {
        pd.var.clone()
    } else {
        format!("({}/{})", pd.var, super::wrap(&pd.base.render(&pd.twist)))
    };
    match (num, den) {
        (0, _) => String::new(),
        (1, 1) => var,
        (n, 1) if n > 0 => format!("{var}^{n}"),
        (n, 1) => format!("{var}^({n})"),
        (n, d) => format!("{var}^({n}/{d})"),
    }
}

pub fn render(pd: &PuiseuxData, a: &Series) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (e, c) in &a.terms {
        let mut cs = pd.base.render(c);
        let mut negative = false;
        if let Some(rest) = cs.strip_prefix('-') {
            if !rest.contains(['+', '-', ' ']) {
                negative = true;
                cs = rest.to_string();
            }
        }
        let mono = exponent_text(pd, *e);
        let body = if mono.is_empty() {
            super::wrap(&cs)
        } else if cs == "1" {
            mono
        } else {
            format!("{}*{}", super::wrap(&cs), mono)
        };
        parts.push((negative, body));
    }
    if !a.is_exact() {
        let mono = exponent_text(pd, a.prec);
        let o = if mono.is_empty() { "O(1)".to_string() } else { format!("O({mono})") };
        parts.push((false, o));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, body)) in parts.iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(body);
    }
    out
}
