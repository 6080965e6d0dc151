//! The base-field tower: ℚ, an ℝ-mode for signatures, prime fields, simple
//! extensions, rational function fields and truncated Puiseux fields.
//!
//! A [`Field`] is a cheap-to-clone context object; an [`Elem`] is plain data
//! whose meaning depends on the field it is used with. Mixing elements of
//! different fields in one arithmetic call is a programming error and panics.

pub mod finite;
mod parse;
pub mod series;
pub mod upoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};
pub use series::{Series, EXACT};

/// Three-valued answer for questions that are not always decidable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ternary {
    True,
    False,
    Unknown,
}

impl Ternary {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Ternary::True
        } else {
            Ternary::False
        }
    }

    pub fn and(self, other: Ternary) -> Ternary {
        match (self, other) {
            (Ternary::False, _) | (_, Ternary::False) => Ternary::False,
            (Ternary::True, Ternary::True) => Ternary::True,
            _ => Ternary::Unknown,
        }
    }

    pub fn not(self) -> Ternary {
        match self {
            Ternary::True => Ternary::False,
            Ternary::False => Ternary::True,
            Ternary::Unknown => Ternary::Unknown,
        }
    }
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ternary::True => "true",
            Ternary::False => "false",
            Ternary::Unknown => "unknown",
        })
    }
}

/// A field element. Which variant is valid is determined by the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    /// ℚ and the ℝ-mode.
    Rat(BigRational),
    /// Residue in `0..p`.
    Mod(u64),
    /// Polynomial in the generator of a simple extension, degree below the
    /// degree of the modulus.
    Poly(Vec<Elem>),
    /// Reduced fraction with monic denominator.
    Frac(Vec<Elem>, Vec<Elem>),
    /// Truncated Laurent series in the uniformizer of a Puiseux field.
    Series(Series),
}

impl Elem {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Elem::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_series(&self) -> Option<&Series> {
        match self {
            Elem::Series(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Verified,
    /// Could not be decided; accepted as the caller's assertion.
    Asserted,
}

#[derive(Debug, PartialEq)]
pub struct ExtensionData {
    base: Field,
    name: String,
    /// Monic, low degree first, length `degree + 1`.
    modulus: Vec<Elem>,
    irreducibility: Irreducibility,
    /// Tr(α^k) for k < degree.
    power_traces: Vec<Elem>,
    nonresidue: Option<Elem>,
}

#[derive(Debug, PartialEq)]
pub struct FunctionData {
    base: Field,
    var: String,
}

/// `base((s))` with `s^m = t / twist`; precision cap in powers of `s`.
#[derive(Debug, PartialEq)]
pub struct PuiseuxData {
    pub(crate) base: Field,
    pub(crate) var: String,
    pub(crate) ramification: u32,
    pub(crate) twist: Elem,
    pub(crate) cap: i64,
}

#[derive(Debug, PartialEq)]
enum Kind {
    Rationals,
    Reals,
    Prime { p: u64, nonresidue: u64 },
    Extension(ExtensionData),
    Functions(FunctionData),
    Puiseux(PuiseuxData),
}

#[derive(Clone)]
pub struct Field(Arc<Kind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.descriptor())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// How far equality of representatives decides equality of square classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Equal classes have identical representatives.
    Canonical,
    /// Identical representatives imply equal classes, not conversely.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareClass {
    pub field: Field,
    pub rep: Elem,
    pub normalization: Normalization,
}

impl SquareClass {
    pub fn same_as(&self, other: &SquareClass) -> Result<Ternary> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rep == other.rep {
            return Ok(Ternary::True);
        }
        if self.normalization == Normalization::Canonical
            && other.normalization == Normalization::Canonical
        {
            return Ok(Ternary::False);
        }
        self.field.same_square_class(&self.rep, &other.rep)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    Some(mod_pow(a, p - 2, p))
}

fn mod_pow(a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let mut b = (a % p) as u128;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Kind::Rationals))
    }

    /// Rational arithmetic with square classes read through the real place:
    /// the class of `a` is its sign.
    pub fn reals() -> Field {
        Field(Arc::new(Kind::Reals))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !arith::is_prime_u64(p) {
            return Err(Error::NotAPrime(p));
        }
        let nonresidue = (2..p)
            .find(|&a| mod_pow(a, (p - 1) / 2, p) == p - 1)
            .expect("odd prime has a nonresidue");
        Ok(Field(Arc::new(Kind::Prime { p, nonresidue })))
    }

    /// `base[x]/(modulus)`; the modulus is made monic and checked for
    /// separability and, where decidable, irreducibility.
    pub fn extension(base: &Field, name: &str, modulus: Vec<Elem>) -> Result<Field> {
        if matches!(*base.0, Kind::Puiseux(_)) {
            return Err(Error::Unsupported(
                "simple extensions of Puiseux fields; extend the coefficient field instead".into(),
            ));
        }
        let modulus = upoly::monic(base, &upoly::trim(base, modulus))?;
        let d = upoly::degree(&modulus).unwrap_or(0);
        if d == 0 {
            return Err(Error::ReducibleModulus);
        }
        let g = upoly::gcd(base, &modulus, &upoly::derivative(base, &modulus))?;
        if upoly::degree(&g) != Some(0) {
            return Err(Error::NotSeparable);
        }
        let irreducibility = finite::check_irreducible(base, &modulus)?;
        // powers α^j mod m for j < 2d - 1, then Tr(α^k) = Σ_i [α^{k+i}]_i
        let mut powers: Vec<Vec<Elem>> = Vec::with_capacity(2 * d);
        let mut cur = vec![base.one()];
        for _ in 0..(2 * d).saturating_sub(1) {
            powers.push(cur.clone());
            cur = upoly::rem(base, &upoly::mul(base, &cur, &[base.zero(), base.one()]), &modulus)?;
        }
        let power_traces = (0..d)
            .map(|k| {
                (0..d).fold(base.zero(), |acc, i| {
                    let c = powers[k + i].get(i).cloned().unwrap_or_else(|| base.zero());
                    base.add(&acc, &c)
                })
            })
            .collect();
        let data = ExtensionData {
            base: base.clone(),
            name: name.to_string(),
            modulus,
            irreducibility,
            power_traces,
            nonresidue: None,
        };
        let field = Field(Arc::new(Kind::Extension(data)));
        if !field.is_finite() {
            return Ok(field);
        }
        let nonresidue = finite::first_nonresidue(&field)?;
        let Ok(Kind::Extension(mut data)) = Arc::try_unwrap(field.0) else {
            unreachable!("freshly built extension is uniquely owned")
        };
        data.nonresidue = Some(nonresidue);
        Ok(Field(Arc::new(Kind::Extension(data))))
    }

    pub fn rational_functions(base: &Field, var: &str) -> Result<Field> {
        if matches!(*base.0, Kind::Puiseux(_) | Kind::Reals) {
            return Err(Error::Unsupported(format!(
                "rational functions over {}",
                base.descriptor()
            )));
        }
        Ok(Field(Arc::new(Kind::Functions(FunctionData {
            base: base.clone(),
            var: var.to_string(),
        }))))
    }

    /// Puiseux series `base((t^{1/m}))` keeping exponents below `cap / m`.
    pub fn puiseux(base: &Field, var: &str, ramification: u32, cap: i64) -> Result<Field> {
        Self::puiseux_twisted(base, var, ramification, base.one(), cap)
    }

    /// Puiseux series in `s = (t / twist)^{1/m}`. A twist lets branches such
    /// as `x = (t/4)^{1/3}` live over the base field itself.
    pub fn puiseux_twisted(
        base: &Field,
        var: &str,
        ramification: u32,
        twist: Elem,
        cap: i64,
    ) -> Result<Field> {
        if ramification == 0 {
            return Err(Error::Unsupported("ramification must be positive".into()));
        }
        if matches!(*base.0, Kind::Puiseux(_) | Kind::Functions(_) | Kind::Reals) {
            return Err(Error::Unsupported(format!(
                "Puiseux series over {}",
                base.descriptor()
            )));
        }
        if base.is_zero(&twist) {
            return Err(Error::ZeroInput);
        }
        Ok(Field(Arc::new(Kind::Puiseux(PuiseuxData {
            base: base.clone(),
            var: var.to_string(),
            ramification,
            twist,
            cap,
        }))))
    }

    /// Parses a descriptor such as `Q`, `F7`, `Q(a):a^2-2`, `Q(z)` or
    /// `Q((t;2;16))`.
    pub fn parse(desc: &str) -> Result<Field> {
        parse::parse_descriptor(desc)
    }

    pub fn descriptor(&self) -> String {
        match &*self.0 {
            Kind::Rationals => "Q".into(),
            Kind::Reals => "R".into(),
            Kind::Prime { p, .. } => format!("F{p}"),
            Kind::Extension(e) => {
                let x = upoly_render(&e.base, &e.modulus, &e.name);
                format!("{}{}({}):{}", e.base.descriptor(), sep(&e.base), e.name, x)
            }
            Kind::Functions(fd) => format!("{}{}({})", fd.base.descriptor(), sep(&fd.base), fd.var),
            Kind::Puiseux(pd) => {
                let twist = if pd.base.is_one(&pd.twist) {
                    String::new()
                } else {
                    format!(";{}", pd.base.render(&pd.twist))
                };
                format!(
                    "{}{}(({};{};{}{}))",
                    pd.base.descriptor(),
                    sep(&pd.base),
                    pd.var,
                    pd.ramification,
                    pd.cap,
                    twist
                )
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Kind::Rationals | Kind::Reals => 0,
            Kind::Prime { p, .. } => *p,
            Kind::Extension(e) => e.base.characteristic(),
            Kind::Functions(fd) => fd.base.characteristic(),
            Kind::Puiseux(pd) => pd.base.characteristic(),
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(*self.0, Kind::Rationals)
    }

    pub fn is_reals(&self) -> bool {
        matches!(*self.0, Kind::Reals)
    }

    pub fn is_puiseux(&self) -> bool {
        matches!(*self.0, Kind::Puiseux(_))
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(*self.0, Kind::Prime { .. })
    }

    pub(crate) fn puiseux_data(&self) -> Option<&PuiseuxData> {
        match &*self.0 {
            Kind::Puiseux(pd) => Some(pd),
            _ => None,
        }
    }

    pub(crate) fn extension_data(&self) -> Option<&ExtensionData> {
        match &*self.0 {
            Kind::Extension(e) => Some(e),
            _ => None,
        }
    }

    /// Ramification index of a Puiseux field.
    pub fn ramification(&self) -> Option<u32> {
        self.puiseux_data().map(|p| p.ramification)
    }

    /// Precision cap of a Puiseux field, in powers of its uniformizer.
    pub fn precision_cap(&self) -> Option<i64> {
        self.puiseux_data().map(|p| p.cap)
    }

    pub fn twist(&self) -> Option<&Elem> {
        self.puiseux_data().map(|p| &p.twist)
    }

    /// Coefficient field of a Puiseux field, base of an extension or of a
    /// rational function field.
    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            Kind::Extension(e) => Some(&e.base),
            Kind::Functions(fd) => Some(&fd.base),
            Kind::Puiseux(pd) => Some(&pd.base),
            _ => None,
        }
    }

    /// The same Puiseux field with a different precision cap.
    pub fn with_cap(&self, cap: i64) -> Result<Field> {
        match &*self.0 {
            Kind::Puiseux(pd) => {
                Self::puiseux_twisted(&pd.base, &pd.var, pd.ramification, pd.twist.clone(), cap)
            }
            _ => Err(Error::Unsupported("precision cap on a non-Puiseux field".into())),
        }
    }

    pub fn irreducibility(&self) -> Option<Irreducibility> {
        self.extension_data().map(|e| e.irreducibility)
    }

    /// Name introduced by this level of the tower.
    pub(crate) fn own_name(&self) -> Option<&str> {
        match &*self.0 {
            Kind::Extension(e) => Some(&e.name),
            Kind::Functions(fd) => Some(&fd.var),
            Kind::Puiseux(pd) => Some(&pd.var),
            _ => None,
        }
    }

    /// Generator names from the bottom of the tower up.
    pub fn generator_names(&self) -> Vec<String> {
        let mut names = self.base().map(|b| b.generator_names()).unwrap_or_default();
        match &*self.0 {
            Kind::Extension(e) => names.push(e.name.clone()),
            Kind::Functions(fd) => names.push(fd.var.clone()),
            Kind::Puiseux(pd) => names.push(pd.var.clone()),
            _ => {}
        }
        names
    }

    /// The adjoined element: α, the rational variable, or the uniformizer s.
    pub fn generator(&self) -> Option<Elem> {
        match &*self.0 {
            Kind::Extension(e) => {
                if e.modulus.len() == 2 {
                    Some(Elem::Poly(upoly::constant(&e.base, e.base.neg(&e.modulus[0]))))
                } else {
                    Some(Elem::Poly(vec![e.base.zero(), e.base.one()]))
                }
            }
            Kind::Functions(fd) => Some(Elem::Frac(
                vec![fd.base.zero(), fd.base.one()],
                vec![fd.base.one()],
            )),
            Kind::Puiseux(pd) => Some(Elem::Series(Series::monomial(pd.base.one(), 1))),
            _ => None,
        }
    }

    /// The deformation parameter `t = twist * s^m` of a Puiseux field.
    pub fn t_element(&self) -> Option<Elem> {
        self.puiseux_data().map(|pd| {
            Elem::Series(Series::monomial(pd.twist.clone(), pd.ramification as i64))
        })
    }

    // ---------------------------------------------------------------- arithmetic

    pub fn zero(&self) -> Elem {
        match &*self.0 {
            Kind::Rationals | Kind::Reals => Elem::Rat(BigRational::zero()),
            Kind::Prime { .. } => Elem::Mod(0),
            Kind::Extension(_) => Elem::Poly(Vec::new()),
            Kind::Functions(fd) => Elem::Frac(Vec::new(), vec![fd.base.one()]),
            Kind::Puiseux(_) => Elem::Series(Series::zero()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &*self.0 {
            Kind::Rationals | Kind::Reals => Elem::Rat(rat(n)),
            Kind::Prime { p, .. } => Elem::Mod(n.rem_euclid(*p as i64) as u64),
            Kind::Extension(e) => Elem::Poly(upoly::constant(&e.base, e.base.from_i64(n))),
            Kind::Functions(fd) => {
                Elem::Frac(upoly::constant(&fd.base, fd.base.from_i64(n)), vec![fd.base.one()])
            }
            Kind::Puiseux(pd) => {
                let c = pd.base.from_i64(n);
                if pd.base.is_zero(&c) {
                    Elem::Series(Series::zero())
                } else {
                    Elem::Series(Series::monomial(c, 0))
                }
            }
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match &*self.0 {
            Kind::Rationals | Kind::Reals => Ok(Elem::Rat(r.clone())),
            Kind::Prime { p, .. } => {
                let pb = BigInt::from(*p);
                let n = (r.numer() % &pb + &pb) % &pb;
                let d = (r.denom() % &pb + &pb) % &pb;
                let d = d.to_u64().unwrap_or(0);
                let inv = mod_inv(d, *p).ok_or_else(|| {
                    Error::CoefficientNotInField(format!("{r} (denominator divisible by {p})"))
                })?;
                let n = n.to_u64().unwrap_or(0);
                Ok(Elem::Mod(((n as u128 * inv as u128) % *p as u128) as u64))
            }
            _ => {
                let base = self.base().expect("tower level has a base");
                let c = base.from_rational(r)?;
                self.embed(base, &c)
            }
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(m) => *m == 0,
            Elem::Poly(v) => v.is_empty(),
            Elem::Frac(n, _) => n.is_empty(),
            Elem::Series(s) => s.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.0, a, b) {
            (Kind::Rationals | Kind::Reals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Kind::Prime { p, .. }, Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            (Kind::Extension(e), Elem::Poly(x), Elem::Poly(y)) => {
                Elem::Poly(upoly::add(&e.base, x, y))
            }
            (Kind::Functions(fd), Elem::Frac(n1, d1), Elem::Frac(n2, d2)) => {
                let b = &fd.base;
                if d1 == d2 {
                    return frac(b, upoly::add(b, n1, n2), d1.clone());
                }
                let num = upoly::add(b, &upoly::mul(b, n1, d2), &upoly::mul(b, n2, d1));
                frac(b, num, upoly::mul(b, d1, d2))
            }
            (Kind::Puiseux(pd), Elem::Series(x), Elem::Series(y)) => {
                Elem::Series(series::add(&pd.base, x, y))
            }
            _ => mismatch(self, a),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (Kind::Rationals | Kind::Reals, Elem::Rat(x)) => Elem::Rat(-x),
            (Kind::Prime { p, .. }, Elem::Mod(x)) => Elem::Mod(if *x == 0 { 0 } else { p - x }),
            (Kind::Extension(e), Elem::Poly(x)) => Elem::Poly(upoly::neg(&e.base, x)),
            (Kind::Functions(fd), Elem::Frac(n, d)) => {
                Elem::Frac(upoly::neg(&fd.base, n), d.clone())
            }
            (Kind::Puiseux(pd), Elem::Series(x)) => Elem::Series(series::neg(&pd.base, x)),
            _ => mismatch(self, a),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.0, a, b) {
            (Kind::Rationals | Kind::Reals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Kind::Prime { p, .. }, Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (Kind::Extension(e), Elem::Poly(x), Elem::Poly(y)) => {
                let prod = upoly::mul(&e.base, x, y);
                Elem::Poly(upoly::rem(&e.base, &prod, &e.modulus).expect("modulus is monic"))
            }
            (Kind::Functions(fd), Elem::Frac(n1, d1), Elem::Frac(n2, d2)) => {
                let b = &fd.base;
                frac(b, upoly::mul(b, n1, n2), upoly::mul(b, d1, d2))
            }
            (Kind::Puiseux(pd), Elem::Series(x), Elem::Series(y)) => {
                Elem::Series(series::mul(&pd.base, pd.cap, x, y))
            }
            _ => mismatch(self, a),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        match (&*self.0, a) {
            (Kind::Rationals | Kind::Reals, Elem::Rat(x)) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Elem::Rat(x.recip()))
                }
            }
            (Kind::Prime { p, .. }, Elem::Mod(x)) => {
                mod_inv(*x, *p).map(Elem::Mod).ok_or(Error::DivisionByZero)
            }
            (Kind::Extension(e), Elem::Poly(x)) => {
                if x.is_empty() {
                    return Err(Error::DivisionByZero);
                }
                let (g, s) = upoly::half_ext_gcd(&e.base, x, &e.modulus)?;
                if upoly::degree(&g) != Some(0) {
                    return Err(Error::ReducibleModulus);
                }
                Ok(Elem::Poly(upoly::rem(&e.base, &s, &e.modulus)?))
            }
            (Kind::Functions(fd), Elem::Frac(n, d)) => {
                if n.is_empty() {
                    return Err(Error::DivisionByZero);
                }
                Ok(frac(&fd.base, d.clone(), n.clone()))
            }
            (Kind::Puiseux(pd), Elem::Series(x)) => {
                Ok(Elem::Series(series::inv(&pd.base, pd.cap, x)?))
            }
            _ => mismatch(self, a),
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: u64) -> Elem {
        self.pow_big(a, &BigUint::from(e))
    }

    pub fn pow_big(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut result = self.one();
        let mut base = a.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = self.mul(&result, &base);
            }
            if i + 1 < bits {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn pow_int(&self, a: &Elem, e: i64) -> Result<Elem> {
        let p = self.pow(a, e.unsigned_abs());
        if e < 0 {
            self.inv(&p)
        } else {
            Ok(p)
        }
    }

    // ---------------------------------------------------------------- embeddings

    /// Maps `a` from a subfield of the tower (or ℚ) into this field.
    pub fn embed(&self, from: &Field, a: &Elem) -> Result<Elem> {
        if self == from {
            return Ok(a.clone());
        }
        if let (Kind::Puiseux(pd), Kind::Puiseux(src)) = (&*self.0, &*from.0) {
            return series::convert(pd, src, a);
        }
        match &*self.0 {
            Kind::Reals if from.is_rationals() => Ok(a.clone()),
            Kind::Extension(_) | Kind::Functions(_) | Kind::Puiseux(_) => {
                let base = self.base().expect("has base");
                let c = base.embed(from, a)?;
                Ok(self.lift_from_base(&c))
            }
            _ => match (&*from.0, a) {
                (Kind::Rationals, Elem::Rat(r)) => self.from_rational(r),
                _ => Err(Error::FieldMismatch),
            },
        }
    }

    /// Embeds an element of the immediate base.
    pub fn lift_from_base(&self, c: &Elem) -> Elem {
        match &*self.0 {
            Kind::Extension(e) => Elem::Poly(upoly::constant(&e.base, c.clone())),
            Kind::Functions(fd) => {
                Elem::Frac(upoly::constant(&fd.base, c.clone()), vec![fd.base.one()])
            }
            Kind::Puiseux(pd) => {
                if pd.base.is_zero(c) {
                    Elem::Series(Series::zero())
                } else {
                    Elem::Series(Series::monomial(c.clone(), 0))
                }
            }
            _ => c.clone(),
        }
    }

    /// The element as a member of the immediate base, if it lies there.
    pub fn as_base(&self, a: &Elem) -> Option<Elem> {
        match (&*self.0, a) {
            (Kind::Extension(e), Elem::Poly(v)) => match v.len() {
                0 => Some(e.base.zero()),
                1 => Some(v[0].clone()),
                _ => None,
            },
            (Kind::Functions(fd), Elem::Frac(n, d)) => {
                if n.len() <= 1 && d.len() == 1 {
                    Some(n.first().cloned().unwrap_or_else(|| fd.base.zero()))
                } else {
                    None
                }
            }
            (Kind::Puiseux(pd), Elem::Series(s)) => {
                if !s.is_exact() {
                    return None;
                }
                match s.terms().collect::<Vec<_>>().as_slice() {
                    [] => Some(pd.base.zero()),
                    [(0, c)] => Some((*c).clone()),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Walks down the tower until reaching ℚ, if the element lies in it.
    pub fn as_rational(&self, a: &Elem) -> Option<BigRational> {
        match (&*self.0, a) {
            (Kind::Rationals | Kind::Reals, Elem::Rat(r)) => Some(r.clone()),
            _ => {
                let b = self.base()?;
                b.as_rational(&self.as_base(a)?)
            }
        }
    }

    // ---------------------------------------------------------------- squares

    /// Square root in this field: `Ok(None)` if `a` is not a square,
    /// `Err(Unsupported)` if that cannot be decided.
    pub fn sqrt(&self, a: &Elem) -> Result<Option<Elem>> {
        if self.is_zero(a) {
            return Ok(Some(self.zero()));
        }
        match (&*self.0, a) {
            (Kind::Rationals, Elem::Rat(r)) => Ok(rational_sqrt(r).map(Elem::Rat)),
            (Kind::Reals, Elem::Rat(r)) => match rational_sqrt(r) {
                Some(s) => Ok(Some(Elem::Rat(s))),
                None if r.is_negative() => Ok(None),
                None => Err(Error::Unsupported("irrational square root in R-mode".into())),
            },
            (Kind::Prime { .. }, _) => finite::sqrt(self, a),
            (Kind::Extension(e), Elem::Poly(v)) => {
                if self.is_finite() {
                    return finite::sqrt(self, a);
                }
                if v.len() == 1 {
                    if let Some(r) = e.base.sqrt(&v[0])? {
                        return Ok(Some(self.lift_from_base(&r)));
                    }
                }
                if e.modulus.len() == 3 {
                    return quadratic_sqrt(self, e, v);
                }
                Err(Error::Unsupported(format!(
                    "square roots in {} (degree > 2 over an infinite field)",
                    self.descriptor()
                )))
            }
            (Kind::Functions(fd), Elem::Frac(n, d)) => {
                let b = &fd.base;
                let nd = upoly::mul(b, n, d);
                match upoly::sqrt(b, &nd)? {
                    Some(r) => Ok(Some(frac(b, r, d.clone()))),
                    None => Ok(None),
                }
            }
            (Kind::Puiseux(pd), Elem::Series(s)) => {
                Ok(series::sqrt(&pd.base, pd.cap, s)?.map(Elem::Series))
            }
            _ => mismatch(self, a),
        }
    }

    pub fn is_square(&self, a: &Elem) -> Result<Ternary> {
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        match (&*self.0, a) {
            (Kind::Reals, Elem::Rat(r)) => Ok(Ternary::from_bool(r.is_positive())),
            (Kind::Prime { .. } | Kind::Extension(_), _) if self.is_finite() => {
                Ok(Ternary::from_bool(finite::is_square(self, a)))
            }
            (Kind::Puiseux(pd), Elem::Series(s)) => {
                let v = s.valuation().expect("nonzero");
                if v % 2 != 0 {
                    return Ok(Ternary::False);
                }
                pd.base.is_square(s.leading().expect("nonzero"))
            }
            _ => match self.sqrt(a) {
                Ok(r) => Ok(Ternary::from_bool(r.is_some())),
                Err(Error::Unsupported(_)) => Ok(Ternary::Unknown),
                Err(e) => Err(e),
            },
        }
    }

    pub fn same_square_class(&self, a: &Elem, b: &Elem) -> Result<Ternary> {
        if self.is_zero(a) || self.is_zero(b) {
            return Err(Error::ZeroInput);
        }
        self.is_square(&self.div(a, b)?)
    }

    pub fn square_class(&self, a: &Elem) -> Result<SquareClass> {
        if let Elem::Series(s) = a {
            if s.is_zero() && !s.is_exact() {
                return Err(Error::PrecisionExhausted(format!(
                    "no nonzero term below {}",
                    self.render(a)
                )));
            }
        }
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        let (rep, normalization) = self.class_rep(a)?;
        Ok(SquareClass {
            field: self.clone(),
            rep,
            normalization,
        })
    }

    fn class_rep(&self, a: &Elem) -> Result<(Elem, Normalization)> {
        use Normalization::*;
        match (&*self.0, a) {
            (Kind::Rationals, Elem::Rat(r)) => {
                let n = r.numer() * r.denom();
                let core = arith::squarefree_part(&n)?;
                Ok((Elem::Rat(BigRational::from_integer(core)), Canonical))
            }
            (Kind::Reals, Elem::Rat(r)) => {
                Ok((Elem::Rat(rat(if r.is_negative() { -1 } else { 1 })), Canonical))
            }
            (Kind::Prime { nonresidue, .. }, _) => {
                if finite::is_square(self, a) {
                    Ok((self.one(), Canonical))
                } else {
                    Ok((Elem::Mod(*nonresidue), Canonical))
                }
            }
            (Kind::Extension(e), Elem::Poly(v)) => {
                if self.is_finite() {
                    let rep = if finite::is_square(self, a) {
                        self.one()
                    } else {
                        e.nonresidue.clone().expect("finite extension has a nonresidue")
                    };
                    return Ok((rep, Canonical));
                }
                if v.len() == 1 {
                    let (r, _) = e.base.class_rep(&v[0])?;
                    return Ok((self.lift_from_base(&r), Partial));
                }
                if self.is_square(a)? == Ternary::True {
                    return Ok((self.one(), Partial));
                }
                Ok((a.clone(), Partial))
            }
            (Kind::Functions(fd), Elem::Frac(n, d)) => {
                let b = &fd.base;
                let p = upoly::mul(b, n, d);
                let lc = p.last().expect("nonzero").clone();
                let (crep, cnorm) = b.class_rep(&lc)?;
                match upoly::odd_multiplicity_part(b, &p)? {
                    Some(odd) => {
                        let norm = if cnorm == Canonical && b.characteristic() == 0 {
                            Canonical
                        } else {
                            Partial
                        };
                        Ok((
                            Elem::Frac(upoly::scale(b, &odd, &crep), vec![b.one()]),
                            norm,
                        ))
                    }
                    None => Ok((Elem::Frac(p, vec![b.one()]), Partial)),
                }
            }
            (Kind::Puiseux(pd), Elem::Series(s)) => {
                let v = s.valuation().expect("nonzero");
                let (crep, cnorm) = pd.base.class_rep(s.leading().expect("nonzero"))?;
                Ok((Elem::Series(Series::monomial(crep, v.rem_euclid(2))), cnorm))
            }
            _ => mismatch(self, a),
        }
    }

    // ---------------------------------------------------------------- traces

    /// The field one finite step down the tower, if any.
    pub fn parent(&self) -> Option<Field> {
        match &*self.0 {
            Kind::Extension(e) => Some(e.base.clone()),
            Kind::Puiseux(pd) => {
                let laurent = pd.ramification == 1 && pd.base.is_one(&pd.twist);
                if !laurent {
                    let cap = (pd.cap + pd.ramification as i64 - 1)
                        .div_euclid(pd.ramification as i64);
                    return Field::puiseux(&pd.base, &pd.var, 1, cap).ok();
                }
                let k = pd.base.parent()?;
                Field::puiseux(&k, &pd.var, 1, pd.cap).ok()
            }
            _ => None,
        }
    }

    pub fn degree_over_parent(&self) -> Option<usize> {
        match &*self.0 {
            Kind::Extension(e) => Some(e.modulus.len() - 1),
            Kind::Puiseux(pd) => {
                if pd.ramification == 1 && pd.base.is_one(&pd.twist) {
                    pd.base.degree_over_parent()
                } else {
                    Some(pd.ramification as usize)
                }
            }
            _ => None,
        }
    }

    /// Basis of this field over its parent, as elements of this field.
    pub fn parent_basis(&self) -> Option<Vec<Elem>> {
        match &*self.0 {
            Kind::Extension(e) => {
                let d = e.modulus.len() - 1;
                Some(
                    (0..d)
                        .map(|i| Elem::Poly(upoly::monomial(&e.base, e.base.one(), i)))
                        .collect(),
                )
            }
            Kind::Puiseux(pd) => {
                if pd.ramification == 1 && pd.base.is_one(&pd.twist) {
                    let inner = pd.base.parent_basis()?;
                    Some(inner.iter().map(|c| self.lift_from_base(c)).collect())
                } else {
                    Some(
                        (0..pd.ramification as i64)
                            .map(|i| Elem::Series(Series::monomial(pd.base.one(), i)))
                            .collect(),
                    )
                }
            }
            _ => None,
        }
    }

    /// Trace from this field to [`Field::parent`].
    pub fn trace_to_parent(&self, a: &Elem) -> Result<Elem> {
        match (&*self.0, a) {
            (Kind::Extension(e), Elem::Poly(v)) => {
                Ok(v.iter().zip(&e.power_traces).fold(e.base.zero(), |acc, (c, t)| {
                    e.base.add(&acc, &e.base.mul(c, t))
                }))
            }
            (Kind::Puiseux(pd), Elem::Series(s)) => {
                let parent = self.parent().ok_or(Error::NotAnExtension)?;
                let ppd = parent.puiseux_data().expect("parent is Puiseux");
                if pd.ramification == 1 && pd.base.is_one(&pd.twist) {
                    let out = series::map_coefficients(&ppd.base, s, |c| {
                        pd.base.trace_to_parent(c)
                    })?;
                    Ok(Elem::Series(out))
                } else {
                    Ok(Elem::Series(series::ramified_trace(pd, &ppd.cap, s)?))
                }
            }
            _ => Err(Error::NotAnExtension),
        }
    }

    /// Degree of this field over `target`, which must lie below it in the tower.
    pub fn degree_over(&self, target: &Field) -> Result<usize> {
        let mut cur = self.clone();
        let mut deg = 1;
        while cur != *target {
            deg *= cur.degree_over_parent().ok_or(Error::NotAnExtension)?;
            cur = cur.parent().ok_or(Error::NotAnExtension)?;
        }
        Ok(deg)
    }

    /// Trace down the tower to `target`.
    pub fn field_trace(&self, a: &Elem, target: &Field) -> Result<Elem> {
        let mut cur = self.clone();
        let mut x = a.clone();
        while cur != *target {
            x = cur.trace_to_parent(&x)?;
            cur = cur.parent().ok_or(Error::NotAnExtension)?;
        }
        Ok(x)
    }

    // ---------------------------------------------------------------- rendering

    pub fn render(&self, a: &Elem) -> String {
        match (&*self.0, a) {
            (Kind::Rationals | Kind::Reals, Elem::Rat(r)) => r.to_string(),
            (Kind::Prime { .. }, Elem::Mod(m)) => m.to_string(),
            (Kind::Extension(e), Elem::Poly(v)) => upoly_render(&e.base, v, &e.name),
            (Kind::Functions(fd), Elem::Frac(n, d)) => {
                let num = upoly_render(&fd.base, n, &fd.var);
                if d.len() == 1 {
                    return num;
                }
                let den = upoly_render(&fd.base, d, &fd.var);
                format!("{}/{}", wrap(&num), wrap(&den))
            }
            (Kind::Puiseux(pd), Elem::Series(s)) => series::render(pd, s),
            _ => mismatch(self, a),
        }
    }
}

fn mismatch(f: &Field, a: &Elem) -> ! {
    panic!("element {a:?} does not belong to {}", f.descriptor())
}

fn sep(base: &Field) -> &'static str {
    if matches!(*base.0, Kind::Extension(_)) {
        "|"
    } else {
        ""
    }
}

fn frac(b: &Field, num: Vec<Elem>, den: Vec<Elem>) -> Elem {
    if num.is_empty() {
        return Elem::Frac(Vec::new(), vec![b.one()]);
    }
    let g = upoly::gcd(b, &num, &den).expect("denominator is nonzero");
    let (mut n, _) = upoly::divrem(b, &num, &g).expect("gcd is nonzero");
    let (mut d, _) = upoly::divrem(b, &den, &g).expect("gcd is nonzero");
    let lc_inv = b.inv(d.last().expect("nonzero")).expect("unit");
    n = upoly::scale(b, &n, &lc_inv);
    d = upoly::scale(b, &d, &lc_inv);
    Elem::Frac(n, d)
}

/// Wraps compound expressions in parentheses.
pub(crate) fn wrap(s: &str) -> String {
    let compound = s.chars().skip(1).any(|c| c == '+' || c == '-' || c == ' ' || c == '/');
    if compound {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Parenthesizes only sums; a bare fraction can stand as a constant term.
pub(crate) fn wrap_sum(s: &str) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Renders a univariate polynomial, highest degree first.
pub(crate) fn upoly_render(base: &Field, v: &[Elem], var: &str) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    for (i, c) in v.iter().enumerate().rev() {
        if base.is_zero(c) {
            continue;
        }
        let mut cs = base.render(c);
        let mut negative = false;
        if let Some(rest) = cs.strip_prefix('-') {
            if !rest.contains(['+', '-', ' ']) {
                negative = true;
                cs = rest.to_string();
            }
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let body = if mono.is_empty() {
            wrap_sum(&cs)
        } else if cs == "1" {
            mono
        } else {
            format!("{}*{}", wrap(&cs), mono)
        };
        terms.push((negative, body));
    }
    let mut out = String::new();
    for (k, (neg, body)) in terms.iter().enumerate() {
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

/// Square roots in a quadratic extension by completing the square.
fn quadratic_sqrt(f: &Field, e: &ExtensionData, v: &[Elem]) -> Result<Option<Elem>> {
    let b = &e.base;
    let two = b.from_i64(2);
    let half_c1 = b.div(&e.modulus[1], &two)?;
    // β = α + c1/2 satisfies β² = D
    let d = b.sub(&b.mul(&half_c1, &half_c1), &e.modulus[0]);
    let u = v.first().cloned().unwrap_or_else(|| b.zero());
    let w = v.get(1).cloned().unwrap_or_else(|| b.zero());
    let u1 = b.sub(&u, &b.mul(&w, &half_c1));
    let beta = Elem::Poly(upoly::trim(b, vec![half_c1.clone(), b.one()]));
    let target = Elem::Poly(v.to_vec());
    if b.is_zero(&w) {
        if let Some(x) = b.sqrt(&u1)? {
            return Ok(Some(f.lift_from_base(&x)));
        }
        if let Some(y) = b.sqrt(&b.div(&u1, &d)?)? {
            return Ok(Some(f.mul(&f.lift_from_base(&y), &beta)));
        }
        return Ok(None);
    }
    let norm = b.sub(&b.mul(&u1, &u1), &b.mul(&d, &b.mul(&w, &w)));
    let Some(n) = b.sqrt(&norm)? else {
        return Ok(None);
    };
    for cand in [b.add(&u1, &n), b.sub(&u1, &n)] {
        let x2 = b.div(&cand, &two)?;
        if b.is_zero(&x2) {
            continue;
        }
        if let Some(x) = b.sqrt(&x2)? {
            let y = b.div(&w, &b.mul(&two, &x))?;
            let root = f.add(&f.lift_from_base(&x), &f.mul(&f.lift_from_base(&y), &beta));
            if f.mul(&root, &root) == target {
                return Ok(Some(root));
            }
        }
    }
    Ok(None)
}
