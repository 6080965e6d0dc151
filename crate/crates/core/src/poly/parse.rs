//! Recursive-descent parser for polynomials, field elements and points.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' exponent)?
//! atom   := integer | identifier | '(' expr ')'
//! exponent := natural | '(' '-'? natural ('/' natural)? ')'
//! ```
//! Division is only by nonzero constants; negative and fractional exponents
//! only apply to constants (fractional ones to monomials of a Puiseux field).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Polynomial;
use crate::error::{syntax, Error, Result};
use crate::field::{Elem, Field, Series};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push(Token {
                tok: Tok::Num(s.parse().expect("digits")),
                pos,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push(Token {
                tok: Tok::Ident(s),
                pos,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos });
            i += 1;
        } else {
            return syntax(pos, format!("unexpected character `{c}`"));
        }
    }
    out.push(Token {
        tok: Tok::End,
        pos: text.len(),
    });
    Ok(out)
}

/// The element named `name` somewhere in the tower, embedded at the top.
pub(crate) fn named_constant(field: &Field, name: &str) -> Option<Elem> {
    if field.own_name() == Some(name) {
        return if field.is_puiseux() {
            field.t_element()
        } else {
            field.generator()
        };
    }
    let base = field.base()?;
    let c = named_constant(base, name)?;
    Some(field.lift_from_base(&c))
}

fn is_field_name(field: &Field, name: &str) -> bool {
    field.generator_names().iter().any(|g| g == name)
}

/// Variables in canonical order: `x1..x_max`, then `z`, `y`, `u`, other
/// names alphabetically, and `t` last.
fn infer_vars(names: &[String]) -> Vec<String> {
    let mut max_x = 0;
    let mut others: Vec<String> = Vec::new();
    let mut has_t = false;
    for n in names {
        if let Some(k) = n.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            if k >= 1 && !n[1..].starts_with('0') {
                max_x = max_x.max(k);
                continue;
            }
        }
        if n == "t" {
            has_t = true;
        } else if !others.contains(n) {
            others.push(n.clone());
        }
    }
    let rank = |s: &str| match s {
        "z" => 0,
        "y" => 1,
        "u" => 2,
        _ => 3,
    };
    others.sort_by(|a, b| rank(a).cmp(&rank(b)).then_with(|| a.cmp(b)));
    let mut vars: Vec<String> = (1..=max_x).map(|k| format!("x{k}")).collect();
    vars.extend(others);
    if has_t {
        vars.push("t".into());
    }
    vars
}

fn identifiers(tokens: &[Token], field: &Field) -> Vec<String> {
    tokens
        .iter()
        .filter_map(|t| match &t.tok {
            Tok::Ident(s) if !is_field_name(field, s) => Some(s.clone()),
            _ => None,
        })
        .collect()
}

struct Parser<'a> {
    tokens: Vec<Token>,
    i: usize,
    field: &'a Field,
    vars: &'a [String],
    offset: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.i].tok
    }

    fn pos(&self) -> usize {
        self.tokens[self.i].pos + self.offset
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.i].clone();
        if self.i + 1 < self.tokens.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            syntax(self.pos(), format!("expected `{c}`"))
        }
    }

    fn constant(&self, c: Elem) -> Polynomial {
        Polynomial::constant(self.field, self.vars, c)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                self.term()?.neg()
            }
            Tok::Sym('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Sym('/') => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.unary()?;
                    let Some(c) = d.as_constant() else {
                        return syntax(pos, "division by a non-constant");
                    };
                    let inv = self.field.inv(&c).map_err(|_| Error::Syntax {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(') => {
                    return syntax(self.pos(), "implicit multiplication; write `*`");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let (num, den) = self.exponent()?;
        if den.is_one() && !num.is_negative() {
            let k = num
                .to_u32()
                .ok_or_else(|| Error::Syntax { pos, msg: "exponent too large".into() })?;
            return Ok(base.pow(k));
        }
        let Some(c) = base.as_constant() else {
            return syntax(pos, "negative or fractional power of a non-constant");
        };
        let value = constant_power(self.field, &c, &num, &den).map_err(|e| match e {
            Error::Syntax { .. } => e,
            other => Error::Syntax {
                pos,
                msg: other.to_string(),
            },
        })?;
        Ok(self.constant(value))
    }

    fn exponent(&mut self) -> Result<(BigInt, BigInt)> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok((n, BigInt::one()))
            }
            Tok::Sym('(') => {
                self.bump();
                let negative = if *self.peek() == Tok::Sym('-') {
                    self.bump();
                    true
                } else {
                    false
                };
                let Tok::Num(n) = self.peek().clone() else {
                    return syntax(self.pos(), "expected an integer exponent");
                };
                self.bump();
                let mut d = BigInt::one();
                if *self.peek() == Tok::Sym('/') {
                    self.bump();
                    let Tok::Num(x) = self.peek().clone() else {
                        return syntax(self.pos(), "expected an exponent denominator");
                    };
                    if x.is_zero() {
                        return syntax(self.pos(), "zero denominator");
                    }
                    self.bump();
                    d = x;
                }
                self.expect(')')?;
                let g = n.gcd(&d);
                let n = if negative { -n } else { n };
                Ok((n / &g, d / g))
            }
            _ => syntax(self.pos(), "expected an exponent"),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let t = self.bump();
        match t.tok {
            Tok::Num(n) => {
                let r = BigRational::from_integer(n);
                let c = self.field.from_rational(&r).map_err(|_| Error::Syntax {
                    pos: t.pos + self.offset,
                    msg: format!("{r} is not in {}", self.field.descriptor()),
                })?;
                Ok(self.constant(c))
            }
            Tok::Ident(name) => {
                if let Some(c) = named_constant(self.field, &name) {
                    return Ok(self.constant(c));
                }
                if self.vars.contains(&name) {
                    return Polynomial::variable(self.field, self.vars, &name);
                }
                Err(Error::UnknownVariable(name))
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => syntax(t.pos + self.offset, "unexpected end of input"),
            Tok::Sym(c) => syntax(t.pos + self.offset, format!("unexpected `{c}`")),
        }
    }
}

/// `c^(num/den)`; fractional powers are defined for monomials `κ s^e` of a
/// Puiseux field when the exponent stays integral and κ = 1 or den | num.
fn constant_power(field: &Field, c: &Elem, num: &BigInt, den: &BigInt) -> Result<Elem> {
    let n = num.to_i64().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
    if den.is_one() {
        return field.pow_int(c, n);
    }
    let d = den.to_i64().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
    let Some(s) = c.as_series() else {
        return Err(Error::Unsupported(format!(
            "fractional power in {}",
            field.descriptor()
        )));
    };
    let base = field.base().expect("Puiseux field has a base");
    let terms: Vec<(i64, &Elem)> = s.terms().collect();
    let (e, kappa) = match (s.is_exact(), terms.as_slice()) {
        (true, [(e, k)]) => (*e, (*k).clone()),
        _ => {
            return Err(Error::Unsupported(
                "fractional power of a non-monomial series".into(),
            ))
        }
    };
    if (e * n) % d != 0 {
        return Err(Error::Unsupported(format!(
            "exponent not a multiple of 1/{} in {}",
            field.ramification().unwrap_or(1),
            field.descriptor()
        )));
    }
    let coeff = if base.is_one(&kappa) {
        base.one()
    } else if n % d == 0 {
        base.pow_int(&kappa, n / d)?
    } else {
        return Err(Error::Unsupported(format!(
            "fractional power of the coefficient {}",
            base.render(&kappa)
        )));
    };
    Ok(Elem::Series(Series::monomial(coeff, e * n / d)))
}

fn run(text: &str, field: &Field, vars: &[String], offset: usize) -> Result<Polynomial> {
    let tokens = tokenize(text).map_err(|e| shift(e, offset))?;
    let mut p = Parser {
        tokens,
        i: 0,
        field,
        vars,
        offset,
    };
    if *p.peek() == Tok::End {
        return syntax(p.pos(), "empty expression");
    }
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return syntax(p.pos(), "unexpected trailing input");
    }
    Ok(out)
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax {
            pos: pos + offset,
            msg,
        },
        other => other,
    }
}

pub(crate) fn parse_polynomial_at(
    text: &str,
    field: &Field,
    vars: Option<&[String]>,
    offset: usize,
) -> Result<Polynomial> {
    let owned;
    let vars = match vars {
        Some(v) => v,
        None => {
            let tokens = tokenize(text).map_err(|e| shift(e, offset))?;
            owned = infer_vars(&identifiers(&tokens, field));
            &owned
        }
    };
    run(text, field, vars, offset)
}

pub(crate) fn parse_polynomial(text: &str, field: &Field, vars: Option<&[String]>) -> Result<Polynomial> {
    parse_polynomial_at(text, field, vars, 0)
}

pub(crate) fn parse_system(
    texts: &[&str],
    field: &Field,
    vars: Option<&[String]>,
) -> Result<Vec<Polynomial>> {
    let owned;
    let vars = match vars {
        Some(v) => v,
        None => {
            let mut names = Vec::new();
            for t in texts {
                names.extend(identifiers(&tokenize(t)?, field));
            }
            owned = infer_vars(&names);
            &owned
        }
    };
    texts.iter().map(|t| run(t, field, vars, 0)).collect()
}

/// Parses a constant expression as an element of `field`.
pub fn parse_element(text: &str, field: &Field) -> Result<Elem> {
    parse_element_at(text, field, 0)
}

pub(crate) fn parse_element_at(text: &str, field: &Field, offset: usize) -> Result<Elem> {
    let p = run(text, field, &[], offset)?;
    Ok(p.as_constant().expect("no variables"))
}

/// Parses a comma-separated list of elements, e.g. `0,0` or `a, -1/2`.
pub fn parse_point(text: &str, field: &Field) -> Result<Vec<Elem>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_element_at(&text[start..i], field, start)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(parse_element_at(&text[start..], field, start)?);
    Ok(out)
}
