//! Field descriptors.
//!
//! ```text
//! desc  := base level*
//! base  := 'Q' | 'R' | 'F' prime-power
//! level := '|'? '(' name ')' (':' minpoly)?        extension or rational functions
//!        | '|'? '((' name ';' m ';' cap (';' twist)? '))'
//! ```
//! A minimal polynomial runs until the next `|` or the end of the input, so a
//! level after an extension must start with `|`, e.g. `Q(a):a^2-2|(b):b^2-a`.

use crate::arith;
use crate::error::{syntax, Error, Result};

use super::{upoly, Field};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            syntax(self.pos, format!("expected `{s}`"))
        }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let end = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn name(&mut self) -> Result<&'a str> {
        let start = self.pos;
        let n = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if n.is_empty() || !n.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return syntax(start, "expected a name");
        }
        Ok(n)
    }

    fn number(&mut self) -> Result<i64> {
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        digits
            .parse()
            .or_else(|_| syntax(start, "expected a positive integer"))
    }
}

fn parse_base(c: &mut Cursor) -> Result<Field> {
    let start = c.pos;
    if c.eat("Q") {
        return Ok(Field::rationals());
    }
    if c.eat("R") {
        return Ok(Field::reals());
    }
    if c.eat("F") {
        let npos = c.pos;
        let q = c.number()? as u64;
        if q == 2 || q.is_power_of_two() {
            return Err(Error::CharacteristicTwo);
        }
        if arith::is_prime_u64(q) {
            return Field::prime(q);
        }
        // prime power: 𝔽_p extended by the first irreducible of degree r
        for p in (3..=q).filter(|&p| arith::is_prime_u64(p)) {
            let mut r = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                r += 1;
            }
            if r > 0 {
                if m != 1 {
                    break;
                }
                return Field::prime(p)?.finite_extension(r, "w");
            }
        }
        return syntax(npos, format!("{q} is not an odd prime power"));
    }
    syntax(start, "expected `Q`, `R` or `F<q>`")
}

pub(crate) fn parse_descriptor(text: &str) -> Result<Field> {
    let mut c = Cursor { text, pos: 0 };
    c.skip_ws();
    let mut field = parse_base(&mut c)?;
    loop {
        c.skip_ws();
        if c.rest().is_empty() {
            return Ok(field);
        }
        let bar = c.eat("|");
        c.skip_ws();
        if c.eat("((") {
            field = parse_puiseux(&mut c, &field)?;
            continue;
        }
        if !c.eat("(") {
            return syntax(c.pos, if bar { "expected `(`" } else { "expected `(` or `|`" });
        }
        c.skip_ws();
        let name = c.name()?;
        c.skip_ws();
        c.expect(")")?;
        c.skip_ws();
        if !c.eat(":") {
            field = Field::rational_functions(&field, name)?;
            continue;
        }
        let start = c.pos;
        let body = c.take_while(|ch| ch != '|');
        let vars = vec![name.to_string()];
        let poly = crate::poly::parse::parse_polynomial_at(body, &field, Some(&vars), start)?;
        let coeffs = poly.to_univariate(0)?;
        if upoly::degree(&coeffs).unwrap_or(0) == 0 {
            return syntax(start, "minimal polynomial must have positive degree");
        }
        field = Field::extension(&field, name, coeffs)?;
    }
}

fn parse_puiseux(c: &mut Cursor, base: &Field) -> Result<Field> {
    c.skip_ws();
    let name = c.name()?.to_string();
    c.skip_ws();
    c.expect(";")?;
    c.skip_ws();
    let mpos = c.pos;
    let m = c.number()?;
    if m == 0 || m > u32::MAX as i64 {
        return syntax(mpos, "ramification must be a positive integer");
    }
    c.skip_ws();
    c.expect(";")?;
    c.skip_ws();
    let cap = c.number()?;
    c.skip_ws();
    let mut twist = base.one();
    if c.eat(";") {
        let start = c.pos;
        let body = c.take_while(|ch| ch != ')');
        twist = crate::poly::parse::parse_element_at(body, base, start)?;
    }
    c.expect("))")?;
    Field::puiseux_twisted(base, &name, m as u32, twist, cap)
}
