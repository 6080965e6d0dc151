use crate::error::{Error, Result};
use crate::field::{Elem, Field, Series, Ternary};

use super::GwElement;

/// Splits a class over `k((s))` as `u + ⟨s⟩·v` with `u, v` over `k`.
///
/// Since `⟨s⟩·h = h`, hyperbolic planes found in `v` are moved into `u`; in
/// particular `v` is zero whenever it is Witt-trivial and equality over `k`
/// can decide that.
pub fn springer_residues(e: &GwElement) -> Result<(GwElement, GwElement)> {
    let f = e.field();
    let pd = f.puiseux_data().ok_or_else(|| {
        Error::Unsupported(format!("Springer residues need a series field, not {f}"))
    })?;
    let k = &pd.base;
    let mut first = GwElement::zero(k);
    let mut second = GwElement::zero(k);
    for (class, mult) in e.entries() {
        let Elem::Series(s) = &class.rep else {
            return Err(Error::FieldMismatch);
        };
        let (v, c) = match (s.valuation(), s.leading()) {
            (Some(v), Some(c)) => (v, c.clone()),
            _ => return Err(Error::NonUnitLeadingTerm),
        };
        let part = GwElement::class(k, &c)?.scale(mult);
        if v.rem_euclid(2) == 0 {
            first = first.add(&part)?;
        } else {
            second = second.add(&part)?;
        }
    }
    springer_normalize(&first, &second)
}

/// Moves hyperbolic planes of the second residue into the first, so that a
/// sum of residue pairs can be compared with a single pair.
pub fn springer_normalize(u: &GwElement, v: &GwElement) -> Result<(GwElement, GwElement)> {
    let k = u.field();
    let h = GwElement::hyperbolic(k);
    let (pairs, rest) = v.split_hyperbolic()?;
    let mut first = u.add(&h.scale(pairs))?;
    let mut second = rest;
    let r = second.rank();
    if r > 0 && r % 2 == 0 && second.equals(&h.scale(r / 2))? == Ternary::True {
        first = first.add(&second)?;
        second = GwElement::zero(k);
    }
    Ok((first, second))
}

/// `u + ⟨s⟩·v` over the series field `field`.
pub fn springer_reconstruct(field: &Field, u: &GwElement, v: &GwElement) -> Result<GwElement> {
    let pd = field.puiseux_data().ok_or(Error::NotAnExtension)?;
    let mut out = GwElement::zero(field);
    for (class, mult) in u.entries() {
        out = out.add(&GwElement::class(field, &field.embed(u.field(), &class.rep)?)?.scale(mult))?;
    }
    for (class, mult) in v.entries() {
        let a = Elem::Series(Series::monomial(pd.base.embed(v.field(), &class.rep)?, 1));
        out = out.add(&GwElement::class(field, &a)?.scale(mult))?;
    }
    Ok(out)
}
