use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::Matrix;

use super::{BilinearForm, GwElement};

/// A basis of `field` over `target`: products of the power bases of each
/// step of the tower, as elements of `field`.
pub fn tower_basis(field: &Field, target: &Field) -> Result<Vec<Elem>> {
    if field == target {
        return Ok(vec![field.one()]);
    }
    let parent = field.parent().ok_or(Error::NotAnExtension)?;
    let step = field.parent_basis().ok_or(Error::NotAnExtension)?;
    let below = tower_basis(&parent, target)?;
    let mut out = Vec::with_capacity(step.len() * below.len());
    for b in &below {
        let lifted = field.embed(&parent, b)?;
        for s in &step {
            out.push(field.mul(s, &lifted));
        }
    }
    Ok(out)
}

/// Gram matrix `Tr(a·βᵢβⱼ)` over `target`, in the tower basis unless a basis
/// is supplied.
pub fn transfer_gram(field: &Field, a: &Elem, target: &Field, basis: Option<&[Elem]>) -> Result<Matrix> {
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            owned = tower_basis(field, target)?;
            &owned
        }
    };
    let n = basis.len();
    let mut gram = vec![vec![target.zero(); n]; n];
    for i in 0..n {
        let ai = field.mul(a, &basis[i]);
        for j in i..n {
            let t = field.field_trace(&field.mul(&ai, &basis[j]), target)?;
            gram[i][j] = t.clone();
            gram[j][i] = t;
        }
    }
    Ok(gram)
}

/// `Tr_{L/k}: GW(L) → GW(k)`, one step of the tower at a time.
pub fn transfer(e: &GwElement, target: &Field) -> Result<GwElement> {
    e.field().degree_over(target)?;
    let mut cur = e.clone();
    while cur.field() != target {
        let field = cur.field().clone();
        let parent = field.parent().ok_or(Error::NotAnExtension)?;
        let mut next = GwElement::zero(&parent);
        for (class, mult) in cur.entries() {
            let gram = transfer_gram(&field, &class.rep, &parent, field.parent_basis().as_deref())?;
            let part = BilinearForm::new(&parent, gram)?.diagonalize()?;
            next = next.add(&part.scale(mult))?;
        }
        cur = next;
    }
    Ok(cur)
}
