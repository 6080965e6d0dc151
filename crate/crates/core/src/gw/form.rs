use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};

use super::GwElement;

/// A symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    field: Field,
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(field: &Field, gram: Matrix) -> Result<Self> {
        let n = gram.len();
        if let Some(row) = gram.iter().find(|r| r.len() != n) {
            return Err(Error::ArityMismatch {
                expected: n,
                got: row.len(),
            });
        }
        if !linalg::is_symmetric(&gram) {
            return Err(Error::NotSymmetric);
        }
        Ok(BilinearForm {
            field: field.clone(),
            gram,
        })
    }

    pub fn diagonal(field: &Field, diag: &[Elem]) -> Self {
        let n = diag.len();
        let mut gram = vec![vec![field.zero(); n]; n];
        for (i, d) in diag.iter().enumerate() {
            gram[i][i] = d.clone();
        }
        BilinearForm {
            field: field.clone(),
            gram,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn determinant(&self) -> Result<Elem> {
        linalg::determinant(&self.field, &self.gram)
    }

    /// The form `PᵀBP`.
    pub fn congruent(&self, p: &Matrix) -> BilinearForm {
        let f = &self.field;
        let g = linalg::mat_mul(f, &linalg::transpose(p), &linalg::mat_mul(f, &self.gram, p));
        BilinearForm {
            field: f.clone(),
            gram: g,
        }
    }

    /// Symmetric elimination to a diagonal `(d₁, …, dₙ)` congruent to the form.
    pub fn diagonal_entries(&self) -> Result<Vec<Elem>> {
        let f = &self.field;
        let n = self.dim();
        let mut a = self.gram.clone();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut undecided = false;
            let mut pivot = None;
            for i in k..n {
                match nonzero(f, &a[i][i]) {
                    Some(true) => {
                        pivot = Some(i);
                        break;
                    }
                    None => undecided = true,
                    Some(false) => {}
                }
            }
            if pivot.is_none() {
                'search: for i in k..n {
                    for j in (i + 1)..n {
                        match nonzero(f, &a[i][j]) {
                            Some(true) => {
                                // v_i ← v_i + v_j makes the diagonal entry 2·a_ij
                                for c in 0..n {
                                    let v = f.add(&a[i][c], &a[j][c]);
                                    a[i][c] = v;
                                }
                                for r in 0..n {
                                    let v = f.add(&a[r][i], &a[r][j]);
                                    a[r][i] = v;
                                }
                                pivot = Some(i);
                                break 'search;
                            }
                            None => undecided = true,
                            Some(false) => {}
                        }
                    }
                }
            }
            let Some(p) = pivot else {
                if undecided {
                    return Err(Error::PrecisionExhausted(
                        "every remaining Gram entry vanishes to the available precision".into(),
                    ));
                }
                return Err(Error::DegenerateForm);
            };
            if p != k {
                a.swap(p, k);
                for row in a.iter_mut() {
                    row.swap(p, k);
                }
            }
            let d = a[k][k].clone();
            let inv = f.inv(&d)?;
            // Schur complement: a_rc ← a_rc - a_rk a_kc / d
            let col: Vec<Elem> = (0..n).map(|r| a[r][k].clone()).collect();
            for r in (k + 1)..n {
                if nonzero(f, &col[r]) == Some(false) {
                    continue;
                }
                let factor = f.mul(&col[r], &inv);
                for c in (k + 1)..n {
                    let v = f.sub(&a[r][c], &f.mul(&factor, &col[c]));
                    a[r][c] = v;
                }
            }
            out.push(d);
        }
        Ok(out)
    }

    pub fn diagonalize(&self) -> Result<GwElement> {
        let diag = self.diagonal_entries()?;
        GwElement::from_diagonal(&self.field, &diag)
    }
}

/// `Some(true)` for a known nonzero element, `None` when a truncated series
/// has no known term.
fn nonzero(f: &Field, x: &Elem) -> Option<bool> {
    match x {
        Elem::Series(s) if s.is_zero() && !s.is_exact() => None,
        _ => Some(!f.is_zero(x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Ternary;

    fn mat(f: &Field, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
    }

    #[test]
    fn hyperbolic_plane() {
        let r = Field::reals();
        let b = BilinearForm::new(&r, mat(&r, &[&[0, 2], &[2, 0]])).unwrap();
        assert_eq!(b.diagonalize().unwrap().render(), "<1> + <-1>");
        let q = Field::rationals();
        let id = BilinearForm::diagonal(&q, &[q.one(), q.one(), q.one()]);
        assert_eq!(id.diagonalize().unwrap().render(), "3<1>");
    }

    #[test]
    fn function_field_gram() {
        let f = Field::parse("Q(z)").unwrap();
        let b = BilinearForm::new(&f, mat(&f, &[&[0, 4], &[4, 0]])).unwrap();
        let e = b.diagonalize().unwrap();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.equals(&GwElement::hyperbolic(&f)).unwrap(), Ternary::True);
    }

    #[test]
    fn bad_input() {
        let q = Field::rationals();
        assert_eq!(
            BilinearForm::new(&q, mat(&q, &[&[1, 2], &[3, 4]])).unwrap_err(),
            Error::NotSymmetric
        );
        let deg = BilinearForm::new(&q, mat(&q, &[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(deg.diagonalize().unwrap_err(), Error::DegenerateForm);
    }

    #[test]
    fn diagonal_matches_determinant_class() {
        let q = Field::rationals();
        let b = BilinearForm::new(&q, mat(&q, &[&[0, 1, 2], &[1, 0, 3], &[2, 3, 0]])).unwrap();
        let d = b.diagonal_entries().unwrap();
        let prod = d.iter().fold(q.one(), |acc, x| q.mul(&acc, x));
        let det = b.determinant().unwrap();
        assert_eq!(q.same_square_class(&prod, &det).unwrap(), Ternary::True);
    }
}
