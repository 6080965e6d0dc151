//! Local algebras `𝒪_{f⁻¹(0),x}` of isolated zeros by truncation.
//!
//! For increasing `N` the quotient `k[x]/((f) + m^N)` is computed by row
//! reduction of the Macaulay matrix of monomial multiples of the `fᵢ` in
//! degrees `< N`. When two consecutive orders give the same dimension,
//! `m^N ⊆ (f) + m^{N+1}`, hence `m^N ⊆ (f)` in the local ring by Nakayama,
//! and the truncated quotient is the local algebra.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};
use crate::poly::{self, Polynomial};

pub const DEFAULT_MAX_ORDER: u32 = 32;

#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    field: Field,
    vars: Vec<String>,
    point: Vec<Elem>,
    system: Vec<Polynomial>,
    order: u32,
    basis: Vec<Vec<u32>>,
    columns: Vec<Vec<u32>>,
    column_of: HashMap<Vec<u32>, usize>,
    rows: Matrix,
    pivots: Vec<usize>,
    basis_columns: Vec<usize>,
}

/// Monomials of total degree `< n` in `nvars` variables, largest first
/// (degree descending, then exponent vectors descending).
fn monomials_below(nvars: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in (0..n).rev() {
        let mut layer = Vec::new();
        compositions(nvars, d, &mut vec![0; nvars], 0, &mut layer);
        layer.sort_by(|a, b| b.cmp(a));
        out.extend(layer);
    }
    out
}

fn compositions(nvars: usize, d: u32, cur: &mut Vec<u32>, i: usize, out: &mut Vec<Vec<u32>>) {
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if i == nvars - 1 {
        cur[i] = d;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for k in 0..=d {
        cur[i] = k;
        compositions(nvars, d - k, cur, i + 1, out);
    }
    cur[i] = 0;
}

fn order_of(p: &Polynomial) -> Option<u32> {
    p.terms().map(|(e, _)| e.iter().sum()).min()
}

struct Truncation {
    columns: Vec<Vec<u32>>,
    column_of: HashMap<Vec<u32>, usize>,
    rows: Matrix,
    pivots: Vec<usize>,
}

fn truncate(system: &[Polynomial], nvars: usize, n: u32) -> Result<Truncation> {
    let field = system[0].field().clone();
    let columns = monomials_below(nvars, n);
    let column_of: HashMap<Vec<u32>, usize> =
        columns.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let mut rows = Vec::new();
    for f in system {
        let Some(ord) = order_of(f) else { continue };
        if ord >= n {
            continue;
        }
        for m in monomials_below(nvars, n - ord) {
            let mut row = vec![field.zero(); columns.len()];
            let mut any = false;
            for (e, c) in f.terms() {
                let prod: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                if let Some(&j) = column_of.get(&prod) {
                    row[j] = field.add(&row[j], c);
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    let pivots = if rows.is_empty() {
        Vec::new()
    } else {
        linalg::rref(&field, &mut rows)?
    };
    Ok(Truncation {
        columns,
        column_of,
        rows,
        pivots,
    })
}

/// `dim k[x]/((f) + m^n)` for a system already centred at the origin.
pub fn truncated_dimension(system: &[Polynomial], n: u32) -> Result<usize> {
    let nvars = system.first().map_or(0, |p| p.nvars());
    let t = truncate(system, nvars, n)?;
    Ok(t.columns.len() - t.pivots.len())
}

impl LocalAlgebra {
    /// The local algebra of `fs` at `point`, certified by stabilization.
    pub fn new(fs: &[Polynomial], point: &[Elem], max_order: u32) -> Result<Self> {
        let first = fs.first().ok_or(Error::NonSquareSystem { polys: 0, vars: 0 })?;
        if first.deformation_index().is_some() {
            return Err(Error::Unsupported(
                "local algebras of systems involving the deformation parameter".into(),
            ));
        }
        let field = first.field().clone();
        let vars = first.vars().to_vec();
        if point.len() != vars.len() {
            return Err(Error::ArityMismatch {
                expected: vars.len(),
                got: point.len(),
            });
        }
        for f in fs {
            if f.vars() != vars.as_slice() || f.field() != &field {
                return Err(Error::FieldMismatch);
            }
            if !field.is_zero(&f.evaluate(point)?) {
                return Err(Error::NotAZero);
            }
        }
        let system: Vec<Polynomial> = fs.iter().map(|f| f.translate(point)).collect::<Result<_>>()?;
        let n = vars.len();
        let mut prev = truncate(&system, n, 1)?;
        for order in 1..max_order {
            let next = truncate(&system, n, order + 1)?;
            let d0 = prev.columns.len() - prev.pivots.len();
            let d1 = next.columns.len() - next.pivots.len();
            if d0 == d1 {
                let basis_columns: Vec<usize> = (0..prev.columns.len())
                    .rev()
                    .filter(|c| !prev.pivots.contains(c))
                    .collect();
                let basis = basis_columns.iter().map(|&c| prev.columns[c].clone()).collect();
                return Ok(LocalAlgebra {
                    field,
                    vars,
                    point: point.to_vec(),
                    system,
                    order,
                    basis,
                    columns: prev.columns,
                    column_of: prev.column_of,
                    rows: prev.rows,
                    pivots: prev.pivots,
                    basis_columns,
                });
            }
            prev = next;
        }
        Err(Error::NotIsolated(max_order as usize))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn point(&self) -> &[Elem] {
        &self.point
    }

    /// The system translated so that the point is the origin.
    pub fn system(&self) -> &[Polynomial] {
        &self.system
    }

    /// The certified truncation order `N` (the dimension agrees at `N + 1`).
    pub fn certificate_order(&self) -> u32 {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Basis monomials (in the translated coordinates), smallest first.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn render_basis(&self) -> Vec<String> {
        self.basis
            .iter()
            .map(|e| Polynomial::from_terms(&self.field, &self.vars, [(e.clone(), self.field.one())])
                .expect("arity")
                .render())
            .collect()
    }

    /// Coordinates of a polynomial in the translated coordinates.
    pub fn normal_form_local(&self, p: &Polynomial) -> Vec<Elem> {
        let f = &self.field;
        let mut v = vec![f.zero(); self.columns.len()];
        for (e, c) in p.terms() {
            if let Some(&j) = self.column_of.get(e) {
                v[j] = f.add(&v[j], c);
            }
        }
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[pc]) {
                continue;
            }
            let factor = v[pc].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&factor, r));
                }
            }
        }
        self.basis_columns.iter().map(|&c| v[c].clone()).collect()
    }

    /// Coordinates of a polynomial given in the original coordinates.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Vec<Elem>> {
        Ok(self.normal_form_local(&p.translate(&self.point)?))
    }

    /// Coordinates of the product of two basis monomials.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Elem> {
        let e: Vec<u32> = self.basis[i].iter().zip(&self.basis[j]).map(|(a, b)| a + b).collect();
        let m = Polynomial::from_terms(&self.field, &self.vars, [(e, self.field.one())]).expect("arity");
        self.normal_form_local(&m)
    }

    /// Product of two coordinate vectors.
    pub fn multiply(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let d = self.dimension();
        let mut out = vec![f.zero(); d];
        for i in 0..d {
            if f.is_zero(&a[i]) {
                continue;
            }
            for j in 0..d {
                if f.is_zero(&b[j]) {
                    continue;
                }
                let c = f.mul(&a[i], &b[j]);
                for (o, x) in out.iter_mut().zip(self.basis_product(i, j)) {
                    *o = f.add(o, &f.mul(&c, &x));
                }
            }
        }
        out
    }

    /// Image of the Jacobian determinant.
    pub fn jacobian_image(&self) -> Result<Vec<Elem>> {
        let j = poly::jacobian_determinant(&self.system)?;
        let v = self.normal_form_local(&j);
        if v.iter().all(|x| self.field.is_zero(x)) {
            return Err(Error::JacobianVanishesInAlgebra);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(texts: &[&str], f: &Field) -> Vec<Polynomial> {
        Polynomial::parse_system(texts, f, None).unwrap()
    }

    fn origin(f: &Field, n: usize) -> Vec<Elem> {
        vec![f.zero(); n]
    }

    #[test]
    fn z_squared() {
        let q = Field::rationals();
        let a = LocalAlgebra::new(&sys(&["z^2"], &q), &origin(&q, 1), DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(a.dimension(), 2);
        assert_eq!(a.render_basis(), vec!["1", "z"]);
        let z3 = Polynomial::parse("z^3", &q, Some(a.vars())).unwrap();
        assert!(a.normal_form(&z3).unwrap().iter().all(|x| q.is_zero(x)));
        assert_eq!(a.jacobian_image().unwrap(), vec![q.zero(), q.from_i64(2)]);
    }

    #[test]
    fn simple_zero() {
        let q = Field::rationals();
        let a = LocalAlgebra::new(&sys(&["x1", "x2"], &q), &origin(&q, 2), DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(a.dimension(), 1);
        assert_eq!(a.render_basis(), vec!["1"]);
        let one = Polynomial::parse("1", &q, Some(a.vars())).unwrap();
        assert_eq!(a.normal_form(&one).unwrap(), vec![q.one()]);
    }

    /// Brute-force oracle: reduce by hand at fixed truncation 4.
    #[test]
    fn cusp_gradient() {
        let q = Field::rationals();
        let f = Polynomial::parse("x2^2 - x1^3", &q, None).unwrap();
        let grad = f.gradient();
        let a = LocalAlgebra::new(&grad, &origin(&q, 2), DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(a.dimension(), 2);
        assert_eq!(a.render_basis(), vec!["1", "x1"]);
        // modulo (x1^2, x2) every monomial except 1, x1 vanishes
        for m in monomials_below(2, 4) {
            let p = Polynomial::from_terms(&q, a.vars(), [(m.clone(), q.one())]).unwrap();
            let nf = a.normal_form(&p).unwrap();
            let expect = match m.as_slice() {
                [0, 0] => vec![q.one(), q.zero()],
                [1, 0] => vec![q.zero(), q.one()],
                _ => vec![q.zero(), q.zero()],
            };
            assert_eq!(nf, expect, "{m:?}");
        }
        assert_eq!(a.jacobian_image().unwrap(), vec![q.zero(), q.from_i64(-12)]);
        let h = f.hessian_determinant();
        assert_eq!(a.normal_form(&h).unwrap(), vec![q.zero(), q.from_i64(-12)]);
    }

    #[test]
    fn errors() {
        let q = Field::rationals();
        assert_eq!(
            LocalAlgebra::new(&sys(&["z - 1"], &q), &origin(&q, 1), 8).unwrap_err(),
            Error::NotAZero
        );
        // (x1*x2, x1*x2) vanishes on both axes
        assert_eq!(
            LocalAlgebra::new(&sys(&["x1*x2", "x1^2*x2"], &q), &origin(&q, 2), 8).unwrap_err(),
            Error::NotIsolated(8)
        );
    }

    #[test]
    fn translated_point() {
        let q = Field::rationals();
        let fs = sys(&["(z - 3)^2"], &q);
        let a = LocalAlgebra::new(&fs, &[q.from_i64(3)], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(a.dimension(), 2);
        assert_eq!(a.certificate_order(), 2);
    }

    #[test]
    fn commutative_and_associative() {
        let q = Field::rationals();
        let a = LocalAlgebra::new(&sys(&["x1^3 - x2^2", "x1*x2"], &q), &origin(&q, 2), DEFAULT_MAX_ORDER).unwrap();
        let d = a.dimension();
        let e = |i: usize| {
            let mut v = vec![q.zero(); d];
            v[i] = q.one();
            v
        };
        for i in 0..d {
            for j in 0..d {
                assert_eq!(a.multiply(&e(i), &e(j)), a.multiply(&e(j), &e(i)));
                for k in 0..d {
                    let l = a.multiply(&a.multiply(&e(i), &e(j)), &e(k));
                    let r = a.multiply(&e(i), &a.multiply(&e(j), &e(k)));
                    assert_eq!(l, r);
                }
            }
        }
    }
}
