//! Sparse multivariate polynomials over a [`Field`].
//!
//! A variable named `t` is the deformation parameter: it takes part in
//! arithmetic and evaluation but never in gradients, Jacobians or Hessians.

pub(crate) mod parse;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{upoly, Elem, Field};
use crate::linalg;

pub use parse::{parse_element, parse_point};

pub const DEFORMATION_VAR: &str = "t";

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Elem>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.vars.join(","), self.render())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Polynomial {
    pub fn zero(field: &Field, vars: &[String]) -> Self {
        Polynomial {
            field: field.clone(),
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, vars: &[String], c: Elem) -> Self {
        let mut p = Self::zero(field, vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn variable(field: &Field, vars: &[String], name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(field, vars);
        p.add_term(e, field.one());
        Ok(p)
    }

    pub fn from_terms(
        field: &Field,
        vars: &[String],
        terms: impl IntoIterator<Item = (Vec<u32>, Elem)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::ArityMismatch {
                    expected: vars.len(),
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Parses `text`; with `vars == None` the variables are inferred.
    pub fn parse(text: &str, field: &Field, vars: Option<&[String]>) -> Result<Self> {
        parse::parse_polynomial(text, field, vars)
    }

    /// Parses several polynomials with a shared, jointly inferred variable
    /// list.
    pub fn parse_system(texts: &[&str], field: &Field, vars: Option<&[String]>) -> Result<Vec<Self>> {
        parse::parse_system(texts, field, vars)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Elem) {
        let f = &self.field;
        if f.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = f.add(x, &c);
                if f.is_zero(x) {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Index of the deformation variable, if present.
    pub fn deformation_index(&self) -> Option<usize> {
        self.vars.iter().position(|v| v == DEFORMATION_VAR)
    }

    /// Indices of the non-deformation variables.
    pub fn space_indices(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.vars[i] != DEFORMATION_VAR)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in one variable.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// The constant term, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Elem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert!(
            self.field == other.field && self.vars == other.vars,
            "polynomials over different rings"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut out = Polynomial::zero(&self.field, &self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Elem) -> Polynomial {
        let mut out = Polynomial::zero(&self.field, &self.vars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), self.field.mul(x, c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::constant(&self.field, &self.vars, self.field.one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.field, &self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, self.field.mul(&self.field.from_i64(e[i] as i64), c));
        }
        out
    }

    /// Partial derivatives in every variable except `t`.
    pub fn gradient(&self) -> Vec<Polynomial> {
        self.space_indices()
            .into_iter()
            .map(|i| self.derivative(i))
            .collect()
    }

    pub fn hessian_matrix(&self) -> Vec<Vec<Polynomial>> {
        let idx = self.space_indices();
        let grad = self.gradient();
        grad.iter()
            .map(|g| idx.iter().map(|&j| g.derivative(j)).collect())
            .collect()
    }

    pub fn hessian_determinant(&self) -> Polynomial {
        determinant(&self.field, &self.vars, &self.hessian_matrix())
    }

    /// Evaluates at a point listing a value for every variable.
    pub fn evaluate(&self, point: &[Elem]) -> Result<Elem> {
        self.evaluate_in(&self.field, point)
    }

    /// Evaluates with coefficients embedded into `target` (an extension or
    /// Puiseux field above the coefficient field).
    pub fn evaluate_in(&self, target: &Field, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<Elem>> = point.iter().map(|x| vec![target.one(), x.clone()]).collect();
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut term = target.embed(&self.field, c)?;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = target.mul(powers[i].last().expect("nonempty"), &point[i]);
                    powers[i].push(next);
                }
                term = target.mul(&term, &powers[i][k as usize]);
            }
            acc = target.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Substitutes polynomials (over the same field, possibly different
    /// variables) for every variable.
    pub fn compose(&self, values: &[Polynomial]) -> Result<Polynomial> {
        if values.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                got: values.len(),
            });
        }
        let first = values.first().ok_or(Error::ArityMismatch { expected: 1, got: 0 })?;
        let (field, vars) = (first.field.clone(), first.vars.clone());
        let mut out = Polynomial::zero(&field, &vars);
        let mut powers: Vec<Vec<Polynomial>> = values
            .iter()
            .map(|v| vec![Polynomial::constant(&field, &vars, field.one()), v.clone()])
            .collect();
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(&field, &vars, field.embed(&self.field, c)?);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("nonempty").mul(&values[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Replaces one variable by a polynomial in the same ring.
    pub fn substitute(&self, var: &str, value: &Polynomial) -> Result<Polynomial> {
        let i = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        let values: Vec<Polynomial> = (0..self.vars.len())
            .map(|j| {
                if j == i {
                    Ok(value.clone())
                } else {
                    Polynomial::variable(&self.field, &self.vars, &self.vars[j])
                }
            })
            .collect::<Result<_>>()?;
        self.compose(&values)
    }

    /// `f(x + p)` for a point `p` given on the space variables (t untouched).
    pub fn translate(&self, point: &[Elem]) -> Result<Polynomial> {
        let idx = self.space_indices();
        if point.len() != idx.len() {
            return Err(Error::ArityMismatch {
                expected: idx.len(),
                got: point.len(),
            });
        }
        let mut values = Vec::with_capacity(self.vars.len());
        let mut k = 0;
        for (j, name) in self.vars.iter().enumerate() {
            let v = Polynomial::variable(&self.field, &self.vars, name)?;
            if idx.contains(&j) {
                let c = Polynomial::constant(&self.field, &self.vars, point[k].clone());
                values.push(v.add(&c));
                k += 1;
            } else {
                values.push(v);
            }
        }
        self.compose(&values)
    }

    /// Coefficients moved into a larger field.
    pub fn base_change(&self, target: &Field) -> Result<Polynomial> {
        let mut out = Polynomial::zero(target, &self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), target.embed(&self.field, c)?);
        }
        Ok(out)
    }

    /// Same polynomial over a longer variable list (names must be a subset).
    pub fn with_vars(&self, vars: &[String]) -> Result<Polynomial> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        let mut out = Polynomial::zero(&self.field, vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] = k;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Homogenization with a new leading variable: `F(x0, x) = x0^d f(x/x0)`.
    pub fn homogenize(&self, name: &str) -> Polynomial {
        let d = self.total_degree().unwrap_or(0);
        let mut vars = vec![name.to_string()];
        vars.extend(self.vars.iter().cloned());
        let mut out = Polynomial::zero(&self.field, &vars);
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            let mut ne = vec![d - deg];
            ne.extend(e.iter().copied());
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Coefficient list of a polynomial in a single variable `i` whose
    /// other exponents all vanish.
    pub fn to_univariate(&self, i: usize) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return Err(Error::Unsupported(format!(
                    "`{}` is not univariate in {}",
                    self.render(),
                    self.vars[i]
                )));
            }
            let k = e[i] as usize;
            if out.len() <= k {
                out.resize(k + 1, self.field.zero());
            }
            out[k] = c.clone();
        }
        Ok(upoly::trim(&self.field, out))
    }

    /// Canonical rendering: graded lexicographic, highest terms first.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (k, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mut cs = self.field.render(c);
            let mut negative = false;
            if let Some(rest) = cs.strip_prefix('-') {
                if !rest.contains(['+', '-', ' ']) {
                    negative = true;
                    cs = rest.to_string();
                }
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], p)
                    }
                })
                .collect();
            let body = if mono.is_empty() {
                crate::field::wrap_sum(&cs)
            } else if cs == "1" {
                mono.join("*")
            } else {
                format!("{}*{}", crate::field::wrap(&cs), mono.join("*"))
            };
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

/// Determinant of a square matrix of polynomials (expansion over column
/// subsets, no division).
pub fn determinant(field: &Field, vars: &[String], m: &[Vec<Polynomial>]) -> Polynomial {
    let zero = Polynomial::zero(field, vars);
    let one = Polynomial::constant(field, vars, field.one());
    linalg::det_by_subsets(
        m.len(),
        |i, j| m[i][j].clone(),
        zero,
        one,
        |a, b| a.add(b),
        |a, b| a.mul(b),
        |a| a.neg(),
    )
}

/// Matrix of partials ∂f_i/∂x_j over the space variables.
pub fn jacobian_matrix(fs: &[Polynomial]) -> Result<Vec<Vec<Polynomial>>> {
    let first = fs.first().ok_or(Error::NonSquareSystem { polys: 0, vars: 0 })?;
    let idx = first.space_indices();
    if idx.len() != fs.len() {
        return Err(Error::NonSquareSystem {
            polys: fs.len(),
            vars: idx.len(),
        });
    }
    Ok(fs
        .iter()
        .map(|f| idx.iter().map(|&j| f.derivative(j)).collect())
        .collect())
}

pub fn jacobian_determinant(fs: &[Polynomial]) -> Result<Polynomial> {
    let m = jacobian_matrix(fs)?;
    Ok(determinant(fs[0].field(), fs[0].vars(), &m))
}

/// Canonical variable names `x1..xn`.
pub fn standard_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, &q(), None).unwrap()
    }

    #[test]
    fn cusp_gradient_and_hessian() {
        let f = p("x2^2 - x1^3");
        let g = f.gradient();
        assert_eq!(g[0].render(), "-3*x1^2");
        assert_eq!(g[1].render(), "2*x2");
        assert_eq!(f.hessian_determinant().render(), "-12*x1");
        assert_eq!(jacobian_determinant(&g).unwrap().render(), "-12*x1");
    }

    #[test]
    fn deformation_gradient_excludes_t() {
        let f = p("x2^2 - x1^3 + t*(3*x1 + 2*x2 + 2*x1^3 - t*x1^3)");
        assert_eq!(f.vars(), &["x1", "x2", "t"]);
        let g = f.gradient();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].render(), "-3*x1^2*t^2 + 6*x1^2*t - 3*x1^2 + 3*t");
        assert_eq!(g[1].render(), "2*x2 + 2*t");
    }

    #[test]
    fn quadric_hessians() {
        assert_eq!(p("x1^2 - x2^2").hessian_determinant().render(), "-4");
        let f = Polynomial::parse("a*x1^2 + 3*x2^2", &Field::parse("Q(a):a^2-2").unwrap(), None).unwrap();
        assert_eq!(f.hessian_determinant().render(), "12*a");
    }

    #[test]
    fn identity_jacobian() {
        let sys = Polynomial::parse_system(&["x1", "x2", "x3"], &q(), None).unwrap();
        assert_eq!(jacobian_determinant(&sys).unwrap().render(), "1");
        let bad = Polynomial::parse_system(&["x1", "x2"], &q(), Some(&standard_vars(3))).unwrap();
        assert!(matches!(
            jacobian_determinant(&bad),
            Err(Error::NonSquareSystem { .. })
        ));
    }

    #[test]
    fn homogenize_dehomogenize() {
        let f = p("x1^3 + 2*x1*x2 - 5");
        let h = f.homogenize("x0");
        assert_eq!(h.render(), "-5*x0^3 + 2*x0*x1*x2 + x1^3");
        let field = q();
        let one = field.one();
        let vars = f.vars().to_vec();
        let mut values = vec![Polynomial::constant(&field, &vars, one)];
        for v in &vars {
            values.push(Polynomial::variable(&field, &vars, v).unwrap());
        }
        assert_eq!(h.compose(&values).unwrap(), f);
    }

    #[test]
    fn evaluate_and_translate() {
        let f = p("x2^2 - x1^3");
        let field = q();
        assert!(field.is_zero(&f.evaluate(&[field.zero(), field.zero()]).unwrap()));
        let g = f.translate(&[field.one(), field.one()]).unwrap();
        assert!(field.is_zero(&g.evaluate(&[field.zero(), field.zero()]).unwrap()));
        assert_eq!(
            f.evaluate(&[field.one()]),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn render_round_trip() {
        for s in ["0", "x2^2 - x1^3", "3*x1 + 2*x2 + 2*x1^3 - t*x1^3", "1/2*x1 - 7/3", "(x1 + 1)^3"] {
            let a = p(s);
            let b = Polynomial::parse(&a.render(), &q(), Some(a.vars())).unwrap();
            assert_eq!(a, b, "{s}");
        }
    }
}
