//! Critical-point branches of deformations `f + t·g` as Puiseux series, and
//! the bifurcation check `μ_p(f) = Σ Tr type(branch)`.
//!
//! A branch lives in `k'((s))` with `s^m = t/λ`. Newton's method
//! `x ← x - H(x)⁻¹ G(x)`, `G = grad(f + tg)`, `H` its Hessian, converges
//! when `val G(x) > 2·val det H(x)`; the excess `val G - 2 val det H` then at
//! least doubles with every step, and is checked to do so.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, Series, Ternary};
use crate::gw::{springer_normalize, springer_residues, transfer, GwElement};
use crate::linalg::{self, Matrix};
use crate::milnor;
use crate::degree::LocalDegree;
use crate::poly::{self, Polynomial, DEFORMATION_VAR};

pub const DEFAULT_PRECISION: i64 = 16;

/// `f + t·g` over a common variable list (space variables of `f`, then `t`).
#[derive(Clone, Debug)]
pub struct Deformation {
    pub f: Polynomial,
    pub g: Polynomial,
    total: Polynomial,
    space: Vec<usize>,
    t_index: usize,
}

impl Deformation {
    pub fn new(f: &Polynomial, g: &Polynomial) -> Result<Self> {
        if f.deformation_index().is_some() {
            return Err(Error::Unsupported("f may not involve t".into()));
        }
        let mut vars: Vec<String> = f.vars().to_vec();
        for v in g.vars() {
            if v != DEFORMATION_VAR && !vars.contains(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        vars.push(DEFORMATION_VAR.to_string());
        let k = f.field();
        if g.field() != k {
            return Err(Error::FieldMismatch);
        }
        let t = Polynomial::variable(k, &vars, DEFORMATION_VAR)?;
        let total = f.with_vars(&vars)?.add(&t.mul(&g.with_vars(&vars)?));
        let space = total.space_indices();
        let t_index = total.deformation_index().expect("t was added");
        Ok(Deformation {
            f: f.clone(),
            g: g.clone(),
            total,
            space,
            t_index,
        })
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn vars(&self) -> Vec<String> {
        self.space.iter().map(|&i| self.total.vars()[i].clone()).collect()
    }

    pub fn total(&self) -> &Polynomial {
        &self.total
    }

    fn full_point(&self, l: &Field, coords: &[Elem]) -> Result<Vec<Elem>> {
        let t = l.t_element().ok_or_else(|| Error::Unsupported(format!("{l} is not a series field")))?;
        let mut out = vec![l.zero(); self.total.nvars()];
        for (&i, c) in self.space.iter().zip(coords) {
            out[i] = c.clone();
        }
        out[self.t_index] = t;
        Ok(out)
    }

    /// `grad(f + tg)` at a point over the series field `l`.
    pub fn gradient_at(&self, l: &Field, coords: &[Elem]) -> Result<Vec<Elem>> {
        let p = self.full_point(l, coords)?;
        self.total.gradient().iter().map(|g| g.evaluate_in(l, &p)).collect()
    }

    pub fn hessian_at(&self, l: &Field, coords: &[Elem]) -> Result<Matrix> {
        let p = self.full_point(l, coords)?;
        self.total
            .hessian_matrix()
            .iter()
            .map(|row| row.iter().map(|h| h.evaluate_in(l, &p)).collect())
            .collect()
    }
}

/// Leading data of a branch: coordinates over a series field.
#[derive(Clone, Debug)]
pub struct Seed {
    pub field: Field,
    pub coords: Vec<Elem>,
}

/// Parses `x1: t^(1/2)*-1; x2: -t` (every space variable once). The
/// ramification is the lcm of the exponent denominators, and a twisted
/// uniformizer `(t/c)^(1/m)` may be used instead of `t^(1/m)`.
pub fn parse_seed(text: &str, base: &Field, vars: &[String], precision: i64) -> Result<Seed> {
    let mut m: u32 = 1;
    let mut twist = base.one();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if text[i..].starts_with("^(") {
            let close = text[i..].find(')').map(|j| i + j).ok_or_else(|| syntax_err(i, "unclosed exponent"))?;
            let inner = &text[i + 2..close];
            if let Some((_, d)) = inner.split_once('/') {
                let d: u32 = d.trim().parse().map_err(|_| syntax_err(i + 2, "bad exponent denominator"))?;
                if d == 0 {
                    return Err(syntax_err(i + 2, "zero denominator"));
                }
                m = num_integer::lcm(m, d);
            }
            i = close;
        } else if text[i..].starts_with("(t/") {
            let close = text[i..].find(')').map(|j| i + j).ok_or_else(|| syntax_err(i, "unclosed twist"))?;
            let c = poly::parse_element(&text[i + 3..close], base).map_err(|e| shift_err(e, i + 3))?;
            if twist != base.one() && twist != c {
                return Err(syntax_err(i, "only one twisted uniformizer is allowed"));
            }
            twist = c;
            i = close;
        }
        i += 1;
    }
    let field = Field::puiseux_twisted(base, DEFORMATION_VAR, m, twist, precision)?;
    let mut coords: Vec<Option<Elem>> = vec![None; vars.len()];
    let mut offset = 0;
    for part in text.split(';') {
        let Some((name, expr)) = part.split_once(':') else {
            if part.trim().is_empty() {
                offset += part.len() + 1;
                continue;
            }
            return Err(syntax_err(offset, "expected `variable: value`"));
        };
        let name = name.trim();
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        if coords[idx].is_some() {
            return Err(syntax_err(offset, format!("{name} given twice")));
        }
        let at = offset + name.len() + 1;
        coords[idx] = Some(poly::parse_element(expr, &field).map_err(|e| shift_err(e, at))?);
        offset += part.len() + 1;
    }
    let coords = coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| syntax_err(text.len(), format!("no value for {}", vars[i]))))
        .collect::<Result<_>>()?;
    Ok(Seed { field, coords })
}

fn syntax_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn shift_err(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + by, msg },
        other => other,
    }
}

#[derive(Clone, Debug)]
pub struct Branch {
    /// `k'((s))` at the requested precision.
    pub field: Field,
    /// Correct modulo `s^precision`.
    pub coords: Vec<Elem>,
    pub precision: i64,
    /// Valuation of the Hessian determinant along the branch.
    pub hessian_valuation: i64,
    /// Valuation of `grad(f + tg)` before each Newton step and at the end;
    /// `None` once the residual vanishes exactly.
    pub residuals: Vec<Option<i64>>,
}

fn series(x: &Elem) -> &Series {
    x.as_series().expect("series field element")
}

/// Smallest valuation among the components, `None` if all vanish exactly.
fn min_valuation(v: &[Elem]) -> Option<i64> {
    v.iter().filter_map(|x| series(x).valuation()).min()
}

fn truncate_exact(x: &Elem, p: i64) -> Elem {
    Elem::Series(series(x).truncate(p).into_exact())
}

fn check_valuation(l: &Field, h: &Elem) -> Result<i64> {
    let s = series(h);
    match s.valuation() {
        Some(v) => Ok(v),
        None if s.is_exact() => Err(Error::NonUnitHessian),
        None => Err(Error::PrecisionExhausted(format!(
            "Hessian determinant is O({}) on the branch",
            l.render(h)
        ))),
    }
}

/// Lifts a seed to a critical point of `f + tg` correct modulo `s^target`.
pub fn newton_lift(def: &Deformation, seed: &Seed, target: i64) -> Result<Branch> {
    let n = def.vars().len();
    if seed.coords.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: seed.coords.len(),
        });
    }
    let seed_field = &seed.field;
    let pd_base = seed_field.base().ok_or(Error::NotAnExtension)?.clone();
    if pd_base.embed(def.field(), &pd_base.one()).is_err() {
        return Err(Error::FieldMismatch);
    }
    let mut x: Vec<Elem> = seed.coords.iter().map(|c| Elem::Series(series(c).clone().into_exact())).collect();

    let l0 = seed_field.with_cap(target.max(1))?;
    let h0 = linalg::determinant(&l0, &def.hessian_at(&l0, &x)?)?;
    let v_h = check_valuation(&l0, &h0)?;
    let cap = target + 2 * v_h + 2;
    let l = seed_field.with_cap(cap)?;

    let mut residuals = Vec::new();
    let mut r = min_valuation(&def.gradient_at(&l, &x)?);
    match r {
        Some(v) if v <= 0 => return Err(Error::SeedInconsistent),
        Some(v) if v <= 2 * v_h => {
            return Err(Error::NoQuadraticConvergence(format!(
                "seed residual valuation {v} does not exceed twice the Hessian valuation {v_h}"
            )))
        }
        _ => {}
    }
    residuals.push(r);
    while let Some(rv) = r {
        if rv >= target + v_h {
            break;
        }
        let g = def.gradient_at(&l, &x)?;
        let h = def.hessian_at(&l, &x)?;
        let det = linalg::determinant(&l, &h)?;
        if check_valuation(&l, &det)? != v_h {
            return Err(Error::NoQuadraticConvergence("Hessian valuation moved".into()));
        }
        let adj = linalg::adjugate(&l, &h);
        let inv = l.inv(&det)?;
        let step = linalg::mat_vec(&l, &adj, &g);
        let keep = (2 * rv - 2 * v_h).min(cap);
        for (xi, si) in x.iter_mut().zip(&step) {
            let delta = l.mul(si, &inv);
            *xi = truncate_exact(&l.sub(xi, &delta), keep);
        }
        let next = min_valuation(&def.gradient_at(&l, &x)?);
        // excess over 2·val det H must at least double, or reach the cap
        if let Some(nv) = next {
            if nv < keep {
                return Err(Error::NoQuadraticConvergence(format!(
                    "residual valuation went from {rv} to {nv}, expected at least {keep}"
                )));
            }
        }
        residuals.push(next);
        r = next;
    }
    let field = seed_field.with_cap(target)?;
    let coords: Vec<Elem> = x
        .iter()
        .map(|c| {
            let s = series(c);
            let out = if r.is_none() { s.clone() } else { s.truncate(target) };
            field.embed(&l, &Elem::Series(out))
        })
        .collect::<Result<_>>()?;
    Ok(Branch {
        field,
        coords,
        precision: target,
        hessian_valuation: v_h,
        residuals,
    })
}

/// `⟨det Hess(f + tg)⟩` on the branch, over the branch's series field.
pub fn branch_type(def: &Deformation, branch: &Branch) -> Result<GwElement> {
    let l = &branch.field;
    let det = linalg::determinant(l, &def.hessian_at(l, &branch.coords)?)?;
    check_valuation(l, &det)?;
    GwElement::class(l, &det)
}

/// The Laurent field `k((t))` below a series field over an extension of `k`.
fn laurent_bottom(l: &Field, k: &Field) -> Result<Field> {
    let mut cur = l.clone();
    loop {
        if cur.base() == Some(k) && cur.ramification() == Some(1) && cur.twist().is_some_and(|z| k.is_one(z)) {
            return Ok(cur);
        }
        match cur.parent() {
            Some(p) if p.is_puiseux() => cur = p,
            _ => return Err(Error::NotAnExtension),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchReport {
    pub branch: Branch,
    pub branch_type: GwElement,
    /// `[k'((s)) : k((t))]`.
    pub degree: usize,
    /// Springer residues of the transferred type.
    pub residues: (GwElement, GwElement),
    /// Index of an earlier branch in the same Galois orbit; such a branch is
    /// the same closed point and contributes nothing further.
    pub conjugate_of: Option<usize>,
}

/// m-th roots of unity of the coefficient field that are easy to list: `±1`,
/// and all of them over a finite field.
fn roots_of_unity(base: &Field, m: u32) -> Vec<Elem> {
    if base.is_finite() {
        let mut poly = vec![base.zero(); m as usize + 1];
        poly[0] = base.neg(&base.one());
        poly[m as usize] = base.one();
        if let Ok(r) = base.roots(&poly) {
            return r;
        }
    }
    let mut out = vec![base.one()];
    if m % 2 == 0 {
        out.push(base.neg(&base.one()));
    }
    out
}

/// Whether `b` is the image of `a` under `s ↦ ζs` for a root of unity ζ.
fn conjugate(a: &Branch, b: &Branch) -> bool {
    if a.field != b.field {
        return false;
    }
    let Some(base) = a.field.base() else {
        return false;
    };
    let m = a.field.ramification().unwrap_or(1);
    roots_of_unity(base, m).iter().any(|z| {
        a.coords.iter().zip(&b.coords).all(|(x, y)| {
            let moved = Series::from_terms(
                base,
                series(x).terms().map(|(e, c)| (e, base.mul(c, &base.pow_int(z, e).expect("unit")))),
                series(x).precision().unwrap_or(crate::field::EXACT),
            );
            moved == *series(y)
        })
    })
}

#[derive(Clone, Debug)]
pub struct BifurcationReport {
    pub milnor: LocalDegree,
    pub branches: Vec<BranchReport>,
    /// Residues of `Σ Tr type` over `k`.
    pub first_residue: GwElement,
    pub second_residue: GwElement,
    pub branch_degree: usize,
    pub issue: Option<Error>,
    pub result: Ternary,
}

/// Checks `μ_p(f) = Σ Tr_{k(x)/k((t))} type(x)` for branches at `p`.
pub fn verify_bifurcation(def: &Deformation, branches: &[Branch], p: &[Elem]) -> Result<BifurcationReport> {
    let k = def.field().clone();
    let milnor = milnor::milnor_number(&def.f, &k, p)?;

    for b in branches {
        for (x, pi) in b.coords.iter().zip(p) {
            let d = b.field.sub(x, &b.field.embed(&k, pi)?);
            if series(&d).valuation().is_some_and(|v| v <= 0) {
                return Err(Error::BranchDoesNotSpecialize);
            }
        }
    }
    for (i, a) in branches.iter().enumerate() {
        for b in &branches[i + 1..] {
            if a.field == b.field && a.coords == b.coords {
                return Err(Error::DuplicateBranch);
            }
        }
    }

    let mut reports: Vec<BranchReport> = Vec::new();
    let mut u = GwElement::zero(&k);
    let mut v = GwElement::zero(&k);
    let mut degree = 0;
    for b in branches {
        let ty = branch_type(def, b)?;
        if let Some(j) = reports.iter().position(|r| conjugate(&r.branch, b)) {
            reports.push(BranchReport {
                branch: b.clone(),
                branch_type: ty,
                degree: 0,
                residues: (GwElement::zero(&k), GwElement::zero(&k)),
                conjugate_of: Some(j),
            });
            continue;
        }
        let bottom = laurent_bottom(&b.field, &k)?;
        let d = b.field.degree_over(&bottom)?;
        let moved = transfer(&ty, &bottom)?;
        let (bu, bv) = springer_residues(&moved)?;
        let (bu, bv) = (embed_class(&bu, &k)?, embed_class(&bv, &k)?);
        u = u.add(&bu)?;
        v = v.add(&bv)?;
        degree += d;
        reports.push(BranchReport {
            branch: b.clone(),
            branch_type: ty,
            degree: d,
            residues: (bu, bv),
            conjugate_of: None,
        });
    }
    let (u, v) = springer_normalize(&u, &v)?;
    let expected = milnor.class.rank().max(0) as usize;
    let (issue, result) = if degree < expected {
        (
            Some(Error::IncompleteBranchSet {
                found: degree,
                expected,
            }),
            Ternary::Unknown,
        )
    } else if !v.is_zero() {
        (None, Ternary::False)
    } else {
        (None, milnor.class.equals(&u)?)
    };
    Ok(BifurcationReport {
        milnor,
        branches: reports,
        first_residue: u,
        second_residue: v,
        branch_degree: degree,
        issue,
        result,
    })
}

fn embed_class(e: &GwElement, k: &Field) -> Result<GwElement> {
    if e.field() == k {
        return Ok(e.clone());
    }
    let mut out = GwElement::zero(k);
    for (c, m) in e.entries() {
        let rep = k.embed(e.field(), &c.rep)?;
        out = out.add(&GwElement::class(k, &rep)?.scale(m))?;
    }
    Ok(out)
}
