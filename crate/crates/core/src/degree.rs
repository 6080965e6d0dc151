//! Local and global A¹-degrees.

use crate::error::{Error, Result};
use crate::field::{finite, upoly, Elem, Field};
use crate::gw::{transfer, BilinearForm, GwElement};
use crate::linalg::Matrix;
use crate::local_algebra::{LocalAlgebra, DEFAULT_MAX_ORDER};
use crate::poly::{self, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreePath {
    /// `Tr⟨Jf(x)⟩` at a simple zero.
    Simple,
    /// The EKL form on the local algebra.
    Ekl,
}

/// The EKL form `(a, b) ↦ η(ab)` on a local algebra.
#[derive(Clone, Debug)]
pub struct EklForm {
    pub algebra: LocalAlgebra,
    pub eta: Vec<Elem>,
    pub gram: Matrix,
    pub class: GwElement,
}

#[derive(Clone, Debug)]
pub struct LocalDegree {
    /// The degree over the coefficient field of the system.
    pub class: GwElement,
    pub path: DegreePath,
    /// `[k(x):k]`.
    pub residue_degree: usize,
    /// The class over `k(x)` before the transfer.
    pub residue_class: GwElement,
    pub ekl: Option<EklForm>,
}

fn check_square(fs: &[Polynomial]) -> Result<()> {
    let n = fs.first().map_or(0, |f| f.space_indices().len());
    if fs.len() != n {
        return Err(Error::NonSquareSystem {
            polys: fs.len(),
            vars: n,
        });
    }
    Ok(())
}

/// `Tr_{L/k}⟨Jf(q)⟩` for a simple zero `q` with coordinates in `point_field`,
/// which should be generated over `k` by the coordinates.
pub fn local_degree_simple(fs: &[Polynomial], point_field: &Field, point: &[Elem]) -> Result<GwElement> {
    check_square(fs)?;
    let k = fs[0].field();
    for f in fs {
        if !point_field.is_zero(&f.evaluate_in(point_field, point)?) {
            return Err(Error::NotAZero);
        }
    }
    let j = poly::jacobian_determinant(fs)?.evaluate_in(point_field, point)?;
    if point_field.is_zero(&j) {
        return Err(Error::DegenerateZero);
    }
    transfer(&GwElement::class(point_field, &j)?, k)
}

/// EKL form with the functional `η = (d / cᵢ)·eᵢ*`, where `cᵢ` is the first
/// nonzero coordinate of the Jacobian image.
pub fn local_degree_ekl(fs: &[Polynomial], point: &[Elem], max_order: u32) -> Result<EklForm> {
    check_square(fs)?;
    let algebra = LocalAlgebra::new(fs, point, max_order)?;
    let f = algebra.field().clone();
    let d = algebra.dimension();
    let p = f.characteristic();
    if p != 0 && d as u64 % p == 0 {
        return Err(Error::CharDividesDimension(d));
    }
    let jac = algebra.jacobian_image()?;
    let i = jac.iter().position(|c| !f.is_zero(c)).expect("nonzero image");
    let mut eta = vec![f.zero(); d];
    eta[i] = f.div(&f.from_i64(d as i64), &jac[i])?;
    ekl_with_functional(algebra, eta)
}

/// EKL form for a caller-chosen functional; `η(Jf)` must equal the dimension.
pub fn ekl_with_functional(algebra: LocalAlgebra, eta: Vec<Elem>) -> Result<EklForm> {
    let f = algebra.field().clone();
    let d = algebra.dimension();
    if eta.len() != d {
        return Err(Error::ArityMismatch {
            expected: d,
            got: eta.len(),
        });
    }
    let jac = algebra.jacobian_image()?;
    let eval = |v: &[Elem]| {
        v.iter()
            .zip(&eta)
            .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
    };
    if eval(&jac) != f.from_i64(d as i64) {
        return Err(Error::Unsupported("functional is not normalized on the Jacobian".into()));
    }
    let mut gram = vec![vec![f.zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let x = eval(&algebra.basis_product(i, j));
            gram[i][j] = x.clone();
            gram[j][i] = x;
        }
    }
    let class = match BilinearForm::new(&f, gram.clone())?.diagonalize() {
        Err(Error::DegenerateForm) => return Err(Error::DegenerateEkl),
        other => other?,
    };
    Ok(EklForm {
        algebra,
        eta,
        gram,
        class,
    })
}

/// Local degree at a point with coordinates in `point_field`: the
/// simple-zero formula when `Jf(x) ≠ 0`, otherwise EKL over `k(x)` followed
/// by the transfer.
pub fn local_degree(fs: &[Polynomial], point_field: &Field, point: &[Elem], max_order: u32) -> Result<LocalDegree> {
    check_square(fs)?;
    let k = fs[0].field().clone();
    let residue_degree = point_field.degree_over(&k)?;
    let local: Vec<Polynomial> = fs.iter().map(|f| f.base_change(point_field)).collect::<Result<_>>()?;
    for f in &local {
        if !point_field.is_zero(&f.evaluate(point)?) {
            return Err(Error::NotAZero);
        }
    }
    let j = poly::jacobian_determinant(&local)?.evaluate(point)?;
    if !point_field.is_zero(&j) {
        let residue_class = GwElement::class(point_field, &j)?;
        return Ok(LocalDegree {
            class: transfer(&residue_class, &k)?,
            path: DegreePath::Simple,
            residue_degree,
            residue_class,
            ekl: None,
        });
    }
    let ekl = local_degree_ekl(&local, point, max_order)?;
    Ok(LocalDegree {
        class: transfer(&ekl.class, &k)?,
        path: DegreePath::Ekl,
        residue_degree,
        residue_class: ekl.class.clone(),
        ekl: Some(ekl),
    })
}

/// Coefficients of a polynomial in at most one variable.
pub fn univariate(p: &Polynomial) -> Result<Vec<Elem>> {
    match p.nvars() {
        0 => Ok(upoly::trim(p.field(), vec![p.coeff(&[])])),
        1 => p.to_univariate(0),
        n => Err(Error::ArityMismatch { expected: 1, got: n }),
    }
}

/// `(A(X)B(Y) - A(Y)B(X))/(X - Y) = Σ c_ij X^i Y^j`.
pub fn bezout_matrix(f: &Field, a: &[Elem], b: &[Elem]) -> Result<Matrix> {
    let a = upoly::trim(f, a.to_vec());
    let b = upoly::trim(f, b.to_vec());
    let (Some(da), Some(db)) = (upoly::degree(&a), upoly::degree(&b)) else {
        return Err(Error::ZeroInput);
    };
    if da <= db {
        return Err(Error::DegreeOrder);
    }
    if upoly::degree(&upoly::gcd(f, &a, &b)?) != Some(0) {
        return Err(Error::NotCoprime);
    }
    let n = da;
    let mut c = vec![vec![f.zero(); n]; n];
    // X^k Y^l - X^l Y^k = (X - Y) X^l Y^l Σ_{s<k-l} X^s Y^{k-l-1-s} for k > l
    for (k, ak) in a.iter().enumerate() {
        for (l, bl) in b.iter().enumerate() {
            if k == l {
                continue;
            }
            let (hi, lo, sign) = if k > l { (k, l, 1) } else { (l, k, -1) };
            let w = f.mul(&f.mul(ak, bl), &f.from_i64(sign));
            for s in 0..(hi - lo) {
                let (i, j) = (lo + s, hi - 1 - s);
                c[i][j] = f.add(&c[i][j], &w);
            }
        }
    }
    Ok(c)
}

#[derive(Clone, Debug)]
pub struct BezoutForm {
    pub matrix: Matrix,
    pub class: GwElement,
}

/// Degree of the pointed endomorphism `A/B` of ℙ¹ as its Bézout form.
pub fn bezout_form_p1(a: &Polynomial, b: &Polynomial) -> Result<BezoutForm> {
    let f = a.field();
    let matrix = bezout_matrix(f, &univariate(a)?, &univariate(b)?)?;
    let class = BilinearForm::new(f, matrix.clone())?.diagonalize()?;
    Ok(BezoutForm { matrix, class })
}

/// A closed point of a finite-field variety: coordinates in `𝔽_{q^r}` for
/// the residue degree `r`.
#[derive(Clone, Debug)]
pub struct ClosedPoint {
    pub field: Field,
    pub coords: Vec<Elem>,
    pub degree: usize,
}

impl ClosedPoint {
    pub fn render(&self) -> String {
        let c: Vec<String> = self.coords.iter().map(|x| self.field.render(x)).collect();
        format!("({})", c.join(", "))
    }
}

/// `𝔽_{q^r}` for `r = 1..=max_ext`, each a single extension of `k`.
pub fn extension_fields(k: &Field, max_ext: usize) -> Result<Vec<Field>> {
    if !k.is_finite() {
        return Err(Error::InfiniteField);
    }
    (1..=max_ext)
        .map(|r| k.finite_extension(r, &format!("w{r}")))
        .collect()
}

/// Enumeration bound on the number of candidate prefixes per extension.
const PREFIX_BOUND: u128 = 2_000_000;

/// Zeros of a square or overdetermined system over `𝔽_{q^r}`, `r ≤ max_ext`,
/// one per Frobenius orbit (the least in enumeration order), by enumerating
/// all but the last coordinate and finding roots in the last.
pub fn finite_zeros(fs: &[Polynomial], fields: &[Field]) -> Result<Vec<ClosedPoint>> {
    let k = fs.first().ok_or(Error::ZeroInput)?.field().clone();
    let n = fs[0].nvars();
    if n == 0 {
        return Err(Error::Unsupported("system without variables".into()));
    }
    let mut out = Vec::new();
    for (idx, l) in fields.iter().enumerate() {
        let r = idx + 1;
        let q = l.size().ok_or(Error::InfiniteField)?;
        let count = q.checked_pow((n - 1) as u32).filter(|&c| c <= PREFIX_BOUND).ok_or(Error::InfiniteField)?;
        let lifted: Vec<Polynomial> = fs.iter().map(|f| f.base_change(l)).collect::<Result<_>>()?;
        for pi in 0..count {
            let mut prefix = Vec::with_capacity(n - 1);
            let mut m = pi;
            for _ in 0..(n - 1) {
                prefix.push(l.element_from_index(m % q));
                m /= q;
            }
            let mut g: Option<Vec<Elem>> = None;
            let mut all_zero = true;
            for f in &lifted {
                let u = last_variable_poly(f, l, &prefix);
                if u.is_empty() {
                    continue;
                }
                all_zero = false;
                g = Some(match g {
                    None => u,
                    Some(h) => upoly::gcd(l, &h, &u)?,
                });
            }
            if all_zero {
                return Err(Error::FiberNotFinite);
            }
            let g = g.expect("some equation is nonzero");
            for root in l.roots(&g)? {
                let mut coords = prefix.clone();
                coords.push(root);
                let orbit = if r == 1 {
                    vec![coords.clone()]
                } else {
                    finite::frobenius_orbit(l, &k, &coords)?
                };
                if orbit.len() != r {
                    continue;
                }
                let key = |p: &Vec<Elem>| p.iter().map(|x| l.element_index(x)).rev().collect::<Vec<_>>();
                let mine = key(&coords);
                if orbit.iter().any(|p| key(p) < mine) {
                    continue;
                }
                out.push(ClosedPoint {
                    field: l.clone(),
                    coords,
                    degree: r,
                });
            }
        }
    }
    Ok(out)
}

/// `f(prefix, x_n)` as a univariate polynomial.
fn last_variable_poly(f: &Polynomial, l: &Field, prefix: &[Elem]) -> Vec<Elem> {
    let n = f.nvars();
    let mut coeffs: Vec<Elem> = Vec::new();
    for (e, c) in f.terms() {
        let mut v = c.clone();
        for (x, &k) in prefix.iter().zip(e) {
            if k > 0 {
                v = l.mul(&v, &l.pow(x, k as u64));
            }
        }
        let d = e[n - 1] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, l.zero());
        }
        coeffs[d] = l.add(&coeffs[d], &v);
    }
    upoly::trim(l, coeffs)
}

#[derive(Clone, Debug)]
pub struct FiberPoint {
    pub point: ClosedPoint,
    pub jacobian: Elem,
    pub contribution: GwElement,
}

#[derive(Clone, Debug)]
pub struct GlobalDegree {
    pub class: GwElement,
    pub fiber: Vec<FiberPoint>,
    /// Geometric points found: `Σ` residue degrees.
    pub geometric_count: usize,
}

fn fiber_sum(
    k: &Field,
    points: Vec<ClosedPoint>,
    jac: impl Fn(&ClosedPoint) -> Result<Elem>,
) -> Result<GlobalDegree> {
    let mut class = GwElement::zero(k);
    let mut fiber = Vec::new();
    let mut geometric_count = 0;
    for p in points {
        let j = jac(&p)?;
        if p.field.is_zero(&j) {
            return Err(Error::IrregularValue);
        }
        let contribution = transfer(&GwElement::class(&p.field, &j)?, k)?;
        class = class.add(&contribution)?;
        geometric_count += p.degree;
        fiber.push(FiberPoint {
            point: p,
            jacobian: j,
            contribution,
        });
    }
    Ok(GlobalDegree {
        class,
        fiber,
        geometric_count,
    })
}

/// `Σ Tr⟨Jf(p)⟩` over the fiber of `f: 𝔸ⁿ → 𝔸ⁿ` above `value`.
pub fn global_degree_finite_field(fs: &[Polynomial], value: &[Elem], max_ext: usize) -> Result<GlobalDegree> {
    check_square(fs)?;
    let k = fs[0].field().clone();
    if value.len() != fs.len() {
        return Err(Error::ArityMismatch {
            expected: fs.len(),
            got: value.len(),
        });
    }
    let shifted: Vec<Polynomial> = fs
        .iter()
        .zip(value)
        .map(|(f, y)| f.sub(&Polynomial::constant(&k, f.vars(), y.clone())))
        .collect();
    let fields = extension_fields(&k, max_ext)?;
    let points = finite_zeros(&shifted, &fields)?;
    let jac = poly::jacobian_determinant(fs)?;
    let out = fiber_sum(&k, points, |p| jac.evaluate_in(&p.field, &p.coords))?;
    if fs.len() == 1 {
        let expected = shifted[0].total_degree().unwrap_or(0) as usize;
        if out.geometric_count < expected {
            return Err(Error::FiberEscapesBound {
                found: out.geometric_count,
                expected,
            });
        }
    }
    Ok(out)
}

/// Fiber sum for the rational map `z ↦ A(z)/B(z)` at a finite value; the
/// local degree at a simple preimage is `⟨A'B - AB'⟩`.
pub fn global_degree_p1(a: &Polynomial, b: &Polynomial, value: &Elem, max_ext: usize) -> Result<GlobalDegree> {
    let k = a.field().clone();
    let (ua, ub) = (univariate(a)?, univariate(b)?);
    let da = upoly::degree(&ua).ok_or(Error::ZeroInput)?;
    if upoly::degree(&ub).map_or(true, |db| db >= da) {
        return Err(Error::DegreeOrder);
    }
    let vars = vec!["z".to_string()];
    let g = upoly::sub(&k, &ua, &upoly::scale(&k, &ub, value));
    let gp = Polynomial::from_terms(&k, &vars, g.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())))?;
    let w = upoly::sub(
        &k,
        &upoly::mul(&k, &upoly::derivative(&k, &ua), &ub),
        &upoly::mul(&k, &ua, &upoly::derivative(&k, &ub)),
    );
    let fields = extension_fields(&k, max_ext)?;
    let points = finite_zeros(&[gp], &fields)?;
    let out = fiber_sum(&k, points, |p| {
        let l = &p.field;
        let wl: Vec<Elem> = w.iter().map(|c| l.embed(&k, c)).collect::<Result<_>>()?;
        Ok(upoly::eval(l, &wl, &p.coords[0]))
    })?;
    if out.geometric_count < da {
        return Err(Error::FiberEscapesBound {
            found: out.geometric_count,
            expected: da,
        });
    }
    Ok(out)
}

/// Runs [`global_degree_finite_field`] at every value of `𝔽_q^n` (up to
/// `limit` values), returning the regular ones with their degrees and the
/// rejected ones with the reason.
///
/// A system has no a priori fiber count, so the largest geometric count seen
/// is taken as the degree and regular values with fewer points found are
/// rejected as escaping `max_ext`.
pub fn scan_values(
    fs: &[Polynomial],
    max_ext: usize,
    limit: usize,
) -> Result<(Vec<(Vec<Elem>, GlobalDegree)>, Vec<(Vec<Elem>, Error)>)> {
    let k = fs.first().ok_or(Error::ZeroInput)?.field().clone();
    let q = k.size().ok_or(Error::InfiniteField)?;
    let n = fs.len();
    let total = q.checked_pow(n as u32).unwrap_or(u128::MAX).min(limit as u128);
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for i in 0..total {
        let mut m = i;
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            y.push(k.element_from_index(m % q));
            m /= q;
        }
        match global_degree_finite_field(fs, &y, max_ext) {
            Ok(d) => good.push((y, d)),
            Err(e @ (Error::IrregularValue | Error::FiberEscapesBound { .. })) => bad.push((y, e)),
            Err(e) => return Err(e),
        }
    }
    let expected = good.iter().map(|(_, d)| d.geometric_count).max().unwrap_or(0);
    let (good, short): (Vec<_>, Vec<_>) = good.into_iter().partition(|(_, d)| d.geometric_count == expected);
    for (y, d) in short {
        bad.push((
            y,
            Error::FiberEscapesBound {
                found: d.geometric_count,
                expected,
            },
        ));
    }
    Ok((good, bad))
}

pub const DEFAULT_MAX_EXT: usize = 3;

#[doc(hidden)]
pub const _DEFAULT_MAX_ORDER: u32 = DEFAULT_MAX_ORDER;
