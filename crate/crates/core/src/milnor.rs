//! A¹-Milnor numbers, nodes and their types, and the finite-field check of
//! the linear-perturbation formula `Σ μ = Σ Tr type`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::{self, extension_fields, finite_zeros, ClosedPoint, LocalDegree};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Ternary};
use crate::gw::{transfer, GwElement};
use crate::local_algebra::DEFAULT_MAX_ORDER;
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Smooth,
    Node,
    HigherSingularity,
}

#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub f: Polynomial,
    pub field: Field,
    pub point: Vec<Elem>,
    pub kind: PointKind,
    pub hessian: Elem,
}

fn space_point(f: &Polynomial, point: &[Elem]) -> Result<()> {
    let n = f.space_indices().len();
    if f.deformation_index().is_some() {
        return Err(Error::Unsupported("the hypersurface may not involve t".into()));
    }
    if point.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: point.len(),
        });
    }
    Ok(())
}

/// Classifies a point of `{f = 0}` with coordinates in `field`.
pub fn classify_point(f: &Polynomial, field: &Field, point: &[Elem]) -> Result<SingularPoint> {
    space_point(f, point)?;
    let value = f.evaluate_in(field, point)?;
    let mut critical = true;
    for g in f.gradient() {
        if !field.is_zero(&g.evaluate_in(field, point)?) {
            critical = false;
        }
    }
    let hessian = f.hessian_determinant().evaluate_in(field, point)?;
    let kind = if !field.is_zero(&value) || !critical {
        PointKind::Smooth
    } else if field.is_zero(&hessian) {
        PointKind::HigherSingularity
    } else {
        PointKind::Node
    };
    Ok(SingularPoint {
        f: f.clone(),
        field: field.clone(),
        point: point.to_vec(),
        kind,
        hessian,
    })
}

/// `μ_x(f) = deg_x(grad f)`, transferred from `k(x)` to the coefficient
/// field of `f`. Only `grad f(x) = 0` is required.
pub fn milnor_number(f: &Polynomial, field: &Field, point: &[Elem]) -> Result<LocalDegree> {
    milnor_number_with_order(f, field, point, DEFAULT_MAX_ORDER)
}

pub fn milnor_number_with_order(f: &Polynomial, field: &Field, point: &[Elem], max_order: u32) -> Result<LocalDegree> {
    space_point(f, point)?;
    let grad = f.gradient();
    for g in &grad {
        if !field.is_zero(&g.evaluate_in(field, point)?) {
            return Err(Error::SmoothPoint);
        }
    }
    degree::local_degree(&grad, field, point, max_order)
}

/// `type(x) = ⟨Hess f(x)⟩` over `k(x)` for a node `x`.
pub fn node_type(f: &Polynomial, field: &Field, point: &[Elem]) -> Result<GwElement> {
    let p = classify_point(f, field, point)?;
    if p.kind != PointKind::Node {
        return Err(Error::NotANode);
    }
    GwElement::class(field, &p.hessian)
}

#[derive(Clone, Debug)]
pub struct NodeRecord {
    pub point: ClosedPoint,
    pub hessian: Elem,
    /// Over `k(x)`.
    pub node_type: GwElement,
    /// Over the base field.
    pub transferred: GwElement,
}

#[derive(Clone, Debug)]
pub enum SampleStatus {
    /// Every critical point of `f - a·x` is a node.
    Generic { rhs: GwElement, equal: Ternary },
    /// Some critical point has vanishing Hessian.
    NonGeneric,
    /// Fewer geometric critical points than the Milnor numbers predict.
    Escaped { found: usize, expected: usize },
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub a: Vec<Elem>,
    pub nodes: Vec<NodeRecord>,
    pub status: SampleStatus,
}

impl Sample {
    /// Product of the node types when every node is rational.
    pub fn rational_type_product(&self, k: &Field) -> Option<Elem> {
        if self.nodes.iter().any(|n| n.point.degree != 1) {
            return None;
        }
        Some(self.nodes.iter().fold(k.one(), |acc, n| k.mul(&acc, &n.hessian)))
    }
}

#[derive(Clone, Debug)]
pub struct Cor45Report {
    pub f: Polynomial,
    pub max_ext: usize,
    /// Critical points of `f` with their Milnor numbers over the base field.
    pub singularities: Vec<(ClosedPoint, LocalDegree)>,
    pub lhs: GwElement,
    pub samples: Vec<Sample>,
}

impl Cor45Report {
    pub fn generic_count(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| matches!(s.status, SampleStatus::Generic { .. }))
            .count()
    }

    pub fn generic_fraction(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.generic_count() as f64 / self.samples.len() as f64
    }

    /// True when every generic sample satisfies the formula and none escaped.
    pub fn all_hold(&self) -> Ternary {
        let mut out = Ternary::True;
        for s in &self.samples {
            match &s.status {
                SampleStatus::Generic { equal, .. } => out = out.and(*equal),
                SampleStatus::NonGeneric => {}
                SampleStatus::Escaped { .. } => out = out.and(Ternary::Unknown),
            }
        }
        out
    }
}

/// Samples `a ∈ 𝔽_qⁿ` and compares `Σ μ_x(f)` over the critical points of
/// `f` with `Σ Tr type` over the critical points of `f - Σ aᵢxᵢ`, all found
/// by enumeration over `𝔽_{q^r}`, `r ≤ max_ext`.
pub fn verify_linear_family(f: &Polynomial, samples: usize, max_ext: usize, seed: u64) -> Result<Cor45Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = f.field().clone();
    let q = k.size().ok_or(Error::InfiniteField)?;
    let n = f.space_indices().len();
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        values.push((0..n).map(|_| k.element_from_index(rng.gen_range(0..q))).collect());
    }
    verify_linear_family_at(f, &values, max_ext)
}

/// [`verify_linear_family`] at the given perturbations.
pub fn verify_linear_family_at(f: &Polynomial, values: &[Vec<Elem>], max_ext: usize) -> Result<Cor45Report> {
    let k = f.field().clone();
    if f.deformation_index().is_some() {
        return Err(Error::Unsupported("the hypersurface may not involve t".into()));
    }
    let fields = extension_fields(&k, max_ext)?;
    let grad = f.gradient();
    let hess = f.hessian_determinant();

    let mut singularities = Vec::new();
    let mut lhs = GwElement::zero(&k);
    for p in finite_zeros(&grad, &fields)? {
        let mu = milnor_number(f, &p.field, &p.coords)?;
        lhs = lhs.add(&mu.class)?;
        singularities.push((p, mu));
    }
    let expected = lhs.rank().max(0) as usize;

    let mut out = Vec::with_capacity(values.len());
    for a in values {
        if a.len() != grad.len() {
            return Err(Error::ArityMismatch {
                expected: grad.len(),
                got: a.len(),
            });
        }
        let shifted: Vec<Polynomial> = grad
            .iter()
            .zip(a)
            .map(|(g, ai)| g.sub(&Polynomial::constant(&k, g.vars(), ai.clone())))
            .collect();
        let mut nodes = Vec::new();
        let mut generic = true;
        let mut found = 0;
        for p in finite_zeros(&shifted, &fields)? {
            found += p.degree;
            let h = hess.evaluate_in(&p.field, &p.coords)?;
            if p.field.is_zero(&h) {
                generic = false;
                continue;
            }
            let node_type = GwElement::class(&p.field, &h)?;
            let transferred = transfer(&node_type, &k)?;
            nodes.push(NodeRecord {
                point: p,
                hessian: h,
                node_type,
                transferred,
            });
        }
        // a degenerate point is counted once, so check genericity first
        let status = if !generic {
            SampleStatus::NonGeneric
        } else if found < expected {
            SampleStatus::Escaped { found, expected }
        } else {
            let mut rhs = GwElement::zero(&k);
            for nd in &nodes {
                rhs = rhs.add(&nd.transferred)?;
            }
            let equal = lhs.equals(&rhs)?;
            SampleStatus::Generic { rhs, equal }
        };
        out.push(Sample {
            a: a.clone(),
            nodes,
            status,
        });
    }
    Ok(Cor45Report {
        f: f.clone(),
        max_ext,
        singularities,
        lhs,
        samples: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::DegreePath;

    fn poly(s: &str, f: &Field) -> Polynomial {
        Polynomial::parse(s, f, None).unwrap()
    }

    #[test]
    fn cusp_milnor_number() {
        let q = Field::rationals();
        let mu = milnor_number(&poly("x2^2 - x1^3", &q), &q, &[q.zero(), q.zero()]).unwrap();
        assert_eq!(mu.path, DegreePath::Ekl);
        assert_eq!(mu.class.equals(&GwElement::hyperbolic(&q)).unwrap(), Ternary::True);
        assert_eq!(
            milnor_number(&poly("x2^2 - x1^3", &q), &q, &[q.one(), q.one()]).unwrap_err(),
            Error::SmoothPoint
        );
    }

    #[test]
    fn node_formulas() {
        let q = Field::rationals();
        let o2 = [q.zero(), q.zero()];
        let mu = milnor_number(&poly("x1^2 - x2^2", &q), &q, &o2).unwrap();
        assert_eq!(mu.class.equals(&GwElement::from_i64(&q, -1).unwrap()).unwrap(), Ternary::True);
        let o3 = [q.zero(), q.zero(), q.zero()];
        let f3 = poly("x1^2 + x2^2 + x3^2 + x1^3*x2", &q);
        let mu = milnor_number(&f3, &q, &o3).unwrap();
        assert_eq!(mu.class.render(), "<2>");
        assert_eq!(node_type(&f3, &q, &o3).unwrap().render(), "<2>");
        assert_eq!(node_type(&poly("x1^2 - x2^2", &q), &q, &o2).unwrap().render(), "<-1>");
        assert_eq!(node_type(&poly("x1^2 + x2^2", &q), &q, &o2).unwrap().render(), "<1>");
        let f = poly("3*x1^2 + 5*x2^2", &q);
        let mu = milnor_number(&f, &q, &o2).unwrap();
        assert_eq!(mu.class.equals(&node_type(&f, &q, &o2).unwrap()).unwrap(), Ternary::True);
    }

    #[test]
    fn classification() {
        let q = Field::rationals();
        let o = [q.zero(), q.zero()];
        assert_eq!(classify_point(&poly("x1^2 - x2^2", &q), &q, &o).unwrap().kind, PointKind::Node);
        let cusp = poly("x2^2 - x1^3", &q);
        assert_eq!(classify_point(&cusp, &q, &o).unwrap().kind, PointKind::HigherSingularity);
        assert_eq!(classify_point(&cusp, &q, &[q.one(), q.one()]).unwrap().kind, PointKind::Smooth);
        assert_eq!(node_type(&cusp, &q, &o).unwrap_err(), Error::NotANode);
    }

    #[test]
    fn cusp_family_over_f5_and_f7() {
        for (p, square) in [(5, Ternary::True), (7, Ternary::False)] {
            let k = Field::prime(p).unwrap();
            let r = verify_linear_family(&poly("x2^2 - x1^3", &k), 25, 2, 1).unwrap();
            assert_eq!(r.singularities.len(), 1);
            assert_eq!(r.lhs.equals(&GwElement::hyperbolic(&k)).unwrap(), Ternary::True);
            assert_eq!(r.all_hold(), Ternary::True);
            assert!(r.generic_count() > 0);
            for s in &r.samples {
                if let (SampleStatus::Generic { .. }, Some(prod)) = (&s.status, s.rational_type_product(&k)) {
                    assert_eq!(k.is_square(&prod).unwrap(), square);
                }
            }
        }
    }

    #[test]
    fn node_family_is_constant() {
        let k = Field::prime(5).unwrap();
        let f = poly("x1^2 + x2^2", &k);
        let r = verify_linear_family(&f, 10, 1, 3).unwrap();
        assert_eq!(r.lhs.render(), "<1>");
        assert_eq!(r.generic_count(), 10);
        assert_eq!(r.all_hold(), Ternary::True);
    }

    #[test]
    fn tacnode_needs_cube_roots_over_f7() {
        let k = Field::prime(7).unwrap();
        let f = poly("x2^2 - x1^4", &k);
        let a = vec![vec![k.from_i64(2), k.zero()]];
        let r = verify_linear_family_at(&f, &a, 2).unwrap();
        assert!(matches!(r.samples[0].status, SampleStatus::Escaped { found: 0, expected: 3 }));
        let r = verify_linear_family_at(&f, &a, 3).unwrap();
        assert_eq!(r.lhs.rank(), 3);
        assert!(matches!(r.samples[0].status, SampleStatus::Generic { equal: Ternary::True, .. }));
    }
}
