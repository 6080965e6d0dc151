mod common;

use a1_core::local_algebra::{truncated_dimension, LocalAlgebra, DEFAULT_MAX_ORDER};
use a1_core::poly::standard_vars;
use a1_core::{Elem, Field, Polynomial};
use common::{field, finite_elem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn monomial(f: &Field, vars: &[String], e: Vec<u32>, c: Elem) -> Polynomial {
    Polynomial::from_terms(f, vars, [(e, c)]).unwrap()
}

/// `xᵢ^{aᵢ} + gᵢ` with every `gᵢ` in `m·(x₁^{a₁}, …, xₙ^{aₙ})`. By Nakayama
/// this generates the same local ideal as the pure powers, so the dimension
/// is still `∏ aᵢ`.
fn perturbed_powers(f: &Field, exps: &[u32], coeffs: &[(usize, usize, i64)]) -> Vec<Polynomial> {
    let n = exps.len();
    let vars = standard_vars(n);
    (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = exps[i];
            let mut p = monomial(f, &vars, e, f.one());
            let (j, k, c) = coeffs[i];
            let (j, k) = (j % n, k % n);
            let mut e = vec![0; n];
            e[j] += 1;
            e[k] += exps[k];
            p = p.add(&monomial(f, &vars, e, f.from_i64(c)));
            p
        })
        .collect()
}

fn origin(f: &Field, n: usize) -> Vec<Elem> {
    vec![f.zero(); n]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn monomial_ideal_dimension_is_the_product(
        exps in prop::collection::vec(1u32..=3, 1..=3),
        coeffs in prop::collection::vec((0usize..3, 0usize..3, -3i64..=3), 3),
        over_q in any::<bool>(),
    ) {
        let f = field(if over_q { "Q" } else { "F7" });
        let n = exps.len();
        let expected: u32 = exps.iter().product();
        let pure: Vec<Polynomial> = perturbed_powers(&f, &exps, &[(0, 0, 0); 3]);
        let a = LocalAlgebra::new(&pure, &origin(&f, n), DEFAULT_MAX_ORDER).unwrap();
        prop_assert_eq!(a.dimension() as u32, expected);
        let sys = perturbed_powers(&f, &exps, &coeffs);
        let b = LocalAlgebra::new(&sys, &origin(&f, n), DEFAULT_MAX_ORDER).unwrap();
        prop_assert_eq!(b.dimension() as u32, expected);
        // recomputing two orders past the certificate changes nothing
        prop_assert_eq!(truncated_dimension(b.system(), b.certificate_order() + 2).unwrap(), b.dimension());
        prop_assert_eq!(truncated_dimension(b.system(), b.certificate_order()).unwrap(), b.dimension());
    }
}

#[test]
fn simple_zeros_have_dimension_one() {
    let f = field("F5");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let (fs, p) = common::random_simple_system(&f, &mut rng);
        let a = LocalAlgebra::new(&fs, &p, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(a.dimension(), 1);
        assert_eq!(truncated_dimension(a.system(), a.certificate_order() + 2).unwrap(), 1);
    }
}

/// The singular corpus used elsewhere: certificates survive two more orders.
#[test]
fn certificates_on_the_singular_corpus() {
    let q = field("Q");
    let cases: &[(&[&str], usize)] = &[
        (&["z^2"], 2),
        (&["z^5"], 5),
        (&["-3*x1^2", "2*x2"], 2),
        (&["-4*x1^3", "2*x2"], 3),
        (&["x1^2", "x2^3"], 6),
        (&["x1*x2", "x1^2 + x2^2"], 4),
        (&["x1^2 + x2^3", "x1*x2"], 5),
    ];
    for (texts, dim) in cases {
        let fs = Polynomial::parse_system(texts, &q, None).unwrap();
        let n = fs[0].nvars();
        let a = LocalAlgebra::new(&fs, &origin(&q, n), DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(a.dimension(), *dim, "{texts:?}");
        assert_eq!(truncated_dimension(a.system(), a.certificate_order() + 2).unwrap(), *dim);
    }
}

#[test]
fn base_change_to_f25_keeps_the_dimension() {
    let f5 = field("F5");
    let f25 = field("F25");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for sample in 0..5 {
        let n = 1 + sample % 2;
        let exps: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let coeffs: Vec<(usize, usize, i64)> =
            (0..3).map(|_| (rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(-2..=2))).collect();
        let mut sys = perturbed_powers(&f5, &exps, &coeffs);
        // a random point instead of the origin
        let point: Vec<Elem> = (0..n).map(|_| finite_elem(&f5, &mut rng)).collect();
        let vars = standard_vars(n);
        let back: Vec<Polynomial> = vars
            .iter()
            .zip(&point)
            .map(|(v, c)| {
                Polynomial::variable(&f5, &vars, v)
                    .unwrap()
                    .sub(&Polynomial::constant(&f5, &vars, c.clone()))
            })
            .collect();
        sys = sys.iter().map(|p| p.compose(&back).unwrap()).collect();
        let a = LocalAlgebra::new(&sys, &point, DEFAULT_MAX_ORDER).unwrap();
        let lifted: Vec<Polynomial> = sys.iter().map(|p| p.base_change(&f25).unwrap()).collect();
        let lp: Vec<Elem> = point.iter().map(|x| f25.embed(&f5, x).unwrap()).collect();
        let b = LocalAlgebra::new(&lifted, &lp, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(a.dimension(), b.dimension(), "sample {sample}");
        assert_eq!(a.dimension() as u32, exps.iter().product::<u32>());
    }
}
