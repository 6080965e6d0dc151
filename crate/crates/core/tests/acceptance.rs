//! Acceptance gate: one PASS/FAIL line per criterion, details indented.
//! Exits nonzero when any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use a1_core::degree::{
    bezout_form_p1, global_degree_finite_field, global_degree_p1, local_degree_ekl, local_degree_simple,
};
use a1_core::gw::{springer_reconstruct, springer_residues, transfer, transfer_gram};
use a1_core::local_algebra::{truncated_dimension, LocalAlgebra, DEFAULT_MAX_ORDER};
use a1_core::milnor::{milnor_number, verify_linear_family, SampleStatus};
use a1_core::poly::parse_element;
use a1_core::puiseux::{branch_type, newton_lift, parse_seed, verify_bifurcation, Branch, Deformation};
use a1_core::{BilinearForm, Elem, Error, Field, GwElement, Polynomial, Ternary};
use common::{field, random_p1_pair, random_simple_system};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<Vec<String>, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: a1_core::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn is_true(a: &GwElement, b: &GwElement) -> std::result::Result<bool, String> {
    Ok(ok(a.equals(b))? == Ternary::True)
}

fn h(f: &Field) -> GwElement {
    GwElement::hyperbolic(f)
}

fn zvars() -> Vec<String> {
    vec!["z".to_string()]
}

fn upoly(text: &str, f: &Field) -> std::result::Result<Polynomial, String> {
    ok(Polynomial::parse(text, f, Some(&zvars())))
}

fn c1_p1_exercises() -> Check {
    let mut notes = Vec::new();
    let q = field("Q");
    let f5 = field("F5");
    for a in [2i64, -3, 7] {
        let bez = ok(bezout_form_p1(&upoly(&format!("{a}*z"), &q)?, &upoly("1", &q)?))?;
        ensure!(is_true(&bez.class, &ok(GwElement::from_i64(&q, a))?)?, "Bezout of {a}z is {}", bez.class.render());
    }
    for a in 1..5i64 {
        let fs = vec![upoly(&format!("{a}*z"), &f5)?];
        for y in 0..5 {
            let d = ok(global_degree_finite_field(&fs, &[f5.from_i64(y)], 1))?;
            ensure!(is_true(&d.class, &ok(GwElement::from_i64(&f5, a))?)?, "fiber sum of {a}z at {y}");
        }
        let bez = ok(bezout_form_p1(&fs[0], &upoly("1", &f5)?))?;
        ensure!(is_true(&bez.class, &ok(GwElement::from_i64(&f5, a))?)?, "Bezout of {a}z over F5");
    }
    notes.push("z -> a z: <a> by Bezout over Q and F5 and by fiber sums over F5".into());
    let bez = ok(bezout_form_p1(&upoly("z^2", &q)?, &upoly("1", &q)?))?;
    ensure!(is_true(&bez.class, &h(&q))?, "Bezout of z^2 is {}", bez.class.render());
    let bez5 = ok(bezout_form_p1(&upoly("z^2", &f5)?, &upoly("1", &f5)?))?;
    ensure!(is_true(&bez5.class, &h(&f5))?, "Bezout of z^2 over F5");
    let fs = vec![upoly("z^2", &f5)?];
    let mut regular = Vec::new();
    for y in 0..5 {
        match global_degree_finite_field(&fs, &[f5.from_i64(y)], 2) {
            Ok(d) => {
                ensure!(is_true(&d.class, &h(&f5))?, "fiber sum of z^2 at {y} is {}", d.class.render());
                regular.push(y);
            }
            Err(Error::IrregularValue) => ensure!(y == 0, "unexpected irregular value {y}"),
            Err(e) => return Err(e.to_string()),
        }
    }
    notes.push(format!("z -> z^2: <1> + <-1> by Bezout and at regular values {regular:?} over F5"));
    Ok(notes)
}

fn c2_ekl_z_squared() -> Check {
    let mut notes = Vec::new();
    for (name, f) in [("R", Field::reals()), ("Q", Field::rationals())] {
        let fs = vec![upoly("z^2", &f)?];
        let e = ok(local_degree_ekl(&fs, &[f.zero()], DEFAULT_MAX_ORDER))?;
        // basis (1, Jf) = (1, 2z)
        let p = vec![vec![f.one(), f.zero()], vec![f.zero(), f.from_i64(2)]];
        let b = ok(BilinearForm::new(&f, e.gram.clone()))?.congruent(&p);
        let want = vec![vec![f.zero(), f.from_i64(2)], vec![f.from_i64(2), f.zero()]];
        ensure!(b.gram() == &want, "Gram in basis (1, 2z) over {name} is not [[0,2],[2,0]]");
        ensure!(is_true(&e.class, &h(&f))?, "class over {name} is {}", e.class.render());
        ensure!(e.class.rank() == 2, "rank {}", e.class.rank());
        ensure!(e.class.signature() == Some(0), "signature {:?}", e.class.signature());
        notes.push(format!(
            "{name}: basis {:?}, Gram {}, class {}, rank 2, signature 0",
            e.algebra.render_basis(),
            render_matrix(&f, b.gram()),
            e.class.render()
        ));
    }
    Ok(notes)
}

fn render_matrix(f: &Field, m: &[Vec<Elem>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| f.render(x)).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn c3_cusp_milnor() -> Check {
    let mut notes = Vec::new();
    for desc in ["Q", "F5", "F7"] {
        let f = field(desc);
        let cusp = ok(Polynomial::parse("x2^2 - x1^3", &f, None))?;
        let o = [f.zero(), f.zero()];
        let mu = ok(milnor_number(&cusp, &f, &o))?;
        ensure!(is_true(&mu.class, &h(&f))?, "mu over {desc} is {}", mu.class.render());
        let alg = ok(LocalAlgebra::new(&cusp.gradient(), &o, DEFAULT_MAX_ORDER))?;
        let n = alg.certificate_order();
        let (d0, d1) = (ok(truncated_dimension(alg.system(), n))?, ok(truncated_dimension(alg.system(), n + 1))?);
        ensure!(alg.dimension() == 2 && d0 == 2 && d1 == 2, "dimension {} ({d0}, {d1})", alg.dimension());
        notes.push(format!(
            "{desc}: mu = {}, basis {:?}, certified at N = {n} (dim 2 at N and N+1)",
            mu.class.render(),
            alg.render_basis()
        ));
    }
    Ok(notes)
}

fn c4_transfer_discriminants() -> Check {
    let mut notes = Vec::new();
    for (big, small, want_trivial) in [("F25", "F5", false), ("F49", "F7", true)] {
        let l = field(big);
        let k = field(small);
        let t = ok(transfer(&ok(GwElement::from_i64(&l, -1))?, &k))?;
        let det = ok(t.discriminant())?;
        let signed = ok(t.signed_discriminant())?;
        let det_sq = ok(k.is_square(&det.rep))? == Ternary::True;
        let signed_sq = ok(k.is_square(&signed.rep))? == Ternary::True;
        notes.push(format!(
            "Tr {big}/{small} <-1> = {}: det class {} ({}), signed discriminant {} ({})",
            t.render(),
            k.render(&det.rep),
            if det_sq { "trivial" } else { "nontrivial" },
            k.render(&signed.rep),
            if signed_sq { "trivial" } else { "nontrivial" },
        ));
        ensure!(signed_sq == want_trivial, "signed discriminant of Tr {big}/{small} <-1>");
    }
    notes.push("checked with the signed discriminant (-1)^(r(r-1)/2) det".into());
    Ok(notes)
}

fn cusp_deformation(q: &Field) -> std::result::Result<Deformation, String> {
    let f = ok(Polynomial::parse("x2^2 - x1^3", q, None))?;
    let g = ok(Polynomial::parse("3*x1 + 2*x2 + 2*x1^3 - t*x1^3", q, None))?;
    ok(Deformation::new(&f, &g))
}

fn c5_bifurcation() -> Check {
    let mut notes = Vec::new();
    let q = field("Q");
    let def = cusp_deformation(&q)?;
    let vars = def.vars();
    let mut branches: Vec<Branch> = Vec::new();
    let mut matched = 0;
    for sign in [1i64, -1] {
        let seed = ok(parse_seed(&format!("x1: t^(1/2)*{sign}; x2: -t"), &q, &vars, 16))?;
        let b = ok(newton_lift(&def, &seed, 16))?;
        // x1 = ±√t/(1-t) = ±Σ s^(2k+1), x2 = -s²
        let x1 = b.coords[0].as_series().ok_or("x1 is not a series")?;
        for e in 0..16 {
            let want = if e % 2 == 1 { q.from_i64(sign) } else { q.zero() };
            ensure!(x1.coeff(e).cloned().unwrap_or_else(|| q.zero()) == want, "x1 coefficient of s^{e}");
        }
        let x2 = b.coords[1].as_series().ok_or("x2 is not a series")?;
        let terms: Vec<(i64, Elem)> = x2.terms().map(|(e, c)| (e, c.clone())).collect();
        ensure!(terms == vec![(2, q.from_i64(-1))], "x2 is not -t");
        let ty = ok(branch_type(&def, &b))?;
        let stated = ok(GwElement::class(&b.field, &ok(parse_element("12*t^(1/2)*(1 - t)", &b.field))?))?;
        let agrees = is_true(&ty, &stated)?;
        if agrees {
            matched += 1;
        }
        notes.push(format!(
            "branch {}: x1 = {}, x2 = {}, type {}{}",
            if sign == 1 { "+" } else { "-" },
            b.field.render(&b.coords[0]),
            b.field.render(&b.coords[1]),
            ty.render(),
            if agrees { " = <12 t^(1/2) (1 - t)>" } else { "" }
        ));
        branches.push(b);
    }
    ensure!(matched == 1, "{matched} branches have type <12 t^(1/2)(1-t)>");
    let r = ok(verify_bifurcation(&def, &branches, &[q.zero(), q.zero()]))?;
    notes.push(format!(
        "mu = {}, residues of sum Tr type: ({}, {}), branch degree {}",
        r.milnor.class.render(),
        r.first_residue.render(),
        r.second_residue.render(),
        r.branch_degree
    ));
    ensure!(is_true(&r.milnor.class, &h(&q))?, "mu is not h");
    ensure!(r.second_residue.is_zero(), "second residue {}", r.second_residue.render());
    ensure!(r.result == Ternary::True, "verification returned {:?}", r.result);
    Ok(notes)
}

fn c6_elliptic_trace_form() -> Check {
    let l = field("Q(z)(y):y^2-z^3+z");
    let kz = l.parent().ok_or("no parent")?;
    let y = l.generator().ok_or("no generator")?;
    let two_y = l.mul(&l.from_i64(2), &y);
    let basis = [l.one(), ok(l.inv(&y))?];
    let g = ok(transfer_gram(&l, &two_y, &kz, Some(&basis)))?;
    let four = kz.from_i64(4);
    ensure!(g == vec![vec![kz.zero(), four.clone()], vec![four, kz.zero()]], "Gram {}", render_matrix(&kz, &g));
    let t = ok(transfer(&ok(GwElement::class(&l, &two_y))?, &kz))?;
    ensure!(is_true(&t, &h(&kz))?, "class {}", t.render());
    Ok(vec![format!("basis {{1, 1/y}}: Gram {}, class {} = h", render_matrix(&kz, &g), t.render())])
}

fn c7_relations() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    for desc in ["Q", "F5", "F7", "F25"] {
        let f = field(desc);
        for _ in 0..50 {
            let a = common::nonzero(&f, (rng.gen_range(-1000..1000), rng.gen_range(0..1000)));
            let b = common::nonzero(&f, (rng.gen_range(-1000..1000), rng.gen_range(0..1000)));
            let cls = |x: &Elem| GwElement::class(&f, x).map_err(|e| e.to_string());
            ensure!(is_true(&cls(&a)?, &cls(&f.mul(&a, &f.mul(&b, &b)))?)?, "(1) over {desc}");
            ensure!(is_true(&ok(cls(&a)?.mul(&cls(&b)?))?, &cls(&f.mul(&a, &b))?)?, "(2) over {desc}");
            let s = f.add(&a, &b);
            if !f.is_zero(&s) {
                let lhs = ok(cls(&a)?.add(&cls(&b)?))?;
                let rhs = ok(cls(&s)?.add(&cls(&f.mul(&f.mul(&a, &b), &s))?))?;
                ensure!(is_true(&lhs, &rhs)?, "(3) over {desc}");
            }
            ensure!(is_true(&ok(cls(&f.neg(&a))?.add(&cls(&a)?))?, &h(&f))?, "(4) over {desc}");
            count += 1;
        }
    }
    let lf = field("Q((t;1;8))");
    let q = field("Q");
    for i in 0..20 {
        let mut e = GwElement::zero(&lf);
        for _ in 0..rng.gen_range(1..4) {
            let c = common::nonzero(&q, (rng.gen_range(-1000..1000), rng.gen_range(0..1000)));
            let a = Elem::Series(a1_core::field::Series::monomial(c, rng.gen_range(0..4)));
            e = ok(e.add(&ok(GwElement::class(&lf, &a))?.scale(rng.gen_range(1..3))))?;
        }
        let (u, v) = ok(springer_residues(&e))?;
        let back = ok(springer_reconstruct(&lf, &u, &v))?;
        ensure!(is_true(&back, &e)?, "Springer round trip {i}: {}", e.render());
    }
    Ok(vec![format!("relations (1)-(4) on {count} pairs over Q, F5, F7, F25; 20 Springer round trips over Q((t))")])
}

fn c8_oracle_equivalence() -> Check {
    let f = field("F5");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let (fs, p) = random_simple_system(&f, &mut rng);
        let simple = ok(local_degree_simple(&fs, &f, &p))?;
        let ekl = ok(local_degree_ekl(&fs, &p, DEFAULT_MAX_ORDER))?;
        ensure!(is_true(&simple, &ekl.class)?, "system {i}: {} vs {}", simple.render(), ekl.class.render());
    }
    let mut maps = 0;
    let mut values = 0;
    while maps < 20 {
        let (a, b) = random_p1_pair(&f, &mut rng, 4);
        let bez = match bezout_form_p1(&a, &b) {
            Ok(x) => x,
            Err(Error::NotCoprime) => continue,
            Err(e) => return Err(e.to_string()),
        };
        maps += 1;
        let deg = a.total_degree().unwrap_or(0) as usize;
        let mut sums: Vec<GwElement> = Vec::new();
        for y in 0..5 {
            match global_degree_p1(&a, &b, &f.from_i64(y), deg) {
                Ok(g) => sums.push(g.class),
                Err(Error::IrregularValue) => {}
                Err(e) => return Err(e.to_string()),
            }
        }
        for s in &sums {
            ensure!(is_true(s, &bez.class)?, "{} / {}: fiber sum {} vs Bezout {}", a.render(), b.render(), s.render(), bez.class.render());
            ensure!(is_true(s, &sums[0])?, "fiber sums disagree for {} / {}", a.render(), b.render());
        }
        values += sums.len();
    }
    Ok(vec![
        "100 simple-zero systems over F5: EKL class = <Jf>".into(),
        format!("20 coprime maps over F5: Bezout class = fiber sum at {values} regular values"),
    ])
}

fn c9_rank_law() -> Check {
    let q = field("Q");
    let mut cases: Vec<(String, Vec<String>, usize)> =
        (1..=5).map(|k| (format!("z^{k}"), vec![format!("z^{k}")], k)).collect();
    for (name, f, d) in [("cusp", "x2^2 - x1^3", 2), ("tacnode", "x2^2 - x1^4", 3)] {
        let p = ok(Polynomial::parse(f, &q, None))?;
        cases.push((format!("grad {name}"), p.gradient().iter().map(|g| g.render()).collect(), d));
    }
    cases.push(("(x1^2, x2^3)".into(), vec!["x1^2".into(), "x2^3".into()], 6));
    let mut line = Vec::new();
    for (name, texts, dim) in cases {
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let fs = ok(Polynomial::parse_system(&refs, &q, None))?;
        let p = vec![q.zero(); fs[0].nvars()];
        let e = ok(local_degree_ekl(&fs, &p, DEFAULT_MAX_ORDER))?;
        ensure!(e.algebra.dimension() == dim, "{name}: dimension {}", e.algebra.dimension());
        ensure!(e.class.rank() == dim as i64, "{name}: rank {}", e.class.rank());
        line.push(format!("{name}: {dim}"));
    }
    Ok(vec![format!("rank = dim: {}", line.join(", "))])
}

fn c10_linear_family() -> Check {
    let mut notes = Vec::new();
    for (name, text) in [("cusp", "x2^2 - x1^3"), ("tacnode", "x2^2 - x1^4")] {
        for desc in ["F5", "F7"] {
            let k = field(desc);
            let f = ok(Polynomial::parse(text, &k, None))?;
            let r = ok(verify_linear_family(&f, 25, 3, 45))?;
            let mut escaped = 0;
            let mut obstruction = 0;
            for s in &r.samples {
                match &s.status {
                    SampleStatus::Generic { equal, rhs } => {
                        ensure!(*equal == Ternary::True, "{name}/{desc} at {:?}: {} vs {}", s.a, r.lhs.render(), rhs.render());
                        if name == "cusp" {
                            if let Some(prod) = s.rational_type_product(&k) {
                                let square = ok(k.is_square(&prod))? == Ternary::True;
                                ensure!(square == (desc == "F5"), "{desc} obstruction fails at {:?}", s.a);
                                obstruction += 1;
                            }
                        }
                    }
                    SampleStatus::NonGeneric => {}
                    SampleStatus::Escaped { .. } => escaped += 1,
                }
            }
            ensure!(escaped == 0, "{name}/{desc}: {escaped} samples escaped the extension bound");
            ensure!(r.generic_count() > 0, "{name}/{desc}: no generic sample");
            let obs = if name == "cusp" {
                format!(", obstruction checked on {obstruction} samples with two rational nodes")
            } else {
                String::new()
            };
            notes.push(format!(
                "{name}/{desc}: sum mu = {}, {}/25 generic samples hold{obs}",
                r.lhs.render(),
                r.generic_count()
            ));
        }
    }
    Ok(notes)
}

fn c11_arithmetic() -> Check {
    let q = field("Q");
    let lines = ok(GwElement::parse("15<1> + 12<-1>", &q))?;
    ensure!((lines.rank(), lines.signature()) == (27, Some(3)), "rank/signature {:?}", (lines.rank(), lines.signature()));
    // 8 points: 3 rational, a Q(√2) pair, a Q(∛2) triple
    let mut n3 = h(&q).scale(2);
    n3 = ok(n3.add(&ok(GwElement::parse("3<1>", &q))?))?;
    for desc in ["Q(a):a^2-2", "Q(c):c^3-2"] {
        let l = field(desc);
        n3 = ok(n3.add(&ok(transfer(&ok(GwElement::from_i64(&l, 1))?, &q))?))?;
    }
    ensure!(n3.rank() == 12, "rank {}", n3.rank());
    // signature counts real points: 3 + 2 + 1
    ensure!(n3.signature() == Some(6), "signature {:?}", n3.signature());
    Ok(vec![
        format!("15<1> + 12<-1>: rank 27, signature 3"),
        format!("N3 with 3 + 2 + 3 points: {} (rank 12, signature 6)", n3.render()),
    ])
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "P1 exercises", budget: Duration::from_secs(1), run: c1_p1_exercises },
        Criterion { id: 2, name: "EKL of z^2 over R and Q", budget: Duration::from_secs(1), run: c2_ekl_z_squared },
        Criterion { id: 3, name: "cusp Milnor number", budget: Duration::from_secs(1), run: c3_cusp_milnor },
        Criterion { id: 4, name: "transfer discriminants", budget: Duration::from_secs(1), run: c4_transfer_discriminants },
        Criterion { id: 5, name: "dynamic bifurcation of the cusp", budget: Duration::from_secs(5), run: c5_bifurcation },
        Criterion { id: 6, name: "elliptic trace form", budget: Duration::from_secs(1), run: c6_elliptic_trace_form },
        Criterion { id: 7, name: "GW relation suite", budget: Duration::from_secs(10), run: c7_relations },
        Criterion { id: 8, name: "oracle equivalence", budget: Duration::from_secs(30), run: c8_oracle_equivalence },
        Criterion { id: 9, name: "rank law", budget: Duration::from_secs(5), run: c9_rank_law },
        Criterion { id: 10, name: "linear perturbations over F5, F7", budget: Duration::from_secs(60), run: c10_linear_family },
        Criterion { id: 11, name: "arithmetic regressions", budget: Duration::from_secs(1), run: c11_arithmetic },
    ];
    let verbose = std::env::args().any(|a| a == "--verbose") || std::env::var_os("A1_VERBOSE").is_some();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let over = elapsed > c.budget;
        let (status, detail) = match &result {
            Ok(_) if over => ("FAIL", format!("over budget of {} s", c.budget.as_secs())),
            Ok(_) => ("PASS", String::new()),
            Err(e) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {:<36} {:>7.3} s{}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            if detail.is_empty() { String::new() } else { format!("  {detail}") }
        );
        if let Ok(notes) = &result {
            if verbose || status == "FAIL" {
                for n in notes {
                    println!("    {n}");
                }
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
