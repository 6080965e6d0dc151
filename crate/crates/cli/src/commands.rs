use a1_core::degree::{self, DegreePath, LocalDegree};
use a1_core::gw::{transfer, transfer_gram};
use a1_core::local_algebra::LocalAlgebra;
use a1_core::milnor::{self, PointKind, SampleStatus};
use a1_core::poly::{parse_element, parse_point};
use a1_core::puiseux::{self, Deformation};
use a1_core::{Elem, Error, Field, GwElement, Polynomial, Ternary};
use serde_json::{json, Value};

use crate::args::{HypersurfaceArg, PointArg, SystemArg};
use crate::report::{
    class, elems, invariants_json, invariants_text, matrix_json, matrix_text, parsed, ternary, CliError, CliResult,
    Report,
};

pub fn field(desc: &str) -> CliResult<Field> {
    parsed("--field", desc, Field::parse(desc))
}

fn var_list(vars: &Option<String>) -> Option<Vec<String>> {
    vars.as_ref()
        .map(|v| v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
}

fn system(k: &Field, arg: &SystemArg) -> CliResult<Vec<Polynomial>> {
    let texts: Vec<&str> = arg
        .system
        .iter()
        .flat_map(|s| s.split([';', ',']))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let vars = var_list(&arg.vars);
    match Polynomial::parse_system(&texts, k, vars.as_deref()) {
        Ok(fs) => Ok(fs),
        Err(e @ Error::Syntax { .. }) => {
            // locate the offending polynomial for the diagnostic
            for t in &texts {
                parsed("--system", t, Polynomial::parse(t, k, vars.as_deref()))?;
            }
            Err(e.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn hypersurface(k: &Field, arg: &HypersurfaceArg) -> CliResult<Polynomial> {
    let vars = var_list(&arg.vars);
    parsed("--f", &arg.f, Polynomial::parse(&arg.f, k, vars.as_deref()))
}

fn point(k: &Field, arg: &PointArg) -> CliResult<(Field, Vec<Elem>)> {
    let l = match &arg.point_field {
        Some(d) => parsed("--point-field", d, Field::parse(d))?,
        None => k.clone(),
    };
    let p = parsed("--point", &arg.point, parse_point(&arg.point, &l))?;
    Ok((l, p))
}

fn gw(k: &Field, what: &str, text: &str) -> CliResult<GwElement> {
    parsed(what, text, GwElement::parse(text, k))
}

pub fn gw_simplify(desc: &str, text: &str) -> CliResult<Report> {
    let k = field(desc)?;
    let e = gw(&k, "class", text)?;
    let mut r = Report::new("gw-simplify");
    let c = class(&e)?;
    r.line(c.clone());
    r.detail(format!("entries: {}", e.render()));
    for l in invariants_text(&e)? {
        r.detail(l);
    }
    r.set("field", k.descriptor());
    r.set("class", c);
    r.set("entries", e.render());
    r.set("invariants", invariants_json(&e)?);
    Ok(r)
}

pub fn gw_equal(desc: &str, a: &str, b: &str) -> CliResult<Report> {
    let k = field(desc)?;
    let x = gw(&k, "left class", a)?;
    let y = gw(&k, "right class", b)?;
    let t = x.equals(&y)?;
    let mut r = Report::new("gw-equal");
    r.line(ternary(t));
    for (name, e) in [("left", &x), ("right", &y)] {
        r.detail(format!("{name}: {}", class(e)?));
        for l in invariants_text(e)? {
            r.detail(format!("  {l}"));
        }
    }
    r.set("field", k.descriptor());
    r.set("left", class(&x)?);
    r.set("right", class(&y)?);
    r.set_extra("left_invariants", invariants_json(&x)?);
    r.set_extra("right_invariants", invariants_json(&y)?);
    r.verdict(t);
    Ok(r)
}

pub fn transfer_cmd(desc: &str, to: Option<&str>, text: &str) -> CliResult<Report> {
    let l = field(desc)?;
    let k = match to {
        Some(d) => parsed("--to", d, Field::parse(d))?,
        None => l.parent().ok_or_else(|| CliError::from(Error::NotAnExtension))?,
    };
    let e = gw(&l, "class", text)?;
    let t = transfer(&e, &k)?;
    let mut r = Report::new("transfer");
    let c = class(&t)?;
    r.line(c.clone());
    let mut grams = Vec::new();
    for (sc, m) in e.entries() {
        let g = transfer_gram(&l, &sc.rep, &k, None)?;
        r.detail(format!("Tr <{}> (x{m}): Gram {}", l.render(&sc.rep), matrix_text(&k, &g)));
        grams.push(json!({ "entry": l.render(&sc.rep), "multiplicity": m, "gram": matrix_json(&k, &g) }));
    }
    r.detail(format!("degree: {}", l.degree_over(&k)?));
    r.set("from", l.descriptor());
    r.set("to", k.descriptor());
    r.set("class", c);
    r.set("rank", t.rank());
    r.set_extra("grams", Value::Array(grams));
    Ok(r)
}

fn describe_degree(r: &mut Report, d: &LocalDegree) -> CliResult<()> {
    let path = match d.path {
        DegreePath::Simple => "simple zero",
        DegreePath::Ekl => "EKL",
    };
    r.line(class(&d.class)?);
    r.detail(format!("path: {path}"));
    r.detail(format!("residue degree: {}", d.residue_degree));
    r.set("class", class(&d.class)?);
    r.set("rank", d.class.rank());
    r.set("path", path);
    r.set("residue_degree", d.residue_degree);
    if d.residue_degree > 1 {
        r.detail(format!("class over the residue field: {}", class(&d.residue_class)?));
        r.set_extra("residue_class", class(&d.residue_class)?);
    }
    if let Some(e) = &d.ekl {
        let f = e.algebra.field();
        r.detail(format!("basis: {}", e.algebra.render_basis().join(", ")));
        r.detail(format!("certificate order: {}", e.algebra.certificate_order()));
        r.detail(format!("eta: {}", elems(f, &e.eta)));
        r.detail(format!("Gram: {}", matrix_text(f, &e.gram)));
        r.set_extra("basis", e.algebra.render_basis());
        r.set_extra("certificate_order", e.algebra.certificate_order());
        r.set_extra("eta", e.eta.iter().map(|x| f.render(x)).collect::<Vec<_>>());
        r.set_extra("gram", matrix_json(f, &e.gram));
    }
    Ok(())
}

pub fn degree_local(desc: &str, sys: &SystemArg, pt: &PointArg) -> CliResult<Report> {
    let k = field(desc)?;
    let fs = system(&k, sys)?;
    let (l, p) = point(&k, pt)?;
    let d = degree::local_degree(&fs, &l, &p, pt.max_order)?;
    let mut r = Report::new("degree-local");
    describe_degree(&mut r, &d)?;
    r.set("field", k.descriptor());
    r.set("point", elems(&l, &p));
    Ok(r)
}

pub fn degree_p1(desc: &str, num: &str, den: &str, value: Option<&str>, max_ext: usize) -> CliResult<Report> {
    let k = field(desc)?;
    let z = vec!["z".to_string()];
    let a = parsed("--num", num, Polynomial::parse(num, &k, Some(&z)))?;
    let b = parsed("--den", den, Polynomial::parse(den, &k, Some(&z)))?;
    let bez = degree::bezout_form_p1(&a, &b)?;
    let mut r = Report::new("degree-p1");
    let c = class(&bez.class)?;
    r.line(c.clone());
    r.detail(format!("Bezout matrix: {}", matrix_text(&k, &bez.matrix)));
    r.set("field", k.descriptor());
    r.set("class", c);
    r.set("rank", bez.class.rank());
    r.set_extra("bezout_matrix", matrix_json(&k, &bez.matrix));
    if let Some(v) = value {
        let y = parsed("--value", v, parse_element(v, &k))?;
        let g = degree::global_degree_p1(&a, &b, &y, max_ext)?;
        let t = g.class.equals(&bez.class)?;
        r.line(format!("fiber sum at {}: {}", k.render(&y), class(&g.class)?));
        r.line(format!("agrees with Bezout: {}", ternary(t)));
        for p in &g.fiber {
            r.detail(format!("  {} degree {}: {}", p.point.render(), p.point.degree, class(&p.contribution)?));
        }
        r.set("fiber_sum", class(&g.class)?);
        r.verdict(t);
    }
    Ok(r)
}

fn value_vector(k: &Field, text: &str) -> CliResult<Vec<Elem>> {
    parsed("--value", text, parse_point(text, k))
}

pub fn degree_global(desc: &str, sys: &SystemArg, value: Option<&str>, max_ext: usize, limit: usize) -> CliResult<Report> {
    let k = field(desc)?;
    let fs = system(&k, sys)?;
    let mut r = Report::new("degree-global");
    r.set("field", k.descriptor());
    r.set("max_ext", max_ext);
    if let Some(v) = value {
        let y = value_vector(&k, v)?;
        let g = degree::global_degree_finite_field(&fs, &y, max_ext)?;
        r.line(class(&g.class)?);
        r.detail(format!("geometric points: {}", g.geometric_count));
        let mut fiber = Vec::new();
        for p in &g.fiber {
            r.detail(format!(
                "  {} degree {}: J = {}, {}",
                p.point.render(),
                p.point.degree,
                p.point.field.render(&p.jacobian),
                class(&p.contribution)?
            ));
            fiber.push(json!({
                "point": p.point.render(),
                "degree": p.point.degree,
                "jacobian": p.point.field.render(&p.jacobian),
                "contribution": class(&p.contribution)?,
            }));
        }
        r.set("value", elems(&k, &y));
        r.set("class", class(&g.class)?);
        r.set("geometric_count", g.geometric_count);
        r.set_extra("fiber", Value::Array(fiber));
        return Ok(r);
    }
    let (good, bad) = degree::scan_values(&fs, max_ext, limit)?;
    let mut verdict = Ternary::True;
    let first = good.first().map(|(_, g)| g.class.clone());
    let mut regular = Vec::new();
    for (y, g) in &good {
        if let Some(f0) = &first {
            verdict = verdict.and(g.class.equals(f0)?);
        }
        r.detail(format!("  {}: {}", elems(&k, y), class(&g.class)?));
        regular.push(json!({ "value": elems(&k, y), "class": class(&g.class)? }));
    }
    let mut rejected = Vec::new();
    for (y, e) in &bad {
        r.detail(format!("  {}: rejected ({e})", elems(&k, y)));
        rejected.push(json!({ "value": elems(&k, y), "reason": e.to_string() }));
    }
    match &first {
        Some(c) => r.line(class(c)?),
        None => r.line("no regular value found"),
    }
    r.line(format!("regular values: {}, rejected: {}", good.len(), bad.len()));
    r.line(format!("agree across regular values: {}", ternary(verdict)));
    if let Some(c) = &first {
        r.set("class", class(c)?);
    }
    r.set("regular", Value::Array(regular));
    r.set("rejected", Value::Array(rejected));
    r.verdict(if first.is_some() { verdict } else { Ternary::Unknown });
    Ok(r)
}

pub fn local_algebra(desc: &str, sys: &SystemArg, pt: &PointArg) -> CliResult<Report> {
    let k = field(desc)?;
    let fs = system(&k, sys)?;
    let (l, p) = point(&k, pt)?;
    let fs: Vec<Polynomial> = fs.iter().map(|f| f.base_change(&l)).collect::<a1_core::Result<_>>()?;
    let a = LocalAlgebra::new(&fs, &p, pt.max_order)?;
    let mut r = Report::new("local-algebra");
    r.line(format!("dimension: {}", a.dimension()));
    r.line(format!("basis: {}", a.render_basis().join(", ")));
    r.line(format!("certificate order: {}", a.certificate_order()));
    r.set("field", l.descriptor());
    r.set("dimension", a.dimension());
    r.set("basis", a.render_basis());
    r.set("certificate_order", a.certificate_order());
    match a.jacobian_image() {
        Ok(j) => {
            r.detail(format!("jacobian image: {}", elems(&l, &j)));
            r.set_extra("jacobian_image", j.iter().map(|x| l.render(x)).collect::<Vec<_>>());
        }
        Err(e) => r.detail(format!("jacobian image: {e}")),
    }
    Ok(r)
}

pub fn milnor_cmd(desc: &str, f: &HypersurfaceArg, pt: &PointArg) -> CliResult<Report> {
    let k = field(desc)?;
    let poly = hypersurface(&k, f)?;
    let (l, p) = point(&k, pt)?;
    let d = milnor::milnor_number_with_order(&poly, &l, &p, pt.max_order)?;
    let mut r = Report::new("milnor");
    describe_degree(&mut r, &d)?;
    r.set("f", poly.render());
    r.set("point", elems(&l, &p));
    Ok(r)
}

pub fn node_type_cmd(desc: &str, f: &HypersurfaceArg, pt: &PointArg) -> CliResult<Report> {
    let k = field(desc)?;
    let poly = hypersurface(&k, f)?;
    let (l, p) = point(&k, pt)?;
    let sp = milnor::classify_point(&poly, &l, &p)?;
    let on_curve = l.is_zero(&poly.evaluate_in(&l, &p)?);
    let kind = match sp.kind {
        PointKind::Smooth if !on_curve => "not on the hypersurface",
        PointKind::Smooth => "smooth",
        PointKind::Node => "node",
        PointKind::HigherSingularity => "higher singularity",
    };
    let mut r = Report::new("node-type");
    r.set("kind", kind);
    r.set("hessian", l.render(&sp.hessian));
    if sp.kind != PointKind::Node {
        return Err(CliError {
            kind: "NotANode".into(),
            message: format!("point is not a node ({kind}; Hessian determinant {})", l.render(&sp.hessian)),
        });
    }
    let ty = milnor::node_type(&poly, &l, &p)?;
    let split = l.is_square(&l.neg(&sp.hessian))?;
    r.line(class(&ty)?);
    r.detail(format!("Hessian determinant: {}", l.render(&sp.hessian)));
    if l.is_finite() || l.is_rationals() || l.is_reals() {
        let s = match split {
            Ternary::True => "split",
            Ternary::False => "non-split",
            Ternary::Unknown => "undecided",
        };
        r.detail(format!("tangent directions: {s}"));
        r.set("split", s);
    }
    r.set("type", class(&ty)?);
    Ok(r)
}

pub fn verify_cor45(
    desc: &str,
    f: &HypersurfaceArg,
    samples: usize,
    max_ext: usize,
    seed: u64,
    values: Option<&str>,
) -> CliResult<Report> {
    let k = field(desc)?;
    let poly = hypersurface(&k, f)?;
    let report = match values {
        Some(v) => {
            let pts = v
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parsed("--values", s, parse_point(s, &k)))
                .collect::<CliResult<Vec<_>>>()?;
            milnor::verify_linear_family_at(&poly, &pts, max_ext)?
        }
        None => milnor::verify_linear_family(&poly, samples, max_ext, seed)?,
    };
    let mut r = Report::new("verify-cor45");
    let lhs = class(&report.lhs)?;
    r.line(format!("f = {} over {}", poly.render(), k.descriptor()));
    let mut sing = Vec::new();
    for (p, mu) in &report.singularities {
        r.line(format!("  singular point {} (degree {}): mu = {}", p.render(), p.degree, class(&mu.class)?));
        sing.push(json!({ "point": p.render(), "degree": p.degree, "milnor": class(&mu.class)? }));
    }
    r.line(format!("sum of Milnor numbers: {lhs}"));
    r.line("sample | a | nodes | residue degrees | sum Tr type | equal".to_string());
    let mut rows = Vec::new();
    for (i, s) in report.samples.iter().enumerate() {
        let a = elems(&k, &s.a);
        let degs: Vec<String> = s.nodes.iter().map(|n| n.point.degree.to_string()).collect();
        let geometric: usize = s.nodes.iter().map(|n| n.point.degree).sum();
        let (rhs, eq) = match &s.status {
            SampleStatus::Generic { rhs, equal } => (class(rhs)?, ternary(*equal).to_string()),
            SampleStatus::NonGeneric => ("-".into(), "non-generic".into()),
            SampleStatus::Escaped { found, expected } => ("-".into(), format!("escaped ({found} of {expected})")),
        };
        r.line(format!("{i} | {a} | {geometric} | {} | {rhs} | {eq}", degs.join(" ")));
        for n in &s.nodes {
            r.detail(format!(
                "  sample {i}: node {} over degree {}: Hessian {}, type {}",
                n.point.render(),
                n.point.degree,
                n.point.field.render(&n.hessian),
                class(&n.node_type)?
            ));
        }
        rows.push(json!({
            "a": a,
            "nodes": geometric,
            "residue_degrees": s.nodes.iter().map(|n| n.point.degree).collect::<Vec<_>>(),
            "types": s.nodes.iter().map(|n| class(&n.node_type)).collect::<CliResult<Vec<_>>>()?,
            "hessians": s.nodes.iter().map(|n| n.point.field.render(&n.hessian)).collect::<Vec<_>>(),
            "fields": s.nodes.iter().map(|n| n.point.field.descriptor()).collect::<Vec<_>>(),
            "rhs": rhs,
            "status": eq,
        }));
    }
    let verdict = report.all_hold();
    r.line(format!(
        "generic samples: {} of {} ({:.2})",
        report.generic_count(),
        report.samples.len(),
        report.generic_fraction()
    ));
    r.line(format!("holds on every generic sample: {}", ternary(verdict)));
    r.set("f", poly.render());
    r.set("field", k.descriptor());
    r.set("max_ext", max_ext);
    r.set("lhs", lhs);
    r.set("singularities", Value::Array(sing));
    r.set("samples", Value::Array(rows));
    r.set("generic_count", report.generic_count());
    r.verdict(verdict);
    Ok(r)
}

/// The base field with a coefficient extension `c^2-3` adjoined.
fn with_extension(k: &Field, ext: &str) -> CliResult<Field> {
    let name: String = ext
        .chars()
        .skip_while(|c| !c.is_ascii_alphabetic())
        .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
        .collect();
    if name.is_empty() || name == "t" {
        return Err(CliError::usage(format!("--ext: cannot find the generator name in `{ext}`")));
    }
    let desc = format!("{}({name}):{ext}", k.descriptor());
    parsed("--ext", ext, Field::parse(&desc))
}

#[allow(clippy::too_many_arguments)]
pub fn bifurcate(
    desc: &str,
    f: &HypersurfaceArg,
    g: &str,
    seeds: &[String],
    precision: i64,
    at: Option<&str>,
    ext: Option<&str>,
) -> CliResult<Report> {
    let base = field(desc)?;
    let k = match ext {
        Some(e) => with_extension(&base, e)?,
        None => base,
    };
    let poly = hypersurface(&k, f)?;
    let gpoly = parsed("--g", g, Polynomial::parse(g, &k, None))?;
    let def = Deformation::new(&poly, &gpoly)?;
    let vars = def.vars();
    let p = match at {
        Some(s) => parsed("--point", s, parse_point(s, &k))?,
        None => vec![k.zero(); vars.len()],
    };
    let mut branches = Vec::new();
    for s in seeds {
        let seed = parsed("--seed", s, puiseux::parse_seed(s, &k, &vars, precision))?;
        branches.push(puiseux::newton_lift(&def, &seed, precision)?);
    }
    let rep = puiseux::verify_bifurcation(&def, &branches, &p)?;
    let mut r = Report::new("bifurcate");
    r.line(format!("mu = {}", class(&rep.milnor.class)?));
    let mut js = Vec::new();
    for (i, b) in rep.branches.iter().enumerate() {
        let l = &b.branch.field;
        let coords: Vec<String> = vars
            .iter()
            .zip(&b.branch.coords)
            .map(|(v, c)| format!("{v} = {}", l.render(c)))
            .collect();
        r.line(format!("branch {i}: {}", coords.join(", ")));
        r.line(format!("  type {}", b.branch_type.render()));
        match b.conjugate_of {
            Some(j) => r.line(format!("  conjugate of branch {j}; counted once")),
            None => r.line(format!(
                "  degree {}, residues of Tr type: ({}, {})",
                b.degree,
                class(&b.residues.0)?,
                class(&b.residues.1)?
            )),
        }
        let residuals: Vec<String> = b
            .branch
            .residuals
            .iter()
            .map(|x| x.map_or("exact".into(), |v| v.to_string()))
            .collect();
        r.detail(format!(
            "  branch {i}: Hessian valuation {}, residual valuations {}",
            b.branch.hessian_valuation,
            residuals.join(" -> ")
        ));
        js.push(json!({
            "coords": b.branch.coords.iter().map(|c| l.render(c)).collect::<Vec<_>>(),
            "field": l.descriptor(),
            "type": b.branch_type.render(),
            "degree": b.degree,
            "conjugate_of": b.conjugate_of,
            "first_residue": class(&b.residues.0)?,
            "second_residue": class(&b.residues.1)?,
            "hessian_valuation": b.branch.hessian_valuation,
            "residuals": b.branch.residuals,
        }));
    }
    r.line(format!(
        "sum of transfers: first residue {}, second residue {}",
        class(&rep.first_residue)?,
        class(&rep.second_residue)?
    ));
    r.line(format!("branch degree {} of {}", rep.branch_degree, rep.milnor.class.rank()));
    if let Some(e) = &rep.issue {
        r.line(format!("issue: {e}"));
        r.set("issue", e.to_string());
    }
    r.line(format!("mu = sum Tr type: {}", ternary(rep.result)));
    r.set("milnor", class(&rep.milnor.class)?);
    r.set("branches", Value::Array(js));
    r.set("first_residue", class(&rep.first_residue)?);
    r.set("second_residue", class(&rep.second_residue)?);
    r.set("branch_degree", rep.branch_degree);
    r.set("precision", precision);
    r.verdict(rep.result);
    Ok(r)
}
