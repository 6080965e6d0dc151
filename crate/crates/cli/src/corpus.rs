//! Worked examples from the literature, replayed through the command line.

use a1_core::{Field, GwElement, Ternary};
use serde_json::{json, Value};

use crate::report::{CliResult, Report};

type Check = fn(i32, &Value) -> Result<(), String>;

struct Row {
    name: &'static str,
    args: &'static [&'static str],
    check: Check,
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("no `{key}` in output"))
}

fn text<'a>(v: &'a Value, key: &str) -> Result<&'a str, String> {
    get(v, key)?.as_str().ok_or_else(|| format!("`{key}` is not a string"))
}

fn num(v: &Value, key: &str) -> Result<i64, String> {
    get(v, key)?.as_i64().ok_or_else(|| format!("`{key}` is not an integer"))
}

fn verdict(code: i32, v: &Value, want: &str) -> Result<(), String> {
    let got = text(v, "verdict")?;
    let want_code = match want {
        "True" => 0,
        "False" => 2,
        _ => 3,
    };
    if got != want || code != want_code {
        return Err(format!("verdict {got} (exit {code}), expected {want}"));
    }
    Ok(())
}

fn field(desc: &str) -> Result<Field, String> {
    Field::parse(desc).map_err(|e| e.to_string())
}

fn gw(f: &Field, s: &str) -> Result<GwElement, String> {
    GwElement::parse(s, f).map_err(|e| format!("cannot parse `{s}`: {e}"))
}

/// `v[key]`, a class over `desc`, equals `want` in GW.
fn class_is(v: &Value, key: &str, desc: &str, want: &str) -> Result<(), String> {
    let f = field(desc)?;
    let got = text(v, key)?;
    match gw(&f, got)?.equals(&gw(&f, want)?) {
        Ok(Ternary::True) => Ok(()),
        Ok(t) => Err(format!("{key} = {got}, expected {want} ({t:?})")),
        Err(e) => Err(e.to_string()),
    }
}

fn signed_disc_square(desc: &str, class: &str) -> Result<bool, String> {
    let f = field(desc)?;
    let d = gw(&f, class)?.signed_discriminant().map_err(|e| e.to_string())?;
    Ok(f.is_square(&d.rep).map_err(|e| e.to_string())? == Ternary::True)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

const CUSP_G: &str = "3*x1 + 2*x2 + 2*x1^3 - t*x1^3";

fn rows() -> Vec<Row> {
    vec![
        Row {
            name: "<a> + <-a> is hyperbolic over Q",
            args: &["gw-equal", "--field", "Q", "<5> + <-5>", "<1> + <-1>"],
            check: |c, v| verdict(c, v, "True"),
        },
        Row {
            name: "<a b^2> = <a>",
            args: &["gw-equal", "--field", "Q", "<12>", "<3>"],
            check: |c, v| verdict(c, v, "True"),
        },
        Row {
            name: "<a> + <b> = <a+b> + <ab(a+b)>",
            args: &["gw-equal", "--field", "Q", "<2> + <3>", "<5> + <30>"],
            check: |c, v| verdict(c, v, "True"),
        },
        Row {
            name: "<2> differs from <1> over Q",
            args: &["gw-equal", "--field", "Q", "<2>", "<1>"],
            check: |c, v| verdict(c, v, "False"),
        },
        Row {
            name: "real classes by rank and signature",
            args: &["gw-simplify", "--field", "R", "<2> + <-3> + <5>"],
            check: |_, v| {
                ensure(text(v, "class")? == "2<1> + <-1>", format!("class {}", text(v, "class")?))?;
                let inv = get(v, "invariants")?;
                ensure(num(inv, "rank")? == 3 && num(inv, "signature")? == 1, "rank/signature")
            },
        },
        Row {
            name: "finite field classes agree by rank and discriminant",
            args: &["gw-equal", "--field", "F7", "<1> + <1>", "<3> + <5>"],
            check: |c, v| verdict(c, v, "True"),
        },
        Row {
            name: "finite field discriminant separates classes",
            args: &["gw-equal", "--field", "F7", "<1> + <1>", "<1> + <3>"],
            check: |c, v| verdict(c, v, "False"),
        },
        Row {
            name: "<t> + <-t> is hyperbolic over Q((t))",
            args: &["gw-equal", "--field", "Q((t;1;8))", "<t> + <-t>", "<1> + <-1>"],
            check: |c, v| verdict(c, v, "True"),
        },
        Row {
            name: "units of k[[t]] reduce to k",
            args: &["gw-equal", "--field", "Q((t;1;8))", "<3 + t>", "<3>"],
            check: |c, v| verdict(c, v, "True"),
        },
        Row {
            name: "second residue separates <t> from <1>",
            args: &["gw-equal", "--field", "Q((t;1;8))", "<t>", "<1>"],
            check: |c, v| verdict(c, v, "False"),
        },
        Row {
            name: "trace form of Q(sqrt 2)",
            args: &["transfer", "--field", "Q(a):a^2-2", "<1>"],
            check: |_, v| class_is(v, "class", "Q", "<1> + <2>"),
        },
        Row {
            name: "Tr F25/F5 <-1> has nontrivial discriminant",
            args: &["transfer", "--field", "F25", "--to", "F5", "<-1>"],
            check: |_, v| ensure(!signed_disc_square("F5", text(v, "class")?)?, "discriminant is trivial"),
        },
        Row {
            name: "Tr F49/F7 <-1> has trivial discriminant",
            args: &["transfer", "--field", "F49", "--to", "F7", "<-1>"],
            check: |_, v| ensure(signed_disc_square("F7", text(v, "class")?)?, "discriminant is nontrivial"),
        },
        Row {
            name: "degree of the elliptic double cover",
            args: &["transfer", "--field", "Q(z)(y):y^2-z^3+z", "<2*y>"],
            check: |_, v| class_is(v, "class", "Q(z)", "<1> + <-1>"),
        },
        Row {
            name: "simple zero has degree <Jf>",
            args: &["degree-local", "--field", "Q", "--system", "2*x1 + x2^2; 3*x2 - x1^2", "--point", "0,0"],
            check: |_, v| {
                class_is(v, "class", "Q", "<6>")?;
                ensure(text(v, "path")? == "simple zero", "path")
            },
        },
        Row {
            name: "zero over a separable extension gives a trace",
            args: &["degree-local", "--field", "Q", "--system", "x1^2 - 2", "--point", "a", "--point-field", "Q(a):a^2-2"],
            check: |_, v| {
                class_is(v, "class", "Q", "<1> + <-1>")?;
                ensure(num(v, "residue_degree")? == 2, "residue degree")
            },
        },
        Row {
            name: "EKL form of z^2 over R",
            args: &["degree-local", "--field", "R", "--system", "z^2", "--point", "0"],
            check: |_, v| {
                ensure(text(v, "class")? == "<1> + <-1>", format!("class {}", text(v, "class")?))?;
                ensure(text(v, "path")? == "EKL", "path")
            },
        },
        Row {
            name: "EKL form of z^2 over Q",
            args: &["degree-local", "--field", "Q", "--system", "z^2", "--point", "0"],
            check: |_, v| class_is(v, "class", "Q", "<1> + <-1>"),
        },
        Row {
            name: "gradient of the cusp factors as <3> h <2>",
            args: &["degree-local", "--field", "Q", "--system", "3*x1^2; 2*x2", "--point", "0,0"],
            check: |_, v| class_is(v, "class", "Q", "<1> + <-1>"),
        },
        Row {
            name: "z -> a z has degree <a>",
            args: &["degree-p1", "--field", "Q", "--num", "-3*z"],
            check: |_, v| class_is(v, "class", "Q", "<-3>"),
        },
        Row {
            name: "z -> z^2 has hyperbolic degree",
            args: &["degree-p1", "--field", "Q", "--num", "z^2"],
            check: |_, v| class_is(v, "class", "Q", "<1> + <-1>"),
        },
        Row {
            name: "fiber sum of z^2 over F5",
            args: &["degree-p1", "--field", "F5", "--num", "z^2", "--value", "2"],
            check: |c, v| {
                verdict(c, v, "True")?;
                class_is(v, "fiber_sum", "F5", "<1> + <-1>")
            },
        },
        Row {
            name: "local algebra of (x1^2, x2^3) has rank 6",
            args: &["local-algebra", "--field", "Q", "--system", "x1^2; x2^3", "--point", "0,0"],
            check: |_, v| ensure(num(v, "dimension")? == 6, "dimension"),
        },
        Row {
            name: "cusp Milnor number over Q",
            args: &["milnor", "--field", "Q", "--f", "x2^2 - x1^3", "--point", "0,0"],
            check: |_, v| class_is(v, "class", "Q", "<1> + <-1>"),
        },
        Row {
            name: "cusp Milnor number over F5",
            args: &["milnor", "--field", "F5", "--f", "x2^2 - x1^3", "--point", "0,0"],
            check: |_, v| class_is(v, "class", "F5", "<1> + <-1>"),
        },
        Row {
            name: "cusp Milnor number over F7",
            args: &["milnor", "--field", "F7", "--f", "x2^2 - x1^3", "--point", "0,0"],
            check: |_, v| class_is(v, "class", "F7", "<1> + <-1>"),
        },
        Row {
            name: "node a1 x1^2 + a2 x2^2 has type <a1 a2>",
            args: &["milnor", "--field", "Q", "--f", "2*x1^2 + 5*x2^2", "--point", "0,0"],
            check: |_, v| class_is(v, "class", "Q", "<10>"),
        },
        Row {
            name: "split node has type <-1>",
            args: &["node-type", "--field", "Q", "--f", "x1^2 - x2^2 + x1^3", "--point", "0,0"],
            check: |_, v| {
                class_is(v, "type", "Q", "<-1>")?;
                ensure(text(v, "split")? == "split", "split")
            },
        },
        Row {
            name: "non-split real node has type <1>",
            args: &["node-type", "--field", "R", "--f", "x1^2 + x2^2", "--point", "0,0"],
            check: |_, v| {
                ensure(text(v, "type")? == "<1>", format!("type {}", text(v, "type")?))?;
                ensure(text(v, "split")? == "non-split", "split")
            },
        },
        Row {
            name: "node in three variables has type <2^3 a1 a2 a3>",
            args: &["milnor", "--field", "Q", "--f", "x1^2 + 3*x2^2 + 5*x3^2 + x1^3", "--point", "0,0,0"],
            check: |_, v| class_is(v, "class", "Q", "<30>"),
        },
        Row {
            name: "cusp perturbations over F5 sum to the Milnor number",
            args: &["verify-cor45", "--field", "F5", "--f", "x2^2 - x1^3", "--samples", "20", "--rng-seed", "45"],
            check: cusp_f5,
        },
        Row {
            name: "tacnode perturbations over F7 sum to the Milnor number",
            args: &["verify-cor45", "--field", "F7", "--f", "x2^2 - x1^4", "--samples", "15", "--rng-seed", "45"],
            check: |c, v| {
                verdict(c, v, "True")?;
                // grad = (-4 x1^3, 2 x2): <-4> (<1> + h) <2>
                class_is(v, "lhs", "F7", "<1> + <-1> + <-2>")
            },
        },
        Row {
            name: "cusp bifurcates into two nodes of total type h",
            args: &[
                "bifurcate", "--field", "Q", "--f", "x2^2 - x1^3", "--g", CUSP_G,
                "--seed", "x1: t^(1/2); x2: -t", "--seed", "x1: -t^(1/2); x2: -t",
            ],
            check: |c, v| {
                verdict(c, v, "True")?;
                ensure(num(v, "branch_degree")? == 2, "branch degree")?;
                class_is(v, "first_residue", "Q", "<1> + <-1>")?;
                ensure(text(v, "second_residue")? == "0", "second residue")
            },
        },
        Row {
            name: "cusp branch type <12 sqrt t (1 - t)>",
            args: &[
                "bifurcate", "--field", "Q", "--f", "x2^2 - x1^3", "--g", CUSP_G,
                "--seed", "x1: t^(1/2); x2: -t", "--seed", "x1: -t^(1/2); x2: -t",
            ],
            check: |_, v| {
                // holds on the branch x1 = -sqrt(t)/(1-t); the other has <-12 sqrt t (1-t)>
                let mut hits = 0;
                for b in get(v, "branches")?.as_array().ok_or("branches")? {
                    let f = field(text(b, "field")?)?;
                    let ty = gw(&f, text(b, "type")?)?;
                    if ty.equals(&gw(&f, "<12*t^(1/2)*(1 - t)>")?).map_err(|e| e.to_string())? == Ternary::True {
                        hits += 1;
                    }
                }
                ensure(hits == 1, format!("{hits} branches of the stated type"))
            },
        },
        Row {
            name: "lines on a cubic surface: 15<1> + 12<-1>",
            args: &["gw-simplify", "--field", "Q", "15<1> + 12<-1>"],
            check: |_, v| {
                let inv = get(v, "invariants")?;
                ensure(num(inv, "rank")? == 27 && num(inv, "signature")? == 3, "rank/signature")
            },
        },
        Row {
            name: "bitangents to a plane quartic: 16<1> + 12<-1>",
            args: &["gw-simplify", "--field", "Q", "16<1> + 12<-1>"],
            check: |_, v| {
                let inv = get(v, "invariants")?;
                ensure(num(inv, "rank")? == 28 && num(inv, "signature")? == 4, "rank/signature")
            },
        },
    ]
}

/// Every generic sample holds, and two rational nodes never have types
/// whose product is a non-square.
fn cusp_f5(c: i32, v: &Value) -> Result<(), String> {
    verdict(c, v, "True")?;
    class_is(v, "lhs", "F5", "<1> + <-1>")?;
    let f5 = field("F5")?;
    let mut rational = 0;
    for s in get(v, "samples")?.as_array().ok_or("samples")? {
        let degs = get(s, "residue_degrees")?.as_array().ok_or("degrees")?;
        if degs.len() != 2 || degs.iter().any(|d| d.as_u64() != Some(1)) {
            continue;
        }
        let types = get(s, "types")?.as_array().ok_or("types")?;
        let mut prod = GwElement::from_i64(&f5, 1).map_err(|e| e.to_string())?;
        for t in types {
            prod = prod.mul(&gw(&f5, t.as_str().ok_or("type")?)?).map_err(|e| e.to_string())?;
        }
        ensure(prod.equals(&gw(&f5, "<1>")?).map_err(|e| e.to_string())? == Ternary::True, "split and non-split pair")?;
        rational += 1;
    }
    ensure(rational > 0, "no sample with two rational nodes")
}

pub fn run() -> CliResult<Report> {
    let mut r = Report::new("corpus");
    let mut results = Vec::new();
    let mut passed = 0;
    let all = rows();
    for row in &all {
        let mut argv = vec!["a1", "--json"];
        argv.extend_from_slice(row.args);
        let out = crate::run(argv);
        let outcome = serde_json::from_str::<Value>(&out.stdout)
            .map_err(|e| format!("bad output ({e}): {}", out.stderr.trim()))
            .and_then(|v| match v.get("error") {
                Some(e) => Err(format!("error: {}", e["message"].as_str().unwrap_or("?"))),
                None => (row.check)(out.code, &v),
            });
        match &outcome {
            Ok(()) => {
                passed += 1;
                r.line(format!("PASS {}", row.name));
            }
            Err(e) => r.line(format!("FAIL {}: {e}", row.name)),
        }
        r.detail(format!("  a1 {}", row.args.join(" ")));
        results.push(json!({
            "name": row.name,
            "pass": outcome.is_ok(),
            "reason": outcome.err(),
        }));
    }
    r.line(format!("{passed} of {} examples passed", all.len()));
    r.set("rows", Value::Array(results));
    r.set("passed", passed);
    r.set("total", all.len());
    r.verdict(Ternary::from_bool(passed == all.len()));
    Ok(r)
}
