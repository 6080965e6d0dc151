use a1_core::{Elem, Error, Field, GwElement, Ternary};
use serde_json::{json, Map, Value};

/// How a successful run ends: exit 0, or 2/3 when a check came out False
/// or undecided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Done,
    Verdict(Ternary),
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Done | Outcome::Verdict(Ternary::True) => 0,
            Outcome::Verdict(Ternary::False) => 2,
            Outcome::Verdict(Ternary::Unknown) => 3,
        }
    }
}

/// Output of one subcommand. `detail` lines and `extra` fields only appear
/// with `--verbose`.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub lines: Vec<String>,
    pub detail: Vec<String>,
    pub fields: Map<String, Value>,
    pub extra: Map<String, Value>,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            lines: Vec::new(),
            detail: Vec::new(),
            fields: Map::new(),
            extra: Map::new(),
            outcome: Outcome::Done,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn detail(&mut self, s: impl Into<String>) {
        self.detail.push(s.into());
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.fields.insert(key.into(), v.into());
    }

    pub fn set_extra(&mut self, key: &str, v: impl Into<Value>) {
        self.extra.insert(key.into(), v.into());
    }

    pub fn verdict(&mut self, t: Ternary) {
        self.outcome = Outcome::Verdict(t);
        self.set("verdict", ternary(t));
    }

    pub fn render(self, json_mode: bool, verbose: bool) -> String {
        if json_mode {
            let mut m = Map::new();
            m.insert("schema".into(), json!(1));
            m.insert("command".into(), json!(self.command));
            m.extend(self.fields);
            if verbose {
                m.extend(self.extra);
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
            s.push('\n');
            return s;
        }
        let mut s = String::new();
        for l in self.lines {
            s.push_str(&l);
            s.push('\n');
        }
        if verbose {
            for l in self.detail {
                s.push_str(&l);
                s.push('\n');
            }
        }
        s
    }
}

pub fn ternary(t: Ternary) -> &'static str {
    match t {
        Ternary::True => "True",
        Ternary::False => "False",
        Ternary::Unknown => "Unknown",
    }
}

/// A failure with a message for the user; always exit 1.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub kind: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            kind: error_kind(&e),
            message: e.to_string(),
        }
    }
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            kind: "Usage".into(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = json!({ "schema": 1, "error": { "kind": self.kind, "message": self.message } });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches the offending input to a parse error, with a caret under the
/// reported position.
pub fn parsed<T>(what: &str, input: &str, r: a1_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        Error::Syntax { pos, msg } => {
            let col = input.get(..pos.min(input.len())).map_or(pos, |s| s.chars().count());
            CliError {
                kind: "Syntax".into(),
                message: format!(
                    "{what}: syntax error at position {pos}: {msg}\n  {input}\n  {}^",
                    " ".repeat(col)
                ),
            }
        }
        other => {
            let mut c = CliError::from(other);
            c.message = format!("{what}: {}", c.message);
            c
        }
    })
}

pub fn class(e: &GwElement) -> CliResult<String> {
    Ok(e.simplify()?.render())
}

pub fn matrix_json(f: &Field, m: &[Vec<Elem>]) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|x| json!(f.render(x))).collect()))
            .collect(),
    )
}

pub fn matrix_text(f: &Field, m: &[Vec<Elem>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| f.render(x)).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn elems(f: &Field, v: &[Elem]) -> String {
    format!("({})", v.iter().map(|x| f.render(x)).collect::<Vec<_>>().join(", "))
}

pub fn invariants_json(e: &GwElement) -> CliResult<Value> {
    let inv = e.invariants()?;
    let f = e.field();
    let hw = inv.hasse_witt.map(|m| {
        Value::Object(m.into_iter().map(|(p, s)| (p.to_string(), json!(s))).collect())
    });
    Ok(json!({
        "rank": inv.rank,
        "discriminant": inv.discriminant.map(|d| f.render(&d.rep)),
        "signed_discriminant": inv.signed_discriminant.map(|d| f.render(&d.rep)),
        "signature": inv.signature,
        "hasse_witt": hw,
    }))
}

pub fn invariants_text(e: &GwElement) -> CliResult<Vec<String>> {
    let inv = e.invariants()?;
    let f = e.field();
    let mut out = vec![format!("rank: {}", inv.rank)];
    if let Some(d) = &inv.discriminant {
        out.push(format!("discriminant: {}", f.render(&d.rep)));
    }
    if let Some(d) = &inv.signed_discriminant {
        out.push(format!("signed discriminant: {}", f.render(&d.rep)));
    }
    if let Some(s) = inv.signature {
        out.push(format!("signature: {s}"));
    }
    if let Some(hw) = &inv.hasse_witt {
        let parts: Vec<String> = hw.iter().map(|(p, s)| format!("{p}: {s}")).collect();
        out.push(format!("hasse-witt: {{{}}}", parts.join(", ")));
    }
    Ok(out)
}
