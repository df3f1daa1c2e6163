//! Deterministic JSON reports: sorted keys, floats with 17 significant digits,
//! non-finite floats as strings.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(BTreeMap<String, Json>),
}

impl Json {
    pub fn num<T: Scalar>(v: T) -> Json {
        Json::Num(v.as_f64())
    }

    pub fn nums<T: Scalar>(v: &[T]) -> Json {
        Json::Arr(v.iter().map(|x| Json::num(*x)).collect())
    }

    pub fn obj<K: Into<String>>(pairs: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Obj(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn opt<V: Into<Json>>(v: Option<V>) -> Json {
        v.map_or(Json::Null, Into::into)
    }

    /// Pretty-printed with two-space indentation and a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write_to(&mut out, 0);
        out.push('\n');
        out
    }

    fn write_to(&self, out: &mut String, depth: usize) {
        let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat("  ").take(d));
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => write!(out, "{i}").unwrap(),
            Json::Num(v) => out.push_str(&format_float(*v)),
            Json::Str(s) => out.push_str(&quote(s)),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Obj(map) if map.is_empty() => out.push_str("{}"),
            Json::Arr(items) => {
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    pad(out, depth + 1);
                    item.write_to(out, depth + 1);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, depth);
                out.push(']');
            }
            Json::Obj(map) => {
                out.push_str("{\n");
                for (i, (k, v)) in map.iter().enumerate() {
                    pad(out, depth + 1);
                    out.push_str(&quote(k));
                    out.push_str(": ");
                    v.write_to(out, depth + 1);
                    out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
                }
                pad(out, depth);
                out.push('}');
            }
        }
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        quote("nan")
    } else if v.is_infinite() {
        quote(if v > 0.0 { "inf" } else { "-inf" })
    } else {
        let v = if v == 0.0 { 0.0 } else { v };
        format!("{v:.16e}")
    }
}

impl From<bool> for Json {
    fn from(v: bool) -> Self {
        Json::Bool(v)
    }
}

impl From<usize> for Json {
    fn from(v: usize) -> Self {
        Json::Int(v as i64)
    }
}

impl From<i64> for Json {
    fn from(v: i64) -> Self {
        Json::Int(v)
    }
}

impl From<f64> for Json {
    fn from(v: f64) -> Self {
        Json::Num(v)
    }
}

impl From<f32> for Json {
    fn from(v: f32) -> Self {
        Json::Num(f64::from(v))
    }
}

impl From<&str> for Json {
    fn from(v: &str) -> Self {
        Json::Str(v.to_string())
    }
}

impl From<String> for Json {
    fn from(v: String) -> Self {
        Json::Str(v)
    }
}

impl<J: Into<Json>> From<Vec<J>> for Json {
    fn from(v: Vec<J>) -> Self {
        Json::Arr(v.into_iter().map(Into::into).collect())
    }
}

/// One checked assertion.
#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub name: String,
    /// Which result the assertion instantiates.
    pub paper_anchor: String,
    pub pass: bool,
    pub measured: Json,
    pub asserted_bound: Json,
    pub witnesses: Json,
}

impl Claim {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, pass: bool) -> Self {
        Claim {
            name: name.into(),
            paper_anchor: anchor.into(),
            pass,
            measured: Json::Null,
            asserted_bound: Json::Null,
            witnesses: Json::Null,
        }
    }

    pub fn measured(mut self, v: impl Into<Json>) -> Self {
        self.measured = v.into();
        self
    }

    pub fn bound(mut self, v: impl Into<Json>) -> Self {
        self.asserted_bound = v.into();
        self
    }

    pub fn witnesses(mut self, v: impl Into<Json>) -> Self {
        self.witnesses = v.into();
        self
    }

    pub fn to_json(&self) -> Json {
        Json::obj([
            ("name", Json::from(self.name.as_str())),
            ("paper_anchor", Json::from(self.paper_anchor.as_str())),
            ("verdict", Json::from(if self.pass { "pass" } else { "fail" })),
            ("measured", self.measured.clone()),
            ("asserted_bound", self.asserted_bound.clone()),
            ("witnesses", self.witnesses.clone()),
        ])
    }
}

/// Output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Json {
        Json::obj([
            ("command", Json::from(self.command.as_str())),
            ("inputs_digest", Json::from(self.inputs_digest.as_str())),
            ("claims", Json::Arr(self.claims.iter().map(Claim::to_json).collect())),
        ])
    }

    pub fn render_json(&self) -> String {
        self.to_json().render()
    }

    /// One `PASS`/`FAIL` line per claim.
    pub fn render_text(&self) -> String {
        let mut out = format!("{} ({})\n", self.command, self.inputs_digest);
        for c in &self.claims {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let mut measured = String::new();
            c.measured.write_to(&mut measured, 0);
            let measured = measured.split_whitespace().collect::<Vec<_>>().join(" ");
            writeln!(out, "{tag} {} [{}] measured={measured}", c.name, c.paper_anchor).unwrap();
        }
        out
    }
}
