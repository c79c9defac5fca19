//! JSON reports. Field layout is documented in `docs/report-schema.md`.

use jumploci::arith::{Cyclotomic, IntMatrix, Rational};
use jumploci::torus::{Subtorus, Translate, TranslatedSubtorus};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::workspace::InputError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Computed,
    Certified,
    Refuted,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Computed => "computed",
            Status::Certified => "certified",
            Status::Refuted => "refuted",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Computed | Status::Certified => 0,
            Status::Refuted => 1,
            Status::Error => 2,
        }
    }

    fn parse(s: &str) -> Option<Status> {
        [Status::Computed, Status::Certified, Status::Refuted, Status::Error].into_iter().find(|k| k.as_str() == s)
    }
}

/// How much proof weight a result carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertKind {
    /// Every step ran over `Q` or a cyclotomic field.
    Exact,
    /// Floating-point evaluation; never a certificate.
    Numeric,
    /// Exact steps driven by a non-exhaustive search or sampling.
    Heuristic,
}

impl CertKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertKind::Exact => "exact",
            CertKind::Numeric => "numeric",
            CertKind::Heuristic => "heuristic",
        }
    }

    fn parse(s: &str) -> Option<CertKind> {
        [CertKind::Exact, CertKind::Numeric, CertKind::Heuristic].into_iter().find(|k| k.as_str() == s)
    }
}

/// The deterministic part of a report: everything but the command echo
/// and timing.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub kind: CertKind,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub summary: String,
}

impl Outcome {
    pub fn new(status: Status, kind: CertKind, result: Value, summary: impl Into<String>) -> Self {
        Outcome { status, kind, result, witnesses: Vec::new(), summary: summary.into() }
    }

    pub fn with_witnesses(mut self, w: Vec<Value>) -> Self {
        self.witnesses = w;
        self
    }

    pub fn error(e: &InputError) -> Self {
        let detail = match e {
            InputError::Io { path, message } => json!({"type": "io", "path": path, "message": message}),
            InputError::Syntax { file, line, col, message } => json!({"type": "syntax", "file": file, "line": line, "column": col, "message": message}),
            InputError::Semantic { file, line, object, invariant, message } => {
                json!({"type": "semantic", "file": file, "line": line, "object": object, "invariant": invariant, "message": message})
            }
            InputError::Usage(m) => json!({"type": "usage", "message": m}),
        };
        Outcome::new(Status::Error, CertKind::Exact, json!({ "error": detail }), e.to_string())
    }

    pub fn to_cache_value(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "kind": self.kind.as_str(),
            "result": self.result,
            "witnesses": self.witnesses,
            "summary": self.summary,
        })
    }

    pub fn from_cache_value(v: &Value) -> Option<Outcome> {
        Some(Outcome {
            status: Status::parse(v.get("status")?.as_str()?)?,
            kind: CertKind::parse(v.get("kind")?.as_str()?)?,
            result: v.get("result")?.clone(),
            witnesses: v.get("witnesses")?.as_array()?.clone(),
            summary: v.get("summary")?.as_str()?.to_string(),
        })
    }
}

pub fn report(command: &[String], outcome: &Outcome, elapsed_ms: f64, cache: &str) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("status".into(), json!(outcome.status.as_str()));
    m.insert("kind".into(), json!(outcome.kind.as_str()));
    m.insert("result".into(), outcome.result.clone());
    m.insert("witnesses".into(), Value::Array(outcome.witnesses.clone()));
    m.insert("timing".into(), json!({"elapsed_ms": elapsed_ms, "cache": cache}));
    Value::Object(m)
}

pub fn rat(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn rat_rows(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| rats(r)).collect())
}

pub fn int(z: &BigInt) -> Value {
    Value::String(z.to_string())
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(int).collect())).collect())
}

pub fn cyclotomic(c: &Cyclotomic) -> Value {
    Value::String(c.to_string())
}

pub fn complex(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complexes(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(complex).collect())
}

pub fn subtorus(t: &Subtorus) -> Value {
    json!({
        "ambient": t.ambient(),
        "dim": t.dim(),
        "lattice": int_matrix(t.lattice()),
        "equations": int_matrix(&t.equations()),
    })
}

pub fn translated(t: &TranslatedSubtorus) -> Value {
    let mut v = subtorus(t.torus());
    let tr = match t.translate() {
        Translate::Torsion(q) => json!({"torsion": rats(q)}),
        Translate::Numeric(z) => json!({"numeric": complexes(z)}),
    };
    v["translate"] = tr;
    v
}
