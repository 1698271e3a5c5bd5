use std::fmt::Write as _;

use orbitkit::verdict::Verdict;
use serde::Serialize;
use serde_json::Value;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Determined,
    ValidationFailure,
    Undetermined,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Determined => 0,
            Status::ValidationFailure => 2,
            Status::Undetermined => 3,
            Status::InputError => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Computed in `ℚ(θ)` with `θ` symbolic; independent of `--theta`.
    Exact,
    /// Floating point at `θ = --theta`.
    Numeric,
    /// Both kinds of step, e.g. the regression suite.
    Mixed,
}

#[derive(Debug, Clone, Serialize)]
pub struct Request {
    pub command: String,
    pub input: Option<String>,
    pub theta_value: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub name: String,
    pub method: Method,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub request: Request,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<&'static str>,
    pub results: Vec<Block>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub warnings: Vec<String>,
    /// Full regression suite results; the summary block is what gets printed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub golden: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    pub status: Status,
    pub exit_code: i32,
}

impl Report {
    pub fn new(request: Request) -> Self {
        Report {
            request,
            kind: None,
            results: Vec::new(),
            verdict: None,
            warnings: Vec::new(),
            golden: None,
            errors: Vec::new(),
            status: Status::Determined,
            exit_code: 0,
        }
    }

    pub fn push(&mut self, name: &str, method: Method, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("results serialize");
        self.results.push(Block { name: name.to_string(), method, value });
    }

    pub fn finish(&mut self, status: Status) {
        self.status = status;
        self.exit_code = status.code();
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let r = &self.request;
        let _ = write!(out, "{}", r.command);
        if let Some(input) = &r.input {
            let _ = write!(out, " {input}");
        }
        if let Some(kind) = self.kind {
            let _ = write!(out, " ({kind})");
        }
        out.push('\n');
        for block in &self.results {
            let _ = writeln!(out, "\n{} [{}]", block.name, method_name(block.method));
            render_value(&mut out, &block.value, 1);
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(
                out,
                "\nverdict: square_integrable={} type_I={} rule={}",
                v.square_integrable, v.type_i, v.rule
            );
            for reason in &v.reasons {
                let _ = writeln!(out, "  because {reason}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for e in &self.errors {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(out, "status: {} (exit {})", status_name(self.status), self.exit_code);
        out
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Numeric => "numeric",
        Method::Mixed => "mixed",
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Determined => "determined",
        Status::ValidationFailure => "validation failure",
        Status::Undetermined => "undetermined",
        Status::InputError => "input error",
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Object(o) => o.is_empty(),
        Value::Array(a) => a.iter().all(|x| !matches!(x, Value::Object(_))),
        _ => true,
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(obj) => {
            for (k, x) in obj {
                if is_leaf(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", compact(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, x, depth + 1);
                }
            }
        }
        Value::Array(items) if !is_leaf(v) => {
            for (i, x) in items.iter().enumerate() {
                let _ = writeln!(out, "{pad}[{i}]");
                render_value(out, x, depth + 1);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", compact(other));
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
