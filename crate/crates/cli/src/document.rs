//! Model documents: a single JSON object describing variables, constraints,
//! search and objective. Every validation error names the offending field.

use std::collections::HashMap;
use std::fmt;

use hybridcp::{IntVar, Model, Objective, RealTerm, RealVar};
use serde_json::{Map, Value};

#[derive(Debug)]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

type Result<T> = std::result::Result<T, DocError>;

fn err<T>(path: &str, message: impl Into<String>) -> Result<T> {
    Err(DocError {
        path: path.to_string(),
        message: message.into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Satisfy,
    Minimize(Objective),
}

/// A report line: `label: value [unit]`.
#[derive(Clone, Debug)]
pub struct ReportLine {
    pub label: String,
    pub term: Term,
    pub unit: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    Int(IntVar),
    Real(RealVar),
}

pub struct Loaded {
    pub model: Model,
    pub decisions: Vec<IntVar>,
    pub goal: Goal,
    pub objective_name: Option<String>,
    pub report: Vec<ReportLine>,
}

#[derive(Default)]
struct Names {
    ints: HashMap<String, IntVar>,
    reals: HashMap<String, RealTerm>,
}

impl Names {
    fn taken(&self, name: &str) -> bool {
        self.ints.contains_key(name) || self.reals.contains_key(name)
    }

    fn int(&self, path: &str, v: &Value) -> Result<IntVar> {
        let name = string(path, v)?;
        match self.ints.get(name) {
            Some(&x) => Ok(x),
            None if self.reals.contains_key(name) => err(
                path,
                format!("{name:?} is a real variable, expected an integer"),
            ),
            None => err(path, format!("unknown integer variable {name:?}")),
        }
    }

    fn real(&self, path: &str, v: &Value) -> Result<RealTerm> {
        let name = string(path, v)?;
        match self.reals.get(name) {
            Some(&t) => Ok(t),
            None if self.ints.contains_key(name) => err(
                path,
                format!("{name:?} is an integer variable; declare a view to use it in a real constraint"),
            ),
            None => err(path, format!("unknown real variable or view {name:?}")),
        }
    }

    fn term(&self, path: &str, v: &Value) -> Result<Term> {
        let name = string(path, v)?;
        match (self.ints.get(name), self.reals.get(name)) {
            (Some(&x), _) | (None, Some(&RealTerm::View(x))) => Ok(Term::Int(x)),
            (None, Some(&RealTerm::Var(r))) => Ok(Term::Real(r)),
            (None, None) => err(path, format!("unknown variable {name:?}")),
        }
    }
}

fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

fn object<'a>(path: &str, v: &'a Value) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .map_or_else(|| err(path, "expected an object"), Ok)
}

fn field<'a>(path: &str, obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .map_or_else(|| err(path, format!("missing field {name:?}")), Ok)
}

fn array<'a>(path: &str, v: &'a Value) -> Result<&'a [Value]> {
    v.as_array()
        .map_or_else(|| err(path, "expected an array"), |a| Ok(a.as_slice()))
}

fn string<'a>(path: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str()
        .map_or_else(|| err(path, "expected a string"), Ok)
}

fn integer(path: &str, v: &Value) -> Result<i64> {
    v.as_i64()
        .map_or_else(|| err(path, "expected an integer"), Ok)
}

fn number(path: &str, v: &Value) -> Result<f64> {
    v.as_f64()
        .map_or_else(|| err(path, "expected a number"), Ok)
}

fn known_fields(path: &str, obj: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return err(path, format!("unknown field {k:?}"));
        }
    }
    Ok(())
}

/// Items of an optional top-level list, with their paths.
fn items<'a>(doc: &'a Map<String, Value>, name: &str) -> Result<Vec<(String, &'a Value)>> {
    match doc.get(name) {
        None => Ok(Vec::new()),
        Some(v) => Ok(array(name, v)?
            .iter()
            .enumerate()
            .map(|(i, x)| (format!("{name}[{i}]"), x))
            .collect()),
    }
}

pub fn parse(text: &str) -> Result<Loaded> {
    let doc: Value = serde_json::from_str(text).map_err(|e| DocError {
        path: String::new(),
        message: format!(
            "invalid JSON at line {} column {}: {e}",
            e.line(),
            e.column()
        ),
    })?;
    build(&doc)
}

pub fn build(doc: &Value) -> Result<Loaded> {
    let doc = object("", doc)?;
    known_fields(
        "",
        doc,
        &[
            "ints",
            "reals",
            "views",
            "constraints",
            "search",
            "objective",
            "report",
        ],
    )?;
    let mut m = Model::new();
    let mut names = Names::default();

    for (p, v) in items(doc, "ints")? {
        let o = object(&p, v)?;
        known_fields(&p, o, &["name", "lb", "ub", "enumerated"])?;
        let name = declare(&names, &join(&p, "name"), field(&p, o, "name")?)?;
        let lb = integer(&join(&p, "lb"), field(&p, o, "lb")?)?;
        let ub = integer(&join(&p, "ub"), field(&p, o, "ub")?)?;
        let enumerated = match o.get("enumerated") {
            None => false,
            Some(e) => e
                .as_bool()
                .map_or_else(|| err(&join(&p, "enumerated"), "expected a boolean"), Ok)?,
        };
        let x = if enumerated {
            m.int_var_enumerated(name, lb, ub)
        } else {
            m.int_var(name, lb, ub)
        }
        .map_err(|e| DocError {
            path: p.clone(),
            message: e.to_string(),
        })?;
        names.ints.insert(name.to_string(), x);
    }

    for (p, v) in items(doc, "reals")? {
        let o = object(&p, v)?;
        known_fields(&p, o, &["name", "lb", "ub", "precision"])?;
        let name = declare(&names, &join(&p, "name"), field(&p, o, "name")?)?;
        let lb = number(&join(&p, "lb"), field(&p, o, "lb")?)?;
        let ub = number(&join(&p, "ub"), field(&p, o, "ub")?)?;
        let precision = number(&join(&p, "precision"), field(&p, o, "precision")?)?;
        let r = m.real_var(name, lb, ub, precision).map_err(|e| DocError {
            path: p.clone(),
            message: e.to_string(),
        })?;
        names.reals.insert(name.to_string(), RealTerm::Var(r));
    }

    for (p, v) in items(doc, "views")? {
        let o = object(&p, v)?;
        known_fields(&p, o, &["base", "name", "precision"])?;
        let base = names.int(&join(&p, "base"), field(&p, o, "base")?)?;
        let name = declare(&names, &join(&p, "name"), field(&p, o, "name")?)?;
        if let Some(prec) = o.get("precision") {
            let prec = number(&join(&p, "precision"), prec)?;
            if prec.is_nan() || prec <= 0.0 {
                return err(
                    &join(&p, "precision"),
                    format!("must be positive, got {prec}"),
                );
            }
        }
        names.reals.insert(name.to_string(), RealTerm::View(base));
    }

    for (p, v) in items(doc, "constraints")? {
        post(&mut m, &names, &p, v)?;
    }

    let mut decisions = Vec::new();
    if let Some(s) = doc.get("search") {
        let o = object("search", s)?;
        known_fields("search", o, &["strategy", "vars"])?;
        if let Some(st) = o.get("strategy") {
            let st = string("search.strategy", st)?;
            if st != "first_fail_in_domain_min" {
                return err(
                    "search.strategy",
                    format!("unsupported strategy {st:?} (only \"first_fail_in_domain_min\")"),
                );
            }
        }
        if let Some(vs) = o.get("vars") {
            for (i, x) in array("search.vars", vs)?.iter().enumerate() {
                decisions.push(names.int(&format!("search.vars[{i}]"), x)?);
            }
        }
    }

    let o = object("objective", field("", doc, "objective")?)?;
    let (goal, objective_name) = match (o.get("minimize"), o.get("satisfy")) {
        (Some(v), None) => {
            let name = string("objective.minimize", v)?.to_string();
            let obj = match names.term("objective.minimize", v)? {
                Term::Int(x) => Objective::Int(x),
                Term::Real(r) => Objective::Real(r),
            };
            (Goal::Minimize(obj), Some(name))
        }
        (None, Some(Value::Bool(true))) => (Goal::Satisfy, None),
        (None, Some(_)) => return err("objective.satisfy", "expected true"),
        _ => {
            return err(
                "objective",
                "exactly one of \"minimize\" or \"satisfy\" is required",
            )
        }
    };
    known_fields("objective", o, &["minimize", "satisfy"])?;

    let mut report = Vec::new();
    for (p, v) in items(doc, "report")? {
        let o = object(&p, v)?;
        known_fields(&p, o, &["label", "var", "unit"])?;
        let label = string(&join(&p, "label"), field(&p, o, "label")?)?.to_string();
        let term = names.term(&join(&p, "var"), field(&p, o, "var")?)?;
        let unit = match o.get("unit") {
            None => None,
            Some(u) => Some(string(&join(&p, "unit"), u)?.to_string()),
        };
        report.push(ReportLine { label, term, unit });
    }

    Ok(Loaded {
        model: m,
        decisions,
        goal,
        objective_name,
        report,
    })
}

fn declare<'a>(names: &Names, path: &str, v: &'a Value) -> Result<&'a str> {
    let name = string(path, v)?;
    if name.is_empty() {
        return err(path, "name must not be empty");
    }
    if names.taken(name) {
        return err(path, format!("duplicate variable name {name:?}"));
    }
    Ok(name)
}

fn int_list(names: &Names, path: &str, v: &Value) -> Result<Vec<IntVar>> {
    array(path, v)?
        .iter()
        .enumerate()
        .map(|(i, x)| names.int(&format!("{path}[{i}]"), x))
        .collect()
}

/// Functions and scope of a real constraint.
fn real_parts(
    names: &Names,
    path: &str,
    o: &Map<String, Value>,
) -> Result<(Vec<String>, Vec<RealTerm>)> {
    let fp = join(path, "functions");
    let functions = array(&fp, field(path, o, "functions")?)?
        .iter()
        .enumerate()
        .map(|(i, f)| string(&format!("{fp}[{i}]"), f).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    if functions.is_empty() {
        return err(&fp, "at least one function is required");
    }
    let sp = join(path, "scope");
    let scope = array(&sp, field(path, o, "scope")?)?
        .iter()
        .enumerate()
        .map(|(i, x)| names.real(&format!("{sp}[{i}]"), x))
        .collect::<Result<Vec<_>>>()?;
    Ok((functions, scope))
}

fn model_error(path: &str, e: hybridcp::ModelError) -> DocError {
    use hybridcp::contractor::ContractError;
    use hybridcp::ModelError;
    match e {
        ModelError::Contract(ContractError::Parse {
            index,
            function,
            source,
        }) => DocError {
            path: format!("{path}.functions[{index}]"),
            message: format!("{function:?}: {source}"),
        },
        e => DocError {
            path: path.to_string(),
            message: e.to_string(),
        },
    }
}

fn post(m: &mut Model, names: &Names, p: &str, v: &Value) -> Result<()> {
    let o = object(p, v)?;
    let kind = string(&join(p, "type"), field(p, o, "type")?)?;
    match kind {
        "alldifferent" => {
            known_fields(p, o, &["type", "vars"])?;
            let vars = int_list(names, &join(p, "vars"), field(p, o, "vars")?)?;
            m.all_different(&vars);
        }
        "element" => {
            known_fields(p, o, &["type", "value", "table", "index"])?;
            let value = names.int(&join(p, "value"), field(p, o, "value")?)?;
            let index = names.int(&join(p, "index"), field(p, o, "index")?)?;
            let tp = join(p, "table");
            let table = array(&tp, field(p, o, "table")?)?
                .iter()
                .enumerate()
                .map(|(i, x)| integer(&format!("{tp}[{i}]"), x))
                .collect::<Result<Vec<_>>>()?;
            m.element(value, &table, index).map_err(|e| model_error(p, e))?;
        }
        "sum" => {
            known_fields(p, o, &["type", "vars", "total"])?;
            let vars = int_list(names, &join(p, "vars"), field(p, o, "vars")?)?;
            let total = names.int(&join(p, "total"), field(p, o, "total")?)?;
            m.sum(&vars, total);
        }
        "real" => {
            known_fields(p, o, &["type", "functions", "scope"])?;
            let (functions, scope) = real_parts(names, p, o)?;
            m.real_constraint(&functions, &scope).map_err(|e| model_error(p, e))?;
        }
        "reified" => {
            known_fields(p, o, &["type", "b", "constraint"])?;
            let b = names.int(&join(p, "b"), field(p, o, "b")?)?;
            let bp = join(p, "b");
            if m.store().lb(b) < 0 || m.store().ub(b) > 1 {
                return err(&bp, "reification variable must have a domain within [0, 1]");
            }
            let cp = join(p, "constraint");
            let c = object(&cp, field(p, o, "constraint")?)?;
            known_fields(&cp, c, &["functions", "scope"])?;
            let (functions, scope) = real_parts(names, &cp, c)?;
            m.reified(b, &functions, &scope).map_err(|e| model_error(&cp, e))?;
        }
        other => {
            return err(
                &join(p, "type"),
                format!("unknown constraint type {other:?} (expected alldifferent, element, sum, real or reified)"),
            )
        }
    }
    Ok(())
}
