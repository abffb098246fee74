//! Solving a parsed file and rendering one record per problem.

use genconj::lattice::IntVector;
use genconj::{certify, solve, Budget, Error, Group, Outcome, Refutation, Verdict, Witness};
use serde_json::{json, Value};

use crate::input::{ProblemDecl, ProblemFile};

/// Run-wide settings taken from the command line.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub budget: Budget,
    pub certify: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub json: Value,
    pub summary: String,
}

fn vector_json(v: &IntVector) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

fn refutation_json(r: &Refutation) -> Value {
    let mut out = json!({ "method": r.method() });
    let fields = match r {
        Refutation::ExhaustedFinite { candidates } => json!({ "candidates": candidates }),
        Refutation::OrbitCycle { preperiod, period } => json!({ "preperiod": preperiod, "period": period }),
        Refutation::LatticeObstruction { basis, residue } => json!({
            "basis": basis.iter().map(vector_json).collect::<Vec<_>>(),
            "residue": vector_json(residue),
        }),
        Refutation::QuotientObstruction { quotients } => {
            json!({ "quotients": quotients.iter().map(ToString::to_string).collect::<Vec<_>>() })
        }
        Refutation::AutomatonSweep { states, rotations } => json!({ "states": states, "rotations": rotations }),
        Refutation::FiniteOrbit { orbit } => json!({ "orbit": orbit }),
        Refutation::Combined(parts) => json!({ "parts": parts.iter().map(refutation_json).collect::<Vec<_>>() }),
    };
    if let (Value::Object(o), Value::Object(f)) = (&mut out, fields) {
        o.extend(f);
    }
    out
}

fn witness_json(group: &Group, w: &Witness) -> Value {
    json!({
        "conjugator": w.conjugator.as_ref().map(|x| group.format(x)),
        "exponent": w.exponent,
        "member": group.format(&w.member),
        "detail": w.detail,
    })
}

fn summarize(name: &str, group: &Group, v: &Verdict) -> String {
    match &v.outcome {
        Outcome::Yes(w) => {
            let mut parts = Vec::new();
            if let Some(k) = w.exponent {
                parts.push(format!("k = {k}"));
            }
            if let Some(x) = &w.conjugator {
                parts.push(format!("x = {}", group.format(x)));
            }
            parts.push(format!("lands on {}", group.format(&w.member)));
            format!("{name}: yes ({})", parts.join(", "))
        }
        Outcome::No(r) => format!("{name}: no ({})", r.method()),
        Outcome::Unknown(b) => format!("{name}: unknown after {} steps ({})", b.steps, b.reason),
    }
}

/// Solves one problem. Capability errors become `unsupported` records.
pub fn run_problem(p: &ProblemDecl, opts: &RunOptions) -> Record {
    let inst = &p.instance;
    let budget = p.budget.apply(opts.budget.clone());
    let base = json!({ "problem": p.name, "kind": inst.kind.name() });
    let with = |mut rec: Value, extra: Value| {
        if let (Value::Object(o), Value::Object(e)) = (&mut rec, extra) {
            o.extend(e);
        }
        rec
    };
    match solve(inst, &budget) {
        Ok(v) => {
            let certificate = match &v.outcome {
                Outcome::Yes(w) => witness_json(&inst.group, w),
                Outcome::No(r) => refutation_json(r),
                Outcome::Unknown(b) => json!({ "reason": b.reason, "steps": b.steps }),
            };
            let mut json = with(
                base,
                json!({
                    "verdict": v.label(),
                    "certificate": certificate,
                    "stats": { "steps": v.stats.steps, "quotients": v.stats.quotients, "max_radius": v.stats.radius },
                }),
            );
            if opts.certify {
                let checked = v.witness().map(|w| certify(inst, w).unwrap_or(false));
                json = with(json, json!({ "certified": checked }));
            }
            Record {
                summary: summarize(&p.name, &inst.group, &v),
                json,
            }
        }
        Err(e) => {
            let verdict = match e {
                Error::Capability(_) => "unsupported",
                Error::Budget(_) => "unknown",
                _ => "error",
            };
            let reason = e.to_string();
            Record {
                summary: format!("{}: {verdict} ({reason})", p.name),
                json: with(
                    base,
                    json!({
                        "verdict": verdict,
                        "certificate": { "reason": reason },
                        "stats": { "steps": 0, "quotients": 0, "max_radius": 0 },
                    }),
                ),
            }
        }
    }
}

/// One record per problem, in file order.
pub fn run(file: &ProblemFile, opts: &RunOptions) -> Vec<Record> {
    file.problems.iter().map(|p| run_problem(p, opts)).collect()
}

/// Renders records as lines; summaries are `#` comment lines before each
/// record unless `json_only`.
pub fn render(records: &[Record], json_only: bool) -> String {
    let mut out = String::new();
    for r in records {
        if !json_only {
            out.push_str("# ");
            out.push_str(&r.summary);
            out.push('\n');
        }
        out.push_str(&r.json.to_string());
        out.push('\n');
    }
    out
}
