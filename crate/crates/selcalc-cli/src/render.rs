//! Human and JSON renderings. All numbers are exact rational strings.

use serde_json::{json, Map, Value};

use selcalc::equations::{CanonicalForm, GammaTable, Purity, WeakCanonicalForm};
use selcalc::monads::{Atom, Dist};
use selcalc::reward::{fmt_rational, Prob, Reward};
use selcalc::selection::MonadValue;
use selcalc::strategies::{outcome_atoms, Outcome};
use selcalc::suites::SuiteReport;
use selcalc::syntax::{pretty, Const, Term};

/// Version of the JSON output schema.
pub const SCHEMA_VERSION: u64 = 1;

pub fn envelope(mut body: Map<String, Value>) -> Value {
    body.insert("version".into(), json!(SCHEMA_VERSION));
    Value::Object(body)
}

fn q(r: &Reward) -> String {
    fmt_rational(r)
}

pub fn const_name(c: &Const) -> String {
    pretty(&Term::Const(c.clone()))
}

pub fn outcome_json(o: &Outcome) -> Value {
    let atoms: Vec<Value> = outcome_atoms(o)
        .iter()
        .map(|(p, r, v)| json!({"prob": q(p), "reward": q(r), "value": pretty(v)}))
        .collect();
    Value::Array(atoms)
}

pub fn outcome_text(o: &Outcome) -> String {
    let atoms = outcome_atoms(o);
    if let [(_, r, v)] = atoms.as_slice() {
        return format!("reward {}, value {}", q(r), pretty(v));
    }
    let mut lines: Vec<String> =
        atoms.iter().map(|(p, r, v)| format!("{}: reward {}, value {}", q(p), q(r), pretty(v))).collect();
    lines.push(format!("expected reward {}", q(&selcalc::monads::expect0(o))));
    lines.join("\n")
}

fn dist_json<A: Atom>(d: &Dist<A>, show: &dyn Fn(&A) -> String) -> Value {
    Value::Array(d.iter().map(|(a, p)| json!({"prob": q(p), "value": show(a)})).collect())
}

fn dist_text<A: Atom>(d: &Dist<A>, show: &dyn Fn(&A) -> String) -> String {
    d.iter().map(|(a, p)| format!("{} {}", q(p), show(a))).collect::<Vec<_>>().join(" + ")
}

pub fn monad_json<A: Atom>(v: &MonadValue<A>, show: &dyn Fn(&A) -> String) -> Value {
    match v {
        MonadValue::W(w) => json!({"monad": "W", "reward": q(&w.reward), "value": show(&w.value)}),
        MonadValue::DW(d) => json!({
            "monad": "T1",
            "outcome": d.iter().map(|((r, a), p)| json!({"prob": q(p), "reward": q(r), "value": show(a)})).collect::<Vec<_>>(),
        }),
        MonadValue::T2(t) => {
            let rew: Map<String, Value> = t.rew.iter().map(|(a, r)| (show(a), json!(q(r)))).collect();
            json!({"monad": "T2", "dist": dist_json(&t.dist, show), "rew": rew})
        }
        MonadValue::T3(t) => json!({"monad": "T3", "dist": dist_json(&t.dist, show), "rew": q(&t.rew)}),
    }
}

pub fn monad_text<A: Atom>(v: &MonadValue<A>, show: &dyn Fn(&A) -> String) -> String {
    match v {
        MonadValue::W(w) => format!("reward {}, value {}", q(&w.reward), show(&w.value)),
        MonadValue::DW(d) => d
            .iter()
            .map(|((r, a), p)| format!("{}: reward {}, value {}", q(p), q(r), show(a)))
            .collect::<Vec<_>>()
            .join("\n"),
        MonadValue::T2(t) => {
            let rew: Vec<String> = t.rew.iter().map(|(a, r)| format!("{} -> {}", show(a), q(r))).collect();
            format!("values {}\nrewards {}", dist_text(&t.dist, show), rew.join(", "))
        }
        MonadValue::T3(t) => format!("values {}\nreward {}", dist_text(&t.dist, show), q(&t.rew)),
    }
}

pub fn gamma_json(g: &GammaTable) -> Value {
    Value::Object(g.iter().map(|(c, r)| (const_name(c), json!(q(r)))).collect())
}

pub fn gamma_text(g: &GammaTable) -> String {
    let parts: Vec<String> = g.iter().map(|(c, r)| format!("{} -> {}", const_name(c), q(r))).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn canonical_json(cf: &CanonicalForm) -> Value {
    json!({
        "canonical": cf.to_string(),
        "entries": cf.entries().iter().map(|(r, v)| json!({"reward": q(r), "value": pretty(v)})).collect::<Vec<_>>(),
    })
}

pub fn weak_canonical_json(w: &WeakCanonicalForm) -> Value {
    let branch = |d: &Dist<(Reward, Const)>| -> Value {
        Value::Array(
            d.iter()
                .map(|((r, c), p): (&(Reward, Const), &Prob)| json!({"prob": q(p), "reward": q(r), "value": const_name(c)}))
                .collect(),
        )
    };
    json!({"canonical": w.to_string(), "branches": w.branches().iter().map(branch).collect::<Vec<_>>()})
}

pub fn purity_json(p: &Purity) -> Value {
    match p {
        Purity::Pure(c) => json!({"pure": true, "value": const_name(c)}),
        Purity::Impure { witness } => json!({"pure": false, "witness": gamma_json(witness)}),
    }
}

pub fn report_json(r: &SuiteReport) -> Value {
    json!({
        "name": r.name,
        "seed": r.seed,
        "cases": r.cases,
        "passed": r.passed,
        "ok": r.ok(),
        "tags": r.tags,
        "warnings": r.warnings,
        "failures": r.failures.iter().map(|(i, m)| json!({"case": i, "message": m})).collect::<Vec<_>>(),
        "elapsed_ms": r.elapsed.as_millis() as u64,
    })
}
