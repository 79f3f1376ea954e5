//! Text tables and JSON records for reports.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::algebra::AlgebraElement;
use crate::enumerate::{CoverReport, Status, Verdict};
use crate::geometry::ClassificationReport;

/// Version of the JSON records; bumped on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

fn classification_line(r: &ClassificationReport) -> String {
    let inv = &r.invariants;
    match inv.failure {
        Some(f) => format!("{} ({f})", inv.classification),
        None => format!("{}; ω order {}", inv.classification, r.omega_order),
    }
}

pub fn check_table(r: &ClassificationReport) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "scenario: {}", r.scenario);
    let _ = writeln!(w, "factors: {}", r.factors.join(", "));
    let _ = writeln!(w, "cover: dim {}, χ = {}", r.cover_dim, r.cover_euler);
    let _ = writeln!(w, "group: order {}, acts freely: {}", r.group_order, r.freeness);
    let hilbert: Vec<String> = r.invariants.hilbert.iter().map(|h| h.to_string()).collect();
    let _ = writeln!(w, "invariant dimensions: [{}]", hilbert.join(" "));
    if let Some(x) = &r.invariants.generator_x {
        let _ = writeln!(w, "generator x: {x}");
    }
    let _ = writeln!(w, "classification: {}", classification_line(r));
    let _ = writeln!(w, "canonical cover: order {}", r.canonical_cover_order);
    if r.stack_mode {
        let _ = writeln!(w, "mode: quotient stack");
    }
    if r.existence_unknown {
        let _ = writeln!(w, "existence: unknown");
    }
    for o in &r.obstructions {
        let _ = writeln!(w, "obstruction: {o}");
    }
    if r.violations.is_empty() {
        let _ = writeln!(w, "violations: none");
    }
    for v in &r.violations {
        let _ = writeln!(w, "violation: {v}");
    }
    for m in &r.expectation_mismatches {
        let _ = writeln!(w, "mismatch: {m}");
    }
    out
}

pub fn check_json(r: &ClassificationReport) -> Value {
    let inv = &r.invariants;
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "check",
        "scenario": r.scenario,
        "factors": r.factors,
        "cover": { "dim": r.cover_dim, "euler": r.cover_euler },
        "group_order": r.group_order,
        "acts_freely": r.freeness,
        "invariant_dimensions": inv.hilbert,
        "generator_x": inv.generator_x.as_ref().map(|x| x.to_string()),
        "classification": inv.classification.key(),
        "failure": inv.failure.map(|f| f.to_string()),
        "omega_order": r.omega_order,
        "canonical_cover_order": r.canonical_cover_order,
        "stack_mode": r.stack_mode,
        "existence_unknown": r.existence_unknown,
        "obstructions": r.obstructions,
        "violations": r.violations,
        "expectation_mismatches": r.expectation_mismatches,
        "ok": r.ok(),
    })
}

pub fn enumerate_table(r: &CoverReport, traces: bool) -> String {
    let mut out = String::new();
    let w = &mut out;
    let width = r.entries.iter().map(|e| e.decomposition.to_string().chars().count()).max().unwrap_or(0).max(13);
    let _ = writeln!(w, "n = {}, k = {}, n+1 = {}", r.n, r.k, r.prime_power);
    let _ = writeln!(w, "{:<width$}  {:<13}  reason", "decomposition", "status");
    for e in &r.entries {
        let d = e.decomposition.to_string();
        let pad = width - d.chars().count();
        let reason = match e.status {
            Status::Eliminated => e
                .traces
                .iter()
                .rev()
                .find(|t| t.verdict == Verdict::Eliminated)
                .map(|t| format!("{}: {}", t.rule, short(&t.witness)))
                .unwrap_or_default(),
            Status::Constructible => e
                .witness
                .as_ref()
                .map(|c| {
                    let p: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    let unknown = if c.existence_unknown { ", existence unknown" } else { "" };
                    format!("{} {}{unknown}", c.recipe, p.join(" "))
                })
                .unwrap_or_default(),
            Status::Undetermined => "kept (undetermined by rule)".into(),
        };
        let _ = writeln!(w, "{d}{}  {:<13}  {reason}", " ".repeat(pad), e.status.to_string());
        if let Some(c) = &e.character {
            let _ = writeln!(
                w,
                "{}  character orders m = {}, m' = {} (need ≥ {}): {}",
                " ".repeat(width),
                c.m,
                c.m_prime,
                r.n + 1,
                if c.holds { "ok" } else { "fails" }
            );
        }
        if traces {
            for t in &e.traces {
                let hyp = t.hypothesis.as_deref().map(|h| format!(" [{h}]")).unwrap_or_default();
                let verdict = match t.verdict {
                    Verdict::Eliminated => "eliminated",
                    Verdict::Kept => "kept",
                };
                let _ = writeln!(w, "    {}{hyp} {verdict}: {}", t.rule, short(&t.witness));
            }
        }
    }
    let count = |s| r.with_status(s).len();
    let _ = writeln!(
        w,
        "{} eliminated, {} constructible, {} undetermined",
        count(Status::Eliminated),
        count(Status::Constructible),
        count(Status::Undetermined)
    );
    for c in &r.soundness_conflicts {
        let _ = writeln!(w, "CONFLICT: {c} is realized by a recipe but was eliminated");
    }
    out
}

fn short(w: &crate::enumerate::Witness) -> String {
    use crate::enumerate::Witness::*;
    match w {
        Passed { note } => note.clone(),
        Excluded { factor, reason } => format!("{reason} {factor}"),
        NoPacking { support, n, k } => format!("top class is not a product of {n} degree-{k} monomials from {support}"),
        Packing { monomials } => format!("top = {}", monomials.join(" * ")),
        NotIntegral { chi, divisor } => format!("{divisor} ∤ χ = {chi}"),
        NotDividing { what, size, group_order } => format!("{what}: {size} ∤ |G| = {group_order}"),
        TrivialGroup { hilbert } => {
            let h: Vec<String> = hilbert.iter().map(|x| x.to_string()).collect();
            format!("|G| = 1 but cover dimensions are [{}]", h.join(" "))
        }
        Splitting { power, first, second, .. } => format!("x^{power} contains {first} and {second}"),
        Coefficients(c) => c.conclusion.clone(),
    }
}

pub fn enumerate_json(r: &CoverReport) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("kind".into(), json!("enumerate"));
    }
    v
}

pub fn invariants_table(basis: &[AlgebraElement]) -> String {
    let mut out = String::new();
    for b in basis {
        let _ = writeln!(out, "{b}");
    }
    out
}

pub fn invariants_json(scenario: &str, degree: u32, basis: &[AlgebraElement]) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "invariants",
        "scenario": scenario,
        "degree": degree,
        "basis": basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
    })
}
