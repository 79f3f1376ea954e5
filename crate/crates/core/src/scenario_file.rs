//! TOML scenario files.
//!
//! ```toml
//! version = 1
//! name = "enriques-3"
//!
//! [[factors]]
//! label = "Y"
//! kind = "hk"
//! param = 2
//!
//! [factors.automorphism]
//! name = "f"
//! order = 3
//! rho = { num = 1, den = 3 }
//! free = true
//!
//! [[generators]]
//! label = "f"
//! powers = { Y = 1 }
//! order = 3
//! symplectic_order = 3
//! fixed_point_free = true
//!
//! [expected]
//! classification = "exceptional"
//! omega_order = 3
//! ```
//!
//! A factor with `multiplicity = m` expands to labels `{label}1 … {label}m`
//! in one family. A generator reads its component on factor `A` from factor
//! `perm.A` (identity where omitted) and uses the `powers.A`-th power of the
//! base automorphism of `A` (zero where omitted).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::action::Truth;
use crate::algebra::RootOfUnity;
use crate::geometry::{BaseAutomorphism, Declared, Expected, Factor, FactorKind, GroupGenerator, Scenario};
use crate::invariants::UnitClass;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("{0}")]
    Io(String),
}

fn field(path: impl Into<String>, message: impl Into<String>) -> ScenarioFileError {
    ScenarioFileError::Field { path: path.into(), message: message.into() }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TruthRepr {
    Bool(bool),
    Text(String),
}

impl TruthRepr {
    fn to_truth(&self, path: &str) -> Result<Truth, ScenarioFileError> {
        match self {
            TruthRepr::Bool(b) => Ok(Truth::from_bool(*b)),
            TruthRepr::Text(s) => match s.as_str() {
                "true" => Ok(Truth::True),
                "false" => Ok(Truth::False),
                "unknown" => Ok(Truth::Unknown),
                other => Err(field(path, format!("expected true, false or \"unknown\", got \"{other}\""))),
            },
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: u32,
    name: String,
    #[serde(default)]
    stack_mode: bool,
    #[serde(default)]
    existence_unknown: bool,
    factors: Vec<RawFactor>,
    #[serde(default)]
    generators: Vec<RawGenerator>,
    expected: Option<RawExpected>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    label: String,
    kind: String,
    param: Option<u32>,
    multiplicity: Option<u32>,
    family: Option<String>,
    automorphism: Option<RawAuto>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAuto {
    name: String,
    order: u64,
    rho: RawRoot,
    free: Option<TruthRepr>,
    #[serde(default)]
    free_powers: Vec<RawFreePower>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRoot {
    num: i64,
    den: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFreePower {
    power: u64,
    free: TruthRepr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    label: String,
    #[serde(default)]
    perm: BTreeMap<String, String>,
    #[serde(default)]
    powers: BTreeMap<String, u64>,
    order: Option<u64>,
    symplectic_order: Option<u64>,
    fixed_point_free: Option<TruthRepr>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    classification: String,
    omega_order: Option<u64>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

/// Parses and checks a scenario.
pub fn parse(text: &str) -> Result<Scenario, ScenarioFileError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((0, 0));
        ScenarioFileError::Syntax { line, column, message: e.message().to_string() }
    })?;
    if raw.version != FORMAT_VERSION {
        return Err(field("version", format!("unsupported version {}, expected {FORMAT_VERSION}", raw.version)));
    }

    let mut factors = Vec::new();
    for (i, f) in raw.factors.iter().enumerate() {
        let path = format!("factors[{i}]");
        let kind = FactorKind::from_name(&f.kind, f.param).map_err(|m| field(format!("{path}.kind"), m))?;
        let automorphism = match &f.automorphism {
            None => BaseAutomorphism::identity(),
            Some(a) => {
                let ap = format!("{path}.automorphism");
                if a.order == 0 {
                    return Err(field(format!("{ap}.order"), "order must be positive"));
                }
                if a.rho.den == 0 {
                    return Err(field(format!("{ap}.rho.den"), "den must be positive"));
                }
                let free = match &a.free {
                    Some(t) => t.to_truth(&format!("{ap}.free"))?,
                    None => Truth::Unknown,
                };
                let mut free_powers = Vec::new();
                for (j, fp) in a.free_powers.iter().enumerate() {
                    let pp = format!("{ap}.free_powers[{j}]");
                    if fp.power == 0 || fp.power >= a.order {
                        return Err(field(format!("{pp}.power"), format!("power must be in 1..{}", a.order)));
                    }
                    free_powers.push((fp.power, fp.free.to_truth(&format!("{pp}.free"))?));
                }
                BaseAutomorphism {
                    name: a.name.clone(),
                    order: a.order,
                    rho: RootOfUnity::new(a.rho.num, a.rho.den),
                    free,
                    free_powers,
                }
            }
        };
        let family = f.family.clone().unwrap_or_else(|| f.label.clone());
        match f.multiplicity {
            None | Some(1) => factors.push(
                Factor::new(f.label.clone(), kind).with_family(family).with_automorphism(automorphism),
            ),
            Some(0) => return Err(field(format!("{path}.multiplicity"), "multiplicity must be positive")),
            Some(m) => {
                for j in 1..=m {
                    factors.push(
                        Factor::new(format!("{}{j}", f.label), kind)
                            .with_family(family.clone())
                            .with_automorphism(automorphism.clone()),
                    );
                }
            }
        }
    }
    let mut s = Scenario::new(raw.name, factors);
    s.stack_mode = raw.stack_mode;
    s.existence_unknown = raw.existence_unknown;

    for (i, g) in raw.generators.iter().enumerate() {
        let path = format!("generators[{i}]");
        let r = s.factors.len();
        let mut perm: Vec<usize> = (0..r).collect();
        for (a, b) in &g.perm {
            let ia = s.factor_index(a).ok_or_else(|| field(format!("{path}.perm.{a}"), format!("no factor `{a}`")))?;
            let ib = s.factor_index(b).ok_or_else(|| field(format!("{path}.perm.{a}"), format!("no factor `{b}`")))?;
            perm[ia] = ib;
        }
        let mut powers = vec![0u64; r];
        for (a, &p) in &g.powers {
            let ia = s.factor_index(a).ok_or_else(|| field(format!("{path}.powers.{a}"), format!("no factor `{a}`")))?;
            powers[ia] = p;
        }
        let fixed_point_free = match &g.fixed_point_free {
            Some(t) => t.to_truth(&format!("{path}.fixed_point_free"))?,
            None => Truth::Unknown,
        };
        let mut gen = GroupGenerator::permuting(g.label.clone(), perm, powers);
        gen.declared = Declared { order: g.order, symplectic_order: g.symplectic_order, fixed_point_free };
        s.generators.push(gen);
    }

    if let Some(e) = raw.expected {
        let classification = UnitClass::from_key(&e.classification).ok_or_else(|| {
            field("expected.classification", format!("expected exceptional, none or P^n[k], got \"{}\"", e.classification))
        })?;
        s.expected = Some(Expected { classification, omega_order: e.omega_order });
    }

    s.check().map_err(|e| field("scenario", e.to_string()))?;
    Ok(s)
}

pub fn read(path: &Path) -> Result<Scenario, ScenarioFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioFileError::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn key(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        s.to_string()
    } else {
        quote(s)
    }
}

fn truth(t: Truth) -> String {
    match t {
        Truth::True => "true".into(),
        Truth::False => "false".into(),
        Truth::Unknown => "\"unknown\"".into(),
    }
}

/// Canonical form: one table per factor, defaults omitted.
pub fn serialize(s: &Scenario) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "version = {FORMAT_VERSION}");
    let _ = writeln!(w, "name = {}", quote(&s.name));
    if s.stack_mode {
        let _ = writeln!(w, "stack_mode = true");
    }
    if s.existence_unknown {
        let _ = writeln!(w, "existence_unknown = true");
    }
    for f in &s.factors {
        let (kind, param) = f.kind.name_and_param();
        let _ = writeln!(w, "\n[[factors]]");
        let _ = writeln!(w, "label = {}", quote(&f.label));
        let _ = writeln!(w, "kind = {}", quote(kind));
        if kind != "k3" {
            let _ = writeln!(w, "param = {param}");
        }
        if f.family != f.label {
            let _ = writeln!(w, "family = {}", quote(&f.family));
        }
        let a = &f.automorphism;
        if *a != BaseAutomorphism::identity() {
            let _ = writeln!(w, "\n[factors.automorphism]");
            let _ = writeln!(w, "name = {}", quote(&a.name));
            let _ = writeln!(w, "order = {}", a.order);
            let _ = writeln!(w, "rho = {{ num = {}, den = {} }}", a.rho.num(), a.rho.den());
            if a.free != Truth::Unknown {
                let _ = writeln!(w, "free = {}", truth(a.free));
            }
            if !a.free_powers.is_empty() {
                let items: Vec<String> =
                    a.free_powers.iter().map(|(p, t)| format!("{{ power = {p}, free = {} }}", truth(*t))).collect();
                let _ = writeln!(w, "free_powers = [{}]", items.join(", "));
            }
        }
    }
    for g in &s.generators {
        let _ = writeln!(w, "\n[[generators]]");
        let _ = writeln!(w, "label = {}", quote(&g.label));
        let perm: Vec<String> = g
            .perm
            .iter()
            .enumerate()
            .filter(|(j, &p)| *j != p)
            .map(|(j, &p)| format!("{} = {}", key(&s.factors[j].label), quote(&s.factors[p].label)))
            .collect();
        if !perm.is_empty() {
            let _ = writeln!(w, "perm = {{ {} }}", perm.join(", "));
        }
        let powers: Vec<String> = g
            .powers
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0)
            .map(|(j, p)| format!("{} = {p}", key(&s.factors[j].label)))
            .collect();
        if !powers.is_empty() {
            let _ = writeln!(w, "powers = {{ {} }}", powers.join(", "));
        }
        if let Some(o) = g.declared.order {
            let _ = writeln!(w, "order = {o}");
        }
        if let Some(o) = g.declared.symplectic_order {
            let _ = writeln!(w, "symplectic_order = {o}");
        }
        if g.declared.fixed_point_free != Truth::Unknown {
            let _ = writeln!(w, "fixed_point_free = {}", truth(g.declared.fixed_point_free));
        }
    }
    if let Some(e) = &s.expected {
        let _ = writeln!(w, "\n[expected]");
        let _ = writeln!(w, "classification = {}", quote(&e.classification.key()));
        if let Some(o) = e.omega_order {
            let _ = writeln!(w, "omega_order = {o}");
        }
    }
    out
}
