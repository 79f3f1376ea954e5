//! Scenarios: products of hyperkähler, Calabi–Yau and torus factors with a
//! finite group acting on them, plus the checks a quotient has to pass.
//!
//! Geometric facts (orders, freeness) are declared by the scenario author.
//! Nothing here decides whether a declared automorphism exists; the checks
//! only flag declarations that contradict known necessary conditions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{
    group_closure, propagate_freeness, ActionError, ActionGroup, BlockComponents, ProductAutomorphism, Truth,
};
use crate::algebra::{GeneratorSpec, KunnethAlgebra, RootOfUnity};
use crate::invariants::{classify_unit, top_scalar, InvariantReport, UnitClass};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// Kind of a factor of a Beauville–Bogomolov product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    /// Hyperkähler of dimension `2d`; `Hk(1)` is a K3 surface.
    Hk(u32),
    /// Strict Calabi–Yau of dimension `e ≥ 3`.
    Cy(u32),
    /// Complex torus of dimension `g`.
    Torus(u32),
}

impl FactorKind {
    pub fn k3() -> Self {
        FactorKind::Hk(1)
    }

    pub fn dim(&self) -> u32 {
        match *self {
            FactorKind::Hk(d) => 2 * d,
            FactorKind::Cy(e) => e,
            FactorKind::Torus(g) => g,
        }
    }

    pub fn euler(&self) -> i64 {
        match *self {
            FactorKind::Hk(d) => d as i64 + 1,
            FactorKind::Cy(e) => 1 + if e % 2 == 0 { 1 } else { -1 },
            FactorKind::Torus(_) => 0,
        }
    }

    /// `(kind, param)` as written in scenario files.
    pub fn name_and_param(&self) -> (&'static str, u32) {
        match *self {
            FactorKind::Hk(1) => ("k3", 1),
            FactorKind::Hk(d) => ("hk", d),
            FactorKind::Cy(e) => ("cy", e),
            FactorKind::Torus(g) => ("torus", g),
        }
    }

    pub fn from_name(kind: &str, param: Option<u32>) -> Result<Self, String> {
        let need = |p: Option<u32>| p.ok_or_else(|| format!("kind `{kind}` needs a param"));
        let k = match kind {
            "k3" => {
                if param.is_some_and(|p| p != 1) {
                    return Err("k3 takes no param other than 1".into());
                }
                FactorKind::Hk(1)
            }
            "hk" => FactorKind::Hk(need(param)?),
            "cy" => FactorKind::Cy(need(param)?),
            "torus" => FactorKind::Torus(need(param)?),
            other => return Err(format!("unknown factor kind `{other}`")),
        };
        k.check()?;
        Ok(k)
    }

    pub fn check(&self) -> Result<(), String> {
        match *self {
            FactorKind::Hk(0) => Err("hk needs d ≥ 1".into()),
            FactorKind::Hk(d) if d > 255 => Err("hk dimension too large".into()),
            FactorKind::Cy(e) if e < 3 => Err("cy needs e ≥ 3".into()),
            FactorKind::Torus(0) => Err("torus needs g ≥ 1".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FactorKind::Hk(1) => write!(f, "K3"),
            FactorKind::Hk(d) => write!(f, "HK({d})"),
            FactorKind::Cy(e) => write!(f, "CY({e})"),
            FactorKind::Torus(g) => write!(f, "T({g})"),
        }
    }
}

/// The automorphism of a factor whose powers the group uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseAutomorphism {
    pub name: String,
    pub order: u64,
    /// Scalar on the generator of the factor's top-degree-one piece
    /// (`H^2` for hyperkähler, `H^e` for Calabi–Yau).
    pub rho: RootOfUnity,
    /// Whether `⟨f⟩` acts freely.
    pub free: Truth,
    /// Overrides for single powers `f^p`.
    pub free_powers: Vec<(u64, Truth)>,
}

impl BaseAutomorphism {
    pub fn identity() -> Self {
        BaseAutomorphism { name: "id".into(), order: 1, rho: RootOfUnity::ONE, free: Truth::False, free_powers: vec![] }
    }

    pub fn new(name: impl Into<String>, order: u64, rho: RootOfUnity, free: Truth) -> Self {
        BaseAutomorphism { name: name.into(), order, rho, free, free_powers: vec![] }
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// Declared freeness of `f^p` for `0 < p < order`.
    pub fn power_free(&self, p: u64) -> Truth {
        if let Some((_, t)) = self.free_powers.iter().find(|(q, _)| *q == p) {
            return *t;
        }
        match self.free {
            Truth::True => Truth::True,
            // of prime order, every non-trivial power generates ⟨f⟩ and has
            // the same fixed locus
            Truth::False if is_prime(self.order) => Truth::False,
            _ => Truth::Unknown,
        }
    }
}

fn is_prime(m: u64) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub label: String,
    /// Factors of one family are copies of the same manifold with the same
    /// base automorphism; only they may be exchanged.
    pub family: String,
    pub kind: FactorKind,
    pub automorphism: BaseAutomorphism,
}

impl Factor {
    pub fn new(label: impl Into<String>, kind: FactorKind) -> Self {
        let label = label.into();
        Factor { family: label.clone(), label, kind, automorphism: BaseAutomorphism::identity() }
    }

    pub fn with_family(mut self, family: impl Into<String>) -> Self {
        self.family = family.into();
        self
    }

    pub fn with_automorphism(mut self, a: BaseAutomorphism) -> Self {
        self.automorphism = a;
        self
    }

    /// Cohomology generator names of this factor.
    pub fn generator_names(&self) -> Vec<String> {
        let base = self.label.to_lowercase();
        match self.kind {
            FactorKind::Torus(g) => (1..=g).map(|i| format!("{base}_{i}")).collect(),
            _ => vec![base],
        }
    }
}

/// Declared facts about a group generator, cross-checked by [`validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Declared {
    pub order: Option<u64>,
    pub symplectic_order: Option<u64>,
    pub fixed_point_free: Truth,
}

/// A generator `(c_1 × … × c_r) ∘ τ`: its component on factor `j` is
/// `c_j = base_j^{powers[j]}`, read from factor `perm[j]`. On cohomology the
/// class of factor `j` is pulled back to `ρ_j^{powers[j]}` times the class
/// of factor `perm[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupGenerator {
    pub label: String,
    pub perm: Vec<usize>,
    pub powers: Vec<u64>,
    pub declared: Declared,
}

impl GroupGenerator {
    /// Diagonal generator `∏ base_j^{powers[j]}`.
    pub fn diagonal(label: impl Into<String>, powers: Vec<u64>) -> Self {
        GroupGenerator { label: label.into(), perm: (0..powers.len()).collect(), powers, declared: Declared::default() }
    }

    pub fn permuting(label: impl Into<String>, perm: Vec<usize>, powers: Vec<u64>) -> Self {
        GroupGenerator { label: label.into(), perm, powers, declared: Declared::default() }
    }

    pub fn declare(mut self, order: u64, symplectic_order: u64, fixed_point_free: Truth) -> Self {
        self.declared = Declared { order: Some(order), symplectic_order: Some(symplectic_order), fixed_point_free };
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub classification: UnitClass,
    pub omega_order: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub factors: Vec<Factor>,
    pub generators: Vec<GroupGenerator>,
    /// Quotient stack: the group may have fixed points.
    pub stack_mode: bool,
    /// The algebra is checked but no geometric example is known.
    pub existence_unknown: bool,
    pub expected: Option<Expected>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, factors: Vec<Factor>) -> Self {
        Scenario {
            name: name.into(),
            factors,
            generators: vec![],
            stack_mode: false,
            existence_unknown: false,
            expected: None,
        }
    }

    pub fn dim(&self) -> u32 {
        self.factors.iter().map(|f| f.kind.dim()).sum()
    }

    pub fn factor_index(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.label == label)
    }

    /// Structural checks: unique labels, consistent families, generators
    /// that only exchange factors of one family.
    pub fn check(&self) -> Result<(), GeometryError> {
        let bad = |m: String| Err(GeometryError::InvalidScenario(m));
        let r = self.factors.len();
        let mut labels = BTreeSet::new();
        let mut names = BTreeSet::new();
        let mut families: HashMap<&str, &Factor> = HashMap::new();
        for f in &self.factors {
            f.kind.check().or_else(|e| bad(format!("factor {}: {e}", f.label)))?;
            if !labels.insert(f.label.as_str()) {
                return bad(format!("duplicate factor label {}", f.label));
            }
            for n in f.generator_names() {
                if !names.insert(n.clone()) {
                    return bad(format!("factor {} reuses generator name {n}", f.label));
                }
            }
            let a = &f.automorphism;
            if a.order == 0 {
                return bad(format!("factor {}: automorphism order must be positive", f.label));
            }
            if let Some(first) = families.get(f.family.as_str()) {
                if first.kind != f.kind || first.automorphism != f.automorphism {
                    return bad(format!("factors {} and {} share a family but differ", first.label, f.label));
                }
            } else {
                families.insert(&f.family, f);
            }
        }
        let mut gen_labels = BTreeSet::new();
        for g in &self.generators {
            if !gen_labels.insert(g.label.as_str()) {
                return bad(format!("duplicate generator label {}", g.label));
            }
            if g.perm.len() != r || g.powers.len() != r {
                return bad(format!("generator {}: expected data for {r} factors", g.label));
            }
            let mut hit = vec![false; r];
            for (j, &t) in g.perm.iter().enumerate() {
                if t >= r || hit[t] {
                    return bad(format!("generator {}: factor map is not a bijection", g.label));
                }
                hit[t] = true;
                if self.factors[j].family != self.factors[t].family {
                    return bad(format!(
                        "generator {}: cannot exchange {} and {} (different families)",
                        g.label, self.factors[j].label, self.factors[t].label
                    ));
                }
            }
            for (j, &p) in g.powers.iter().enumerate() {
                if p >= self.factors[j].automorphism.order {
                    return bad(format!(
                        "generator {}: power {p} on {} is not below the order {}",
                        g.label, self.factors[j].label, self.factors[j].automorphism.order
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn cover_algebra(&self) -> Arc<KunnethAlgebra> {
        let mut gens = Vec::new();
        for (b, f) in self.factors.iter().enumerate() {
            for name in f.generator_names() {
                gens.push(match f.kind {
                    FactorKind::Hk(d) => GeneratorSpec::new(name, 2, d + 1, b),
                    FactorKind::Cy(e) => GeneratorSpec::new(name, e, 2, b),
                    FactorKind::Torus(_) => GeneratorSpec::new(name, 1, 2, b),
                });
            }
        }
        Arc::new(KunnethAlgebra::new(gens).expect("factor kinds are checked"))
    }

    fn block_orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.automorphism.order).collect()
    }

    /// The pullback action of one generator.
    pub fn automorphism(
        &self,
        alg: &Arc<KunnethAlgebra>,
        g: &GroupGenerator,
    ) -> Result<ProductAutomorphism, GeometryError> {
        let mut starts = Vec::with_capacity(self.factors.len());
        let mut at = 0;
        for f in &self.factors {
            starts.push(at);
            at += f.generator_names().len();
        }
        let mut perm = vec![0; at];
        let mut scalars = vec![RootOfUnity::ONE; at];
        for (j, f) in self.factors.iter().enumerate() {
            let s = f.automorphism.rho.pow(g.powers[j] as i64);
            for i in 0..f.generator_names().len() {
                perm[starts[j] + i] = starts[g.perm[j]] + i;
                scalars[starts[j] + i] = s;
            }
        }
        let comps = BlockComponents { perm: g.perm.clone(), powers: g.powers.clone(), orders: self.block_orders() };
        Ok(ProductAutomorphism::with_components(alg, perm, scalars, comps)?)
    }

    pub fn group(&self, cap: usize) -> Result<ActionGroup, GeometryError> {
        self.check()?;
        let alg = self.cover_algebra();
        let gens = self
            .generators
            .iter()
            .map(|g| self.automorphism(&alg, g))
            .collect::<Result<Vec<_>, _>>()?;
        if gens.is_empty() {
            // keep the block orders so that kernels compare equal
            let id = ProductAutomorphism::with_components(
                &alg,
                (0..alg.len()).collect(),
                vec![RootOfUnity::ONE; alg.len()],
                BlockComponents {
                    perm: (0..self.factors.len()).collect(),
                    powers: vec![0; self.factors.len()],
                    orders: self.block_orders(),
                },
            )?;
            return Ok(group_closure(&alg, &[id], cap)?);
        }
        Ok(group_closure(&alg, &gens, cap)?)
    }

    /// Declared freeness of the geometric automorphism behind `a`.
    pub fn freeness(&self, a: &ProductAutomorphism) -> Truth {
        let facts = |block: usize, power: u64| self.factors[block].automorphism.power_free(power);
        propagate_freeness(a, &facts)
    }

    /// Same factors, group replaced by the kernel of the canonical character.
    pub fn canonical_cover(&self, cap: usize) -> Result<Scenario, GeometryError> {
        let group = self.group(cap)?;
        let kernel: Vec<&ProductAutomorphism> =
            group.elements().iter().filter(|e| top_scalar(e).is_one() && !e.is_identity()).collect();
        let alg = group.algebra().clone();
        let mut chosen: Vec<ProductAutomorphism> = Vec::new();
        let mut span = group_closure(&alg, &group.elements()[..1], cap)?;
        for e in kernel {
            if span.contains(e) {
                continue;
            }
            chosen.push(e.clone());
            span = group_closure(&alg, &chosen, cap)?;
        }
        let generators = chosen
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let c = e.components().expect("scenario elements carry block data");
                let mut g = GroupGenerator::permuting(format!("k{}", i + 1), c.perm.clone(), c.powers.clone());
                g.declared.fixed_point_free = self.freeness(e);
                g
            })
            .collect();
        Ok(Scenario {
            name: format!("{}-canonical-cover", self.name),
            factors: self.factors.clone(),
            generators,
            stack_mode: self.stack_mode,
            existence_unknown: self.existence_unknown,
            expected: None,
        })
    }
}

/// Scalar by which each group element acts on the top class, aligned with
/// [`ActionGroup::elements`].
pub fn canonical_character(group: &ActionGroup) -> Vec<RootOfUnity> {
    group.elements().iter().map(top_scalar).collect()
}

/// Order of the canonical character, i.e. of `ω_X`.
pub fn omega_order(group: &ActionGroup) -> u64 {
    canonical_character(group).iter().fold(1, |acc, r| acc.lcm(&r.order()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub scenario: String,
    pub factors: Vec<String>,
    pub cover_dim: u32,
    pub cover_euler: i64,
    pub group_order: usize,
    pub invariants: InvariantReport,
    pub invariant_euler: i64,
    pub omega_order: u64,
    pub canonical_cover_order: usize,
    pub freeness: Truth,
    pub stack_mode: bool,
    pub existence_unknown: bool,
    pub violations: Vec<Violation>,
    /// Reasons the product can never carry a unit, independent of the group.
    pub obstructions: Vec<String>,
    pub expectation_mismatches: Vec<String>,
}

impl ClassificationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.expectation_mismatches.is_empty()
    }
}

/// Runs the group closure, the invariant classification, the canonical
/// character and the declared-fact checks.
pub fn validate(s: &Scenario, cap: usize) -> Result<ClassificationReport, GeometryError> {
    let group = s.group(cap)?;
    let alg = group.algebra().clone();
    let invariants = classify_unit(&group);
    let invariant_euler: i64 = invariants
        .hilbert
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    let omega = omega_order(&group);
    let freeness = group
        .elements()
        .iter()
        .filter(|e| !e.is_identity())
        .fold(Truth::True, |acc, e| acc.and(s.freeness(e)));

    let mut violations = Vec::new();
    let mut push = |rule: &'static str, message: String| violations.push(Violation { rule, message });

    let mut seen_families = BTreeSet::new();
    for f in &s.factors {
        if !seen_families.insert(f.family.as_str()) {
            continue;
        }
        let a = &f.automorphism;
        if a.order % a.rho.order() != 0 {
            push(
                "scalar-order",
                format!("{} on {}: ρ = {} has order {} not dividing {}", a.name, f.label, a.rho, a.rho.order(), a.order),
            );
        }
        if s.stack_mode {
            continue;
        }
        if a.free == Truth::True && a.order > 1 {
            match f.kind {
                FactorKind::Hk(d) => {
                    if a.rho.order() != a.order {
                        push(
                            "hk-free-auto",
                            format!(
                                "⟨{}⟩ declared free on {} but not purely non-symplectic (symplectic order {}, order {})",
                                a.name, f.label, a.rho.order(), a.order
                            ),
                        );
                    } else if !(d as u64 + 1).is_multiple_of(a.order) {
                        push(
                            "hk-free-auto",
                            format!("⟨{}⟩ declared free on {} but {} does not divide {}", a.name, f.label, a.order, d + 1),
                        );
                    }
                }
                FactorKind::Cy(_) => {
                    if a.order != 2 || a.rho != RootOfUnity::MINUS_ONE {
                        push(
                            "cy-free-auto",
                            format!("{} declared free on {} but is not a non-symplectic involution", a.name, f.label),
                        );
                    }
                }
                FactorKind::Torus(_) => {}
            }
        }
        if let FactorKind::Cy(_) = f.kind {
            if !s.stack_mode {
                for &(p, t) in &a.free_powers {
                    let q = a.order / p.gcd(&a.order);
                    if t == Truth::True && (q != 2 || a.rho.pow(p as i64) != RootOfUnity::MINUS_ONE) {
                        push(
                            "cy-free-auto",
                            format!("{}^{p} declared free on {} but is not a non-symplectic involution", a.name, f.label),
                        );
                    }
                }
            }
        }
        if a.free == Truth::True {
            for &(p, t) in &a.free_powers {
                if t == Truth::False && p % a.order != 0 {
                    push("declared-freeness", format!("⟨{}⟩ declared free but {}^{p} declared not free", a.name, a.name));
                }
            }
        }
    }

    for g in &s.generators {
        let auto = s.automorphism(&alg, g)?;
        let order = auto.order();
        if let Some(d) = g.declared.order {
            if d != order {
                push("declared-order", format!("generator {} has order {order}, declared {d}", g.label));
            }
        }
        let scalar_order = auto.scalars().iter().fold(1u64, |acc, r| acc.lcm(&r.order()));
        if order % scalar_order != 0 {
            push("scalar-order", format!("generator {}: scalar order {scalar_order} does not divide {order}", g.label));
        }
        if let Some(d) = g.declared.symplectic_order {
            if d != scalar_order {
                push(
                    "declared-symplectic-order",
                    format!("generator {} scales classes with order {scalar_order}, declared {d}", g.label),
                );
            }
        }
        if !s.stack_mode {
            let actual = s.freeness(&auto);
            let declared = g.declared.fixed_point_free;
            if declared != Truth::Unknown && actual != Truth::Unknown && declared != actual {
                push(
                    "declared-freeness",
                    format!("generator {} declared fixed point free = {declared}, facts give {actual}", g.label),
                );
            }
        }
    }

    let cover_euler = alg.euler_characteristic();
    if !s.stack_mode {
        if freeness == Truth::False {
            push("group-not-free", "some non-trivial element has fixed points".into());
        }
        if freeness == Truth::True && (group.order() as i64) * invariant_euler != cover_euler {
            push(
                "euler-multiplicativity",
                format!("|G|·χ(invariants) = {}·{invariant_euler} ≠ χ(cover) = {cover_euler}", group.order()),
            );
        }
    }

    let obstructions = s
        .factors
        .iter()
        .filter(|f| matches!(f.kind, FactorKind::Torus(_)))
        .map(|f| format!("torus factor {} has χ = 0", f.label))
        .collect();

    let mut expectation_mismatches = Vec::new();
    if let Some(e) = &s.expected {
        if e.classification != invariants.classification {
            expectation_mismatches.push(format!(
                "classification is {}, expected {}",
                invariants.classification.key(),
                e.classification.key()
            ));
        }
        if let Some(w) = e.omega_order {
            if w != omega {
                expectation_mismatches.push(format!("ω order is {omega}, expected {w}"));
            }
        }
    }

    Ok(ClassificationReport {
        scenario: s.name.clone(),
        factors: s.factors.iter().map(|f| format!("{}:{}", f.label, f.kind)).collect(),
        cover_dim: s.dim(),
        cover_euler,
        group_order: group.order(),
        canonical_cover_order: group.order() / omega as usize,
        invariants,
        invariant_euler,
        omega_order: omega,
        freeness,
        stack_mode: s.stack_mode,
        existence_unknown: s.existence_unknown,
        violations,
        obstructions,
        expectation_mismatches,
    })
}
