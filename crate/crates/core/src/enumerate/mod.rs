//! Candidate universal covers of a variety with a `Pⁿ[k]`-unit, pruned by
//! necessary conditions.
//!
//! A cover is a product of hyperkähler and Calabi–Yau factors of total
//! dimension `nk`. [`enumerate_covers`] runs [`apply_rules`] on every such
//! product and reports what survives.

mod cformula;
mod rules;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use cformula::CformulaWitness;
pub use rules::{apply_rules, Rule, RuleTrace, Verdict, Witness};

use crate::constructions::{self, RecipeParams};
use crate::geometry::{self, FactorKind, DEFAULT_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("more than {0} decompositions")]
    CapExceeded(usize),
}

/// A multiset of factor kinds, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    pub factors: Vec<FactorKind>,
}

impl Decomposition {
    pub fn new(mut factors: Vec<FactorKind>) -> Self {
        factors.sort();
        Decomposition { factors }
    }

    pub fn dim(&self) -> u32 {
        self.factors.iter().map(|f| f.dim()).sum()
    }

    pub fn euler(&self) -> u64 {
        rules::euler(self)
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join("×"))
    }
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn check_range(n: u32, k: u32, min_n: u32) -> Result<(), EnumerateError> {
    if n < min_n {
        return Err(EnumerateError::OutOfRange(format!("n must be at least {min_n}, got {n}")));
    }
    if k < 4 || k % 2 == 1 {
        return Err(EnumerateError::OutOfRange(format!("k must be even and at least 4, got {k}")));
    }
    if n.saturating_mul(k) > 64 {
        return Err(EnumerateError::OutOfRange(format!("n·k = {} exceeds 64", n.saturating_mul(k))));
    }
    Ok(())
}

/// All products of `HK(d)` and even `CY(e)` factors of dimension `nk`.
pub fn enumerate_decompositions(n: u32, k: u32, cap: usize) -> Result<Vec<Decomposition>, EnumerateError> {
    check_range(n, k, 1)?;
    let total = n * k;
    let mut kinds: Vec<FactorKind> = (1..=total / 2).map(FactorKind::Hk).collect();
    kinds.extend((4..=total).step_by(2).map(FactorKind::Cy));
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        kinds: &[FactorKind],
        start: usize,
        left: u32,
        cur: &mut Vec<FactorKind>,
        out: &mut Vec<Decomposition>,
        cap: usize,
    ) -> Result<(), EnumerateError> {
        if left == 0 {
            if out.len() == cap {
                return Err(EnumerateError::CapExceeded(cap));
            }
            out.push(Decomposition::new(cur.clone()));
            return Ok(());
        }
        for (i, kind) in kinds.iter().enumerate().skip(start) {
            if kind.dim() <= left {
                cur.push(*kind);
                go(kinds, i, left - kind.dim(), cur, out, cap)?;
                cur.pop();
            }
        }
        Ok(())
    }
    go(&kinds, 0, total, &mut cur, &mut out, cap)?;
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Eliminated,
    Constructible,
    Undetermined,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Eliminated => "eliminated",
            Status::Constructible => "constructible",
            Status::Undetermined => "undetermined",
        })
    }
}

/// A recipe from [`constructions`] realizing the decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionWitness {
    pub recipe: String,
    pub params: Vec<(String, u32)>,
    pub classification: String,
    pub existence_unknown: bool,
}

/// Orders of the characters of the two factors of an `HK(n)×HK(n)` witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterCheck {
    pub m: u64,
    pub m_prime: u64,
    pub group_order: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverEntry {
    pub decomposition: Decomposition,
    pub status: Status,
    pub traces: Vec<RuleTrace>,
    pub witness: Option<ConstructionWitness>,
    pub character: Option<CharacterCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub n: u32,
    pub k: u32,
    pub entries: Vec<CoverEntry>,
    pub prime_power: PrimePower,
    /// Decompositions that were eliminated although a recipe realizes them.
    pub soundness_conflicts: Vec<String>,
}

impl CoverReport {
    pub fn with_status(&self, s: Status) -> Vec<&CoverEntry> {
        self.entries.iter().filter(|e| e.status == s).collect()
    }

    pub fn survivors(&self) -> Vec<&CoverEntry> {
        self.entries.iter().filter(|e| e.status != Status::Eliminated).collect()
    }
}

fn recipe_for(d: &Decomposition, n: u32, k: u32) -> Option<(&'static str, RecipeParams)> {
    let f = &d.factors;
    if f.iter().all(|&x| x == FactorKind::Hk(n)) && f.len() as u32 * 2 == k {
        return Some(("product-cover", RecipeParams { n: Some(n), k: Some(k / 2), e: None }));
    }
    if n == 2 && f.len() == 3 {
        if f[..] == [FactorKind::k3(), FactorKind::k3(), FactorKind::Hk(2)] && k == 4 {
            return Some(("mixed-n2", RecipeParams { e: Some(2), ..Default::default() }));
        }
        if let [FactorKind::Hk(2), FactorKind::Cy(e), FactorKind::Cy(e2)] = f[..] {
            if e == e2 && k == 2 + e {
                return Some(("mixed-n2", RecipeParams { e: Some(e), ..Default::default() }));
            }
        }
    }
    if k == 6 && f[..] == [FactorKind::Hk(n), FactorKind::Hk(2 * n)] {
        return Some(("k6", RecipeParams { n: Some(n), ..Default::default() }));
    }
    None
}

/// Builds and validates the recipe realizing `d`, if there is one.
pub fn construction_witness(d: &Decomposition, n: u32, k: u32) -> Option<ConstructionWitness> {
    let (recipe, p) = recipe_for(d, n, k)?;
    let s = constructions::build(recipe, p).ok()?;
    let kinds = Decomposition::new(s.factors.iter().map(|f| f.kind).collect());
    if &kinds != d {
        return None;
    }
    let report = geometry::validate(&s, DEFAULT_CAP).ok()?;
    if report.invariants.classification.unit_params() != Some((n, k)) || !report.ok() {
        return None;
    }
    let params = [("n", p.n), ("k", p.k), ("e", p.e)]
        .into_iter()
        .filter_map(|(name, v)| v.map(|v| (name.to_string(), v)))
        .collect();
    Some(ConstructionWitness {
        recipe: recipe.into(),
        params,
        classification: report.invariants.classification.to_string(),
        existence_unknown: s.existence_unknown,
    })
}

/// For `G ⊂ Aut(Y) × Aut(Y')` acting on `HK(n)×HK(n)`, the images of the
/// two characters must have order at least `n+1`.
pub fn character_check(n: u32) -> Option<CharacterCheck> {
    let s = constructions::make_product_cover(n, 2).ok()?;
    let g = s.group(DEFAULT_CAP).ok()?;
    let y = s.cover_algebra().index_of("y1")?;
    let y2 = s.cover_algebra().index_of("y2")?;
    let order_on = |gen: usize| {
        g.elements().iter().map(|e| e.scalars()[gen].order()).fold(1u64, num_integer::lcm)
    };
    let (m, m_prime) = (order_on(y), order_on(y2));
    let holds = m > n as u64 && m_prime > n as u64;
    Some(CharacterCheck { m, m_prime, group_order: g.order(), holds })
}

/// Runs the rules on every decomposition of dimension `nk`.
pub fn enumerate_covers(n: u32, k: u32, cap: usize) -> Result<CoverReport, EnumerateError> {
    check_range(n, k, 2)?;
    let decs = enumerate_decompositions(n, k, cap)?;
    let mut entries = Vec::with_capacity(decs.len());
    let mut conflicts = Vec::new();
    for d in decs {
        let (traces, eliminated) = apply_rules(&d, n, k);
        let witness = construction_witness(&d, n, k);
        if eliminated && witness.is_some() {
            conflicts.push(d.to_string());
        }
        let status = match (eliminated, &witness) {
            (true, _) => Status::Eliminated,
            (false, Some(_)) => Status::Constructible,
            (false, None) => Status::Undetermined,
        };
        let character = if status != Status::Eliminated
            && k == 4
            && d.factors[..] == [FactorKind::Hk(n), FactorKind::Hk(n)]
        {
            character_check(n)
        } else {
            None
        };
        entries.push(CoverEntry { decomposition: d, status, traces, witness, character });
    }
    Ok(CoverReport { n, k, entries, prime_power: prime_power_check(n), soundness_conflicts: conflicts })
}

/// Factorization of `n+1` and whether it is a prime power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
    pub is_prime_power: bool,
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.factors.iter().map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        let verdict = if self.is_prime_power { "prime power" } else { "not a prime power" };
        write!(f, "{} = {} ({verdict})", self.value, parts.join("·"))
    }
}

pub fn prime_power_check(n: u32) -> PrimePower {
    let value = n as u64 + 1;
    let mut rest = value;
    let mut factors = Vec::new();
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        p += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    PrimePower { value, is_prime_power: factors.len() == 1, factors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &[FactorKind]) -> Decomposition {
        Decomposition::new(s.to_vec())
    }

    #[test]
    fn dimension_one_grid() {
        let d = enumerate_decompositions(1, 4, 100).unwrap();
        let names: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["K3×K3", "HK(2)", "CY(4)"]);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(enumerate_decompositions(4, 4, 3), Err(EnumerateError::CapExceeded(3)));
        assert!(enumerate_decompositions(3, 3, 10).is_err());
    }

    #[test]
    fn prime_powers() {
        assert!(prime_power_check(3).is_prime_power);
        assert!(!prime_power_check(5).is_prime_power);
        let w = prime_power_check(8);
        assert_eq!(w.factors, vec![(3, 2)]);
        assert_eq!(w.to_string(), "9 = 3^2 (prime power)");
    }

    #[test]
    fn cy_cube_fails_transitivity() {
        let (t, dead) = apply_rules(&dec(&[FactorKind::Cy(4); 3]), 3, 4);
        assert!(dead);
        let last = t.last().unwrap();
        assert_eq!(last.rule, Rule::R3);
        assert!(matches!(last.witness, Witness::NotDividing { size: 3, group_order: 2, .. }));
    }

    #[test]
    fn k3_cube_times_hk3_fails_pair_orbit() {
        let d = dec(&[FactorKind::k3(), FactorKind::k3(), FactorKind::k3(), FactorKind::Hk(3)]);
        let (t, dead) = apply_rules(&d, 3, 4);
        assert!(dead);
        assert!(t.iter().any(|x| matches!(x.witness, Witness::NotDividing { size: 3, group_order: 8, .. })));
    }

    #[test]
    fn grid_n3() {
        let r = enumerate_covers(3, 4, DEFAULT_CAP).unwrap();
        let surv: Vec<String> = r.survivors().iter().map(|e| e.decomposition.to_string()).collect();
        assert_eq!(surv, ["HK(3)×HK(3)"]);
        assert!(r.with_status(Status::Undetermined).is_empty());
        assert!(r.soundness_conflicts.is_empty());
        let c = r.survivors()[0].character.clone().unwrap();
        assert!(c.holds);
        assert_eq!(c.group_order, 4);
    }

    #[test]
    fn grid_n2_contains_mixed() {
        let r = enumerate_covers(2, 4, DEFAULT_CAP).unwrap();
        let surv: Vec<String> = r.survivors().iter().map(|e| e.decomposition.to_string()).collect();
        assert!(surv.contains(&"HK(2)×HK(2)".to_string()));
        assert!(surv.contains(&"K3×K3×HK(2)".to_string()));
        assert!(r.soundness_conflicts.is_empty());
    }

    #[test]
    fn eliminations_carry_checkable_witnesses() {
        let r = enumerate_covers(3, 4, DEFAULT_CAP).unwrap();
        for e in r.with_status(Status::Eliminated) {
            let killing: Vec<&RuleTrace> = e.traces.iter().filter(|t| t.verdict == Verdict::Eliminated).collect();
            assert!(!killing.is_empty(), "{}", e.decomposition);
            assert!(killing.iter().all(|t| t.witness.verify()), "{}", e.decomposition);
        }
    }
}

#[cfg(test)]
mod grid_tests {
    use super::*;

    #[test]
    fn grid_n4() {
        let r = enumerate_covers(4, 4, DEFAULT_CAP).unwrap();
        let surv: Vec<String> = r.survivors().iter().map(|e| e.decomposition.to_string()).collect();
        assert_eq!(surv, ["HK(4)×HK(4)"]);
        assert!(r.with_status(Status::Undetermined).is_empty());
        assert_eq!(r.survivors()[0].status, Status::Constructible);
    }

    #[test]
    fn bipartite_k3_support_hits_coefficient_rule() {
        let mut f = vec![FactorKind::k3(); 8];
        f.extend([FactorKind::Hk(2); 4]);
        let (t, dead) = apply_rules(&Decomposition::new(f), 8, 4);
        assert!(t.iter().any(|x| x.rule == Rule::R5 && x.verdict == Verdict::Eliminated));
        assert!(t.iter().filter(|x| x.verdict == Verdict::Eliminated).all(|x| x.witness.verify()));
        let _ = dead;
    }

    #[test]
    fn grid_n2_survivors_are_exactly_the_recipes() {
        let r = enumerate_covers(2, 4, DEFAULT_CAP).unwrap();
        let surv: Vec<String> = r.survivors().iter().map(|e| e.decomposition.to_string()).collect();
        assert_eq!(surv, ["K3×K3×HK(2)", "HK(2)×HK(2)"]);
        assert!(r.survivors().iter().all(|e| e.status == Status::Constructible));
    }
}
