//! Necessary conditions a product cover must satisfy when its quotient has a
//! `Pⁿ[k]`-unit, each producing a [`RuleTrace`].

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use super::cformula::{self, CformulaWitness};
use super::Decomposition;
use crate::geometry::FactorKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Eliminated,
    Kept,
}

/// Evidence behind a verdict. The arithmetic variants can be rechecked
/// with [`Witness::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    Passed { note: String },
    Excluded { factor: String, reason: String },
    NoPacking { support: String, n: u32, k: u32 },
    Packing { monomials: Vec<String> },
    NotIntegral { chi: u64, divisor: u64 },
    NotDividing { what: String, size: u64, group_order: u64 },
    TrivialGroup { hilbert: Vec<u64> },
    Splitting { power: u32, first: String, second: String, argument: String },
    Coefficients(CformulaWitness),
}

impl Witness {
    /// Rechecks whatever is checkable from the witness alone.
    pub fn verify(&self) -> bool {
        match self {
            Witness::NotIntegral { chi, divisor } => *divisor > 0 && chi % divisor != 0,
            Witness::NotDividing { size, group_order, .. } => *size > 0 && group_order % size != 0,
            Witness::TrivialGroup { hilbert } => !hilbert.iter().all(|&h| h <= 1),
            Witness::Splitting { first, second, .. } => first != second,
            Witness::Coefficients(w) => w.verify(),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleTrace {
    pub rule: Rule,
    /// Which support hypothesis the trace belongs to, if any.
    pub hypothesis: Option<String>,
    pub citation: &'static str,
    pub witness: Witness,
    pub verdict: Verdict,
}

impl RuleTrace {
    fn new(rule: Rule, hyp: Option<&Hypothesis>, citation: &'static str, witness: Witness, verdict: Verdict) -> Self {
        RuleTrace { rule, hypothesis: hyp.map(|h| h.to_string()), citation, witness, verdict }
    }
}

const CITE_R1: &str = "a torus or odd-dimensional Calabi–Yau factor has no room in a cover with Pⁿ[k]-unit";
const CITE_R2: &str = "x^n must reach the top class, so the top monomial is a product of n degree-k monomials";
const CITE_R3_EULER: &str = "|G| = χ(cover)/(n+1) must be a positive integer";
const CITE_R3_ORBIT: &str = "interchangeable generators that all occur in x form one orbit, whose size divides |G|";
const CITE_R3_POWER: &str = "the support of x^i is a single G-orbit, so its size divides |G|";
const CITE_R3_TRIVIAL: &str = "with |G| = 1 the cover itself must carry the unit";
const CITE_R4: &str = "the support of x is one orbit, hence lies in one monomial shape class";
const CITE_R5: &str = "bipartite support with vanishing mixed terms forces 3C = C";
const CITE_R6: &str = "x^i spans a line, so its expansion cannot contain two definite shape classes";

/// Algebra data of a decomposition: exponent bounds and degrees per factor.
pub(crate) struct Shape {
    pub kinds: Vec<FactorKind>,
    pub bounds: Vec<u8>,
    pub degrees: Vec<u32>,
    pub names: Vec<String>,
}

impl Shape {
    pub fn new(d: &Decomposition) -> Self {
        let mut ny = 0;
        let mut nz = 0;
        let mut names = Vec::new();
        let mut bounds = Vec::new();
        let mut degrees = Vec::new();
        for k in &d.factors {
            match *k {
                FactorKind::Hk(dd) => {
                    ny += 1;
                    names.push(format!("y{ny}"));
                    bounds.push(dd.min(255) as u8);
                    degrees.push(2);
                }
                FactorKind::Cy(e) | FactorKind::Torus(e) => {
                    nz += 1;
                    names.push(format!("z{nz}"));
                    bounds.push(1);
                    degrees.push(e);
                }
            }
        }
        Shape { kinds: d.factors.clone(), bounds, degrees, names }
    }

    pub fn top(&self) -> Vec<u8> {
        self.bounds.clone()
    }

    pub fn render(&self, m: &[u8]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }

    /// All monomials of total degree `k`.
    pub fn monomials_of_degree(&self, k: u32) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; self.bounds.len()];
        self.rec(0, k, &mut cur, &mut out);
        out
    }

    fn rec(&self, pos: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos == self.bounds.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=self.bounds[pos] {
            let d = e as u32 * self.degrees[pos];
            if d > left {
                break;
            }
            cur[pos] = e;
            self.rec(pos + 1, left - d, cur, out);
        }
        cur[pos] = 0;
    }

    /// Kind-level shape: for each kind the sorted nonzero exponents.
    fn kind_shape(&self, m: &[u8]) -> BTreeMap<FactorKind, Vec<u8>> {
        let mut s: BTreeMap<FactorKind, Vec<u8>> = BTreeMap::new();
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                s.entry(self.kinds[i]).or_default().push(e);
            }
        }
        for v in s.values_mut() {
            v.sort_unstable();
        }
        s
    }
}

/// Finds `n` monomials from `allowed` (with repetition) whose exponents sum
/// to `top`.
pub(crate) fn pack(top: &[u8], allowed: &[Vec<u8>], n: u32) -> Option<Vec<usize>> {
    fn go(
        rem: &mut Vec<u8>,
        allowed: &[Vec<u8>],
        start: usize,
        left: u32,
        chosen: &mut Vec<usize>,
        dead: &mut HashSet<(Vec<u8>, usize, u32)>,
    ) -> bool {
        if left == 0 {
            return rem.iter().all(|&e| e == 0);
        }
        let key = (rem.clone(), start, left);
        if dead.contains(&key) {
            return false;
        }
        for idx in start..allowed.len() {
            let m = &allowed[idx];
            if m.iter().zip(rem.iter()).any(|(a, r)| a > r) {
                continue;
            }
            for (r, a) in rem.iter_mut().zip(m) {
                *r -= a;
            }
            chosen.push(idx);
            if go(rem, allowed, idx, left - 1, chosen, dead) {
                return true;
            }
            chosen.pop();
            for (r, a) in rem.iter_mut().zip(m) {
                *r += a;
            }
        }
        dead.insert(key);
        false
    }
    let mut rem = top.to_vec();
    let mut chosen = Vec::new();
    let mut dead = HashSet::new();
    go(&mut rem, allowed, 0, n, &mut chosen, &mut dead).then_some(chosen)
}

/// Multiplicity of each product of `i` monomials from `support`, counted as
/// multisets, dropping products that vanish.
pub(crate) fn power_products(support: &[Vec<u8>], bounds: &[u8], i: u32) -> BTreeMap<Vec<u8>, u64> {
    fn go(
        support: &[Vec<u8>],
        bounds: &[u8],
        start: usize,
        left: u32,
        cur: &mut Vec<u8>,
        out: &mut BTreeMap<Vec<u8>, u64>,
    ) {
        if left == 0 {
            *out.entry(cur.clone()).or_insert(0) += 1;
            return;
        }
        for idx in start..support.len() {
            let m = &support[idx];
            if cur.iter().zip(m).zip(bounds).any(|((c, a), b)| c + a > *b) {
                continue;
            }
            for (c, a) in cur.iter_mut().zip(m) {
                *c += a;
            }
            go(support, bounds, idx, left - 1, cur, out);
            for (c, a) in cur.iter_mut().zip(m) {
                *c -= a;
            }
        }
    }
    let mut out = BTreeMap::new();
    let mut cur = vec![0u8; bounds.len()];
    go(support, bounds, 0, i, &mut cur, &mut out);
    out
}

pub(crate) fn euler(d: &Decomposition) -> u64 {
    d.factors.iter().map(|k| k.euler().max(0) as u64).product()
}

/// A guess at the orbit structure of the factors under `G` together with the
/// shape class containing the support of `x` (degree 4 only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Hypothesis {
    pub class: Class,
    /// Orbit id of each factor.
    pub orbit: Vec<usize>,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Class {
    /// `x = Σ c_j z_j`.
    Linear,
    /// `x = Σ c_i y_i²`.
    Squares,
    /// `x = Σ c_{ab} y_a y_b` inside one orbit.
    Pairs,
    /// `x = Σ c_{ab} y_a y'_b` between two orbits.
    Bipartite,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = match self.class {
            Class::Linear => "x = Σ c_j z_j",
            Class::Squares => "x = Σ c_i y_i²",
            Class::Pairs => "x = Σ c_ab y_a y_b within one orbit",
            Class::Bipartite => "x = Σ c_ab y_a y'_b across two orbits",
        };
        write!(f, "{form}; orbit sizes {:?}", self.sizes)
    }
}

impl Hypothesis {
    /// Degree-4 monomials of the class.
    fn allowed(&self, sh: &Shape) -> Vec<Vec<u8>> {
        let len = sh.kinds.len();
        let mut out = Vec::new();
        let unit = |i: usize, e: u8| {
            let mut m = vec![0u8; len];
            m[i] = e;
            m
        };
        match self.class {
            Class::Linear => (0..len).for_each(|i| out.push(unit(i, 1))),
            Class::Squares => (0..len).filter(|&i| sh.bounds[i] >= 2).for_each(|i| out.push(unit(i, 2))),
            Class::Pairs | Class::Bipartite => {
                for a in 0..len {
                    for b in a + 1..len {
                        let same = self.orbit[a] == self.orbit[b];
                        if same == (self.class == Class::Pairs) {
                            let mut m = unit(a, 1);
                            m[b] = 1;
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    /// Orbit-refined shape: sorted `(orbit, exponent)` pairs.
    fn shape_of(&self, m: &[u8]) -> Vec<(usize, u8)> {
        let mut s: Vec<(usize, u8)> =
            m.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (self.orbit[i], e)).collect();
        s.sort_unstable();
        s
    }

    /// Whether every monomial of the class must occur in `x`.
    fn forced(&self) -> bool {
        match self.class {
            Class::Linear | Class::Squares => true,
            Class::Pairs => self.sizes[0] == 2,
            Class::Bipartite => self.sizes.contains(&1),
        }
    }

    fn orbit_bound(&self, sh: &Shape, o: usize) -> u8 {
        let i = self.orbit.iter().position(|&x| x == o).expect("orbit has a member");
        sh.bounds[i]
    }
}

/// Hypotheses for `k = 4`: at most two orbits, since a degree-4 monomial
/// meets at most two factors.
pub(crate) fn hypotheses(sh: &Shape) -> Vec<Hypothesis> {
    let len = sh.kinds.len();
    let mut groups: BTreeMap<FactorKind, Vec<usize>> = BTreeMap::new();
    for (i, k) in sh.kinds.iter().enumerate() {
        groups.entry(*k).or_default().push(i);
    }
    let kinds: Vec<FactorKind> = groups.keys().copied().collect();
    let mut out = Vec::new();
    let single = |class| Hypothesis { class, orbit: vec![0; len], sizes: vec![len] };
    match kinds.as_slice() {
        [FactorKind::Cy(4)] => out.push(single(Class::Linear)),
        [FactorKind::Hk(_)] => {
            out.push(single(Class::Squares));
            if len >= 2 {
                out.push(single(Class::Pairs));
            }
            for s1 in 1..=len / 2 {
                let orbit: Vec<usize> = (0..len).map(|i| usize::from(i >= s1)).collect();
                out.push(Hypothesis { class: Class::Bipartite, orbit, sizes: vec![s1, len - s1] });
            }
        }
        [a @ FactorKind::Hk(_), FactorKind::Hk(_)] => {
            let orbit: Vec<usize> = sh.kinds.iter().map(|k| usize::from(k != a)).collect();
            let s1 = groups[a].len();
            out.push(Hypothesis { class: Class::Bipartite, orbit, sizes: vec![s1, len - s1] });
        }
        _ => {}
    }
    out
}

/// Runs the rules on `d`. Returns the traces and whether `d` was eliminated.
pub fn apply_rules(d: &Decomposition, n: u32, k: u32) -> (Vec<RuleTrace>, bool) {
    let mut traces = Vec::new();
    let sh = Shape::new(d);

    // R1
    for kind in &d.factors {
        let reason = match *kind {
            FactorKind::Torus(_) => Some("torus factor"),
            FactorKind::Cy(e) if e % 2 == 1 => Some("odd-dimensional Calabi–Yau factor"),
            _ => None,
        };
        if let Some(reason) = reason {
            let w = Witness::Excluded { factor: kind.to_string(), reason: reason.into() };
            traces.push(RuleTrace::new(Rule::R1, None, CITE_R1, w, Verdict::Eliminated));
            return (traces, true);
        }
    }
    traces.push(RuleTrace::new(
        Rule::R1,
        None,
        CITE_R1,
        Witness::Passed { note: "no torus or odd Calabi–Yau factor".into() },
        Verdict::Kept,
    ));

    // R2
    let all = sh.monomials_of_degree(k);
    let top = sh.top();
    match pack(&top, &all, n) {
        None => {
            let w = Witness::NoPacking { support: "the whole algebra".into(), n, k };
            traces.push(RuleTrace::new(Rule::R2, None, CITE_R2, w, Verdict::Eliminated));
            return (traces, true);
        }
        Some(p) => {
            let w = Witness::Packing { monomials: p.iter().map(|&i| sh.render(&all[i])).collect() };
            traces.push(RuleTrace::new(Rule::R2, None, CITE_R2, w, Verdict::Kept));
        }
    }

    // R3: Euler characteristic
    let chi = euler(d);
    let divisor = n as u64 + 1;
    if !chi.is_multiple_of(divisor) {
        traces.push(RuleTrace::new(Rule::R3, None, CITE_R3_EULER, Witness::NotIntegral { chi, divisor }, Verdict::Eliminated));
        return (traces, true);
    }
    let order = chi / divisor;
    traces.push(RuleTrace::new(
        Rule::R3,
        None,
        CITE_R3_EULER,
        Witness::Passed { note: format!("χ = {chi}, |G| = {order}") },
        Verdict::Kept,
    ));
    if order == 1 {
        let hilbert = trivial_group_hilbert(&sh);
        let unit = hilbert_is_unit(&hilbert, n, k);
        let w = Witness::TrivialGroup { hilbert };
        let verdict = if unit { Verdict::Kept } else { Verdict::Eliminated };
        traces.push(RuleTrace::new(Rule::R3, None, CITE_R3_TRIVIAL, w, verdict));
        if !unit {
            return (traces, true);
        }
    }

    // R4: one shape class must reach the top on its own.
    let mut classes: BTreeMap<BTreeMap<FactorKind, Vec<u8>>, Vec<Vec<u8>>> = BTreeMap::new();
    for m in &all {
        classes.entry(sh.kind_shape(m)).or_default().push(m.clone());
    }
    let reaching: Vec<&Vec<Vec<u8>>> = classes.values().filter(|ms| pack(&top, ms, n).is_some()).collect();
    if reaching.is_empty() {
        let w = Witness::NoPacking { support: format!("any single one of {} shape classes", classes.len()), n, k };
        traces.push(RuleTrace::new(Rule::R4, None, CITE_R4, w, Verdict::Eliminated));
        return (traces, true);
    }
    traces.push(RuleTrace::new(
        Rule::R4,
        None,
        CITE_R4,
        Witness::Passed { note: format!("{} of {} shape classes reach the top", reaching.len(), classes.len()) },
        Verdict::Kept,
    ));

    if k != 4 {
        return (traces, false);
    }

    let hyps = hypotheses(&sh);
    let mut alive = false;
    for h in &hyps {
        let (t, dead) = examine(&sh, h, n, order);
        traces.extend(t);
        alive |= !dead;
    }
    if hyps.is_empty() {
        let w = Witness::NoPacking { support: "any orbit hypothesis with at most two orbits".into(), n, k };
        traces.push(RuleTrace::new(Rule::R4, None, CITE_R4, w, Verdict::Eliminated));
    }
    (traces, !alive)
}

fn trivial_group_hilbert(sh: &Shape) -> Vec<u64> {
    let total: u32 = sh.bounds.iter().zip(&sh.degrees).map(|(&b, &d)| b as u32 * d).sum();
    let mut h = vec![0u64; total as usize + 1];
    h[0] = 1;
    for (&b, &d) in sh.bounds.iter().zip(&sh.degrees) {
        let mut next = vec![0u64; h.len()];
        for (deg, &c) in h.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for e in 0..=b as usize {
                let t = deg + e * d as usize;
                if t < next.len() {
                    next[t] += c;
                }
            }
        }
        h = next;
    }
    h
}

fn hilbert_is_unit(h: &[u64], n: u32, k: u32) -> bool {
    h.iter().enumerate().all(|(d, &c)| c == u64::from((d as u32).is_multiple_of(k) && d as u32 / k <= n))
}

/// Checks one orbit hypothesis. Returns its traces and whether it died.
fn examine(sh: &Shape, h: &Hypothesis, n: u32, order: u64) -> (Vec<RuleTrace>, bool) {
    let mut t = Vec::new();
    let allowed = h.allowed(sh);
    let top = sh.top();
    if pack(&top, &allowed, n).is_none() {
        let w = Witness::NoPacking { support: format!("{h}"), n, k: 4 };
        t.push(RuleTrace::new(Rule::R2, Some(h), CITE_R2, w, Verdict::Eliminated));
        return (t, true);
    }
    for (o, &s) in h.sizes.iter().enumerate() {
        if !order.is_multiple_of(s as u64) {
            let what = format!("orbit {o} of {s} factors");
            let w = Witness::NotDividing { what, size: s as u64, group_order: order };
            t.push(RuleTrace::new(Rule::R3, Some(h), CITE_R3_ORBIT, w, Verdict::Eliminated));
            return (t, true);
        }
    }

    if h.forced() {
        if let Some(tr) = forced_checks(sh, h, &allowed, n, order) {
            t.push(tr);
            return (t, true);
        }
        let note = format!("support of x^i is one shape class for i ≤ {n}");
        t.push(RuleTrace::new(Rule::R6, Some(h), CITE_R6, Witness::Passed { note }, Verdict::Kept));
        return (t, false);
    }

    // Unforced supports: Pairs with ≥ 3 factors or Bipartite with both sides ≥ 2.
    let b: Vec<u8> = (0..h.sizes.len()).map(|o| h.orbit_bound(sh, o)).collect();
    if b.iter().all(|&x| x >= 2) {
        let w = Witness::Splitting {
            power: 2,
            first: "y_a²·y_b² for a support monomial y_a·y_b".into(),
            second: "y_a·y_b²·y_c if some factor meets two support monomials, else y_a·y_b·y_c·y_d from two disjoint ones"
                .into(),
            argument: "each named product arises from exactly one pair of support monomials, so its coefficient is nonzero"
                .into(),
        };
        t.push(RuleTrace::new(Rule::R6, Some(h), CITE_R6, w, Verdict::Eliminated));
        return (t, true);
    }
    if h.class == Class::Bipartite && b.iter().any(|&x| x >= 2) && n >= 3 {
        let k3_side = if b[0] == 1 { 0 } else { 1 };
        let rows = h.sizes[k3_side];
        let cols = h.sizes[1 - k3_side];
        match cformula::replay(rows, cols) {
            Ok(w) => {
                t.push(RuleTrace::new(Rule::R5, Some(h), CITE_R5, Witness::Coefficients(w), Verdict::Eliminated));
                return (t, true);
            }
            Err(e) => {
                t.push(RuleTrace::new(Rule::R5, Some(h), CITE_R5, Witness::Passed { note: e }, Verdict::Kept));
                return (t, false);
            }
        }
    }
    let note = "kept (undetermined by rule)".to_string();
    t.push(RuleTrace::new(Rule::R6, Some(h), CITE_R6, Witness::Passed { note }, Verdict::Kept));
    (t, false)
}

/// With the support known exactly, checks every power `x^i`, `i ≤ n`.
fn forced_checks(sh: &Shape, h: &Hypothesis, support: &[Vec<u8>], n: u32, order: u64) -> Option<RuleTrace> {
    for i in 1..=n {
        let prods = power_products(support, &sh.bounds, i);
        let definite: Vec<&Vec<u8>> = prods.iter().filter(|(_, &c)| c == 1).map(|(m, _)| m).collect();
        let shapes: BTreeSet<Vec<(usize, u8)>> = definite.iter().map(|m| h.shape_of(m)).collect();
        if shapes.len() >= 2 {
            let first = definite[0];
            let second = definite.iter().find(|m| h.shape_of(m) != h.shape_of(first)).expect("two shapes");
            let w = Witness::Splitting {
                power: i,
                first: sh.render(first),
                second: sh.render(second),
                argument: "both products arise from exactly one multiset of support monomials".into(),
            };
            return Some(RuleTrace::new(Rule::R6, Some(h), CITE_R6, w, Verdict::Eliminated));
        }
        if definite.len() == prods.len() {
            let size = prods.len() as u64;
            if size > 0 && !order.is_multiple_of(size) {
                let what = format!("support of x^{i}");
                let w = Witness::NotDividing { what, size, group_order: order };
                return Some(RuleTrace::new(Rule::R3, Some(h), CITE_R3_POWER, w, Verdict::Eliminated));
            }
        }
    }
    None
}
