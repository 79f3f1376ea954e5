//! Finite groups acting on Künneth algebras by block-preserving generator
//! permutations combined with root-of-unity scalings.
//!
//! # Convention
//!
//! A [`ProductAutomorphism`] is the *pullback* of a geometric automorphism.
//! It sends generator `g` to `scalar[g] · generator[perm[g]]` and extends
//! multiplicatively. [`ProductAutomorphism::compose`]`(a, b)` is the operator
//! "apply `b`, then `a`", so for geometric maps `φ, ψ` we have
//! `(φ ∘ ψ)^* = compose(ψ^*, φ^*)`.
//!
//! Geometric data is tracked per block (factor) in [`BlockComponents`]: the
//! automorphism's component on factor `j` is `base_j^{powers[j]}`, and the
//! classes of factor `j` are pulled back to factor `perm[j]`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraElement, KunnethAlgebra, Monomial, RootOfUnity};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("automorphisms act on different algebras")]
    DomainMismatch,
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("group is not cyclic on its first generator")]
    NotCyclic,
}

/// Three-valued truth for declared geometric facts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    #[default]
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Unknown,
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        }
    }
}

impl std::fmt::Display for Truth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Geometric shape of a product automorphism, one entry per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockComponents {
    /// Classes of block `j` are pulled back to block `perm[j]`.
    pub perm: Vec<usize>,
    /// The component on block `j` is `base_j^{powers[j]}`.
    pub powers: Vec<u64>,
    /// Order of the base automorphism of each block.
    pub orders: Vec<u64>,
}

impl BlockComponents {
    pub fn trivial(blocks: usize) -> Self {
        BlockComponents { perm: (0..blocks).collect(), powers: vec![0; blocks], orders: vec![1; blocks] }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.powers.iter().all(|&p| p == 0)
    }

    /// Cycles of the block permutation, each starting at its least block.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.perm[start];
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.perm[j];
            }
            out.push(cyc);
        }
        out
    }
}

/// Pullback of an automorphism of a product, acting on its Künneth algebra.
#[derive(Clone, Debug)]
pub struct ProductAutomorphism {
    alg: Arc<KunnethAlgebra>,
    perm: Vec<usize>,
    scalars: Vec<RootOfUnity>,
    components: Option<BlockComponents>,
}

impl PartialEq for ProductAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.perm == other.perm && self.scalars == other.scalars && self.components == other.components
    }
}

impl Eq for ProductAutomorphism {}

impl Hash for ProductAutomorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.perm.hash(state);
        self.scalars.hash(state);
        self.components.hash(state);
    }
}

impl ProductAutomorphism {
    /// An automorphism given only by its action on generators.
    pub fn new(
        alg: &Arc<KunnethAlgebra>,
        perm: Vec<usize>,
        scalars: Vec<RootOfUnity>,
    ) -> Result<Self, ActionError> {
        let a = ProductAutomorphism { alg: alg.clone(), perm, scalars, components: None };
        a.validate()?;
        Ok(a)
    }

    /// An automorphism with geometric block data. The generator action must
    /// move whole blocks the way `components.perm` says.
    pub fn with_components(
        alg: &Arc<KunnethAlgebra>,
        perm: Vec<usize>,
        scalars: Vec<RootOfUnity>,
        components: BlockComponents,
    ) -> Result<Self, ActionError> {
        let a = ProductAutomorphism { alg: alg.clone(), perm, scalars, components: Some(components) };
        a.validate()?;
        Ok(a)
    }

    /// Diagonal scaling `g ↦ scalars[g] · g`.
    pub fn diagonal(alg: &Arc<KunnethAlgebra>, scalars: Vec<RootOfUnity>) -> Result<Self, ActionError> {
        Self::new(alg, (0..alg.len()).collect(), scalars)
    }

    pub fn identity(alg: &Arc<KunnethAlgebra>) -> Self {
        ProductAutomorphism {
            alg: alg.clone(),
            perm: (0..alg.len()).collect(),
            scalars: vec![RootOfUnity::ONE; alg.len()],
            components: Some(BlockComponents::trivial(alg.block_count())),
        }
    }

    /// The identity with the same block orders as `self`.
    pub fn identity_like(&self) -> ProductAutomorphism {
        let mut id = Self::identity(&self.alg);
        id.components = self.components.as_ref().map(|c| BlockComponents {
            perm: (0..c.perm.len()).collect(),
            powers: vec![0; c.perm.len()],
            orders: c.orders.clone(),
        });
        id
    }

    fn validate(&self) -> Result<(), ActionError> {
        let n = self.alg.len();
        let bad = |m: String| Err(ActionError::InvalidAutomorphism(m));
        if self.perm.len() != n || self.scalars.len() != n {
            return bad(format!("expected {n} images, got {}", self.perm.len()));
        }
        let mut hit = vec![false; n];
        for &p in &self.perm {
            if p >= n || hit[p] {
                return bad("generator map is not a bijection".into());
            }
            hit[p] = true;
        }
        let gens = self.alg.generators();
        let blocks = self.alg.block_count();
        let mut block_image: Vec<Option<usize>> = vec![None; blocks];
        for (g, &p) in self.perm.iter().enumerate() {
            let (a, b) = (&gens[g], &gens[p]);
            if a.degree != b.degree || a.nilorder != b.nilorder {
                return bad(format!("{} and {} differ in degree or nilorder", a.name, b.name));
            }
            match block_image[a.block] {
                None => block_image[a.block] = Some(b.block),
                Some(x) if x != b.block => {
                    return bad(format!("block of {} is split across blocks", a.name));
                }
                _ => {}
            }
        }
        if let Some(c) = &self.components {
            if c.perm.len() != blocks || c.powers.len() != blocks || c.orders.len() != blocks {
                return bad("block data has the wrong length".into());
            }
            for (j, img) in block_image.iter().enumerate() {
                if let Some(img) = img {
                    if *img != c.perm[j] {
                        return bad(format!("block {j} is moved inconsistently"));
                    }
                }
            }
            for j in 0..blocks {
                if c.orders[j] == 0 || c.powers[j] >= c.orders[j] {
                    return bad(format!("power of block {j} is not reduced"));
                }
                if c.orders[c.perm[j]] != c.orders[j] {
                    return bad(format!("block {j} is exchanged with a block of another type"));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<KunnethAlgebra> {
        &self.alg
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn scalars(&self) -> &[RootOfUnity] {
        &self.scalars
    }

    pub fn components(&self) -> Option<&BlockComponents> {
        self.components.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.acts_trivially() && self.components.as_ref().is_none_or(BlockComponents::is_identity)
    }

    /// Acts trivially on cohomology (may still be a non-trivial geometric map).
    pub fn acts_trivially(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.scalars.iter().all(RootOfUnity::is_one)
    }

    fn check_domain(&self, other: &ProductAutomorphism) -> Result<(), ActionError> {
        if Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg {
            Ok(())
        } else {
            Err(ActionError::DomainMismatch)
        }
    }

    /// The operator "apply `b`, then `self`".
    pub fn compose(&self, b: &ProductAutomorphism) -> Result<ProductAutomorphism, ActionError> {
        self.check_domain(b)?;
        let perm = b.perm.iter().map(|&p| self.perm[p]).collect();
        let scalars = b.perm.iter().zip(&b.scalars).map(|(&p, &s)| s * self.scalars[p]).collect();
        let components = match (&self.components, &b.components) {
            (Some(ca), Some(cb)) => {
                if ca.orders != cb.orders {
                    return Err(ActionError::DomainMismatch);
                }
                Some(BlockComponents {
                    perm: cb.perm.iter().map(|&p| ca.perm[p]).collect(),
                    powers: cb
                        .perm
                        .iter()
                        .enumerate()
                        .map(|(j, &p)| (cb.powers[j] + ca.powers[p]) % ca.orders[j])
                        .collect(),
                    orders: ca.orders.clone(),
                })
            }
            _ => None,
        };
        Ok(ProductAutomorphism { alg: self.alg.clone(), perm, scalars, components })
    }

    pub fn inverse(&self) -> ProductAutomorphism {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut scalars = vec![RootOfUnity::ONE; n];
        for g in 0..n {
            perm[self.perm[g]] = g;
            scalars[self.perm[g]] = self.scalars[g].inv();
        }
        let components = self.components.as_ref().map(|c| {
            let m = c.perm.len();
            let mut inv_perm = vec![0; m];
            for j in 0..m {
                inv_perm[c.perm[j]] = j;
            }
            let powers = (0..m)
                .map(|j| (c.orders[j] - c.powers[inv_perm[j]]) % c.orders[j])
                .collect();
            BlockComponents { perm: inv_perm, powers, orders: c.orders.clone() }
        });
        ProductAutomorphism { alg: self.alg.clone(), perm, scalars, components }
    }

    pub fn pow(&self, e: u64) -> ProductAutomorphism {
        let mut acc = self.identity_like();
        for _ in 0..e {
            acc = acc.compose(self).expect("same domain");
        }
        acc
    }

    /// Order in the group of (geometric, when known) automorphisms.
    pub fn order(&self) -> u64 {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.compose(self).expect("same domain");
            k += 1;
        }
        k
    }

    /// Image of a basis monomial: a monomial with a root-of-unity factor.
    pub fn apply_monomial(&self, m: &Monomial) -> (Monomial, RootOfUnity) {
        let gens = self.alg.generators();
        let mut out = vec![0u8; m.0.len()];
        let mut scalar = RootOfUnity::ONE;
        let mut odd_images = Vec::new();
        for (g, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            out[self.perm[g]] = e;
            scalar = scalar * self.scalars[g].pow(e as i64);
            if gens[g].is_odd() {
                odd_images.push(self.perm[g]);
            }
        }
        let mut inversions = 0usize;
        for i in 0..odd_images.len() {
            for j in i + 1..odd_images.len() {
                if odd_images[i] > odd_images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 1 {
            scalar = scalar * RootOfUnity::MINUS_ONE;
        }
        (Monomial(out), scalar)
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement, ActionError> {
        if !(Arc::ptr_eq(&self.alg, a.algebra()) || *self.alg == **a.algebra()) {
            return Err(ActionError::DomainMismatch);
        }
        let mut out = AlgebraElement::zero(a.algebra());
        for (m, c) in a.terms() {
            let (img, s) = self.apply_monomial(m);
            out.add_term(img, c * &s.to_cyclotomic());
        }
        Ok(out)
    }

    /// Human-readable action on generators, e.g. `y1 ↦ ζ3·y1`.
    pub fn describe(&self) -> String {
        let gens = self.alg.generators();
        let parts: Vec<String> = (0..self.perm.len())
            .filter(|&g| self.perm[g] != g || !self.scalars[g].is_one())
            .map(|g| {
                let s = self.scalars[g];
                let target = &gens[self.perm[g]].name;
                if s.is_one() {
                    format!("{} ↦ {}", gens[g].name, target)
                } else if s == RootOfUnity::MINUS_ONE {
                    format!("{} ↦ -{}", gens[g].name, target)
                } else {
                    format!("{} ↦ {}·{}", gens[g].name, s, target)
                }
            })
            .collect();
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join(", ")
        }
    }
}

/// A finite group of product automorphisms, closed under composition.
#[derive(Clone, Debug)]
pub struct ActionGroup {
    alg: Arc<KunnethAlgebra>,
    elements: Vec<ProductAutomorphism>,
    generators: Vec<ProductAutomorphism>,
}

impl ActionGroup {
    pub fn algebra(&self) -> &Arc<KunnethAlgebra> {
        &self.alg
    }

    /// Elements in discovery order; the identity comes first.
    pub fn elements(&self) -> &[ProductAutomorphism] {
        &self.elements
    }

    pub fn generators(&self) -> &[ProductAutomorphism] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &ProductAutomorphism) -> bool {
        self.elements.contains(a)
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.elements.iter().fold(1u64, |acc, e| acc.lcm(&e.order()))
    }

    /// Same set of elements, ignoring order and generators.
    pub fn same_elements(&self, other: &ActionGroup) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let set: HashSet<&ProductAutomorphism> = self.elements.iter().collect();
        other.elements.iter().all(|e| set.contains(e))
    }

    /// The first generator, when it generates the whole group.
    pub fn cyclic_generator(&self) -> Result<&ProductAutomorphism, ActionError> {
        match self.generators.first() {
            None if self.order() == 1 => Ok(&self.elements[0]),
            Some(g) if g.order() as usize == self.order() => Ok(g),
            _ => Err(ActionError::NotCyclic),
        }
    }
}

/// All products of `gens`, deduplicated. Fails once more than `cap`
/// elements have been found.
pub fn group_closure(
    alg: &Arc<KunnethAlgebra>,
    gens: &[ProductAutomorphism],
    cap: usize,
) -> Result<ActionGroup, ActionError> {
    assert!(cap > 0, "cap must be positive");
    for g in gens {
        if !(Arc::ptr_eq(g.algebra(), alg) || **g.algebra() == **alg) {
            return Err(ActionError::DomainMismatch);
        }
    }
    let mut identity = match gens.first() {
        Some(g) => g.identity_like(),
        None => ProductAutomorphism::identity(alg),
    };
    if gens.iter().any(|g| g.components.is_none()) {
        identity.components = None;
    }
    let gens: Vec<ProductAutomorphism> = gens
        .iter()
        .map(|g| {
            let mut g = g.clone();
            if identity.components.is_none() {
                g.components = None;
            }
            g
        })
        .collect();
    let mut index: HashMap<ProductAutomorphism, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let next = elements[i].compose(g)?;
            if !index.contains_key(&next) {
                if elements.len() >= cap {
                    return Err(ActionError::CapExceeded(cap));
                }
                index.insert(next.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
    }
    Ok(ActionGroup { alg: alg.clone(), elements, generators: gens })
}

/// Declared fixed-point-freeness of powers of the base automorphism of
/// each block. Only called with `0 < power < order`.
pub trait FreenessFacts {
    fn power_free(&self, block: usize, power: u64) -> Truth;
}

impl<F: Fn(usize, u64) -> Truth> FreenessFacts for F {
    fn power_free(&self, block: usize, power: u64) -> Truth {
        self(block, power)
    }
}

/// Whether the geometric automorphism behind `auto` is fixed point free.
///
/// The automorphism splits into one factor per cycle of blocks; it is free
/// iff one of these is free, and a cycle `(g_1 × … × g_k) ∘ (1 … k)` is free
/// iff the round trip `g_k ∘ … ∘ g_1` is. All blocks of a cycle share their
/// base automorphism, so the round trip is the base raised to the sum of the
/// powers along the cycle.
pub fn propagate_freeness(auto: &ProductAutomorphism, facts: &dyn FreenessFacts) -> Truth {
    let Some(c) = auto.components() else {
        return Truth::Unknown;
    };
    let mut verdict = Truth::False;
    for cycle in c.cycles() {
        let j = cycle[0];
        let total = cycle.iter().map(|&b| c.powers[b]).sum::<u64>() % c.orders[j];
        let t = if total == 0 { Truth::False } else { facts.power_free(j, total) };
        verdict = verdict.or(t);
        if verdict == Truth::True {
            break;
        }
    }
    verdict
}
