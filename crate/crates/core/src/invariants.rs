//! Invariant subalgebras of finite group actions and the classification of
//! the structure-sheaf object type of a quotient.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::action::{ActionError, ActionGroup, ProductAutomorphism};
use crate::algebra::{AlgebraElement, Cyclotomic, Monomial, RootOfUnity};

/// Object type of `O_X` read off the invariant algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum UnitClass {
    /// Cohomology is `C` in degree 0.
    Exceptional,
    /// `C ⊕ C[-dim]` with trivial canonical character; the `n = 1` case.
    Spherical { dim: u32 },
    /// `C[x]/x^{n+1}` with `deg x = 2`.
    HyperkahlerPn { n: u32 },
    /// `C[x]/x^{n+1}` with `deg x = k`.
    PnkUnit { n: u32, k: u32 },
    None,
}

impl UnitClass {
    /// `(n, k)` when the class is a `P^n[k]`-unit of any flavour.
    pub fn unit_params(&self) -> Option<(u32, u32)> {
        match *self {
            UnitClass::Spherical { dim } => Some((1, dim)),
            UnitClass::HyperkahlerPn { n } => Some((n, 2)),
            UnitClass::PnkUnit { n, k } => Some((n, k)),
            _ => None,
        }
    }

    /// Short machine name: `exceptional`, `P^2[4]`, `none`.
    pub fn key(&self) -> String {
        match self {
            UnitClass::Exceptional => "exceptional".into(),
            UnitClass::None => "none".into(),
            c => {
                let (n, k) = c.unit_params().unwrap();
                format!("P^{n}[{k}]")
            }
        }
    }

    /// Parses [`UnitClass::key`] output. Any `P^n[k]` spelling is accepted
    /// and normalised.
    pub fn from_key(s: &str) -> Option<UnitClass> {
        match s.trim() {
            "exceptional" => return Some(UnitClass::Exceptional),
            "none" => return Some(UnitClass::None),
            _ => {}
        }
        let rest = s.trim().strip_prefix("P^")?;
        let (n, k) = rest.strip_suffix(']')?.split_once('[')?;
        Some(UnitClass::from_params(n.parse().ok()?, k.parse().ok()?))
    }

    pub fn from_params(n: u32, k: u32) -> UnitClass {
        if n == 1 {
            UnitClass::Spherical { dim: k }
        } else if k == 2 {
            UnitClass::HyperkahlerPn { n }
        } else {
            UnitClass::PnkUnit { n, k }
        }
    }
}

impl fmt::Display for UnitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitClass::Exceptional => write!(f, "exceptional"),
            UnitClass::Spherical { dim } => write!(f, "P^1[{dim}]-unit (spherical)"),
            UnitClass::HyperkahlerPn { n } => write!(f, "P^{n}[2]-unit (hyperkähler P^{n})"),
            UnitClass::PnkUnit { n, k } => write!(f, "P^{n}[{k}]-unit"),
            UnitClass::None => write!(f, "none"),
        }
    }
}

/// Why a unit classification was refused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum UnitFailure {
    /// Invariant dimensions are not those of `C[x]/x^{n+1}`.
    Shape,
    /// The degree-`k` invariant has `x^power = 0` with `power ≤ n`.
    Generation { power: u32 },
    /// Some group element moves the top class.
    TopNotFixed,
}

impl fmt::Display for UnitFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitFailure::Shape => write!(f, "invariant dimensions do not match C[x]/x^(n+1)"),
            UnitFailure::Generation { power } => write!(f, "generation fails at x^{power}"),
            UnitFailure::TopNotFixed => write!(f, "top class is not invariant"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub hilbert: Vec<u64>,
    /// Degree of the candidate generator `x`, when the shape singles one out.
    pub k: Option<u32>,
    pub generator_x: Option<AlgebraElement>,
    /// `x^1, …, x^n`, up to the first vanishing power.
    pub witness_powers: Vec<AlgebraElement>,
    pub top_fixed: bool,
    pub classification: UnitClass,
    pub failure: Option<UnitFailure>,
}

/// `Σ count · root`, built directly at the common level.
fn sum_of_roots(counts: &HashMap<RootOfUnity, u64>) -> Cyclotomic {
    let level = counts.keys().fold(1u64, |l, r| l.lcm(&r.den()));
    let mut raw = vec![BigRational::zero(); level as usize];
    for (r, &c) in counts {
        let j = r.exponent_at(level).expect("level is a multiple") as usize;
        raw[j] += BigRational::from_integer(BigInt::from(c));
    }
    Cyclotomic::from_raw(level as u32, raw)
}

/// Images of `m` under every group element, grouped by target monomial.
fn orbit_images(g: &ActionGroup, m: &Monomial) -> BTreeMap<Monomial, HashMap<RootOfUnity, u64>> {
    let mut acc: BTreeMap<Monomial, HashMap<RootOfUnity, u64>> = BTreeMap::new();
    for s in g.elements() {
        let (img, r) = s.apply_monomial(m);
        *acc.entry(img).or_default().entry(r).or_default() += 1;
    }
    acc
}

/// `(1/|G|) Σ_σ σ(a)`.
pub fn reynolds(g: &ActionGroup, a: &AlgebraElement) -> AlgebraElement {
    let inv_order = BigRational::new(BigInt::one(), BigInt::from(g.order()));
    let mut out = AlgebraElement::zero(a.algebra());
    for (m, c) in a.terms() {
        for (img, counts) in orbit_images(g, m) {
            let s = sum_of_roots(&counts);
            if !s.is_zero() {
                out.add_term(img, (c * &s).scale(&inv_order));
            }
        }
    }
    out
}

/// A basis of the degree-`d` invariants: one Reynolds image per monomial
/// orbit, dropping the orbits whose image vanishes.
///
/// Reynolds images of monomials in one orbit are proportional and images of
/// different orbits have disjoint supports, so the surviving images are
/// already independent and no elimination step is needed. Each element is
/// normalised to have coefficient 1 on its least monomial.
pub fn invariant_basis(g: &ActionGroup, d: u32) -> Vec<AlgebraElement> {
    let alg = g.algebra();
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut out = Vec::new();
    for m in alg.basis_of_degree(d) {
        if seen.contains(&m) {
            continue;
        }
        let images = orbit_images(g, &m);
        seen.extend(images.keys().cloned());
        let mut e = AlgebraElement::zero(alg);
        for (img, counts) in images {
            e.add_term(img, sum_of_roots(&counts));
        }
        if let Some((_, lead)) = e.terms().iter().next() {
            let lead = lead.inv();
            out.push(e.scale(&lead));
        }
    }
    out
}

/// Number of monomial orbits whose Reynolds image survives, per degree.
pub fn invariant_hilbert(g: &ActionGroup) -> Vec<u64> {
    let alg = g.algebra();
    let mut h = vec![0u64; alg.top_degree() as usize + 1];
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    for m in alg.basis() {
        if seen.contains(&m) {
            continue;
        }
        let images = orbit_images(g, &m);
        let survives = images.values().any(|c| !sum_of_roots(c).is_zero());
        seen.extend(images.into_keys());
        if survives {
            h[alg.degree_of(&m) as usize] += 1;
        }
    }
    h
}

/// Scalar by which `s` acts on the top class.
pub fn top_scalar(s: &ProductAutomorphism) -> RootOfUnity {
    s.apply_monomial(&s.algebra().top_monomial()).1
}

/// Classifies `O_X` for `X = X'/G` from the invariant algebra.
pub fn classify_unit(g: &ActionGroup) -> InvariantReport {
    let hilbert = invariant_hilbert(g);
    let top_fixed = g.elements().iter().all(|s| top_scalar(s).is_one());
    let mut report = InvariantReport {
        hilbert: hilbert.clone(),
        k: None,
        generator_x: None,
        witness_powers: Vec::new(),
        top_fixed,
        classification: UnitClass::None,
        failure: None,
    };
    let top = hilbert.len() - 1;
    let positive: Vec<usize> = (1..=top).filter(|&d| hilbert[d] != 0).collect();
    if hilbert[0] == 1 && positive.is_empty() {
        report.classification = UnitClass::Exceptional;
        return report;
    }
    let Some(&k) = positive.first() else {
        report.failure = Some(UnitFailure::Shape);
        return report;
    };
    let shape_ok = top.is_multiple_of(k)
        && hilbert.iter().enumerate().all(|(d, &c)| c == u64::from(d % k == 0));
    if !shape_ok {
        report.failure = Some(UnitFailure::Shape);
        return report;
    }
    let n = (top / k) as u32;
    report.k = Some(k as u32);
    let x = invariant_basis(g, k as u32).remove(0);
    let mut p = x.clone();
    let mut generated = true;
    for i in 1..=n {
        if i > 1 {
            p = p.multiply(&x).expect("same algebra");
        }
        let zero = p.is_zero();
        report.witness_powers.push(p.clone());
        if zero {
            report.failure = Some(UnitFailure::Generation { power: i });
            generated = false;
            break;
        }
    }
    report.generator_x = Some(x);
    if !generated {
        return report;
    }
    if !top_fixed {
        report.failure = Some(UnitFailure::TopNotFixed);
        return report;
    }
    report.classification = UnitClass::from_params(n, k as u32);
    report
}

/// Eigenvalues of `s` on the span of the basis monomials, per degree,
/// as a multiset of roots of unity.
///
/// `s` permutes monomials up to scalars; on a cycle of length `L` whose
/// scalars multiply to `P` it has each `L`-th root of `P` as an eigenvalue
/// exactly once.
pub fn monomial_eigenvalues(s: &ProductAutomorphism) -> Vec<(u32, RootOfUnity)> {
    let alg = s.algebra();
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut out = Vec::new();
    for m in alg.basis() {
        if seen.contains(&m) {
            continue;
        }
        let deg = alg.degree_of(&m);
        let mut product = RootOfUnity::ONE;
        let mut len = 0u64;
        let mut cur = m.clone();
        loop {
            seen.insert(cur.clone());
            let (next, r) = s.apply_monomial(&cur);
            product = product * r;
            len += 1;
            if next == m {
                break;
            }
            cur = next;
        }
        for j in 0..len {
            let lambda = RootOfUnity::new((product.num() + j * product.den()) as i64, product.den() * len);
            out.push((deg, lambda));
        }
    }
    out
}

/// Splits the algebra into eigenspaces of the distinguished generator `g`
/// of a cyclic group. Eigenspace `s` holds the classes that `g` scales by
/// `χ(g)^{-s}`, where `χ(g)` is its scalar on the top class, for
/// `0 ≤ s < ord χ(g)`. Eigenvalues outside the powers of `χ(g)` are not
/// reported.
pub fn character_eigenspaces(g: &ActionGroup) -> Result<BTreeMap<u64, Vec<u64>>, ActionError> {
    let gen = g.cyclic_generator()?;
    let chi = top_scalar(gen);
    let top = g.algebra().top_degree() as usize;
    let mut spaces: BTreeMap<u64, Vec<u64>> =
        (0..chi.order()).map(|s| (s, vec![0u64; top + 1])).collect();
    let lookup: HashMap<RootOfUnity, u64> = (0..chi.order()).map(|s| (chi.pow(-(s as i64)), s)).collect();
    for (deg, lambda) in monomial_eigenvalues(gen) {
        if let Some(s) = lookup.get(&lambda) {
            spaces.get_mut(s).unwrap()[deg as usize] += 1;
        }
    }
    Ok(spaces)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::action::group_closure;
    use crate::algebra::{GeneratorSpec, KunnethAlgebra};

    fn hk_alg(names: &[&str], d: u32) -> Arc<KunnethAlgebra> {
        Arc::new(
            KunnethAlgebra::new(
                names.iter().enumerate().map(|(i, n)| GeneratorSpec::new(*n, 2, d + 1, i)).collect(),
            )
            .unwrap(),
        )
    }

    fn trivial(a: &Arc<KunnethAlgebra>) -> ActionGroup {
        group_closure(a, &[], 10).unwrap()
    }

    fn scaling(a: &Arc<KunnethAlgebra>, exps: &[i64], m: u64) -> ProductAutomorphism {
        ProductAutomorphism::diagonal(a, exps.iter().map(|&e| RootOfUnity::new(e, m)).collect()).unwrap()
    }

    #[test]
    fn reynolds_examples() {
        let a = hk_alg(&["y"], 2);
        let y = AlgebraElement::generator(&a, 0);
        assert_eq!(reynolds(&trivial(&a), &y), y);
        let g = group_closure(&a, &[scaling(&a, &[1], 3)], 10).unwrap();
        assert!(reynolds(&g, &y).is_zero());

        let b = hk_alg(&["y1", "y2"], 2);
        let g = group_closure(&b, &[scaling(&b, &[1, 2], 3)], 10).unwrap();
        let p = AlgebraElement::generator(&b, 0).multiply(&AlgebraElement::generator(&b, 1)).unwrap();
        assert_eq!(reynolds(&g, &p), p);
    }

    #[test]
    fn enriques_invariants() {
        for n in 1..5u32 {
            let a = hk_alg(&["y"], n);
            let g = group_closure(&a, &[scaling(&a, &[1], n as u64 + 1)], 10).unwrap();
            assert!(invariant_basis(&g, 2).is_empty());
            assert_eq!(invariant_basis(&g, 0), vec![AlgebraElement::one(&a)]);
            assert_eq!(classify_unit(&g).classification, UnitClass::Exceptional);
        }
    }

    #[test]
    fn hilbert_examples() {
        let a = hk_alg(&["y"], 2);
        assert_eq!(invariant_hilbert(&trivial(&a)), vec![1, 0, 1, 0, 1]);

        let b = hk_alg(&["y1", "y2"], 2);
        let g = group_closure(&b, &[scaling(&b, &[1, 2], 3)], 10).unwrap();
        assert_eq!(invariant_hilbert(&g), vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);

        // Σ₂ on CY₄ × CY₄: symmetric tensors of C ⊕ C[-4] have dims 1, 1, 1
        let c = Arc::new(
            KunnethAlgebra::new(vec![GeneratorSpec::new("z1", 4, 2, 0), GeneratorSpec::new("z2", 4, 2, 1)])
                .unwrap(),
        );
        let swap = ProductAutomorphism::new(&c, vec![1, 0], vec![RootOfUnity::ONE; 2]).unwrap();
        let h = invariant_hilbert(&group_closure(&c, &[swap], 10).unwrap());
        let mut sym = vec![0u64; 9];
        for i in 0..2usize {
            for j in i..2usize {
                sym[4 * (i + j)] += 1;
            }
        }
        assert_eq!(h, sym);
    }

    #[test]
    fn classify_examples() {
        let nonexample = Arc::new(
            KunnethAlgebra::new(vec![GeneratorSpec::new("z", 8, 2, 0), GeneratorSpec::new("z'", 4, 2, 1)])
                .unwrap(),
        );
        let r = classify_unit(&trivial(&nonexample));
        assert_eq!(r.classification, UnitClass::None);
        assert_eq!(r.failure, Some(UnitFailure::Generation { power: 2 }));
        assert_eq!(r.generator_x.unwrap(), AlgebraElement::named(&nonexample, "z'").unwrap());

        for n in 1..5 {
            let a = hk_alg(&["y"], n);
            let r = classify_unit(&trivial(&a));
            assert_eq!(r.classification.unit_params(), Some((n, 2)));
        }

        let b = hk_alg(&["y1", "y2"], 2);
        let g = group_closure(&b, &[scaling(&b, &[1, 2], 3)], 10).unwrap();
        let r = classify_unit(&g);
        assert_eq!(r.classification, UnitClass::PnkUnit { n: 2, k: 4 });
        let y1y2 = AlgebraElement::generator(&b, 0).multiply(&AlgebraElement::generator(&b, 1)).unwrap();
        assert_eq!(r.generator_x.unwrap(), y1y2);
    }

    #[test]
    fn moving_top_class_breaks_the_shape() {
        // y2 ↦ -y2 on K3 × K3: invariants 1 and y1, top class y1·y2 is negated
        let a = hk_alg(&["y1", "y2"], 1);
        let g = group_closure(&a, &[scaling(&a, &[0, 1], 2)], 10).unwrap();
        let r = classify_unit(&g);
        assert_eq!(r.hilbert, vec![1, 0, 1, 0, 0]);
        assert!(!r.top_fixed);
        assert_eq!(r.failure, Some(UnitFailure::Shape));
    }

    #[test]
    fn eigenspaces() {
        for n in 1..6u32 {
            let a = hk_alg(&["y"], n);
            let g = group_closure(&a, &[scaling(&a, &[1], n as u64 + 1)], 10).unwrap();
            let sp = character_eigenspaces(&g).unwrap();
            assert_eq!(sp.len(), n as usize + 1);
            for (s, h) in &sp {
                for (d, &c) in h.iter().enumerate() {
                    assert_eq!(c, u64::from(d as u64 == 2 * s), "n={n} s={s} d={d}");
                }
            }
        }
        let a = hk_alg(&["y"], 2);
        let sp = character_eigenspaces(&trivial(&a)).unwrap();
        assert_eq!(sp.into_iter().collect::<Vec<_>>(), vec![(0, vec![1, 0, 1, 0, 1])]);

        let k3 = hk_alg(&["y"], 1);
        let g = group_closure(&k3, &[scaling(&k3, &[1], 2)], 10).unwrap();
        let sp = character_eigenspaces(&g).unwrap();
        assert_eq!(sp[&0], vec![1, 0, 0]);
        assert_eq!(sp[&1], vec![0, 0, 1]);
    }

    #[test]
    fn eigenvalues_of_a_swap() {
        let a = hk_alg(&["y1", "y2"], 1);
        let swap = ProductAutomorphism::new(&a, vec![1, 0], vec![RootOfUnity::ONE; 2]).unwrap();
        let mut ev: Vec<(u32, RootOfUnity)> = monomial_eigenvalues(&swap);
        ev.sort();
        assert_eq!(
            ev,
            vec![(0, RootOfUnity::ONE), (2, RootOfUnity::ONE), (2, RootOfUnity::MINUS_ONE), (4, RootOfUnity::ONE)]
        );
    }

    #[test]
    fn unit_class_keys_round_trip() {
        for c in [
            UnitClass::Exceptional,
            UnitClass::None,
            UnitClass::Spherical { dim: 4 },
            UnitClass::HyperkahlerPn { n: 3 },
            UnitClass::PnkUnit { n: 2, k: 8 },
        ] {
            assert_eq!(UnitClass::from_key(&c.key()), Some(c));
        }
        assert_eq!(UnitClass::from_key("P^1[6]"), Some(UnitClass::Spherical { dim: 6 }));
        assert_eq!(UnitClass::from_key("bogus"), None);
    }
}
