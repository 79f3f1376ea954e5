use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

mod common;

use common::{coordinates, fixed_space_dimension, rank};
use pnk::action::{group_closure, ActionGroup, ProductAutomorphism};
use pnk::algebra::{AlgebraElement, Cyclotomic, GeneratorSpec, KunnethAlgebra, Monomial, RootOfUnity};
use pnk::constructions;
use pnk::geometry::{canonical_character, DEFAULT_CAP};
use pnk::invariants::{classify_unit, invariant_basis, invariant_hilbert, reynolds};

/// `(degree, nilorder, copies)` per family.
type Families = Vec<(u32, u32, usize)>;

fn families() -> impl Strategy<Value = Families> {
    prop::collection::vec((1u32..=4, 2u32..=3, 1usize..=2), 1..=4)
        .prop_map(|v| v.into_iter().map(|(d, n, c)| (d, if d % 2 == 1 { 2 } else { n }, c)).collect())
        .prop_filter("at most 6 generators", |f: &Families| f.iter().map(|x| x.2).sum::<usize>() <= 6)
}

fn algebra(f: &Families) -> Arc<KunnethAlgebra> {
    let mut gens = Vec::new();
    for (i, &(d, n, c)) in f.iter().enumerate() {
        for j in 0..c {
            let b = gens.len();
            gens.push(GeneratorSpec::new(format!("g{i}_{j}"), d, n, b));
        }
    }
    Arc::new(KunnethAlgebra::new(gens).unwrap())
}

/// An automorphism from swap flags and scalar exponents over `ζ_12`.
fn automorphism(alg: &Arc<KunnethAlgebra>, f: &Families, swaps: &[bool], exps: &[u8]) -> ProductAutomorphism {
    let mut perm = Vec::new();
    let mut start = 0;
    for (i, &(_, _, c)) in f.iter().enumerate() {
        if c == 2 && swaps[i % swaps.len()] {
            perm.extend([start + 1, start]);
        } else {
            perm.extend(start..start + c);
        }
        start += c;
    }
    let scalars = (0..alg.len()).map(|g| RootOfUnity::new(exps[g % exps.len()] as i64 % 12, 12)).collect();
    ProductAutomorphism::new(alg, perm, scalars).unwrap()
}

fn small_root(e: u8) -> RootOfUnity {
    // orders 1, 2, 3, 4, 6
    const CHOICES: [i64; 6] = [0, 6, 4, 3, 2, 9];
    RootOfUnity::new(CHOICES[e as usize % 6], 12)
}

fn group(alg: &Arc<KunnethAlgebra>, f: &Families, gens: &[(Vec<bool>, Vec<u8>)]) -> Option<ActionGroup> {
    let autos: Vec<ProductAutomorphism> = gens
        .iter()
        .map(|(s, e)| {
            let a = automorphism(alg, f, s, &[0]);
            let scalars = (0..alg.len()).map(|g| small_root(e[g % e.len()])).collect();
            ProductAutomorphism::new(alg, a.perm().to_vec(), scalars).unwrap()
        })
        .collect();
    group_closure(alg, &autos, 64).ok()
}

fn element(alg: &Arc<KunnethAlgebra>, picks: &[(usize, i8, u8)]) -> AlgebraElement {
    let basis = alg.basis();
    let terms = picks.iter().map(|&(i, c, r)| {
        let coeff = &Cyclotomic::from_integer(c as i64) * &small_root(r).to_cyclotomic();
        (basis[i % basis.len()].clone(), coeff)
    });
    AlgebraElement::from_terms(alg, terms)
}

fn homogeneous(alg: &Arc<KunnethAlgebra>, d: u32, picks: &[(usize, i8, u8)]) -> AlgebraElement {
    let basis = alg.basis_of_degree(d);
    if basis.is_empty() {
        return AlgebraElement::zero(alg);
    }
    let terms = picks.iter().map(|&(i, c, _)| (basis[i % basis.len()].clone(), Cyclotomic::from_integer(c as i64)));
    AlgebraElement::from_terms(alg, terms)
}

fn picks() -> impl Strategy<Value = Vec<(usize, i8, u8)>> {
    prop::collection::vec((0usize..64, -3i8..=3, 0u8..6), 1..=4)
}

fn group_gens() -> impl Strategy<Value = Vec<(Vec<bool>, Vec<u8>)>> {
    prop::collection::vec((prop::collection::vec(any::<bool>(), 4), prop::collection::vec(0u8..6, 6)), 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_commutativity(f in families(), da in 0u32..6, db in 0u32..6, pa in picks(), pb in picks()) {
        let alg = algebra(&f);
        let a = homogeneous(&alg, da, &pa);
        let b = homogeneous(&alg, db, &pb);
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        let sign = if da % 2 == 1 && db % 2 == 1 { -1 } else { 1 };
        prop_assert_eq!(ab, ba.scale(&Cyclotomic::from_integer(sign)));
    }

    #[test]
    fn associativity(f in families(), pa in picks(), pb in picks(), pc in picks()) {
        let alg = algebra(&f);
        let (a, b, c) = (element(&alg, &pa), element(&alg, &pb), element(&alg, &pc));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn apply_is_a_ring_homomorphism(f in families(), s in prop::collection::vec(any::<bool>(), 4),
                                    e in prop::collection::vec(0u8..12, 6), pa in picks(), pb in picks()) {
        let alg = algebra(&f);
        let g = automorphism(&alg, &f, &s, &e);
        let (a, b) = (element(&alg, &pa), element(&alg, &pb));
        let lhs = g.apply(&a.multiply(&b).unwrap()).unwrap();
        let rhs = g.apply(&a).unwrap().multiply(&g.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = g.apply(&a.add(&b).unwrap()).unwrap();
        prop_assert_eq!(sum, g.apply(&a).unwrap().add(&g.apply(&b).unwrap()).unwrap());
    }

    #[test]
    fn apply_is_equivariant_under_composition(f in families(), s1 in prop::collection::vec(any::<bool>(), 4),
                                              e1 in prop::collection::vec(0u8..12, 6),
                                              s2 in prop::collection::vec(any::<bool>(), 4),
                                              e2 in prop::collection::vec(0u8..12, 6), pa in picks()) {
        let alg = algebra(&f);
        let g = automorphism(&alg, &f, &s1, &e1);
        let h = automorphism(&alg, &f, &s2, &e2);
        let a = element(&alg, &pa);
        let composed = g.compose(&h).unwrap().apply(&a).unwrap();
        prop_assert_eq!(composed, g.apply(&h.apply(&a).unwrap()).unwrap());
        prop_assert_eq!(g.inverse().apply(&g.apply(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn reynolds_is_an_invariant_projection(f in families(), gens in group_gens(), pa in picks()) {
        let alg = algebra(&f);
        let Some(g) = group(&alg, &f, &gens) else { return Ok(()) };
        let a = element(&alg, &pa);
        let r = reynolds(&g, &a);
        prop_assert_eq!(reynolds(&g, &r), r.clone());
        for s in g.generators() {
            prop_assert_eq!(s.apply(&r).unwrap(), r.clone());
        }
    }

    #[test]
    fn canonical_character_is_multiplicative(f in families(), gens in group_gens()) {
        let alg = algebra(&f);
        let Some(g) = group(&alg, &f, &gens) else { return Ok(()) };
        let chi = canonical_character(&g);
        let els = g.elements();
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                let ab = a.compose(b).unwrap();
                let k = els.iter().position(|e| *e == ab).unwrap();
                prop_assert_eq!(chi[k], chi[i] * chi[j]);
            }
        }
    }

    #[test]
    fn invariant_basis_matches_linear_solve(f in families(), gens in group_gens()) {
        let alg = algebra(&f);
        let Some(g) = group(&alg, &f, &gens) else { return Ok(()) };
        for d in 0..=alg.top_degree() {
            let basis = invariant_basis(&g, d);
            let oracle = fixed_space_dimension(&g, d);
            prop_assert_eq!(basis.len(), oracle, "degree {}", d);
            for b in &basis {
                for s in g.generators() {
                    prop_assert_eq!(s.apply(b).unwrap(), b.clone());
                }
            }
            prop_assert_eq!(rank(basis.iter().map(|b| coordinates(&alg, d, b)).collect()), basis.len());
        }
    }

    #[test]
    fn invariant_dimensions_match_trace_average(f in families(), gens in group_gens()) {
        let alg = algebra(&f);
        let Some(g) = group(&alg, &f, &gens) else { return Ok(()) };
        let h = invariant_hilbert(&g);
        for d in 0..=alg.top_degree() {
            let mut total = Cyclotomic::zero();
            for s in g.elements() {
                for m in alg.basis_of_degree(d) {
                    let (img, r) = s.apply_monomial(&m);
                    if img == m {
                        total = &total + &r.to_cyclotomic();
                    }
                }
            }
            let avg = total.scale(&BigRational::new(BigInt::from(1), BigInt::from(g.order())));
            prop_assert_eq!(avg, Cyclotomic::from_integer(h[d as usize] as i64));
        }
    }

    #[test]
    fn unit_classifications_are_palindromic(n in 1u32..=3, k in 1u32..=3, e in 1u32..=3, which in 0usize..4) {
        let s = match which {
            0 => constructions::make_product_cover(n, k),
            1 => constructions::make_wreath(n.min(2), k - 1),
            2 => constructions::make_mixed_n2(2 * e),
            _ => constructions::make_symmetric_stack(n, 2 * e),
        }.unwrap();
        let g = s.group(DEFAULT_CAP).unwrap();
        let rep = classify_unit(&g);
        if rep.classification.unit_params().is_some() {
            let h = &rep.hilbert;
            let rev: Vec<u64> = h.iter().rev().copied().collect();
            prop_assert_eq!(h, &rev);
        }
    }
}

#[test]
fn sum_of_classes_to_the_n_is_n_factorial_times_top() {
    for n in 1..=6u32 {
        let gens = (0..n).map(|i| GeneratorSpec::new(format!("z{i}"), 4, 2, i as usize)).collect();
        let alg = Arc::new(KunnethAlgebra::new(gens).unwrap());
        let mut sum = AlgebraElement::zero(&alg);
        for i in 0..n as usize {
            sum = sum.add(&AlgebraElement::generator(&alg, i)).unwrap();
        }
        let fact: i64 = (1..=n as i64).product();
        let top = AlgebraElement::monomial(&alg, alg.top_monomial(), Cyclotomic::from_integer(fact));
        assert_eq!(sum.power(n), top);
        assert!(sum.power(n + 1).is_zero());
    }
}

#[test]
fn odd_classes_anticommute_in_products() {
    let gens = vec![GeneratorSpec::new("a", 1, 2, 0), GeneratorSpec::new("b", 3, 2, 1)];
    let alg = Arc::new(KunnethAlgebra::new(gens).unwrap());
    let a = AlgebraElement::generator(&alg, 0);
    let b = AlgebraElement::generator(&alg, 1);
    let ab = a.multiply(&b).unwrap();
    assert_eq!(b.multiply(&a).unwrap(), ab.scale(&Cyclotomic::from_integer(-1)));
    assert_eq!(ab.terms().keys().next(), Some(&Monomial(vec![1, 1])));
}

#[test]
fn random_group_generator_is_not_vacuous() {
    let mut built = 0;
    let mut nontrivial = 0;
    for seed in 0..60u32 {
        let f: Families = vec![(2, 3, 2), (1 + seed % 4, 2, 1 + (seed as usize / 4) % 2)];
        let gens = vec![(vec![seed % 2 == 0; 4], (0..6).map(|i| ((seed + i) % 6) as u8).collect())];
        let alg = algebra(&f);
        if let Some(g) = group(&alg, &f, &gens) {
            built += 1;
            nontrivial += usize::from(g.order() > 1);
        }
    }
    assert!(built >= 50, "{built}");
    assert!(nontrivial >= 40, "{nontrivial}");
}
