use std::collections::{BTreeMap, BTreeSet};

use pnk::enumerate::{
    apply_rules, construction_witness, enumerate_covers, enumerate_decompositions, Decomposition, Status, Verdict,
    Witness,
};
use pnk::geometry::{FactorKind, DEFAULT_CAP};

/// Integer partitions of `total` into even parts, then every labelling of
/// each part as HK or (from 4 on) CY.
fn oracle(total: u32) -> BTreeSet<Vec<FactorKind>> {
    fn parts(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            parts(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut ps = Vec::new();
    parts(total, total, &mut Vec::new(), &mut ps);
    let mut out = BTreeSet::new();
    for p in ps.into_iter().filter(|p| p.iter().all(|v| v % 2 == 0)) {
        let mut labelled: Vec<Vec<FactorKind>> = vec![vec![]];
        for v in p {
            let mut opts = vec![FactorKind::Hk(v / 2)];
            if v >= 4 {
                opts.push(FactorKind::Cy(v));
            }
            labelled = labelled
                .into_iter()
                .flat_map(|l| {
                    opts.iter().map(move |o| {
                        let mut l = l.clone();
                        l.push(*o);
                        l
                    })
                })
                .collect();
        }
        for mut l in labelled {
            l.sort();
            out.insert(l);
        }
    }
    out
}

#[test]
fn decompositions_match_partition_oracle() {
    for (n, k) in [(1, 4), (2, 4), (3, 4), (4, 4), (5, 4), (6, 4), (2, 6), (3, 6), (4, 6), (2, 8), (3, 8), (2, 10), (2, 12)] {
        assert!(n * k <= 24);
        let got = enumerate_decompositions(n, k, DEFAULT_CAP).unwrap();
        let set: BTreeSet<Vec<FactorKind>> = got.iter().map(|d| d.factors.clone()).collect();
        assert_eq!(set.len(), got.len(), "duplicates for ({n},{k})");
        assert_eq!(set, oracle(n * k), "({n},{k})");
        assert!(got.iter().all(|d| d.dim() == n * k));
    }
}

fn chi(d: &Decomposition) -> u64 {
    d.factors
        .iter()
        .map(|f| match f {
            FactorKind::Hk(x) => *x as u64 + 1,
            FactorKind::Cy(_) => 2,
            FactorKind::Torus(_) => 0,
        })
        .product()
}

#[test]
fn elimination_witnesses_recheck_from_scratch() {
    for n in 2..=4 {
        let r = enumerate_covers(n, 4, DEFAULT_CAP).unwrap();
        for e in r.with_status(Status::Eliminated) {
            let c = chi(&e.decomposition);
            let killing: Vec<_> = e.traces.iter().filter(|t| t.verdict == Verdict::Eliminated).collect();
            assert!(!killing.is_empty());
            for t in killing {
                match &t.witness {
                    Witness::NotIntegral { chi: w, divisor } => {
                        assert_eq!(*w, c);
                        assert_eq!(*divisor, n as u64 + 1);
                        assert_ne!(c % (n as u64 + 1), 0);
                    }
                    Witness::NotDividing { size, group_order, .. } => {
                        assert_eq!(*group_order, c / (n as u64 + 1), "{}", e.decomposition);
                        assert_ne!(group_order % size, 0);
                    }
                    w => assert!(w.verify(), "{}: {w:?}", e.decomposition),
                }
            }
        }
    }
}

#[test]
fn cy_cube_example_divisibility() {
    let r = enumerate_covers(3, 4, DEFAULT_CAP).unwrap();
    let e = r.entries.iter().find(|e| e.decomposition.to_string() == "CY(4)×CY(4)×CY(4)").unwrap();
    assert_eq!(e.status, Status::Eliminated);
    assert!(e
        .traces
        .iter()
        .any(|t| matches!(t.witness, Witness::NotDividing { size: 3, group_order: 2, .. })));
}

#[test]
fn recipes_are_never_eliminated() {
    for (n, k) in [(2, 4), (3, 4), (4, 4), (5, 4), (2, 6), (3, 6), (4, 6), (2, 8), (3, 8), (2, 10)] {
        let r = enumerate_covers(n, k, DEFAULT_CAP).unwrap();
        assert!(r.soundness_conflicts.is_empty(), "({n},{k}): {:?}", r.soundness_conflicts);
        for e in &r.entries {
            if construction_witness(&e.decomposition, n, k).is_some() {
                assert_eq!(e.status, Status::Constructible, "({n},{k}) {}", e.decomposition);
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let a = serde_json::to_string(&enumerate_covers(3, 4, DEFAULT_CAP).unwrap()).unwrap();
    let b = serde_json::to_string(&enumerate_covers(3, 4, DEFAULT_CAP).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn torus_and_odd_factors_fail_first_rule() {
    for bad in [FactorKind::Torus(2), FactorKind::Cy(3)] {
        let d = Decomposition::new(vec![FactorKind::Hk(2), bad, FactorKind::Hk(1)]);
        let (t, dead) = apply_rules(&d, 2, 4);
        assert!(dead);
        assert_eq!(t.len(), 1);
        assert!(matches!(t[0].witness, Witness::Excluded { .. }));
    }
}

/// Products of two support monomials `y_a y_b` (edges) with multiplicity.
fn square_products(edges: &[(usize, usize)], bound: &[u8]) -> BTreeMap<Vec<u8>, u32> {
    let mut out = BTreeMap::new();
    for i in 0..edges.len() {
        for j in i..edges.len() {
            let mut m = vec![0u8; bound.len()];
            for &(a, b) in [edges[i], edges[j]].iter() {
                m[a] += 1;
                m[b] += 1;
            }
            if m.iter().zip(bound).all(|(e, b)| e <= b) {
                *out.entry(m).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Every covering support of a pair class on factors with `y² ≠ 0` has two
/// definite shapes in `x²`, whatever the edge set.
#[test]
fn square_splitting_holds_for_every_support() {
    // (orbit of each vertex); all vertices carry y^2 ≠ 0
    let layouts: Vec<Vec<usize>> = vec![
        vec![0, 0, 0],
        vec![0, 0, 0, 0],
        vec![0, 1, 1],
        vec![0, 0, 1, 1],
        vec![0, 0, 1, 1, 1],
    ];
    for orbit in layouts {
        let v = orbit.len();
        let bipartite = orbit.contains(&1);
        let pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .filter(|&(a, b)| (orbit[a] != orbit[b]) == bipartite)
            .collect();
        let bound = vec![2u8; v];
        for mask in 1u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
            let covered = (0..v).all(|x| edges.iter().any(|&(a, b)| a == x || b == x));
            if !covered || edges.len() < 2 {
                continue;
            }
            let shapes: BTreeSet<Vec<(usize, u8)>> = square_products(&edges, &bound)
                .into_iter()
                .filter(|(_, c)| *c == 1)
                .map(|(m, _)| {
                    let mut s: Vec<(usize, u8)> =
                        m.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (orbit[i], e)).collect();
                    s.sort();
                    s
                })
                .collect();
            assert!(shapes.len() >= 2, "layout {orbit:?}, edges {edges:?}");
        }
    }
}
