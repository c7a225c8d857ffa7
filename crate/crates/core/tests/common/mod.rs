//! Brute-force reference implementations, written against the payload
//! directly so they share no code with the search engine.
#![allow(dead_code)]

use itertools::Itertools;
use qproj::structures::{ElementSet, FiniteStructure, Payload, StructureKind};

pub const ALL_KINDS: [StructureKind; 9] = StructureKind::ALL;

/// Every map from `0..n` to `0..m`, lexicographic.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0..n).map(|_| 0..m).multi_cartesian_product().collect()
}

fn image(e: ElementSet, h: &[usize]) -> ElementSet {
    e.iter().map(|x| h[x]).collect()
}

pub fn naive_is_hom(s: &FiniteStructure, t: &FiniteStructure, h: &[usize]) -> bool {
    assert_eq!(s.kind(), t.kind());
    let n = s.len();
    match (s.payload(), t.payload()) {
        (Payload::Relation(a), Payload::Relation(b)) => {
            (0..n).all(|x| (0..n).all(|y| !a.get(x, y) || b.get(h[x], h[y])))
        }
        (Payload::Orders(a1, a2), Payload::Orders(b1, b2)) => (0..n)
            .all(|x| (0..n).all(|y| (!a1.get(x, y) || b1.get(h[x], h[y])) && (!a2.get(x, y) || b2.get(h[x], h[y])))),
        (Payload::Sets(es), Payload::Sets(ft)) => match s.kind() {
            StructureKind::Hypergraph => es.iter().all(|&e| ft.contains(&image(e, h))),
            _ => es.iter().all(|&l| {
                let im = image(l, h);
                im.len() == 1 || ft.iter().any(|&k| im.is_subset(k))
            }),
        },
        _ => unreachable!("payload mismatch"),
    }
}

pub fn naive_homs(s: &FiniteStructure, t: &FiniteStructure, surjective: bool) -> Vec<Vec<usize>> {
    all_maps(s.len(), t.len())
        .into_iter()
        .filter(|h| naive_is_hom(s, t, h))
        .filter(|h| !surjective || (0..t.len()).all(|y| h.contains(&y)))
        .collect()
}

pub fn naive_isomorphic(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    if a.kind() != b.kind() || a.len() != b.len() {
        return false;
    }
    let n = a.len();
    (0..n).permutations(n).any(|p| {
        // bijective homs both ways between finite structures of equal size
        naive_is_hom(a, b, &p) && {
            let mut inv = vec![0; n];
            for (x, &y) in p.iter().enumerate() {
                inv[y] = x;
            }
            naive_is_hom(b, a, &inv)
        }
    })
}

/// Labeled structures of a kind on `n` points built from scratch.
pub fn naive_labeled(kind: StructureKind, n: usize) -> Vec<FiniteStructure> {
    let mut out = Vec::new();
    match kind {
        StructureKind::Permutation => {
            for seq in (0..n).permutations(n) {
                out.push(FiniteStructure::permutation(&seq).unwrap());
            }
        }
        StructureKind::Hypergraph | StructureKind::Geometry => {
            let subsets: Vec<u64> =
                (1..(1u64 << n)).filter(|m| kind == StructureKind::Hypergraph || m.count_ones() >= 2).collect();
            for pick in 0..(1u64 << subsets.len()) {
                let family: Vec<ElementSet> = (0..subsets.len())
                    .filter(|i| pick >> i & 1 == 1)
                    .map(|i| ElementSet::from_mask(subsets[i]))
                    .collect();
                let s = FiniteStructure::from_family(kind, n, family).unwrap();
                if s.is_valid() {
                    out.push(s);
                }
            }
        }
        _ => {
            let cells: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).collect();
            for pick in 0..(1u64 << cells.len()) {
                let pairs = (0..cells.len()).filter(|i| pick >> i & 1 == 1).map(|i| cells[i]);
                let s = FiniteStructure::from_pairs(kind, n, pairs).unwrap();
                if s.is_valid() {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Greedy isomorphism classes by pairwise checks.
pub fn naive_class_count(kind: StructureKind, n: usize) -> usize {
    let mut reps: Vec<FiniteStructure> = Vec::new();
    for s in naive_labeled(kind, n) {
        if !reps.iter().any(|r| naive_isomorphic(r, &s)) {
            reps.push(s);
        }
    }
    reps.len()
}

/// Sizes small enough for brute force over all maps.
pub fn small_sizes(kind: StructureKind) -> std::ops::RangeInclusive<usize> {
    match kind {
        StructureKind::DigraphLoops | StructureKind::DigraphSimple | StructureKind::Hypergraph => 1..=2,
        _ => 1..=3,
    }
}
