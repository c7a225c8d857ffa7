//! Isomorphism classes of small structures.
//!
//! Canonical forms minimise an encoding over all `n!` relabelings. Class
//! generation walks labeled structures and marks each new structure's whole
//! orbit as seen, so every class is canonicalised exactly once.

use std::collections::HashSet;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structures::{bits, BitMatrix, ElementSet, FiniteStructure, Payload, StructureKind};

/// Largest `n` that [`canonicalize`] accepts.
pub const MAX_CANONICAL_SIZE: usize = 8;

/// Largest `n` for which [`enumerate_class`] will generate `kind`.
pub fn max_enumeration_size(kind: StructureKind) -> usize {
    match kind {
        StructureKind::Poset | StructureKind::Lattice => 7,
        StructureKind::Permutation => 7,
        StructureKind::GraphSimple => 7,
        StructureKind::GraphLoops => 6,
        StructureKind::DigraphSimple => 5,
        StructureKind::DigraphLoops => 4,
        StructureKind::Hypergraph => 4,
        StructureKind::Geometry => 6,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    /// Relation rows, column 0 in the most significant position.
    Bits(Vec<u64>),
    Sets(Vec<ElementSet>),
}

/// Minimal encoding of a structure over all relabelings; equal exactly for
/// isomorphic structures.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub kind: StructureKind,
    pub n: usize,
    pub code: Code,
}

static PERMUTATIONS: [OnceLock<Vec<Vec<usize>>>; MAX_CANONICAL_SIZE + 1] =
    [const { OnceLock::new() }; MAX_CANONICAL_SIZE + 1];

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> &'static [Vec<usize>] {
    assert!(n <= MAX_CANONICAL_SIZE);
    PERMUTATIONS[n].get_or_init(|| (0..n).permutations(n).collect())
}

fn invert(order: &[usize], out: &mut [usize]) {
    for (i, &x) in order.iter().enumerate() {
        out[x] = i;
    }
}

fn permute_mask(mask: u64, perm: &[usize]) -> u64 {
    bits(mask).fold(0, |acc, x| acc | 1 << perm[x])
}

/// Row `i` of the relabeled matrix in which new element `k` is old element `order[k]`.
#[inline]
fn encoded_row(m: &BitMatrix, order: &[usize], i: usize) -> u64 {
    let n = order.len();
    let row = m.row(order[i]);
    let mut word = 0u64;
    for (j, &oj) in order.iter().enumerate() {
        if row >> oj & 1 == 1 {
            word |= 1 << (n - 1 - j);
        }
    }
    word
}

/// Incrementally compares relabelings of one structure and keeps the minimum.
struct Minimiser<'a> {
    s: &'a FiniteStructure,
    best: Option<Code>,
    best_order: Vec<usize>,
    scratch_rows: Vec<u64>,
    scratch_sets: Vec<ElementSet>,
    inverse: Vec<usize>,
}

impl<'a> Minimiser<'a> {
    fn new(s: &'a FiniteStructure) -> Self {
        Minimiser {
            s,
            best: None,
            best_order: Vec::new(),
            scratch_rows: Vec::new(),
            scratch_sets: Vec::new(),
            inverse: vec![0; s.len()],
        }
    }

    fn offer(&mut self, order: &[usize]) {
        let improved = match self.s.payload() {
            Payload::Relation(m) => self.offer_rows(&[m], order),
            Payload::Orders(a, b) => self.offer_rows(&[a, b], order),
            Payload::Sets(family) => {
                invert(order, &mut self.inverse);
                self.scratch_sets.clear();
                self.scratch_sets
                    .extend(family.iter().map(|e| ElementSet::from_mask(permute_mask(e.mask(), &self.inverse))));
                self.scratch_sets.sort_unstable();
                match &self.best {
                    Some(Code::Sets(best)) if *best <= self.scratch_sets => false,
                    _ => {
                        self.best = Some(Code::Sets(self.scratch_sets.clone()));
                        true
                    }
                }
            }
        };
        if improved {
            self.best_order.clear();
            self.best_order.extend_from_slice(order);
        }
    }

    fn offer_rows(&mut self, rels: &[&BitMatrix], order: &[usize]) -> bool {
        let n = order.len();
        self.scratch_rows.clear();
        let best = match &self.best {
            Some(Code::Bits(b)) => Some(b),
            _ => None,
        };
        let mut smaller = best.is_none();
        for (r, m) in rels.iter().enumerate() {
            for i in 0..n {
                let word = encoded_row(m, order, i);
                if !smaller {
                    let current = best.unwrap()[r * n + i];
                    if word > current {
                        return false;
                    }
                    smaller = word < current;
                }
                self.scratch_rows.push(word);
            }
        }
        if !smaller {
            return false;
        }
        self.best = Some(Code::Bits(self.scratch_rows.clone()));
        true
    }

    fn finish(self) -> (CanonicalForm, Vec<usize>) {
        let form = CanonicalForm {
            kind: self.s.kind(),
            n: self.s.len(),
            code: self.best.expect("at least one relabeling offered"),
        };
        (form, self.best_order)
    }
}

fn check_canonical_size(s: &FiniteStructure) -> Result<()> {
    if s.len() > MAX_CANONICAL_SIZE {
        return Err(Error::BoundExceeded { kind: s.kind(), n: s.len(), max: MAX_CANONICAL_SIZE });
    }
    Ok(())
}

pub fn canonicalize(s: &FiniteStructure) -> Result<CanonicalForm> {
    check_canonical_size(s)?;
    let mut min = Minimiser::new(s);
    for order in permutations(s.len()) {
        min.offer(order);
    }
    Ok(min.finish().0)
}

/// The canonical form together with the relabeled structure that realises it.
pub fn canonical_relabeling(s: &FiniteStructure) -> Result<(CanonicalForm, FiniteStructure)> {
    check_canonical_size(s)?;
    let mut min = Minimiser::new(s);
    for order in permutations(s.len()) {
        min.offer(order);
    }
    let (form, order) = min.finish();
    let mut perm = vec![0; order.len()];
    invert(&order, &mut perm);
    Ok((form, s.permute(&perm)))
}

/// Injective key of a labeled structure within the enumeration bounds.
fn labeled_key(s: &FiniteStructure, perm: &[usize]) -> u128 {
    let n = s.len();
    let mut key = 0u128;
    match s.payload() {
        Payload::Relation(m) => {
            for (a, b) in m.pairs() {
                key |= 1 << (perm[a] * n + perm[b]);
            }
        }
        Payload::Orders(x, y) => {
            for (off, m) in [(0, x), (n * n, y)] {
                for (a, b) in m.pairs() {
                    key |= 1 << (off + perm[a] * n + perm[b]);
                }
            }
        }
        Payload::Sets(family) => {
            for e in family {
                key |= 1 << permute_mask(e.mask(), perm);
            }
        }
    }
    key
}

/// One representative per isomorphism class with its canonical form, sorted
/// by form.
pub fn enumerate_class_with_forms(kind: StructureKind, n: usize) -> Result<Vec<(CanonicalForm, FiniteStructure)>> {
    let max = max_enumeration_size(kind);
    if n == 0 || n > max {
        return Err(Error::BoundExceeded { kind, n, max });
    }
    let mut out = Vec::new();
    if kind == StructureKind::Permutation {
        // Every choice of the second order gives a distinct class; keep the
        // representative whose first order is index order.
        for seq in permutations(n) {
            let s = FiniteStructure::permutation(seq)?;
            out.push((canonicalize(&s)?, s));
        }
    } else {
        let perms = permutations(n);
        let mut seen: HashSet<u128> = HashSet::new();
        let identity: Vec<usize> = (0..n).collect();
        let mut inverse = vec![0; n];
        for_each_labeled(kind, n, |s| {
            if seen.contains(&labeled_key(&s, &identity)) {
                return;
            }
            let mut min = Minimiser::new(&s);
            for order in perms {
                invert(order, &mut inverse);
                seen.insert(labeled_key(&s, &inverse));
                min.offer(order);
            }
            let (form, order) = min.finish();
            invert(&order, &mut inverse);
            out.push((form, s.permute(&inverse)));
        })?;
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// One representative per isomorphism class of valid `kind` structures on
/// `n` elements, ordered by canonical form.
pub fn enumerate_class(kind: StructureKind, n: usize) -> Result<Vec<FiniteStructure>> {
    Ok(enumerate_class_with_forms(kind, n)?.into_iter().map(|(_, s)| s).collect())
}

/// Largest `n` accepted by [`labeled_structures`].
pub const MAX_LABELED_SIZE: usize = 4;

/// Every valid labeled structure of `kind` on `n` elements, found by
/// filtering the whole payload space (no symmetry reduction).
pub fn labeled_structures(kind: StructureKind, n: usize) -> Result<Vec<FiniteStructure>> {
    if n == 0 || n > MAX_LABELED_SIZE {
        return Err(Error::BoundExceeded { kind, n, max: MAX_LABELED_SIZE });
    }
    let matrices = || {
        (0u64..1 << (n * n)).map(move |word| {
            let mut m = BitMatrix::new(n);
            for i in bits(word) {
                m.set(i / n, i % n, true);
            }
            m
        })
    };
    let mut out = Vec::new();
    match kind {
        StructureKind::Permutation => {
            let totals: Vec<BitMatrix> = matrices()
                .filter(|m| {
                    let s = FiniteStructure::from_orders(m.clone(), m.clone()).expect("square");
                    s.is_valid()
                })
                .collect();
            for a in &totals {
                for b in &totals {
                    out.push(FiniteStructure::from_orders(a.clone(), b.clone())?);
                }
            }
        }
        kind if kind.is_binary() => {
            for m in matrices() {
                let s = FiniteStructure::from_matrix(kind, m)?;
                if s.is_valid() {
                    out.push(s);
                }
            }
        }
        _ => for_each_labeled(kind, n, |s| out.push(s))?,
    }
    Ok(out)
}

/// Visits valid labeled structures covering every isomorphism class. Orders
/// are generated with natural labelings only (`a ≤ b` implies `a ≤ b` as
/// indices); other kinds are generated in full.
fn for_each_labeled(kind: StructureKind, n: usize, mut visit: impl FnMut(FiniteStructure)) -> Result<()> {
    let pairs: Vec<(usize, usize)> = match kind {
        StructureKind::Poset | StructureKind::Lattice | StructureKind::GraphSimple => {
            (0..n).tuple_combinations().collect()
        }
        StructureKind::GraphLoops => (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect(),
        StructureKind::DigraphSimple => (0..n).cartesian_product(0..n).filter(|(a, b)| a != b).collect(),
        StructureKind::DigraphLoops => (0..n).cartesian_product(0..n).collect(),
        StructureKind::Hypergraph => {
            let subsets = (1u64 << n) - 1;
            for family in 0..(1u64 << subsets) {
                let edges = bits(family).map(|i| ElementSet::from_mask(i as u64 + 1)).collect();
                visit(FiniteStructure::from_family(kind, n, edges)?);
            }
            return Ok(());
        }
        StructureKind::Geometry => {
            let candidates: Vec<ElementSet> =
                (1u64..(1 << n)).filter(|m| m.count_ones() >= 2).map(ElementSet::from_mask).collect();
            let mut chosen = Vec::new();
            return geometry_families(n, &candidates, 0, &mut chosen, &mut visit);
        }
        StructureKind::Permutation => unreachable!("permutations are listed directly"),
    };
    let undirected = kind.is_undirected();
    for word in 0u64..(1 << pairs.len()) {
        let mut m = if kind.is_order() { BitMatrix::identity(n) } else { BitMatrix::new(n) };
        for i in bits(word) {
            let (a, b) = pairs[i];
            m.set(a, b, true);
            if undirected {
                m.set(b, a, true);
            }
        }
        let s = FiniteStructure::from_matrix(kind, m)?;
        if s.is_valid() {
            visit(s);
        }
    }
    Ok(())
}

fn geometry_families(
    n: usize,
    candidates: &[ElementSet],
    from: usize,
    chosen: &mut Vec<ElementSet>,
    visit: &mut impl FnMut(FiniteStructure),
) -> Result<()> {
    visit(FiniteStructure::from_family(StructureKind::Geometry, n, chosen.clone())?);
    for (i, &line) in candidates.iter().enumerate().skip(from) {
        if chosen.iter().all(|l| l.intersection(line).len() <= 1) {
            chosen.push(line);
            geometry_families(n, candidates, i + 1, chosen, visit)?;
            chosen.pop();
        }
    }
    Ok(())
}
