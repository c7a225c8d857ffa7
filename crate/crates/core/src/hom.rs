//! Homomorphism checking and backtracking search.
//!
//! Elements of the source are assigned in index order. Every relation pair,
//! edge or line of the source is checked once, when its largest member gets
//! its value.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::structures::{ElementSet, FiniteStructure, Mapping, Payload, StructureKind};

#[derive(Clone, Copy, Debug)]
enum Check {
    /// `(a, b)` of relation 0 or 1 must map into the same relation of the target.
    Pair { rel: u8, a: usize, b: usize },
    /// A hyperedge or line.
    Set(ElementSet),
}

#[derive(Debug)]
enum TargetIndex<'a> {
    Relations(Vec<&'a crate::structures::BitMatrix>),
    Edges(HashSet<u64>),
    Lines(&'a [ElementSet]),
}

/// Precomputed hom test for one (source, target) pair.
#[derive(Debug)]
pub struct Checker<'a> {
    source: &'a FiniteStructure,
    target: &'a FiniteStructure,
    triggers: Vec<Vec<Check>>,
    index: TargetIndex<'a>,
}

impl<'a> Checker<'a> {
    pub fn new(source: &'a FiniteStructure, target: &'a FiniteStructure) -> Result<Self> {
        if source.kind() != target.kind() {
            return Err(Error::KindMismatch { expected: source.kind(), found: target.kind() });
        }
        let n = source.len();
        let mut triggers = vec![Vec::new(); n];
        let index = match (source.payload(), target.payload()) {
            (Payload::Relation(m), Payload::Relation(t)) => {
                for (a, b) in m.pairs() {
                    triggers[a.max(b)].push(Check::Pair { rel: 0, a, b });
                }
                TargetIndex::Relations(vec![t])
            }
            (Payload::Orders(m1, m2), Payload::Orders(t1, t2)) => {
                for (rel, m) in [(0u8, m1), (1u8, m2)] {
                    for (a, b) in m.pairs() {
                        if a != b {
                            triggers[a.max(b)].push(Check::Pair { rel, a, b });
                        }
                    }
                }
                TargetIndex::Relations(vec![t1, t2])
            }
            (Payload::Sets(family), Payload::Sets(target_family)) => {
                for &e in family {
                    if let Some(top) = e.max() {
                        triggers[top].push(Check::Set(e));
                    }
                }
                if source.kind() == StructureKind::Hypergraph {
                    TargetIndex::Edges(target_family.iter().map(|e| e.mask()).collect())
                } else {
                    TargetIndex::Lines(target_family)
                }
            }
            _ => unreachable!("payload shape follows kind"),
        };
        Ok(Checker { source, target, triggers, index })
    }

    pub fn source(&self) -> &'a FiniteStructure {
        self.source
    }

    pub fn target(&self) -> &'a FiniteStructure {
        self.target
    }

    fn image(set: ElementSet, values: &[usize]) -> u64 {
        set.iter().fold(0u64, |acc, x| acc | 1 << values[x])
    }

    #[inline]
    fn holds(&self, check: &Check, values: &[usize]) -> bool {
        match (check, &self.index) {
            (&Check::Pair { rel, a, b }, TargetIndex::Relations(rels)) => rels[rel as usize].get(values[a], values[b]),
            (&Check::Set(e), TargetIndex::Edges(edges)) => edges.contains(&Self::image(e, values)),
            (&Check::Set(l), TargetIndex::Lines(lines)) => {
                let img = Self::image(l, values);
                img.count_ones() == 1 || lines.iter().any(|k| img & !k.mask() == 0)
            }
            _ => unreachable!(),
        }
    }

    /// All constraints whose largest member is `x`, given values for `0..=x`.
    #[inline]
    pub fn accepts_at(&self, x: usize, values: &[usize]) -> bool {
        self.triggers[x].iter().all(|c| self.holds(c, values))
    }

    /// Whether a complete assignment is a homomorphism.
    pub fn accepts(&self, values: &[usize]) -> bool {
        (0..self.source.len()).all(|x| self.accepts_at(x, values))
    }

    fn check_map(&self, h: &Mapping) -> Result<()> {
        if h.domain_size() != self.source.len() || h.image_size() != self.target.len() {
            return Err(Error::Dimension(format!(
                "map {}→{} does not fit structures of sizes {} and {}",
                h.domain_size(),
                h.image_size(),
                self.source.len(),
                self.target.len()
            )));
        }
        Ok(())
    }

    pub fn is_hom(&self, h: &Mapping) -> Result<bool> {
        self.check_map(h)?;
        Ok(self.accepts(h.values()))
    }

    /// Depth-first search over assignments with the given candidate values
    /// per source element (each ascending).
    pub fn search<'c>(&'c self, candidates: Vec<&'c [usize]>, surjective: bool) -> Solutions<'c> {
        Solutions::new(self, candidates, surjective)
    }
}

pub fn is_hom(s: &FiniteStructure, t: &FiniteStructure, h: &Mapping) -> Result<bool> {
    Checker::new(s, t)?.is_hom(h)
}

/// Lazy stream of solutions in lexicographic order of the value array.
pub struct Solutions<'c> {
    checker: &'c Checker<'c>,
    candidates: Vec<&'c [usize]>,
    surjective: bool,
    values: Vec<usize>,
    cursor: Vec<usize>,
    cover: Vec<u32>,
    uncovered: usize,
    level: usize,
    done: bool,
}

impl<'c> Solutions<'c> {
    fn new(checker: &'c Checker<'c>, candidates: Vec<&'c [usize]>, surjective: bool) -> Self {
        let n = checker.source.len();
        let m = checker.target.len();
        assert_eq!(candidates.len(), n, "one candidate list per source element");
        let done = candidates.iter().any(|c| c.is_empty()) || (surjective && m > n);
        Solutions {
            checker,
            candidates,
            surjective,
            values: vec![0; n],
            cursor: vec![0; n + 1],
            cover: vec![0; m],
            uncovered: m,
            level: 0,
            done,
        }
    }

    fn assign(&mut self, x: usize, v: usize) {
        self.values[x] = v;
        if self.cover[v] == 0 {
            self.uncovered -= 1;
        }
        self.cover[v] += 1;
    }

    fn unassign(&mut self, x: usize) {
        let v = self.values[x];
        self.cover[v] -= 1;
        if self.cover[v] == 0 {
            self.uncovered += 1;
        }
    }
}

impl Iterator for Solutions<'_> {
    type Item = Mapping;

    fn next(&mut self) -> Option<Mapping> {
        let n = self.values.len();
        while !self.done {
            let lvl = self.level;
            if lvl == n {
                self.level = n - 1;
                self.unassign(n - 1);
                continue;
            }
            let Some(&v) = self.candidates[lvl].get(self.cursor[lvl]) else {
                if lvl == 0 {
                    self.done = true;
                    return None;
                }
                self.level = lvl - 1;
                self.unassign(lvl - 1);
                continue;
            };
            self.cursor[lvl] += 1;
            self.assign(lvl, v);
            let remaining = n - lvl - 1;
            let feasible = !self.surjective || self.uncovered <= remaining;
            if feasible && self.checker.accepts_at(lvl, &self.values) {
                self.level = lvl + 1;
                if self.level == n {
                    return Some(Mapping::new_unchecked(self.values.clone(), self.checker.target.len()));
                }
                self.cursor[lvl + 1] = 0;
            } else {
                self.unassign(lvl);
            }
        }
        None
    }
}

/// A source, a target, per-element candidate sets and whether the map must
/// be onto.
#[derive(Clone, Debug)]
pub struct HomProblem<'a> {
    pub source: &'a FiniteStructure,
    pub target: &'a FiniteStructure,
    pub candidates: Vec<Vec<usize>>,
    pub surjective: bool,
}

impl<'a> HomProblem<'a> {
    /// Every target element is a candidate for every source element.
    pub fn new(source: &'a FiniteStructure, target: &'a FiniteStructure) -> Self {
        HomProblem { source, target, candidates: vec![(0..target.len()).collect(); source.len()], surjective: false }
    }

    pub fn surjective(mut self, surjective: bool) -> Self {
        self.surjective = surjective;
        self
    }

    pub fn with_candidates(mut self, candidates: Vec<Vec<usize>>) -> Self {
        self.candidates = candidates;
        self
    }

    /// Collects every solution.
    pub fn solve_all(&self) -> Result<Vec<Mapping>> {
        let checker = self.checker()?;
        let cands = self.candidate_slices();
        Ok(checker.search(cands, self.surjective).collect())
    }

    pub fn first(&self) -> Result<Option<Mapping>> {
        let checker = self.checker()?;
        let cands = self.candidate_slices();
        let first = checker.search(cands, self.surjective).next();
        Ok(first)
    }

    fn checker(&self) -> Result<Checker<'a>> {
        if self.candidates.len() != self.source.len() {
            return Err(Error::Dimension("one candidate set per source element required".into()));
        }
        if let Some(v) = self.candidates.iter().flatten().find(|&&v| v >= self.target.len()) {
            return Err(Error::Dimension(format!("candidate {v} outside target")));
        }
        Checker::new(self.source, self.target)
    }

    fn candidate_slices(&self) -> Vec<&[usize]> {
        // sorted copies are not needed: callers hand in ascending lists
        self.candidates.iter().map(Vec::as_slice).collect()
    }
}

/// All homomorphisms `s → t` (only the onto ones when `surjective`), in
/// lexicographic order of their value arrays.
pub fn enumerate_homs(s: &FiniteStructure, t: &FiniteStructure, surjective: bool) -> Result<Vec<Mapping>> {
    HomProblem::new(s, t).surjective(surjective).solve_all()
}

/// Searches an endomorphism `φ` of `s` with `j(φ(x)) = f(x)` for every `x`.
///
/// `f` must be a homomorphism and `j` a surjective homomorphism `s → t`.
pub fn find_lift(s: &FiniteStructure, t: &FiniteStructure, f: &Mapping, j: &Mapping) -> Result<Option<Mapping>> {
    let to_target = Checker::new(s, t)?;
    if !to_target.is_hom(f)? {
        return Err(Error::Precondition("f is not a homomorphism".into()));
    }
    if !to_target.is_hom(j)? {
        return Err(Error::Precondition("j is not a homomorphism".into()));
    }
    if !j.is_surjective() {
        return Err(Error::Precondition("j is not surjective".into()));
    }
    let endo = Checker::new(s, s)?;
    Ok(lift_with(&endo, &j.fibres(), f))
}

/// Lift search without precondition checks. `fibres` are the preimage lists
/// of `j`, `endo` checks endomorphisms of the source.
pub(crate) fn lift_with(endo: &Checker<'_>, fibres: &[Vec<usize>], f: &Mapping) -> Option<Mapping> {
    let cands: Vec<&[usize]> = f.values().iter().map(|&y| fibres[y].as_slice()).collect();
    endo.search(cands, false).next()
}
