//! Polynomial-time quasi-projectivity deciders, one per structure class.
//!
//! * posets: chain or antichain; lattices: chain
//! * permutations: always
//! * loopless graphs/digraphs: complete or empty
//! * graphs/digraphs with loops: the full relation, or no edges between
//!   distinct vertices and either no loops or every loop
//! * hypergraphs: no edges, or every nonempty set of at most `k` vertices is
//!   an edge, `k` the largest edge size
//! * geometries: no lines, or every pair of points on a singular line, or the
//!   regular-line condition selected by [`GeometryMode`]

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structures::{classify_lines, BitMatrix, ElementSet, FiniteStructure, StructureKind};

/// Reading of the regular-line case for geometries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GeometryMode {
    /// Every point lies on some regular line.
    Literal,
    /// A single regular line holding every point.
    #[default]
    Strict,
}

impl GeometryMode {
    pub fn name(self) -> &'static str {
        match self {
            GeometryMode::Literal => "literal",
            GeometryMode::Strict => "strict",
        }
    }
}

impl fmt::Display for GeometryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeometryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(GeometryMode::Literal),
            "strict" => Ok(GeometryMode::Strict),
            other => Err(Error::Precondition(format!("unknown geometry mode `{other}`"))),
        }
    }
}

/// Why a structure fails the characterisation, with the offending elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    /// `u < v` inside one component, `w` in another.
    Disconnected { u: usize, v: usize, w: usize },
    /// `u < v`, `u < w` with `v`, `w` incomparable; mirrored when `dual`.
    Fork { u: usize, v: usize, w: usize, dual: bool },
    /// `missing` is absent, `present` is an edge/arc between distinct vertices.
    MissingAndPresent { missing: (usize, usize), present: (usize, usize) },
    /// `vertex` has no loop while `related` is in the relation.
    MissingLoop { vertex: usize, related: (usize, usize) },
    /// `edge` is an edge at least as large as the non-edge `missing`.
    MissingSubset { edge: ElementSet, missing: ElementSet },
    /// Only singular lines; `pair` is on none of them.
    SingularGap { line: ElementSet, pair: (usize, usize) },
    /// `points` has as many points as the regular `line` and lies on no line.
    NonCollinear { line: ElementSet, points: ElementSet },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::Disconnected { u, v, w } => write!(f, "disconnected u={u} v={v} w={w}"),
            Defect::Fork { u, v, w, dual } => {
                write!(f, "{} u={u} v={v} w={w}", if *dual { "dual-fork" } else { "fork" })
            }
            Defect::MissingAndPresent { missing, present } => {
                write!(f, "missing ({},{}) present ({},{})", missing.0, missing.1, present.0, present.1)
            }
            Defect::MissingLoop { vertex, related } => {
                write!(f, "missing-loop {vertex} related ({},{})", related.0, related.1)
            }
            Defect::MissingSubset { edge, missing } => write!(f, "edge {edge} missing {missing}"),
            Defect::SingularGap { line, pair } => {
                write!(f, "singular {line} gap ({},{})", pair.0, pair.1)
            }
            Defect::NonCollinear { line, points } => write!(f, "regular {line} non-collinear {points}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Chain,
    Antichain,
    Permutation,
    Complete,
    Empty,
    EEmptyAllLoops,
    EEmptyNoLoops,
    DownwardComplete(usize),
    NoLines,
    AllPairsSingular,
    RegularCovered,
    NotCharacterized(Defect),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Chain => f.write_str("Chain"),
            Reason::Antichain => f.write_str("Antichain"),
            Reason::Permutation => f.write_str("Permutation"),
            Reason::Complete => f.write_str("Complete"),
            Reason::Empty => f.write_str("Empty"),
            Reason::EEmptyAllLoops => f.write_str("EEmptyAllLoops"),
            Reason::EEmptyNoLoops => f.write_str("EEmptyNoLoops"),
            Reason::DownwardComplete(k) => write!(f, "DownwardComplete({k})"),
            Reason::NoLines => f.write_str("NoLines"),
            Reason::AllPairsSingular => f.write_str("AllPairsSingular"),
            Reason::RegularCovered => f.write_str("RegularCovered"),
            Reason::NotCharacterized(_) => f.write_str("NotCharacterized"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub qp: bool,
    pub reason: Reason,
}

impl Verdict {
    fn yes(reason: Reason) -> Self {
        Verdict { qp: true, reason }
    }

    fn no(defect: Defect) -> Self {
        Verdict { qp: false, reason: Reason::NotCharacterized(defect) }
    }

    pub fn defect(&self) -> Option<&Defect> {
        match &self.reason {
            Reason::NotCharacterized(d) => Some(d),
            _ => None,
        }
    }
}

/// Kind check plus axiom validation.
fn admit(s: &FiniteStructure, kinds: &[StructureKind]) -> Result<()> {
    if !kinds.contains(&s.kind()) {
        return Err(Error::KindMismatch { expected: kinds[0], found: s.kind() });
    }
    s.validate().map_err(|violation| Error::Invalid { kind: s.kind(), violation })
}

/// Dispatches on the structure's kind.
pub fn decide(s: &FiniteStructure, mode: GeometryMode) -> Result<Verdict> {
    match s.kind() {
        StructureKind::Poset => decide_poset(s),
        StructureKind::Lattice => decide_lattice(s),
        StructureKind::Permutation => decide_permutation(s),
        StructureKind::GraphSimple | StructureKind::GraphLoops => decide_graph(s),
        StructureKind::DigraphSimple | StructureKind::DigraphLoops => decide_digraph(s),
        StructureKind::Hypergraph => decide_hypergraph(s),
        StructureKind::Geometry => decide_geometry(s, mode),
    }
}

fn comparable(m: &BitMatrix, a: usize, b: usize) -> bool {
    m.get(a, b) || m.get(b, a)
}

fn is_chain(m: &BitMatrix) -> bool {
    let n = m.size();
    (0..n).tuple_combinations().all(|(a, b)| comparable(m, a, b))
}

fn is_antichain(m: &BitMatrix) -> bool {
    m.count() == m.size()
}

/// Component label of each element under comparability.
pub(crate) fn components(m: &BitMatrix) -> Vec<usize> {
    let n = m.size();
    let mut label = vec![usize::MAX; n];
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for (y, ly) in label.iter_mut().enumerate() {
                if *ly == usize::MAX && comparable(m, x, y) {
                    *ly = start;
                    stack.push(y);
                }
            }
        }
    }
    label
}

/// First `(u, v, w)` with `u < v`, `u < w`, `v ∥ w`.
pub(crate) fn find_fork(m: &BitMatrix) -> Option<(usize, usize, usize)> {
    let n = m.size();
    (0..n)
        .flat_map(|u| (0..n).flat_map(move |v| (0..n).map(move |w| (u, v, w))))
        .find(|&(u, v, w)| u != v && u != w && v != w && m.get(u, v) && m.get(u, w) && !comparable(m, v, w))
}

fn order_defect(m: &BitMatrix) -> Defect {
    let comp = components(m);
    let n = m.size();
    if comp.iter().any(|&c| c != comp[0]) {
        let (u, v) = m.pairs().find(|&(a, b)| a != b).expect("not an antichain");
        let w = (0..n).find(|&x| comp[x] != comp[u]).expect("disconnected");
        return Defect::Disconnected { u, v, w };
    }
    if let Some((u, v, w)) = find_fork(m) {
        return Defect::Fork { u, v, w, dual: false };
    }
    let (u, v, w) = find_fork(&m.transpose()).expect("connected non-chain has a fork or its dual");
    Defect::Fork { u, v, w, dual: true }
}

pub fn decide_poset(s: &FiniteStructure) -> Result<Verdict> {
    admit(s, &[StructureKind::Poset])?;
    let m = s.relation().expect("order payload");
    Ok(if is_chain(m) {
        Verdict::yes(Reason::Chain)
    } else if is_antichain(m) {
        Verdict::yes(Reason::Antichain)
    } else {
        Verdict::no(order_defect(m))
    })
}

pub fn decide_lattice(s: &FiniteStructure) -> Result<Verdict> {
    admit(s, &[StructureKind::Lattice])?;
    let m = s.relation().expect("order payload");
    Ok(if is_chain(m) { Verdict::yes(Reason::Chain) } else { Verdict::no(order_defect(m)) })
}

pub fn decide_permutation(s: &FiniteStructure) -> Result<Verdict> {
    admit(s, &[StructureKind::Permutation])?;
    Ok(Verdict::yes(Reason::Permutation))
}

fn decide_binary_graph(s: &FiniteStructure) -> Verdict {
    let m = s.relation().expect("graph payload");
    let n = s.len();
    let off_diagonal = || (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)));
    let missing = off_diagonal().find(|&(a, b)| !m.get(a, b));
    let present = off_diagonal().find(|&(a, b)| m.get(a, b));

    if !s.kind().allows_loops() {
        return match (missing, present) {
            (None, _) => Verdict::yes(Reason::Complete),
            (_, None) => Verdict::yes(Reason::Empty),
            (Some(missing), Some(present)) => Verdict::no(Defect::MissingAndPresent { missing, present }),
        };
    }

    let loopless = (0..n).find(|&v| !m.get(v, v));
    match (loopless, missing, present) {
        (None, None, _) => Verdict::yes(Reason::Complete),
        (None, Some(_), None) => Verdict::yes(Reason::EEmptyAllLoops),
        (Some(_), _, None) if m.count() == 0 => Verdict::yes(Reason::EEmptyNoLoops),
        (Some(vertex), _, _) => {
            let related = m.pairs().next().expect("relation is nonempty");
            Verdict::no(Defect::MissingLoop { vertex, related })
        }
        (None, Some(missing), Some(present)) => Verdict::no(Defect::MissingAndPresent { missing, present }),
    }
}

pub fn decide_graph(s: &FiniteStructure) -> Result<Verdict> {
    admit(s, &[StructureKind::GraphSimple, StructureKind::GraphLoops])?;
    Ok(decide_binary_graph(s))
}

pub fn decide_digraph(s: &FiniteStructure) -> Result<Verdict> {
    admit(s, &[StructureKind::DigraphSimple, StructureKind::DigraphLoops])?;
    Ok(decide_binary_graph(s))
}

/// Nonempty subsets of `0..n` of size `size`, in lexicographic order.
fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = ElementSet> {
    (0..n).combinations(size).map(|c| c.into_iter().collect())
}

pub fn decide_hypergraph(s: &FiniteStructure) -> Result<Verdict> {
    admit(s, &[StructureKind::Hypergraph])?;
    let edges = s.sets().expect("hypergraph payload");
    let Some(k) = edges.iter().map(|e| e.len()).max() else {
        return Ok(Verdict::yes(Reason::Empty));
    };
    let present: HashSet<ElementSet> = edges.iter().copied().collect();
    // Each probe either hits a distinct edge or stops, so this runs at most |E|+1 probes.
    let missing = (1..=k).flat_map(|size| subsets_of_size(s.len(), size)).find(|u| !present.contains(u));
    Ok(match missing {
        None => Verdict::yes(Reason::DownwardComplete(k)),
        Some(missing) => {
            let edge = edges.iter().copied().filter(|e| e.len() == k).min().expect("an edge of maximum size exists");
            Verdict::no(Defect::MissingSubset { edge, missing })
        }
    })
}

pub fn decide_geometry(s: &FiniteStructure, mode: GeometryMode) -> Result<Verdict> {
    admit(s, &[StructureKind::Geometry])?;
    let n = s.len();
    let lines = s.sets().expect("geometry payload");
    let classes = classify_lines(s)?;
    if lines.is_empty() {
        return Ok(Verdict::yes(Reason::NoLines));
    }
    if classes.regular.is_empty() && classes.singular.len() == n * (n - 1) / 2 {
        return Ok(Verdict::yes(Reason::AllPairsSingular));
    }
    let covered = match mode {
        GeometryMode::Literal => {
            let on_regular = classes.regular.iter().fold(0u64, |acc, l| acc | l.mask());
            on_regular.count_ones() as usize == n
        }
        GeometryMode::Strict => lines.len() == 1 && lines[0].len() == n && n > 2,
    };
    if covered {
        return Ok(Verdict::yes(Reason::RegularCovered));
    }
    let collinear = |a: usize, b: usize| lines.iter().any(|l| l.contains(a) && l.contains(b));
    let defect = match classes.regular.first() {
        Some(&line) => {
            let k = line.len();
            let points = subsets_of_size(n, k)
                .find(|p| !lines.iter().any(|l| p.is_subset(*l)))
                .expect("a regular line that is not the whole point set leaves a non-collinear k-set");
            Defect::NonCollinear { line, points }
        }
        None => {
            let pair = (0..n)
                .tuple_combinations()
                .find(|&(a, b)| !collinear(a, b))
                .expect("not every pair is on a singular line");
            Defect::SingularGap { line: classes.singular[0], pair }
        }
    };
    Ok(Verdict::no(defect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use StructureKind::*;

    fn set(v: &[usize]) -> ElementSet {
        v.iter().copied().collect()
    }

    #[test]
    fn posets() {
        let c4 = FiniteStructure::chain(Poset, 4).unwrap();
        assert_eq!(decide_poset(&c4).unwrap(), Verdict::yes(Reason::Chain));
        let one = FiniteStructure::chain(Poset, 1).unwrap();
        assert_eq!(decide_poset(&one).unwrap().reason, Reason::Chain);
        let anti = FiniteStructure::order_closure(Poset, 3, []).unwrap();
        assert_eq!(decide_poset(&anti).unwrap().reason, Reason::Antichain);
        let v = FiniteStructure::order_closure(Poset, 3, [(0, 1), (0, 2)]).unwrap();
        assert_eq!(decide_poset(&v).unwrap().defect(), Some(&Defect::Fork { u: 0, v: 1, w: 2, dual: false }));
        let lambda = FiniteStructure::order_closure(Poset, 3, [(1, 0), (2, 0)]).unwrap();
        assert_eq!(decide_poset(&lambda).unwrap().defect(), Some(&Defect::Fork { u: 0, v: 1, w: 2, dual: true }));
        let split = FiniteStructure::order_closure(Poset, 3, [(0, 1)]).unwrap();
        assert_eq!(decide_poset(&split).unwrap().defect(), Some(&Defect::Disconnected { u: 0, v: 1, w: 2 }));
    }

    #[test]
    fn lattices() {
        let c3 = FiniteStructure::chain(Lattice, 3).unwrap();
        assert!(decide_lattice(&c3).unwrap().qp);
        let diamond = FiniteStructure::order_closure(Lattice, 4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!decide_lattice(&diamond).unwrap().qp);
        assert!(decide_lattice(&FiniteStructure::chain(Lattice, 1).unwrap()).unwrap().qp);
    }

    #[test]
    fn permutations_always_qp() {
        for seq in [&[0][..], &[1, 0], &[2, 0, 1]] {
            let p = FiniteStructure::permutation(seq).unwrap();
            assert!(decide_permutation(&p).unwrap().qp);
        }
    }

    #[test]
    fn graphs() {
        let k4 = FiniteStructure::complete(GraphSimple, 4).unwrap();
        assert_eq!(decide_graph(&k4).unwrap().reason, Reason::Complete);
        let path = FiniteStructure::graph(GraphSimple, 3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            decide_graph(&path).unwrap().defect(),
            Some(&Defect::MissingAndPresent { missing: (0, 2), present: (0, 1) })
        );
        let partial_loops = FiniteStructure::graph(GraphLoops, 3, [(0, 1), (0, 2), (1, 2), (0, 0), (1, 1)]).unwrap();
        assert_eq!(
            decide_graph(&partial_loops).unwrap().defect(),
            Some(&Defect::MissingLoop { vertex: 2, related: (0, 0) })
        );
        let loops_only = FiniteStructure::graph(DigraphLoops, 3, [(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(decide_digraph(&loops_only).unwrap().reason, Reason::EEmptyAllLoops);
        let nothing = FiniteStructure::graph(DigraphLoops, 2, []).unwrap();
        assert_eq!(decide_digraph(&nothing).unwrap().reason, Reason::EEmptyNoLoops);
        let some_loops = FiniteStructure::graph(GraphLoops, 2, [(1, 1)]).unwrap();
        assert!(!decide_graph(&some_loops).unwrap().qp);
        assert!(decide_graph(&FiniteStructure::complete(GraphLoops, 3).unwrap()).unwrap().qp);
    }

    #[test]
    fn hypergraphs() {
        let h =
            FiniteStructure::from_sets(Hypergraph, 3, [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]])
                .unwrap();
        assert_eq!(decide_hypergraph(&h).unwrap().reason, Reason::DownwardComplete(2));
        let h = FiniteStructure::from_sets(Hypergraph, 2, [vec![0, 1]]).unwrap();
        assert_eq!(
            decide_hypergraph(&h).unwrap().defect(),
            Some(&Defect::MissingSubset { edge: set(&[0, 1]), missing: set(&[0]) })
        );
        let h = FiniteStructure::from_sets::<_, Vec<usize>>(Hypergraph, 2, []).unwrap();
        assert!(decide_hypergraph(&h).unwrap().qp);
    }

    #[test]
    fn geometries() {
        let full = FiniteStructure::from_sets(Geometry, 4, [vec![0, 1, 2, 3]]).unwrap();
        for mode in [GeometryMode::Literal, GeometryMode::Strict] {
            assert_eq!(decide_geometry(&full, mode).unwrap().reason, Reason::RegularCovered);
        }
        let tri = FiniteStructure::from_sets(Geometry, 3, [vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        assert_eq!(decide_geometry(&tri, GeometryMode::Strict).unwrap().reason, Reason::AllPairsSingular);
        let two = FiniteStructure::from_sets(Geometry, 6, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert!(decide_geometry(&two, GeometryMode::Literal).unwrap().qp);
        assert!(!decide_geometry(&two, GeometryMode::Strict).unwrap().qp);
        let partial = FiniteStructure::from_sets(Geometry, 4, [vec![0, 1, 2]]).unwrap();
        assert_eq!(
            decide_geometry(&partial, GeometryMode::Strict).unwrap().defect(),
            Some(&Defect::NonCollinear { line: set(&[0, 1, 2]), points: set(&[0, 1, 3]) })
        );
        let single = FiniteStructure::from_sets(Geometry, 3, [vec![0, 1]]).unwrap();
        assert_eq!(
            decide_geometry(&single, GeometryMode::Strict).unwrap().defect(),
            Some(&Defect::SingularGap { line: set(&[0, 1]), pair: (0, 2) })
        );
    }

    #[test]
    fn kind_mismatch() {
        let g = FiniteStructure::complete(GraphSimple, 2).unwrap();
        assert!(decide_poset(&g).is_err());
        assert!(decide_digraph(&g).is_err());
    }
}
