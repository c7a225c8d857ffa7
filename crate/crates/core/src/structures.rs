//! Finite relational structures of the nine supported kinds.
//!
//! Elements are always the dense range `0..n`. Binary relations live in a
//! [`BitMatrix`]; hypergraph edges and geometry lines are [`ElementSet`]s kept
//! sorted and deduplicated.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest element count any structure may have (one `u64` word per row/set).
pub const MAX_ELEMENTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructureKind {
    Poset,
    Lattice,
    Permutation,
    GraphSimple,
    GraphLoops,
    DigraphSimple,
    DigraphLoops,
    Hypergraph,
    Geometry,
}

impl StructureKind {
    pub const ALL: [StructureKind; 9] = [
        StructureKind::Poset,
        StructureKind::Lattice,
        StructureKind::Permutation,
        StructureKind::GraphSimple,
        StructureKind::GraphLoops,
        StructureKind::DigraphSimple,
        StructureKind::DigraphLoops,
        StructureKind::Hypergraph,
        StructureKind::Geometry,
    ];

    /// Name used in structure files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Poset => "poset",
            StructureKind::Lattice => "lattice",
            StructureKind::Permutation => "permutation",
            StructureKind::GraphSimple => "graph",
            StructureKind::GraphLoops => "graph-loops",
            StructureKind::DigraphSimple => "digraph",
            StructureKind::DigraphLoops => "digraph-loops",
            StructureKind::Hypergraph => "hypergraph",
            StructureKind::Geometry => "geometry",
        }
    }

    pub fn is_order(self) -> bool {
        matches!(self, StructureKind::Poset | StructureKind::Lattice)
    }

    pub fn is_graph_like(self) -> bool {
        matches!(
            self,
            StructureKind::GraphSimple
                | StructureKind::GraphLoops
                | StructureKind::DigraphSimple
                | StructureKind::DigraphLoops
        )
    }

    pub fn is_undirected(self) -> bool {
        matches!(self, StructureKind::GraphSimple | StructureKind::GraphLoops)
    }

    pub fn allows_loops(self) -> bool {
        matches!(self, StructureKind::GraphLoops | StructureKind::DigraphLoops)
    }

    /// Kinds whose payload is a single n×n relation.
    pub fn is_binary(self) -> bool {
        self.is_order() || self.is_graph_like()
    }

    /// Kinds whose payload is a family of element sets.
    pub fn is_set_family(self) -> bool {
        matches!(self, StructureKind::Hypergraph | StructureKind::Geometry)
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StructureKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::UnknownKind(s.to_owned()))
    }
}

/// Square boolean matrix with at most [`MAX_ELEMENTS`] rows; bit `j` of row
/// `i` is the pair `(i, j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS, "matrix too large: {n}");
        BitMatrix { n, rows: vec![0; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::new(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Every pair present.
    pub fn full(n: usize) -> Self {
        let mut m = BitMatrix::new(n);
        for row in &mut m.rows {
            *row = low_bits(n);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Row `i` as a bitmask over columns.
    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn transpose(&self) -> Self {
        let mut t = BitMatrix::new(self.n);
        for (i, j) in self.pairs() {
            t.set(j, i, true);
        }
        t
    }

    /// All present pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| bits(self.rows[i]).map(move |j| (i, j)))
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pairs()).finish()
    }
}

#[inline]
pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bit positions of a word, ascending.
#[inline]
pub(crate) fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(b)
        }
    })
}

/// A set of elements stored as a bitmask. Ordered lexicographically by the
/// ascending list of its members, so `{0,2} < {1}` and `{0} < {0,1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_mask(mask: u64) -> Self {
        ElementSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1 << x;
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        bits(self.0)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let p = diff.trailing_zeros();
        // Below p both lists agree. The set holding p continues with p; the
        // other one either ends (and is a prefix) or continues with something larger.
        let (holder, other_rest) =
            if self.0 >> p & 1 == 1 { (Ordering::Less, other.0 >> p) } else { (Ordering::Greater, self.0 >> p) };
        if other_rest == 0 {
            holder.reverse()
        } else {
            holder
        }
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    Relation(BitMatrix),
    /// The two orders of a permutation structure.
    Orders(BitMatrix, BitMatrix),
    Sets(Vec<ElementSet>),
}

/// A finite structure on the elements `0..n`.
///
/// Construction only checks shape (element range, payload matching the
/// kind). Axioms are checked by [`FiniteStructure::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    kind: StructureKind,
    n: usize,
    payload: Payload,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Shape("structures must have at least one element".into()));
    }
    if n > MAX_ELEMENTS {
        return Err(Error::Shape(format!("at most {MAX_ELEMENTS} elements supported, got {n}")));
    }
    Ok(())
}

fn check_index(n: usize, x: usize) -> Result<()> {
    if x >= n {
        Err(Error::Shape(format!("element {x} out of range 0..{n}")))
    } else {
        Ok(())
    }
}

impl FiniteStructure {
    /// A binary-relation structure from its matrix, stored as given.
    pub fn from_matrix(kind: StructureKind, matrix: BitMatrix) -> Result<Self> {
        if !kind.is_binary() {
            return Err(Error::Shape(format!("{kind} is not a binary-relation kind")));
        }
        check_size(matrix.size())?;
        Ok(FiniteStructure { kind, n: matrix.size(), payload: Payload::Relation(matrix) })
    }

    /// A binary-relation structure holding exactly the listed pairs.
    pub fn from_pairs(kind: StructureKind, n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_size(n)?;
        let mut m = BitMatrix::new(n);
        for (a, b) in pairs {
            check_index(n, a)?;
            check_index(n, b)?;
            m.set(a, b, true);
        }
        Self::from_matrix(kind, m)
    }

    /// The reflexive-transitive closure of `pairs` as a poset or lattice.
    pub fn order_closure(
        kind: StructureKind,
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if !kind.is_order() {
            return Err(Error::Shape(format!("{kind} is not an order kind")));
        }
        let mut s = Self::from_pairs(kind, n, pairs)?;
        if let Payload::Relation(m) = &mut s.payload {
            for i in 0..n {
                m.set(i, i, true);
            }
            // Warshall
            for k in 0..n {
                for i in 0..n {
                    if m.get(i, k) {
                        m.rows[i] |= m.rows[k];
                    }
                }
            }
        }
        Ok(s)
    }

    /// A graph or digraph. For undirected kinds every edge is stored in both
    /// directions.
    pub fn graph(kind: StructureKind, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if !kind.is_graph_like() {
            return Err(Error::Shape(format!("{kind} is not a graph kind")));
        }
        let undirected = kind.is_undirected();
        let edges: Vec<_> = edges.into_iter().collect();
        let both = edges.iter().flat_map(|&(a, b)| if undirected { vec![(a, b), (b, a)] } else { vec![(a, b)] });
        Self::from_pairs(kind, n, both)
    }

    /// Chain `0 < 1 < … < n-1`.
    pub fn chain(kind: StructureKind, n: usize) -> Result<Self> {
        Self::order_closure(kind, n, (1..n).map(|i| (i - 1, i)))
    }

    /// Complete structure of a graph kind: every distinct pair, plus every
    /// loop when loops are allowed.
    pub fn complete(kind: StructureKind, n: usize) -> Result<Self> {
        if !kind.is_graph_like() {
            return Err(Error::Shape(format!("{kind} is not a graph kind")));
        }
        check_size(n)?;
        let mut m = BitMatrix::full(n);
        if !kind.allows_loops() {
            for i in 0..n {
                m.set(i, i, false);
            }
        }
        Self::from_matrix(kind, m)
    }

    /// Permutation structure: the first order is index order, the second
    /// lists the elements of `sequence` in increasing order.
    pub fn permutation(sequence: &[usize]) -> Result<Self> {
        let n = sequence.len();
        check_size(n)?;
        let mut seen = vec![false; n];
        for &x in sequence {
            check_index(n, x)?;
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::Shape(format!("element {x} repeated in permutation")));
            }
        }
        let mut first = BitMatrix::new(n);
        let mut second = BitMatrix::new(n);
        for a in 0..n {
            for b in a..n {
                first.set(a, b, true);
                second.set(sequence[a], sequence[b], true);
            }
        }
        Ok(FiniteStructure { kind: StructureKind::Permutation, n, payload: Payload::Orders(first, second) })
    }

    /// Permutation structure from two explicit order matrices.
    pub fn from_orders(first: BitMatrix, second: BitMatrix) -> Result<Self> {
        if first.size() != second.size() {
            return Err(Error::Shape("order matrices differ in size".into()));
        }
        check_size(first.size())?;
        Ok(FiniteStructure {
            kind: StructureKind::Permutation,
            n: first.size(),
            payload: Payload::Orders(first, second),
        })
    }

    /// Hypergraph or geometry from a family of element lists. Duplicates are
    /// merged and the family is sorted.
    pub fn from_sets<I, S>(kind: StructureKind, n: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        check_size(n)?;
        let mut family = Vec::new();
        for set in sets {
            let mut e = ElementSet::EMPTY;
            for x in set {
                check_index(n, x)?;
                e.insert(x);
            }
            family.push(e);
        }
        Self::from_family(kind, n, family)
    }

    pub fn from_family(kind: StructureKind, n: usize, mut family: Vec<ElementSet>) -> Result<Self> {
        if !kind.is_set_family() {
            return Err(Error::Shape(format!("{kind} is not a set-family kind")));
        }
        check_size(n)?;
        if let Some(e) = family.iter().find(|e| !e.is_subset(ElementSet(low_bits(n)))) {
            return Err(Error::Shape(format!("set {e} exceeds element range 0..{n}")));
        }
        family.sort();
        family.dedup();
        Ok(FiniteStructure { kind, n, payload: Payload::Sets(family) })
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    /// Element count.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn relation(&self) -> Option<&BitMatrix> {
        match &self.payload {
            Payload::Relation(m) => Some(m),
            _ => None,
        }
    }

    pub fn orders(&self) -> Option<(&BitMatrix, &BitMatrix)> {
        match &self.payload {
            Payload::Orders(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn sets(&self) -> Option<&[ElementSet]> {
        match &self.payload {
            Payload::Sets(s) => Some(s),
            _ => None,
        }
    }

    /// `(a, b)` in the (first) binary relation.
    pub fn related(&self, a: usize, b: usize) -> bool {
        match &self.payload {
            Payload::Relation(m) | Payload::Orders(m, _) => m.get(a, b),
            Payload::Sets(_) => false,
        }
    }

    /// Relabels element `x` as `perm[x]`.
    pub fn permute(&self, perm: &[usize]) -> FiniteStructure {
        assert_eq!(perm.len(), self.n);
        let remap = |m: &BitMatrix| {
            let mut out = BitMatrix::new(self.n);
            for (a, b) in m.pairs() {
                out.set(perm[a], perm[b], true);
            }
            out
        };
        let payload = match &self.payload {
            Payload::Relation(m) => Payload::Relation(remap(m)),
            Payload::Orders(a, b) => Payload::Orders(remap(a), remap(b)),
            Payload::Sets(family) => {
                let mut out: Vec<ElementSet> = family.iter().map(|e| e.iter().map(|x| perm[x]).collect()).collect();
                out.sort();
                Payload::Sets(out)
            }
        };
        FiniteStructure { kind: self.kind, n: self.n, payload }
    }

    /// Order kinds with the relation reversed.
    pub fn dual(&self) -> FiniteStructure {
        match &self.payload {
            Payload::Relation(m) => {
                FiniteStructure { kind: self.kind, n: self.n, payload: Payload::Relation(m.transpose()) }
            }
            _ => self.clone(),
        }
    }

    /// Checks every axiom of the structure's kind and reports the first
    /// violation found, scanning offending elements in lexicographic order.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        match (&self.payload, self.kind) {
            (Payload::Relation(m), StructureKind::Poset) => check_partial_order(m, 0),
            (Payload::Relation(m), StructureKind::Lattice) => {
                check_partial_order(m, 0)?;
                check_lattice(m)
            }
            (Payload::Orders(a, b), StructureKind::Permutation) => {
                check_partial_order(a, 1)?;
                check_total(a, 1)?;
                check_partial_order(b, 2)?;
                check_total(b, 2)
            }
            (Payload::Relation(m), kind) if kind.is_graph_like() => check_graph(m, kind),
            (Payload::Sets(family), StructureKind::Hypergraph) => match family.iter().find(|e| e.is_empty()) {
                Some(_) => Err(Violation::new(Axiom::EmptyEdge, 0, vec![])),
                None => Ok(()),
            },
            (Payload::Sets(family), StructureKind::Geometry) => check_geometry(family),
            _ => unreachable!("payload shape is fixed by the constructors"),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// The axiom a structure fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Reflexivity,
    Antisymmetry,
    Transitivity,
    Totality,
    NoJoin,
    NoMeet,
    Symmetry,
    Loop,
    EmptyEdge,
    ShortLine,
    PairOnTwoLines,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Reflexivity => "reflexivity",
            Axiom::Antisymmetry => "antisymmetry",
            Axiom::Transitivity => "transitivity",
            Axiom::Totality => "totality",
            Axiom::NoJoin => "least-upper-bound",
            Axiom::NoMeet => "greatest-lower-bound",
            Axiom::Symmetry => "symmetry",
            Axiom::Loop => "no-loops",
            Axiom::EmptyEdge => "nonempty-edges",
            Axiom::ShortLine => "line-size",
            Axiom::PairOnTwoLines => "pair-on-one-line",
        }
    }
}

/// First violated axiom together with the offending elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// 1 or 2 for the orders of a permutation structure, 0 otherwise.
    pub relation: u8,
    pub elements: Vec<usize>,
}

impl Violation {
    fn new(axiom: Axiom, relation: u8, elements: Vec<usize>) -> Self {
        Violation { axiom, relation, elements }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.axiom.name())?;
        if self.relation != 0 {
            write!(f, " (order {})", self.relation)?;
        }
        if !self.elements.is_empty() {
            write!(f, ":")?;
            for x in &self.elements {
                write!(f, " {x}")?;
            }
        }
        Ok(())
    }
}

fn check_partial_order(m: &BitMatrix, rel: u8) -> std::result::Result<(), Violation> {
    let n = m.size();
    if let Some(a) = (0..n).find(|&a| !m.get(a, a)) {
        return Err(Violation::new(Axiom::Reflexivity, rel, vec![a]));
    }
    for a in 0..n {
        for b in a + 1..n {
            if m.get(a, b) && m.get(b, a) {
                return Err(Violation::new(Axiom::Antisymmetry, rel, vec![a, b]));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !m.get(a, b) {
                continue;
            }
            for c in 0..n {
                if m.get(b, c) && !m.get(a, c) {
                    return Err(Violation::new(Axiom::Transitivity, rel, vec![a, b, c]));
                }
            }
        }
    }
    Ok(())
}

fn check_total(m: &BitMatrix, rel: u8) -> std::result::Result<(), Violation> {
    let n = m.size();
    for a in 0..n {
        for b in a + 1..n {
            if !m.get(a, b) && !m.get(b, a) {
                return Err(Violation::new(Axiom::Totality, rel, vec![a, b]));
            }
        }
    }
    Ok(())
}

/// Least element of `set` under `m`, if it has one.
pub(crate) fn least(m: &BitMatrix, set: u64) -> Option<usize> {
    bits(set).find(|&x| set & !m.row(x) == 0)
}

fn check_lattice(m: &BitMatrix) -> std::result::Result<(), Violation> {
    let n = m.size();
    let dual = m.transpose();
    for a in 0..n {
        for b in a + 1..n {
            // row(x) = up-set of x; column(x) = down-set of x
            if least(m, m.row(a) & m.row(b)).is_none() {
                return Err(Violation::new(Axiom::NoJoin, 0, vec![a, b]));
            }
            if least(&dual, dual.row(a) & dual.row(b)).is_none() {
                return Err(Violation::new(Axiom::NoMeet, 0, vec![a, b]));
            }
        }
    }
    Ok(())
}

fn check_graph(m: &BitMatrix, kind: StructureKind) -> std::result::Result<(), Violation> {
    let n = m.size();
    if kind.is_undirected() {
        for a in 0..n {
            for b in a + 1..n {
                if m.get(a, b) != m.get(b, a) {
                    return Err(Violation::new(Axiom::Symmetry, 0, vec![a, b]));
                }
            }
        }
    }
    if !kind.allows_loops() {
        if let Some(a) = (0..n).find(|&a| m.get(a, a)) {
            return Err(Violation::new(Axiom::Loop, 0, vec![a]));
        }
    }
    Ok(())
}

fn check_geometry(lines: &[ElementSet]) -> std::result::Result<(), Violation> {
    if let Some(l) = lines.iter().find(|l| l.len() < 2) {
        return Err(Violation::new(Axiom::ShortLine, 0, l.to_vec()));
    }
    let mut worst: Option<Vec<usize>> = None;
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            let common = a.intersection(*b);
            if common.len() >= 2 {
                let mut it = common.iter();
                let pair = vec![it.next().unwrap(), it.next().unwrap()];
                if worst.as_ref().is_none_or(|w| pair < *w) {
                    worst = Some(pair);
                }
            }
        }
    }
    match worst {
        Some(pair) => Err(Violation::new(Axiom::PairOnTwoLines, 0, pair)),
        None => Ok(()),
    }
}

/// Lines of a geometry split by size, plus the points on no line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LineClasses {
    pub regular: Vec<ElementSet>,
    pub singular: Vec<ElementSet>,
    pub isolated: Vec<usize>,
}

pub fn classify_lines(g: &FiniteStructure) -> Result<LineClasses> {
    if g.kind() != StructureKind::Geometry {
        return Err(Error::KindMismatch { expected: StructureKind::Geometry, found: g.kind() });
    }
    let lines = g.sets().expect("geometry payload");
    let mut out = LineClasses::default();
    let mut covered = 0u64;
    for &l in lines {
        covered |= l.mask();
        match l.len() {
            2 => out.singular.push(l),
            k if k > 2 => out.regular.push(l),
            _ => {}
        }
    }
    out.isolated = (0..g.len()).filter(|&x| covered >> x & 1 == 0).collect();
    Ok(out)
}

/// A total function `0..domain_size → 0..image_size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping {
    values: Vec<usize>,
    image_size: usize,
}

impl Mapping {
    pub fn new(values: Vec<usize>, image_size: usize) -> Result<Self> {
        if let Some((x, &v)) = values.iter().enumerate().find(|(_, &v)| v >= image_size) {
            return Err(Error::Dimension(format!("map sends {x} to {v}, outside target range 0..{image_size}")));
        }
        Ok(Mapping { values, image_size })
    }

    pub(crate) fn new_unchecked(values: Vec<usize>, image_size: usize) -> Self {
        debug_assert!(values.iter().all(|&v| v < image_size));
        Mapping { values, image_size }
    }

    pub fn identity(n: usize) -> Self {
        Mapping { values: (0..n).collect(), image_size: n }
    }

    pub fn constant(n: usize, value: usize, image_size: usize) -> Result<Self> {
        Mapping::new(vec![value; n], image_size)
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn image_size(&self) -> usize {
        self.image_size
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.image_size];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `x ↦ then(self(x))`.
    pub fn then(&self, then: &Mapping) -> Result<Mapping> {
        if then.domain_size() != self.image_size {
            return Err(Error::Dimension(format!(
                "cannot compose: image size {} vs domain size {}",
                self.image_size,
                then.domain_size()
            )));
        }
        Ok(Mapping { values: self.values.iter().map(|&v| then.values[v]).collect(), image_size: then.image_size })
    }

    /// Preimage of each target element, each list ascending.
    pub fn fibres(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.image_size];
        for (x, &v) in self.values.iter().enumerate() {
            out[v].push(x);
        }
        out
    }

    /// The inverse of a bijection.
    pub fn inverse(&self) -> Option<Mapping> {
        if self.image_size != self.values.len() {
            return None;
        }
        let mut inv = vec![usize::MAX; self.image_size];
        for (x, &v) in self.values.iter().enumerate() {
            if inv[v] != usize::MAX {
                return None;
            }
            inv[v] = x;
        }
        Some(Mapping { values: inv, image_size: self.values.len() })
    }
}
