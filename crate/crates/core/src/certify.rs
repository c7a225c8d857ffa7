//! Certificates: a counterexample triple `(T, f, j)` for structures that are
//! not quasi-projective, a lifting endomorphism for those that are.
//!
//! Every certificate is re-checked through the hom engine before it is
//! returned.

use itertools::Itertools;

use crate::decide::{components, decide, Defect, GeometryMode};
use crate::error::{Error, Result};
use crate::hom::{find_lift, Checker};
use crate::oracle::{oracle, OracleOptions};
use crate::structures::{least, ElementSet, FiniteStructure, Mapping, StructureKind};

/// Target structure and maps `f` (homomorphism) and `j` (surjective
/// homomorphism) admitting no lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTriple {
    pub target: FiniteStructure,
    pub f: Mapping,
    pub j: Mapping,
}

/// How a witness was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessMethod {
    /// The class-specific construction.
    Construction,
    /// Construction template did not apply; found by search.
    Search,
}

impl WitnessMethod {
    pub fn name(self) -> &'static str {
        match self {
            WitnessMethod::Construction => "construction",
            WitnessMethod::Search => "search",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub triple: WitnessTriple,
    pub method: WitnessMethod,
}

/// Checks `f` is a homomorphism, `j` a surjective one, and that no lift exists.
pub fn verify_triple(s: &FiniteStructure, w: &WitnessTriple) -> Result<()> {
    let checker = Checker::new(s, &w.target)?;
    if !checker.is_hom(&w.f)? {
        return Err(Error::Verification("f is not a homomorphism".into()));
    }
    if !checker.is_hom(&w.j)? || !w.j.is_surjective() {
        return Err(Error::Verification("j is not a surjective homomorphism".into()));
    }
    if let Some(phi) = find_lift(s, &w.target, &w.f, &w.j)? {
        return Err(Error::Verification(format!("lift exists: {:?}", phi.values())));
    }
    Ok(())
}

fn gated(s: &FiniteStructure, triple: WitnessTriple, method: WitnessMethod) -> Result<Witness> {
    verify_triple(s, &triple)?;
    Ok(Witness { triple, method })
}

fn map(values: Vec<usize>, image: usize) -> Mapping {
    Mapping::new(values, image).expect("construction stays in range")
}

fn defect_of(s: &FiniteStructure, mode: GeometryMode) -> Result<Defect> {
    let verdict = decide(s, mode)?;
    verdict.defect().cloned().ok_or_else(|| {
        Error::Precondition(format!("{} is quasi-projective ({}); no witness exists", s.kind(), verdict.reason))
    })
}

/// Witness for any structure the decider rejects.
pub fn witness(s: &FiniteStructure, mode: GeometryMode) -> Result<Witness> {
    match s.kind() {
        StructureKind::Poset | StructureKind::Lattice => witness_poset(s),
        StructureKind::Permutation => {
            Err(Error::Precondition("permutation structures are always quasi-projective".into()))
        }
        StructureKind::GraphSimple | StructureKind::GraphLoops => witness_graph(s),
        StructureKind::DigraphSimple | StructureKind::DigraphLoops => witness_digraph(s),
        StructureKind::Hypergraph => witness_hypergraph(s),
        StructureKind::Geometry => witness_geometry(s, mode),
    }
}

/// Posets and lattices. The target is always a chain.
pub fn witness_poset(s: &FiniteStructure) -> Result<Witness> {
    if !s.kind().is_order() {
        return Err(Error::KindMismatch { expected: StructureKind::Poset, found: s.kind() });
    }
    let triple = match defect_of(s, GeometryMode::default())? {
        Defect::Disconnected { u, .. } => {
            let m = s.relation().expect("order payload");
            let comp = components(m);
            let f = (0..s.len()).map(|x| usize::from(x != u && m.get(u, x))).collect();
            let j = (0..s.len()).map(|x| usize::from(comp[x] != comp[u])).collect();
            WitnessTriple { target: FiniteStructure::chain(s.kind(), 2)?, f: map(f, 2), j: map(j, 2) }
        }
        Defect::Fork { u, v, dual: false, .. } => fork_triple(s, u, v)?,
        Defect::Fork { u, v, dual: true, .. } => {
            let t = fork_triple(&s.dual(), u, v)?;
            WitnessTriple { target: t.target.dual(), ..t }
        }
        other => unreachable!("order defect expected, got {other:?}"),
    };
    gated(s, triple, WitnessMethod::Construction)
}

/// `u < v`, `u < w`, `v ∥ w`: chain `a < b < c (< d)`,
/// `f = c above u, b elsewhere`, `j = b at v, a below v, d above v, c elsewhere`.
fn fork_triple(s: &FiniteStructure, u: usize, v: usize) -> Result<WitnessTriple> {
    let m = s.relation().expect("order payload");
    let n = s.len();
    let above = |a: usize, x: usize| x != a && m.get(a, x);
    let size = if (0..n).any(|z| above(v, z)) { 4 } else { 3 };
    let (a, b, c, d) = (0, 1, 2, 3);
    let f = (0..n).map(|x| if above(u, x) { c } else { b }).collect();
    let j = (0..n)
        .map(|x| {
            if x == v {
                b
            } else if above(x, v) {
                a
            } else if above(v, x) {
                d
            } else {
                c
            }
        })
        .collect();
    Ok(WitnessTriple { target: FiniteStructure::chain(s.kind(), size)?, f: map(f, size), j: map(j, size) })
}

pub fn witness_graph(s: &FiniteStructure) -> Result<Witness> {
    if !s.kind().is_undirected() {
        return Err(Error::KindMismatch { expected: StructureKind::GraphSimple, found: s.kind() });
    }
    graph_like_witness(s)
}

pub fn witness_digraph(s: &FiniteStructure) -> Result<Witness> {
    if !matches!(s.kind(), StructureKind::DigraphSimple | StructureKind::DigraphLoops) {
        return Err(Error::KindMismatch { expected: StructureKind::DigraphSimple, found: s.kind() });
    }
    graph_like_witness(s)
}

fn graph_like_witness(s: &FiniteStructure) -> Result<Witness> {
    let n = s.len();
    match defect_of(s, GeometryMode::default())? {
        Defect::MissingLoop { vertex, .. } => {
            // two looped vertices joined both ways; only `vertex` goes to the first
            let target = FiniteStructure::complete(s.kind(), 2)?;
            let f = map(vec![0; n], 2);
            let j = map((0..n).map(|x| usize::from(x != vertex)).collect(), 2);
            gated(s, WitnessTriple { target, f, j }, WitnessMethod::Construction)
        }
        Defect::MissingAndPresent { .. } => {
            let m = s.relation().expect("graph payload");
            let target = FiniteStructure::complete(s.kind(), n)?;
            shift_witness(s, target, |a, b| m.get(a, b))
        }
        other => unreachable!("graph defect expected, got {other:?}"),
    }
}

/// Complete-target witness. Vertices are listed as `v_1 … v_n` so that
/// `(v_1, v_2)` is a non-edge and `(v_3, v_4)` or `(v_2, v_3)` an edge; then
/// `f(v_i) = k_i` and `j(v_i) = k_{i+2 mod n}`. Orderings are tried in
/// lexicographic order until one passes the verification gate. If no ordering
/// fits, every bijection `j` with `f` the identity is tried instead.
fn shift_witness(
    s: &FiniteStructure,
    target: FiniteStructure,
    related: impl Fn(usize, usize) -> bool,
) -> Result<Witness> {
    let n = s.len();
    for order in (0..n).permutations(n) {
        let fits = !related(order[0], order[1])
            && ((n >= 4 && related(order[2], order[3])) || (n >= 3 && related(order[1], order[2])));
        if !fits {
            continue;
        }
        let mut f = vec![0; n];
        let mut j = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            f[v] = i;
            j[v] = (i + 2) % n;
        }
        let triple = WitnessTriple { target: target.clone(), f: map(f, n), j: map(j, n) };
        if verify_triple(s, &triple).is_ok() {
            return Ok(Witness { triple, method: WitnessMethod::Construction });
        }
    }
    for j in (0..n).permutations(n) {
        let triple = WitnessTriple { target: target.clone(), f: Mapping::identity(n), j: map(j, n) };
        if verify_triple(s, &triple).is_ok() {
            return Ok(Witness { triple, method: WitnessMethod::Search });
        }
    }
    Err(Error::Verification("no relabeling yields a complete-target witness".into()))
}

pub fn witness_hypergraph(s: &FiniteStructure) -> Result<Witness> {
    if s.kind() != StructureKind::Hypergraph {
        return Err(Error::KindMismatch { expected: StructureKind::Hypergraph, found: s.kind() });
    }
    let Defect::MissingSubset { edge, missing } = defect_of(s, GeometryMode::default())? else {
        unreachable!("hypergraph defect");
    };
    let l = missing.len();
    let n = s.len();
    // T has l+1 vertices and every nonempty subset as an edge
    let target = FiniteStructure::from_family(
        StructureKind::Hypergraph,
        l + 1,
        (1u64..1 << (l + 1)).map(ElementSet::from_mask).collect(),
    )?;
    let mut f = vec![l; n];
    for (i, v) in edge.iter().enumerate() {
        f[v] = i.min(l - 1);
    }
    let mut j = vec![l; n];
    for (i, u) in missing.iter().enumerate() {
        j[u] = i;
    }
    gated(s, WitnessTriple { target, f: map(f, l + 1), j: map(j, l + 1) }, WitnessMethod::Construction)
}

/// Geometries. Falls back to the oracle's counterexample when the
/// construction does not verify.
pub fn witness_geometry(s: &FiniteStructure, mode: GeometryMode) -> Result<Witness> {
    if s.kind() != StructureKind::Geometry {
        return Err(Error::KindMismatch { expected: StructureKind::Geometry, found: s.kind() });
    }
    let n = s.len();
    let lines = s.sets().expect("geometry payload");
    let constructed = match defect_of(s, mode)? {
        Defect::SingularGap { .. } => {
            let every_pair: Vec<ElementSet> =
                (0..n).tuple_combinations().map(|(a, b)| [a, b].into_iter().collect()).collect();
            let target = FiniteStructure::from_family(StructureKind::Geometry, n, every_pair)?;
            let on_line = |a: usize, b: usize| lines.iter().any(|l| l.len() == 2 && l.contains(a) && l.contains(b));
            shift_witness(s, target, on_line).ok()
        }
        Defect::NonCollinear { line, points } => {
            let k = line.len();
            let target =
                FiniteStructure::from_family(StructureKind::Geometry, k, vec![ElementSet::from_mask((1u64 << k) - 1)])?;
            let mut f = vec![k - 1; n];
            for (i, a) in line.iter().enumerate() {
                f[a] = i;
            }
            let b: Vec<usize> = points.iter().collect();
            let tail: ElementSet = b[1..].iter().copied().collect();
            let mut j = vec![0; n];
            for (x, jx) in j.iter_mut().enumerate() {
                if let Some(i) = b.iter().position(|&p| p == x) {
                    *jx = i;
                } else {
                    let mut with_x = tail;
                    with_x.insert(x);
                    if lines.iter().any(|l| with_x.is_subset(*l)) {
                        *jx = 1;
                    }
                }
            }
            let triple = WitnessTriple { target, f: map(f, k), j: map(j, k) };
            verify_triple(s, &triple).is_ok().then_some(Witness { triple, method: WitnessMethod::Construction })
        }
        other => unreachable!("geometry defect expected, got {other:?}"),
    };
    if let Some(w) = constructed {
        return Ok(w);
    }
    let report = oracle(s, &OracleOptions::default())?;
    match report.witness {
        Some(triple) => gated(s, triple, WitnessMethod::Search),
        None => Err(Error::Verification(format!("{mode} mode rejects this geometry but no counterexample exists"))),
    }
}

/// Lifting endomorphism `φ` with `j(φ(x)) = f(x)` for a quasi-projective
/// source, chosen as the least element of each fibre (least under the first
/// order for permutations and under the order for chains).
pub fn construct_lift(s: &FiniteStructure, t: &FiniteStructure, f: &Mapping, j: &Mapping) -> Result<Mapping> {
    let checker = Checker::new(s, t)?;
    if !checker.is_hom(f)? {
        return Err(Error::Precondition("f is not a homomorphism".into()));
    }
    if !checker.is_hom(j)? || !j.is_surjective() {
        return Err(Error::Precondition("j is not a surjective homomorphism".into()));
    }
    let verdict = decide(s, GeometryMode::default())?;
    if !verdict.qp {
        return Err(Error::Precondition(format!("{} is not quasi-projective", s.kind())));
    }
    let fibres = j.fibres();
    let as_mask = |fibre: &[usize]| fibre.iter().fold(0u64, |acc, &x| acc | 1 << x);
    let order = match s.kind() {
        StructureKind::Permutation => s.orders().map(|(first, _)| first),
        StructureKind::Poset | StructureKind::Lattice => s.relation(),
        _ => None,
    };
    let phi = if matches!(s.kind(), StructureKind::GraphSimple | StructureKind::DigraphSimple)
        && verdict.reason == crate::decide::Reason::Complete
    {
        // homomorphisms out of a loopless complete structure are injective, so j is invertible
        let inverse =
            j.inverse().ok_or_else(|| Error::Verification("j out of a complete structure is not bijective".into()))?;
        f.then(&inverse)?
    } else {
        let values = f
            .values()
            .iter()
            .map(|&y| {
                let fibre = &fibres[y];
                match order {
                    Some(m) => least(m, as_mask(fibre)).unwrap_or(fibre[0]),
                    None => fibre[0],
                }
            })
            .collect();
        Mapping::new(values, s.len())?
    };
    let endo = Checker::new(s, s)?;
    if !endo.accepts(phi.values()) {
        return Err(Error::Verification(format!("{:?} is not an endomorphism", phi.values())));
    }
    if phi.then(j)? != *f {
        return Err(Error::Verification("lift equation fails".into()));
    }
    Ok(phi)
}
