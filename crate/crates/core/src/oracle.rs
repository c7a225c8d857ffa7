//! Quasi-projectivity decided straight from the definition.
//!
//! For every target `T` of the same kind with `|T| ≤ |S|` (one per
//! isomorphism class), every surjective homomorphism `j` and every
//! homomorphism `f`, a lifting endomorphism is searched with the candidate
//! set of `x` restricted to `j⁻¹(f(x))`. Targets are visited by size, then
//! canonical form; pairs by `j`, then `f`, both in lexicographic order.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::certify::WitnessTriple;
use crate::decide::{decide, GeometryMode, Verdict};
use crate::enumerate::{enumerate_class, labeled_structures, max_enumeration_size};
use crate::error::{Error, Result};
use crate::hom::{lift_with, Checker};
use crate::structures::{FiniteStructure, Mapping, StructureKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub qp: bool,
    /// Present exactly when `qp` is false.
    pub witness: Option<WitnessTriple>,
    pub targets_examined: u64,
    pub pairs_examined: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Defaults to the size of the structure.
    pub max_target_size: Option<usize>,
    /// Worker threads; 1 runs everything on the calling thread.
    pub jobs: usize,
    /// Use one target per isomorphism class rather than every labeled target.
    pub dedup_targets: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { max_target_size: None, jobs: 1, dedup_targets: true }
    }
}

/// Lazily generated targets of one kind, shared across oracle runs.
pub struct TargetCatalog {
    kind: StructureKind,
    dedup: bool,
    by_size: Vec<OnceLock<Vec<FiniteStructure>>>,
}

impl TargetCatalog {
    pub fn new(kind: StructureKind, dedup: bool) -> Self {
        let max = max_enumeration_size(kind);
        TargetCatalog { kind, dedup, by_size: (0..=max).map(|_| OnceLock::new()).collect() }
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn targets(&self, n: usize) -> Result<&[FiniteStructure]> {
        let max = max_enumeration_size(self.kind);
        if n == 0 || n > max {
            return Err(Error::BoundExceeded { kind: self.kind, n, max });
        }
        if let Some(v) = self.by_size[n].get() {
            return Ok(v);
        }
        let list = if self.dedup { enumerate_class(self.kind, n)? } else { labeled_structures(self.kind, n)? };
        Ok(self.by_size[n].get_or_init(|| list))
    }
}

struct TargetOutcome {
    pairs: u64,
    failure: Option<(Mapping, Mapping)>,
}

fn examine(s: &FiniteStructure, endo: &Checker<'_>, t: &FiniteStructure) -> Result<TargetOutcome> {
    let to_target = Checker::new(s, t)?;
    let all: Vec<usize> = (0..t.len()).collect();
    let homs: Vec<Mapping> = to_target.search(vec![&all[..]; s.len()], false).collect();
    let mut pairs = 0;
    for j in homs.iter().filter(|h| h.is_surjective()) {
        let fibres = j.fibres();
        for f in &homs {
            pairs += 1;
            if lift_with(endo, &fibres, f).is_none() {
                return Ok(TargetOutcome { pairs, failure: Some((j.clone(), f.clone())) });
            }
        }
    }
    Ok(TargetOutcome { pairs, failure: None })
}

/// Runs the definitional check, reusing target lists between structures.
pub struct Oracle {
    catalog: TargetCatalog,
    pool: Option<rayon::ThreadPool>,
}

fn build_pool(jobs: usize) -> Option<rayon::ThreadPool> {
    (jobs > 1).then(|| rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool"))
}

impl Oracle {
    pub fn new(kind: StructureKind, options: &OracleOptions) -> Self {
        Oracle { catalog: TargetCatalog::new(kind, options.dedup_targets), pool: build_pool(options.jobs) }
    }

    pub fn run(&self, s: &FiniteStructure, max_target_size: Option<usize>) -> Result<OracleReport> {
        if s.kind() != self.catalog.kind() {
            return Err(Error::KindMismatch { expected: self.catalog.kind(), found: s.kind() });
        }
        if let Err(violation) = s.validate() {
            return Err(Error::Invalid { kind: s.kind(), violation });
        }
        let max = max_target_size.unwrap_or(s.len());
        if max > s.len() {
            return Err(Error::Precondition(format!(
                "target size {max} exceeds structure size {}: no surjection exists",
                s.len()
            )));
        }
        let mut targets = Vec::new();
        for size in 1..=max {
            targets.extend(self.catalog.targets(size)?);
        }
        let endo = Checker::new(s, s)?;

        let mut report = OracleReport { qp: true, witness: None, targets_examined: 0, pairs_examined: 0 };
        let mut absorb = |t: &FiniteStructure, outcome: TargetOutcome| -> bool {
            report.targets_examined += 1;
            report.pairs_examined += outcome.pairs;
            if let Some((j, f)) = outcome.failure {
                report.qp = false;
                report.witness = Some(WitnessTriple { target: t.clone(), f, j });
                return true;
            }
            false
        };

        match &self.pool {
            None => {
                for t in targets {
                    if absorb(t, examine(s, &endo, t)?) {
                        break;
                    }
                }
            }
            Some(pool) => {
                let outcomes: Vec<Result<TargetOutcome>> =
                    pool.install(|| targets.par_iter().map(|t| examine(s, &endo, t)).collect());
                for (t, outcome) in targets.iter().zip(outcomes) {
                    if absorb(t, outcome?) {
                        break;
                    }
                }
            }
        }
        Ok(report)
    }
}

pub fn oracle(s: &FiniteStructure, options: &OracleOptions) -> Result<OracleReport> {
    Oracle::new(s.kind(), options).run(s, options.max_target_size)
}

/// Sizes the sweeps run at by default.
pub fn default_sweep_size(kind: StructureKind) -> usize {
    match kind {
        StructureKind::Poset
        | StructureKind::Lattice
        | StructureKind::GraphSimple
        | StructureKind::GraphLoops
        | StructureKind::Permutation
        | StructureKind::Geometry => 5,
        StructureKind::DigraphSimple | StructureKind::DigraphLoops | StructureKind::Hypergraph => 4,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub structure: FiniteStructure,
    pub decided: Verdict,
    pub oracle_qp: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub kind: StructureKind,
    pub mode: GeometryMode,
    pub classes: usize,
    pub mismatches: Vec<Mismatch>,
}

/// Compares the decider with the oracle on every class of `kind` with
/// `1 ≤ n ≤ n_max`.
pub fn verify_class(kind: StructureKind, n_max: usize, mode: GeometryMode, jobs: usize) -> Result<VerifyReport> {
    let max = max_enumeration_size(kind);
    if n_max > max {
        return Err(Error::BoundExceeded { kind, n: n_max, max });
    }
    let oracle = Oracle::new(kind, &OracleOptions { jobs: 1, ..OracleOptions::default() });
    let mut structures = Vec::new();
    for n in 1..=n_max {
        structures.extend(enumerate_class(kind, n)?);
    }
    let check = |s: &FiniteStructure| -> Result<Option<Mismatch>> {
        let decided = decide(s, mode)?;
        let report = oracle.run(s, None)?;
        Ok((decided.qp != report.qp).then(|| Mismatch { structure: s.clone(), decided, oracle_qp: report.qp }))
    };
    let results: Vec<Result<Option<Mismatch>>> = match build_pool(jobs) {
        None => structures.iter().map(check).collect(),
        Some(pool) => pool.install(|| structures.par_iter().map(check).collect()),
    };
    let mut mismatches = Vec::new();
    for r in results {
        mismatches.extend(r?);
    }
    Ok(VerifyReport { kind, mode, classes: structures.len(), mismatches })
}
