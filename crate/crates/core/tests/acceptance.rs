//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Budgets are wall-clock seconds on a single core.

mod common;

use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use itertools::Itertools;
use qproj::certify::{construct_lift, verify_triple, witness, WitnessMethod, WitnessTriple};
use qproj::decide::{decide, GeometryMode};
use qproj::enumerate::enumerate_class;
use qproj::format::print_structure;
use qproj::hom::{enumerate_homs, is_hom};
use qproj::oracle::{oracle, verify_class, OracleOptions};
use qproj::structures::{FiniteStructure, StructureKind, StructureKind::*};

const SWEEP_BUDGET: Duration = Duration::from_secs(600);
const ADJUDICATION_BUDGET: Duration = Duration::from_secs(1800);
const PINNED_DEFAULT: GeometryMode = GeometryMode::Strict;

struct Sweep {
    kind: StructureKind,
    n_max: usize,
    mode: GeometryMode,
    expected_classes: Option<usize>,
}

fn sweeps() -> Vec<Sweep> {
    let s = |kind, n_max, mode, expected_classes| Sweep { kind, n_max, mode, expected_classes };
    vec![
        s(Poset, 4, PINNED_DEFAULT, Some(24)),
        s(Lattice, 5, PINNED_DEFAULT, None),
        s(Permutation, 4, PINNED_DEFAULT, Some(33)),
        s(GraphSimple, 4, PINNED_DEFAULT, Some(1 + 2 + 4 + 11)),
        s(GraphLoops, 3, PINNED_DEFAULT, None),
        s(DigraphSimple, 3, PINNED_DEFAULT, None),
        s(DigraphLoops, 3, PINNED_DEFAULT, None),
        s(Hypergraph, 3, PINNED_DEFAULT, None),
        s(Geometry, 4, GeometryMode::Strict, None),
        s(Geometry, 4, GeometryMode::Literal, None),
    ]
}

fn corpus(kind: StructureKind, n_max: usize) -> Vec<FiniteStructure> {
    (1..=n_max).flat_map(|n| enumerate_class(kind, n).unwrap()).collect()
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("{} [{id}] {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn characterization_sweeps(r: &mut Report) {
    for sw in sweeps() {
        let start = Instant::now();
        let result = verify_class(sw.kind, sw.n_max, sw.mode, 1);
        let elapsed = start.elapsed();
        let label = format!("1 sweep {} n<={} mode={}", sw.kind, sw.n_max, sw.mode);
        match result {
            Ok(v) => {
                let count_ok = sw.expected_classes.is_none_or(|c| c == v.classes);
                r.line(
                    &label,
                    v.mismatches.is_empty() && count_ok && elapsed <= SWEEP_BUDGET,
                    format!(
                        "{} classes, {} mismatches, {} (budget {})",
                        v.classes,
                        v.mismatches.len(),
                        secs(elapsed),
                        secs(SWEEP_BUDGET)
                    ),
                );
            }
            Err(e) => r.line(&label, false, e.to_string()),
        }
    }
}

fn adjudication(r: &mut Report) {
    let g = FiniteStructure::from_sets(Geometry, 6, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
    let start = Instant::now();
    let report = oracle(&g, &OracleOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let pinned = decide(&g, PINNED_DEFAULT).unwrap().qp;
    let other = decide(&g, GeometryMode::Literal).unwrap().qp;
    r.line(
        "2 geometry adjudication",
        report.qp == pinned && elapsed <= ADJUDICATION_BUDGET,
        format!(
            "oracle {} in {} (budget {}); pinned {} says {}, literal says {}",
            if report.qp { "QP" } else { "NOT_QP" },
            secs(elapsed),
            secs(ADJUDICATION_BUDGET),
            PINNED_DEFAULT,
            if pinned { "QP" } else { "NOT_QP" },
            if other { "QP" } else { "NOT_QP" },
        ),
    );
}

fn witness_totality(r: &mut Report) {
    let (mut total, mut good) = (0, 0);
    for sw in sweeps() {
        for s in corpus(sw.kind, sw.n_max) {
            if decide(&s, sw.mode).unwrap().qp {
                continue;
            }
            total += 1;
            if let Ok(w) = witness(&s, sw.mode) {
                good += usize::from(verify_triple(&s, &w.triple).is_ok());
            }
        }
    }
    r.line("3 witness totality", good == total, format!("{good}/{total} verified triples"));
}

fn lift_totality(r: &mut Report) {
    let (mut total, mut good) = (0u64, 0u64);
    for sw in sweeps().into_iter().filter(|sw| sw.mode == PINNED_DEFAULT) {
        for s in corpus(sw.kind, sw.n_max) {
            if !decide(&s, sw.mode).unwrap().qp {
                continue;
            }
            for t in corpus(sw.kind, s.len()) {
                let homs = enumerate_homs(&s, &t, false).unwrap();
                for j in homs.iter().filter(|h| h.is_surjective()) {
                    for f in &homs {
                        total += 1;
                        let ok = construct_lift(&s, &t, f, j).is_ok_and(|phi| {
                            is_hom(&s, &s, &phi).unwrap() && (0..s.len()).all(|x| j.apply(phi.apply(x)) == f.apply(x))
                        });
                        good += u64::from(ok);
                    }
                }
            }
        }
    }
    r.line("4 lift totality", good == total, format!("{good}/{total} (f, j) pairs lifted"));
}

fn enumeration_counts(r: &mut Report) {
    let mut checks = vec![(GraphSimple, 4, 11), (Poset, 4, 16)];
    checks.extend((1..=4).map(|n| (Permutation, n, (1..=n).product::<usize>())));
    for (kind, n, expected) in checks {
        let brute = common::naive_class_count(kind, n);
        let enumerated = enumerate_class(kind, n).unwrap().len();
        r.line(
            &format!("5 count {kind} n={n}"),
            brute == expected && enumerated == expected,
            format!("brute force {brute}, enumerator {enumerated}, expected {expected}"),
        );
    }
}

fn determinism(r: &mut Report) {
    let dir = tempfile::TempDir::new().unwrap();
    let mut files = Vec::new();
    for sw in sweeps().into_iter().filter(|sw| sw.mode == PINNED_DEFAULT) {
        for s in corpus(sw.kind, sw.n_max) {
            let path = dir.path().join(format!("s{:04}.txt", files.len()));
            fs::write(&path, print_structure(&s)).unwrap();
            files.push(path);
        }
    }
    let run = |jobs: &str| -> Vec<u8> {
        let mut all = Vec::new();
        for f in &files {
            let o = Command::new(env!("CARGO_BIN_EXE_qproj"))
                .args(["oracle", f.to_str().unwrap(), "--jobs", jobs])
                .env_remove("QPROJ_JOBS")
                .output()
                .unwrap();
            all.extend(o.status.code().unwrap_or(-1).to_string().bytes());
            all.extend(o.stdout);
        }
        all
    };
    let one = run("1");
    let eight = run("8");
    r.line(
        "6 determinism",
        one == eight,
        format!("{} structures, {} bytes, jobs 1 vs 8 identical: {}", files.len(), one.len(), one == eight),
    );
}

/// Some target relabeling `σ` with `σ∘f = f'` and `σ∘j = j'`.
fn same_up_to_target_relabeling(a: &WitnessTriple, target: &FiniteStructure, f: &[usize], j: &[usize]) -> bool {
    let m = target.len();
    a.target.len() == m
        && (0..m).permutations(m).any(|sigma| {
            a.target.permute(&sigma) == *target
                && a.f.values().iter().map(|&x| sigma[x]).eq(f.iter().copied())
                && a.j.values().iter().map(|&x| sigma[x]).eq(j.iter().copied())
        })
}

fn hand_checked_witnesses(r: &mut Report) {
    // fork u=0 < v=1, u < w=2; nothing above v, so T is the chain a<b<c
    let v_poset = FiniteStructure::order_closure(Poset, 3, [(0, 1), (0, 2)]).unwrap();
    let (u, v) = (0, 1);
    let (a, b, c) = (0, 1, 2);
    let f: Vec<usize> = (0..3).map(|x| if v_poset.related(u, x) && x != u { c } else { b }).collect();
    let j: Vec<usize> = (0..3)
        .map(|x| {
            if x == v {
                b
            } else if v_poset.related(x, v) {
                a
            } else {
                c
            }
        })
        .collect();
    let chain = FiniteStructure::chain(Poset, 3).unwrap();
    let w = witness(&v_poset, PINNED_DEFAULT).unwrap();
    r.line(
        "7 V-poset fork triple",
        same_up_to_target_relabeling(&w.triple, &chain, &f, &j) && w.method == WitnessMethod::Construction,
        format!("f={:?} j={:?} (expected f={f:?} j={j:?})", w.triple.f.values(), w.triple.j.values()),
    );

    let mut shift_ok = true;
    for n in 3..=6 {
        let path = FiniteStructure::graph(GraphSimple, n, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        let w = witness(&path, PINNED_DEFAULT).unwrap();
        let t = &w.triple;
        let bijective = t.f.inverse().is_some();
        let shifted = (0..n).all(|x| t.j.apply(x) == (t.f.apply(x) + 2) % n);
        shift_ok &= t.target == FiniteStructure::complete(GraphSimple, n).unwrap()
            && bijective
            && shifted
            && w.method == WitnessMethod::Construction;
    }
    r.line("7 path-graph shift witness", shift_ok, "paths n=3..6: T=K_n, j = f shifted by 2".into());

    // vertex 2 has no loop
    let looped = FiniteStructure::graph(GraphLoops, 3, [(0, 0), (0, 1), (1, 1), (1, 2)]).unwrap();
    let w = witness(&looped, PINNED_DEFAULT).unwrap();
    let t = &w.triple;
    let full2 = FiniteStructure::complete(GraphLoops, 2).unwrap();
    let constant = t.f.values().iter().all_equal();
    let k1 = t.f.apply(0);
    let fibre: Vec<usize> = (0..3).filter(|&x| t.j.apply(x) == k1).collect();
    r.line(
        "7 missing-loop witness",
        t.target == full2 && constant && fibre == [2],
        format!(
            "target {:?} f={:?} j={:?}",
            t.target.relation().map(|m| m.pairs().collect::<Vec<_>>()),
            t.f.values(),
            t.j.values()
        ),
    );
}

fn main() -> ExitCode {
    let mut r = Report { failures: 0 };
    characterization_sweeps(&mut r);
    adjudication(&mut r);
    witness_totality(&mut r);
    lift_totality(&mut r);
    enumeration_counts(&mut r);
    determinism(&mut r);
    hand_checked_witnesses(&mut r);
    if r.failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} failing", r.failures);
        ExitCode::FAILURE
    }
}
