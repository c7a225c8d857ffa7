mod common;

use common::ALL_KINDS;
use qproj::certify::verify_triple;
use qproj::enumerate::enumerate_class;
use qproj::oracle::{oracle, OracleOptions};

#[test]
fn deduplicated_targets_give_the_same_verdict_as_all_labeled_targets() {
    for kind in ALL_KINDS {
        for n in 1..=3 {
            for s in enumerate_class(kind, n).unwrap() {
                let dedup = oracle(&s, &OracleOptions::default()).unwrap();
                let full = oracle(&s, &OracleOptions { dedup_targets: false, ..OracleOptions::default() }).unwrap();
                assert_eq!(dedup.qp, full.qp, "{kind} {s:?}");
                assert!(full.targets_examined >= dedup.targets_examined || !full.qp);
            }
        }
    }
}

#[test]
fn failures_persist_as_the_target_bound_grows() {
    for kind in ALL_KINDS {
        for n in 1..=3 {
            for s in enumerate_class(kind, n).unwrap() {
                let mut failed = false;
                for k in 1..=n {
                    let r =
                        oracle(&s, &OracleOptions { max_target_size: Some(k), ..OracleOptions::default() }).unwrap();
                    assert!(!failed || !r.qp, "{kind} {s:?} k={k}");
                    failed = !r.qp;
                    assert_eq!(r.witness.is_some(), !r.qp);
                    if let Some(w) = &r.witness {
                        assert!(w.target.len() <= k);
                        verify_triple(&s, w).unwrap();
                    }
                }
            }
        }
    }
}

#[test]
fn job_count_does_not_change_the_report() {
    for kind in ALL_KINDS {
        for s in enumerate_class(kind, 3).unwrap() {
            let one = oracle(&s, &OracleOptions::default()).unwrap();
            let four = oracle(&s, &OracleOptions { jobs: 4, ..OracleOptions::default() }).unwrap();
            assert_eq!(one, four);
        }
    }
}
