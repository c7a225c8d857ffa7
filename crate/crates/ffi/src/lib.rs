//! C ABI for `qproj`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`QprojStatus`]; the message for the most recent failure on the calling
//! thread is available from [`qproj_last_error`]. Panics are caught at the
//! boundary and reported as `QPROJ_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qproj::certify::{self, WitnessMethod, WitnessTriple};
use qproj::decide::{self, GeometryMode, Reason};
use qproj::error::Error;
use qproj::format;
use qproj::hom;
use qproj::oracle::{self, OracleOptions};
use qproj::structures::{FiniteStructure, Mapping, StructureKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QprojStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidStructure = 4,
    Precondition = 5,
    BoundExceeded = 6,
    NoLift = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QprojKind {
    Poset,
    Lattice,
    Permutation,
    Graph,
    GraphLoops,
    Digraph,
    DigraphLoops,
    Hypergraph,
    Geometry,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QprojGeometryMode {
    Strict,
    Literal,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QprojReason {
    Chain,
    Antichain,
    Permutation,
    Complete,
    Empty,
    EEmptyAllLoops,
    EEmptyNoLoops,
    DownwardComplete,
    NoLines,
    AllPairsSingular,
    RegularCovered,
    NotCharacterized,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QprojVerdict {
    pub qp: bool,
    pub reason: QprojReason,
    /// Largest edge size for `QPROJ_REASON_DOWNWARD_COMPLETE`, otherwise 0.
    pub edge_size: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QprojOracleSummary {
    pub qp: bool,
    pub targets_examined: u64,
    pub pairs_examined: u64,
}

pub struct QprojStructure(FiniteStructure);

pub struct QprojMapping(Mapping);

pub struct QprojWitness {
    target: QprojStructure,
    f: QprojMapping,
    j: QprojMapping,
    constructed: bool,
}

impl QprojWitness {
    fn new(triple: WitnessTriple, constructed: bool) -> Self {
        QprojWitness {
            target: QprojStructure(triple.target),
            f: QprojMapping(triple.f),
            j: QprojMapping(triple.j),
            constructed,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

struct Failure(QprojStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::UnknownKind(_) | Error::Shape(_) | Error::Parse { .. } => QprojStatus::Parse,
            Error::Invalid { .. } => QprojStatus::InvalidStructure,
            Error::KindMismatch { .. } | Error::Dimension(_) | Error::Precondition(_) => QprojStatus::Precondition,
            Error::BoundExceeded { .. } => QprojStatus::BoundExceeded,
            Error::Verification(_) => QprojStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(QprojStatus::NullPointer, format!("`{name}` is null"))
}

/// Runs `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<QprojStatus, Failure>) -> QprojStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {message}"));
            QprojStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn mode(m: QprojGeometryMode) -> GeometryMode {
    match m {
        QprojGeometryMode::Strict => GeometryMode::Strict,
        QprojGeometryMode::Literal => GeometryMode::Literal,
    }
}

fn validated(s: FiniteStructure) -> Result<FiniteStructure, Failure> {
    match s.validate() {
        Ok(()) => Ok(s),
        Err(violation) => Err(Error::Invalid { kind: s.kind(), violation }.into()),
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qproj_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Parses and validates a structure file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qproj_structure_parse(text: *const c_char, out: *mut *mut QprojStructure) -> QprojStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| Failure(QprojStatus::InvalidUtf8, e.to_string()))?;
        let s = validated(format::parse_structure(text)?)?;
        put(out, QprojStructure(s));
        Ok(QprojStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qproj_structure_free(s: *mut QprojStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qproj_structure_size(s: *const QprojStructure) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qproj_structure_kind(s: *const QprojStructure, out: *mut QprojKind) -> QprojStatus {
    guard(|| {
        let s = borrow(s, "s")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match s.0.kind() {
            StructureKind::Poset => QprojKind::Poset,
            StructureKind::Lattice => QprojKind::Lattice,
            StructureKind::Permutation => QprojKind::Permutation,
            StructureKind::GraphSimple => QprojKind::Graph,
            StructureKind::GraphLoops => QprojKind::GraphLoops,
            StructureKind::DigraphSimple => QprojKind::Digraph,
            StructureKind::DigraphLoops => QprojKind::DigraphLoops,
            StructureKind::Hypergraph => QprojKind::Hypergraph,
            StructureKind::Geometry => QprojKind::Geometry,
        };
        Ok(QprojStatus::Ok)
    })
}

/// Canonical file text. Release the string with [`qproj_string_free`].
///
/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qproj_structure_to_string(s: *const QprojStructure, out: *mut *mut c_char) -> QprojStatus {
    guard(|| {
        let s = borrow(s, "s")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text =
            CString::new(format::print_structure(&s.0)).map_err(|e| Failure(QprojStatus::Internal, e.to_string()))?;
        *out = text.into_raw();
        Ok(QprojStatus::Ok)
    })
}

/// # Safety
/// `text` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qproj_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Decides with the characterization for the structure's kind.
///
/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qproj_decide(
    s: *const QprojStructure,
    geometry_mode: QprojGeometryMode,
    out: *mut QprojVerdict,
) -> QprojStatus {
    guard(|| {
        let s = borrow(s, "s")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = decide::decide(&s.0, mode(geometry_mode))?;
        let (reason, edge_size) = match v.reason {
            Reason::Chain => (QprojReason::Chain, 0),
            Reason::Antichain => (QprojReason::Antichain, 0),
            Reason::Permutation => (QprojReason::Permutation, 0),
            Reason::Complete => (QprojReason::Complete, 0),
            Reason::Empty => (QprojReason::Empty, 0),
            Reason::EEmptyAllLoops => (QprojReason::EEmptyAllLoops, 0),
            Reason::EEmptyNoLoops => (QprojReason::EEmptyNoLoops, 0),
            Reason::DownwardComplete(k) => (QprojReason::DownwardComplete, k),
            Reason::NoLines => (QprojReason::NoLines, 0),
            Reason::AllPairsSingular => (QprojReason::AllPairsSingular, 0),
            Reason::RegularCovered => (QprojReason::RegularCovered, 0),
            Reason::NotCharacterized(_) => (QprojReason::NotCharacterized, 0),
        };
        *out = QprojVerdict { qp: v.qp, reason, edge_size };
        Ok(QprojStatus::Ok)
    })
}

/// Definitional check. `max_target_size` 0 means the structure's size,
/// `jobs` 0 means 1. On a negative answer `*witness` receives the
/// counterexample, otherwise it is set to null; `witness` itself may be null.
///
/// # Safety
/// `s` and `out` must be valid pointers; `witness` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn qproj_oracle(
    s: *const QprojStructure,
    max_target_size: usize,
    jobs: usize,
    out: *mut QprojOracleSummary,
    witness: *mut *mut QprojWitness,
) -> QprojStatus {
    guard(|| {
        let s = borrow(s, "s")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !witness.is_null() {
            *witness = ptr::null_mut();
        }
        let options = OracleOptions {
            max_target_size: (max_target_size > 0).then_some(max_target_size),
            jobs: jobs.max(1),
            ..OracleOptions::default()
        };
        let report = oracle::oracle(&s.0, &options)?;
        *out = QprojOracleSummary {
            qp: report.qp,
            targets_examined: report.targets_examined,
            pairs_examined: report.pairs_examined,
        };
        if let (Some(triple), false) = (report.witness, witness.is_null()) {
            put(witness, QprojWitness::new(triple, false));
        }
        Ok(QprojStatus::Ok)
    })
}

/// Verified counterexample for a structure that is not quasi-projective;
/// `QPROJ_STATUS_PRECONDITION` otherwise.
///
/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qproj_witness(
    s: *const QprojStructure,
    geometry_mode: QprojGeometryMode,
    out: *mut *mut QprojWitness,
) -> QprojStatus {
    guard(|| {
        let s = borrow(s, "s")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let w = certify::witness(&s.0, mode(geometry_mode))?;
        certify::verify_triple(&s.0, &w.triple)?;
        put(out, QprojWitness::new(w.triple, w.method == WitnessMethod::Construction));
        Ok(QprojStatus::Ok)
    })
}

/// Borrowed target; lives as long as the witness.
///
/// # Safety
/// `w` must be null or a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn qproj_witness_target(w: *const QprojWitness) -> *const QprojStructure {
    w.as_ref().map_or(ptr::null(), |w| &w.target)
}

/// Borrowed `f`; lives as long as the witness.
///
/// # Safety
/// `w` must be null or a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn qproj_witness_f(w: *const QprojWitness) -> *const QprojMapping {
    w.as_ref().map_or(ptr::null(), |w| &w.f)
}

/// Borrowed `j`; lives as long as the witness.
///
/// # Safety
/// `w` must be null or a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn qproj_witness_j(w: *const QprojWitness) -> *const QprojMapping {
    w.as_ref().map_or(ptr::null(), |w| &w.j)
}

/// True when the class construction produced the witness rather than search.
///
/// # Safety
/// `w` must be null or a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn qproj_witness_is_construction(w: *const QprojWitness) -> bool {
    w.as_ref().is_some_and(|w| w.constructed)
}

/// # Safety
/// `w` must be null or a witness handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qproj_witness_free(w: *mut QprojWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Map `x ↦ values[x]` into `0..image_size`.
///
/// # Safety
/// `values` must point to `len` readable entries (or be null with `len` 0);
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qproj_mapping_new(
    values: *const usize,
    len: usize,
    image_size: usize,
    out: *mut *mut QprojMapping,
) -> QprojStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if values.is_null() && len > 0 {
            return Err(null("values"));
        }
        let values = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(values, len).to_vec() };
        put(out, QprojMapping(Mapping::new(values, image_size)?));
        Ok(QprojStatus::Ok)
    })
}

/// Domain size, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qproj_mapping_len(m: *const QprojMapping) -> usize {
    m.as_ref().map_or(0, |m| m.0.domain_size())
}

/// Borrowed array of `qproj_mapping_len(m)` values.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qproj_mapping_values(m: *const QprojMapping) -> *const usize {
    m.as_ref().map_or(ptr::null(), |m| m.0.values().as_ptr())
}

/// # Safety
/// `m` must be null or a mapping handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qproj_mapping_free(m: *mut QprojMapping) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

unsafe fn lift_args<'a>(
    s: *const QprojStructure,
    t: *const QprojStructure,
    f: *const QprojMapping,
    j: *const QprojMapping,
    out: *mut *mut QprojMapping,
) -> Result<(&'a FiniteStructure, &'a FiniteStructure, &'a Mapping, &'a Mapping), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = ptr::null_mut();
    Ok((&borrow(s, "s")?.0, &borrow(t, "t")?.0, &borrow(f, "f")?.0, &borrow(j, "j")?.0))
}

/// Searches an endomorphism `φ` with `j(φ(x)) = f(x)`. Returns
/// `QPROJ_STATUS_NO_LIFT` with `*out` null when none exists.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qproj_find_lift(
    s: *const QprojStructure,
    t: *const QprojStructure,
    f: *const QprojMapping,
    j: *const QprojMapping,
    out: *mut *mut QprojMapping,
) -> QprojStatus {
    guard(|| {
        let (s, t, f, j) = lift_args(s, t, f, j, out)?;
        match hom::find_lift(s, t, f, j)? {
            Some(phi) => {
                put(out, QprojMapping(phi));
                Ok(QprojStatus::Ok)
            }
            None => Err(Failure(QprojStatus::NoLift, "no lifting endomorphism exists".into())),
        }
    })
}

/// Builds the lift directly for a quasi-projective source.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qproj_construct_lift(
    s: *const QprojStructure,
    t: *const QprojStructure,
    f: *const QprojMapping,
    j: *const QprojMapping,
    out: *mut *mut QprojMapping,
) -> QprojStatus {
    guard(|| {
        let (s, t, f, j) = lift_args(s, t, f, j, out)?;
        put(out, QprojMapping(certify::construct_lift(s, t, f, j)?));
        Ok(QprojStatus::Ok)
    })
}
