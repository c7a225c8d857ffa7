//! Quasi-projectivity of finite relational structures.
//!
//! A structure `S` is quasi-projective when for every structure `T` of the
//! same kind, every homomorphism `f: S → T` and every surjective homomorphism
//! `j: S → T`, some endomorphism `φ` of `S` satisfies `j(φ(x)) = f(x)`.
//!
//! The crate provides
//! - [`structures`]: the nine structure kinds and their axioms,
//! - [`hom`]: homomorphism checks and backtracking search,
//! - [`enumerate`]: canonical forms and isomorphism-class generation,
//! - [`decide`]: polynomial deciders for each class,
//! - [`certify`]: counterexample triples and lifting endomorphisms,
//! - [`oracle`]: the exhaustive definitional check and decider sweeps,
//! - [`format`]: the text formats used by the `qproj` command.

pub mod certify;
pub mod decide;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod hom;
pub mod oracle;
pub mod structures;

pub use certify::{construct_lift, verify_triple, witness, Witness, WitnessMethod, WitnessTriple};
pub use decide::{decide, Defect, GeometryMode, Reason, Verdict};
pub use enumerate::{canonicalize, enumerate_class, CanonicalForm};
pub use error::{Error, Result};
pub use hom::{enumerate_homs, find_lift, is_hom, HomProblem};
pub use oracle::{oracle, verify_class, OracleOptions, OracleReport, VerifyReport};
pub use structures::{ElementSet, FiniteStructure, Mapping, StructureKind, Violation};
