//! Generalized sumsets and product sets of sequences of finite sets in
//! computable group models.
//!
//! The library provides:
//!
//! - [`group`]: four group models (integers, cyclic, finite abelian products,
//!   free groups) with canonical element representations, enumeration,
//!   subgroups, stabilizers and cosets;
//! - [`seqset`]: set sequences, incidence/multiplicity profiles (μ, η, τ, ρ),
//!   and exact computation of the generalized sumset `Σ^ℓ`, the generalized
//!   product set `Π^ℓ`, and subsequence sums;
//! - [`bounds`]: every supported lower bound on `|Σ^ℓ|`/`|Π^ℓ|` with slack
//!   reporting (Cauchy–Davenport, Kneser, coset-quotient, multiplicity-based
//!   bounds, and the subsequence-sum disjunction check);
//! - [`structure`]: geometric/arithmetic progressions of type `(a, g, b)`:
//!   realization, exact detection, common-ratio families, linked chains,
//!   unions and subprogressions;
//! - [`inverse`]: witness-set constructions and equality (extremal-case)
//!   classifiers, including minimizing-family search and two-set classifiers;
//! - [`constructions`]: parametric families of interval sequences achieving
//!   the multiplicity bound with equality, plus named example instances;
//! - [`subseq`]: the subsequence-sum layer (profiles, inverse checks);
//! - [`verify`]: seeded fuzzers and exhaustive scans used by the CLI and the
//!   acceptance test suite;
//! - [`json`]: the canonical JSON instance format shared with the CLI.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so independent computations may run concurrently.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod group;
pub mod inverse;
pub mod json;
pub mod seqset;
pub mod structure;
pub mod subseq;
pub mod verify;

pub use error::{Error, Result};
