//! Exact combinatorics behind tautological 0-cycles on moduli spaces of
//! stable curves.
//!
//! The crate is organised by subject:
//!
//! * [`covers`]: monodromy data of cyclic covers of the projective line
//!   branched over three points, with genus and ramification counts.
//! * [`blowups`]: the Euclidean blowup process resolving `z1^e = z2^f`,
//!   the multiplicity sum `ms(e, f)`, and the tautological-point decision
//!   for cyclic covers built on it.
//! * [`strata`]: stable graph enumeration and the degree-budget check showing
//!   that every tautological 0-cycle is supported on genus-0 strata.
//! * [`cycles`]: formal 0-cycles on `S^n`, diagonal push-forwards and the
//!   inclusion-exclusion expansion of symmetrized points.
//! * [`tnumbers`]: upper bounds for `T(g, n)` and the point-trading
//!   construction on an elliptic curve modelled by a finite abelian group.
//!
//! Integer arithmetic is generic over [`Int`] and always checked; the type
//! aliases below fix the scalar to `i64` (or `i128`) for everyday use.

pub mod blowups;
pub mod covers;
pub mod cycles;
mod error;
pub mod scalar;
pub mod strata;
pub mod tnumbers;

pub use error::{Error, Result};
pub use scalar::Int;

/// Cyclic-cover datum with 64-bit residues.
pub type Cover = covers::CoverData<i64>;
/// Cyclic-cover datum with 128-bit residues.
pub type Cover128 = covers::CoverData<i128>;
/// Invariants of a [`Cover`].
pub type Invariants = covers::CoverInvariants<i64>;
/// Blowup trace with 64-bit entries.
pub type Trace = blowups::BlowupTrace<i64>;
/// Tautological-point decision for a [`Cover`].
pub type Decision = blowups::TautDecision<i64>;
/// Formal 0-cycle over string symbols with 64-bit coefficients.
pub type Cycle = cycles::FormalCycle<String, i64>;
/// Set partition together with its 64-bit inclusion-exclusion coefficient.
pub type PartitionCoefficient = cycles::SetPartitionCoefficient<i64>;
