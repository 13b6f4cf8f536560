//! Canonical theory of misère impartial games: canonical forms and equality,
//! disjunctive sums, mates and concubines, parts and prime decompositions,
//! the census of games born by day 5, and symbolic counting of the censuses
//! for days 6 and 7.
//!
//! The entry points are:
//!
//! * [`arena::Arena`] — hash-consing engine for game forms and every
//!   per-game operation (outcome, equality, canonicalization, sums, mates,
//!   parity, parts, primes);
//! * [`notation`] — the textual game grammar (`{2##,1}#`, `4+{2,0}`, ...);
//! * [`census::Census`] — enumeration, serialization, and loading of the
//!   censuses of canonical games born by each day up to 5;
//! * [`analysis`] — whole-census parity and composite scans;
//! * [`counting::Counter`] — symbolic census sizes via [`tower::Tower`]s,
//!   up to two days beyond the materialized census.

pub mod algebra;
pub mod analysis;
pub mod arena;
pub mod canonical;
pub mod census;
pub mod counting;
pub mod error;
pub mod notation;
pub mod parts;
pub mod primes;
pub mod tower;

pub use arena::{Arena, GameId, Outcome, Parity};
pub use census::{Census, CensusBridge};
pub use counting::Counter;
pub use error::{Error, Result};
pub use tower::Tower;
