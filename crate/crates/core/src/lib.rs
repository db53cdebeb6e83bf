//! Steiner triple systems on `v` points whose block set admits no parallel
//! class, built from zero-sum triples over a product of odd prime cyclic
//! groups together with two extra points.
//!
//! The crate is organised bottom-up:
//!
//! * [`ntheory`]: factorization, multiplicative orders, and the admissibility
//!   test for the orders `v` the construction supports.
//! * [`group`]: arithmetic in the ambient group `Z5 x Zp1 x ... x Zpt`,
//!   including scalar action by rationals and the deficiency-graph cycles.
//! * [`construct`]: orbit representatives, the two-coloring, and assembly of
//!   the three block families into a [`construct::TripleSystem`].
//! * [`verify`]: structural validation (every pair in exactly one triple) and
//!   the premise certificate underpinning the no-parallel-class argument.
//! * [`cover`]: an exact-cover solver (dancing links) used to search block
//!   sets for parallel classes directly.

pub mod construct;
pub mod cover;
pub mod group;
pub mod ntheory;
pub mod verify;
