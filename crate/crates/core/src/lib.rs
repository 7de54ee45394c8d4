//! Constructive pointfree topology on finite and countable bases.
//!
//! * [`finite`]: positive topologies on finite bases, decided by exhaustive
//!   search. Covers, positivities, ideal points, formal maps, concrete
//!   spaces and image factorisation.
//! * [`baire`]: the formal Baire space on finite sequences, cover
//!   derivations with probing checkers, ζ-elimination and choice streams.
//! * [`continuity`]: relations from sequences to naturals as neighbourhood
//!   functions, evaluation on streams, moduli, and the bar transforms.
//! * [`spread`]: spreads, the retraction of the Baire space onto a spread,
//!   and uniform bar search on the Cantor space.
//! * [`reals`]: rational interval bases, finite cover decision, cover
//!   certificates and finite subcover extraction.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// Cover errors carry exact rationals; boxing them buys nothing here.
#![allow(clippy::result_large_err)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baire;
pub mod continuity;
pub mod finite;
pub mod pairing;
pub mod rational;
pub mod reals;
pub mod seq;
pub mod spread;

pub use rational::Rational;
pub use seq::FiniteSeq;

/// Default number of Fan steps or prefix probes before giving up.
pub const DEFAULT_FUEL: usize = 10_000;
