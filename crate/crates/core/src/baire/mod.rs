//! The formal Baire space on ℕ*.
//!
//! Covers are generated by η, ζ and ϝ. Since ϝ quantifies over all of ℕ, a
//! [`Derivation`] computes its fan branches on demand and is checked along
//! explicit probes; the binary fragment in [`cantor`] is checked
//! exhaustively instead. Points are presented as [`ChoiceStream`]s.

pub mod cantor;
mod derivation;
mod stream;
mod subset;

pub use derivation::{
    check_derivation, level_derivation, split_cover, zeta_eliminate, Derivation, DerivationError, ProbeVerdict, Rule,
    Violation,
};
pub use stream::{alpha_point, enters_positivity_bounded, ChoiceStream, EntersVerdict};
pub use subset::{complement_member, cover_singleton, monotone_closure_member, DecidableSubset};
