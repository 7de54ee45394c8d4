//! Positive topologies on finite bases, decided exhaustively.
//!
//! Atoms of a base of size `n` are the indices `0..n`; a subset of the base is
//! a [`Mask`] with bit `i` set for atom `i`. A cover is stored as the table
//! `U ↦ A(U) = {a | a ◁ U}` over all `2ⁿ` subsets and a positivity as
//! `U ↦ {a | a ⋉ U}`, so every relation on `S × Pow(S)` is decided by lookup.
//!
//! Everything that quantifies over `Pow(S)` or over all relations between two
//! bases is guarded by [`Bounds`]; exceeding a bound is an error, never a
//! silent truncation.

mod concrete;
mod maps;
mod points;
mod relation;
mod suite;
mod topology;

pub use concrete::{
    check_convergent_pair, relation_from_formal_map, relation_pairs_equal, representable, ConcreteViolation,
    ConvergentPairReport, FiniteConcreteSpace,
};
pub use maps::{
    check_formal_map, formal_maps_equal, image_topology, is_formal_map, FmCounterexample, FormalMapReport,
    ImageFactorization,
};
pub use points::{
    bispatiality, check_equicontop, check_popc, ideal_points, is_ideal_point, point_clauses, pointwise_topology,
    Bispatiality, EquicontinuityReport, PointClauses, PopcReport,
};
pub use relation::FiniteRelation;
pub use suite::{
    check_compatibility_inheritance, check_laws, check_pair, check_representable, concrete_family, run_family_suite,
    topology_family, verify_topology, Check, CheckOutcome, FamilyParams, SuiteReport,
};
pub use topology::{
    cover_closure, cover_decide, enumerate_positivities, greatest_positivity, is_compatible, is_positivity,
    FinitePositiveTopology, Law, LawViolation, PositivitySpec, TopologyLaws,
};

use thiserror::Error;

/// A subset of a finite base; bit `i` is atom `i`.
pub type Mask = u32;

/// Hard ceiling on base size imposed by the table representation.
pub const MAX_ATOMS: usize = 16;

/// Exhaustive-search limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest base whose powerset may be enumerated.
    pub max_pow_atoms: usize,
    /// Largest `|S|·|T|` for which all relations `S × T` may be enumerated.
    pub max_relation_pairs: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_pow_atoms: 5,
            max_relation_pairs: 12,
        }
    }
}

impl Bounds {
    pub(crate) fn check_pow(&self, size: usize) -> Result<(), FiniteError> {
        if size > self.max_pow_atoms || size > MAX_ATOMS {
            return Err(FiniteError::BaseTooLarge {
                size,
                bound: self.max_pow_atoms.min(MAX_ATOMS),
            });
        }
        Ok(())
    }

    pub(crate) fn check_relations(&self, source: usize, target: usize) -> Result<(), FiniteError> {
        let pairs = source * target;
        if pairs > self.max_relation_pairs || pairs >= 32 {
            return Err(FiniteError::EnumerationTooLarge {
                pairs,
                bound: self.max_relation_pairs.min(31),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("atom {atom} is not in a base of size {size}")]
    AtomNotInBase { atom: usize, size: usize },
    #[error("subset {mask:#b} is not contained in a base of size {size}")]
    SubsetNotInBase { mask: Mask, size: usize },
    #[error("base of size {size} exceeds the exhaustive-search bound {bound}")]
    BaseTooLarge { size: usize, bound: usize },
    #[error("{pairs} relation pairs exceed the enumeration bound {bound}")]
    EnumerationTooLarge { pairs: usize, bound: usize },
    #[error("concrete space invalid: {0}")]
    ConcreteSpaceInvalid(ConcreteViolation),
    #[error("not a positive topology: {0}")]
    LawViolated(LawViolation),
    #[error("relation shape {found:?} does not match bases {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
}

pub(crate) fn full(size: usize) -> Mask {
    if size == 32 {
        Mask::MAX
    } else {
        (1 << size) - 1
    }
}

pub(crate) fn bit(atom: usize) -> Mask {
    1 << atom
}

pub(crate) fn contains(mask: Mask, atom: usize) -> bool {
    mask & bit(atom) != 0
}

pub(crate) fn is_subset(small: Mask, big: Mask) -> bool {
    small & !big == 0
}

/// The atoms of `mask` in increasing order.
pub(crate) fn atoms(mask: Mask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    core::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let atom = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(atom)
        }
    })
}

/// Every subset of the base, in increasing numeric order.
pub(crate) fn subsets(size: usize) -> core::ops::RangeInclusive<Mask> {
    0..=full(size)
}

/// Every superset of `mask` inside a base of `size` atoms.
pub(crate) fn supersets(mask: Mask, size: usize) -> impl Iterator<Item = Mask> {
    let free = full(size) & !mask;
    let mut sub = free;
    let mut done = false;
    core::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = mask | sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & free;
        }
        Some(out)
    })
}

/// Writes a subset as `{0,2}` using atom indices.
pub fn format_mask(mask: Mask) -> alloc::string::String {
    use core::fmt::Write;
    let mut out = alloc::string::String::from("{");
    for (i, a) in atoms(mask).enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{a}");
    }
    out.push('}');
    out
}
