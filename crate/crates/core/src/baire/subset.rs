use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::seq::{leq_b, FiniteSeq};

type Predicate = Arc<dyn Fn(&[u64]) -> bool + Send + Sync>;

/// A subset of ℕ* given by a total membership test.
///
/// When `monotone` is set the subset is closed under extension:
/// `a ≤ b ∈ U` implies `a ∈ U`.
#[derive(Clone)]
pub struct DecidableSubset {
    member: Predicate,
    monotone: bool,
}

impl DecidableSubset {
    pub fn from_fn(f: impl Fn(&[u64]) -> bool + Send + Sync + 'static) -> Self {
        DecidableSubset {
            member: Arc::new(f),
            monotone: false,
        }
    }

    /// Declares the subset closed under extension.
    pub fn monotone(f: impl Fn(&[u64]) -> bool + Send + Sync + 'static) -> Self {
        DecidableSubset {
            member: Arc::new(f),
            monotone: true,
        }
    }

    pub fn all() -> Self {
        Self::monotone(|_| true)
    }

    pub fn empty() -> Self {
        Self::monotone(|_| false)
    }

    pub fn finite(members: impl IntoIterator<Item = FiniteSeq>) -> Self {
        let set: BTreeSet<Vec<u64>> = members.into_iter().map(FiniteSeq::into_entries).collect();
        Self::from_fn(move |a| set.contains(a))
    }

    /// `{a | lh a = n}`.
    pub fn level(n: usize) -> Self {
        Self::from_fn(move |a| a.len() == n)
    }

    /// `{a | lh a ≤ n}`.
    pub fn max_len(n: usize) -> Self {
        Self::from_fn(move |a| a.len() <= n)
    }

    /// `{a | lh a ≥ n}`.
    pub fn min_len(n: usize) -> Self {
        Self::monotone(move |a| a.len() >= n)
    }

    /// Sequences with every entry in `{0, 1}`.
    pub fn binary() -> Self {
        Self::from_fn(|a| a.iter().all(|&x| x <= 1))
    }

    /// `C_a = {b | lh b = lh a, b ≠ a}`.
    pub fn complement_of(a: &FiniteSeq) -> Self {
        let a = a.entries().to_vec();
        Self::from_fn(move |b| complement_member_raw(&a, b))
    }

    pub fn is_declared_monotone(&self) -> bool {
        self.monotone
    }

    pub fn contains(&self, a: &FiniteSeq) -> bool {
        (self.member)(a.entries())
    }

    pub fn contains_raw(&self, a: &[u64]) -> bool {
        (self.member)(a)
    }

    pub fn union(&self, other: &DecidableSubset) -> Self {
        let (f, g) = (self.member.clone(), other.member.clone());
        DecidableSubset {
            member: Arc::new(move |a| f(a) || g(a)),
            monotone: self.monotone && other.monotone,
        }
    }

    pub fn intersection(&self, other: &DecidableSubset) -> Self {
        let (f, g) = (self.member.clone(), other.member.clone());
        DecidableSubset {
            member: Arc::new(move |a| f(a) && g(a)),
            monotone: self.monotone && other.monotone,
        }
    }

    /// `¬U`.
    pub fn complement(&self) -> Self {
        let f = self.member.clone();
        Self::from_fn(move |a| !f(a))
    }

    /// `↓U = {a | some prefix of a is in U}`.
    pub fn monotone_closure(&self) -> Self {
        if self.monotone {
            return self.clone();
        }
        let f = self.member.clone();
        Self::monotone(move |a| (0..=a.len()).any(|k| f(&a[..k])))
    }

    /// Looks for a pair `a ≤ b` with `b ∈ U`, `a ∉ U` among `samples`.
    pub fn monotonicity_counterexample(&self, samples: &[FiniteSeq]) -> Option<(FiniteSeq, FiniteSeq)> {
        for b in samples.iter().filter(|b| self.contains(b)) {
            for a in samples {
                if leq_b(a, b) && !self.contains(a) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }
}

impl fmt::Debug for DecidableSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DecidableSubset {{ monotone: {} }}", self.monotone)
    }
}

/// Membership in `↓U`: some prefix of `a`, including `nil` and `a`, lies in `U`.
pub fn monotone_closure_member(u: &DecidableSubset, a: &FiniteSeq) -> bool {
    (0..=a.len()).any(|k| u.contains_raw(&a.entries()[..k]))
}

/// `a ≤ b ↔ a ◁ {b}`; decides covers by a singleton.
pub fn cover_singleton(a: &FiniteSeq, b: &FiniteSeq) -> bool {
    leq_b(a, b)
}

/// `b ∈ C_a`.
pub fn complement_member(a: &FiniteSeq, b: &FiniteSeq) -> bool {
    complement_member_raw(a.entries(), b.entries())
}

fn complement_member_raw(a: &[u64], b: &[u64]) -> bool {
    a.len() == b.len() && a != b
}
