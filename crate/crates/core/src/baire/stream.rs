use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::DecidableSubset;
use crate::seq::FiniteSeq;

/// A choice sequence presented by a total, deterministic generator ℕ → ℕ.
///
/// The point it denotes is the set of its finite prefixes.
#[derive(Clone)]
pub struct ChoiceStream {
    generator: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
}

impl ChoiceStream {
    pub fn from_fn(f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        ChoiceStream { generator: Arc::new(f) }
    }

    pub fn constant(n: u64) -> Self {
        Self::from_fn(move |_| n)
    }

    /// `a` followed by zeros.
    pub fn zeros_after(a: &FiniteSeq) -> Self {
        Self::table(a.entries().to_vec(), alloc::vec![0]).expect("non-empty cycle")
    }

    /// Repeats `period` forever; `None` when `period` is empty.
    pub fn periodic(period: Vec<u64>) -> Option<Self> {
        Self::table(Vec::new(), period)
    }

    /// `prefix` followed by `cycle` repeated forever; `None` when `cycle` is empty.
    pub fn table(prefix: Vec<u64>, cycle: Vec<u64>) -> Option<Self> {
        if cycle.is_empty() {
            return None;
        }
        Some(Self::from_fn(move |i| {
            let i = usize::try_from(i).unwrap_or(usize::MAX);
            match prefix.get(i) {
                Some(&x) => x,
                None => cycle[(i - prefix.len()) % cycle.len()],
            }
        }))
    }

    /// The stream that agrees with `self` below `prefix.len()` replaced by `prefix`.
    pub fn with_prefix(&self, prefix: &FiniteSeq) -> Self {
        let head = prefix.entries().to_vec();
        let rest = self.generator.clone();
        Self::from_fn(move |i| match head.get(i as usize) {
            Some(&x) => x,
            None => rest(i),
        })
    }

    pub fn at(&self, index: u64) -> u64 {
        (self.generator)(index)
    }

    /// The first `k` values.
    pub fn prefix(&self, k: usize) -> FiniteSeq {
        FiniteSeq::new((0..k as u64).map(|i| self.at(i)).collect())
    }

    /// Whether `a` is one of the prefixes of this stream.
    pub fn passes_through(&self, a: &FiniteSeq) -> bool {
        a.entries().iter().enumerate().all(|(i, &x)| self.at(i as u64) == x)
    }
}

impl fmt::Debug for ChoiceStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChoiceStream{}..", self.prefix(8))
    }
}

/// `α_a`: the prefixes of `a` and then `a` padded with zeros.
pub fn alpha_point(a: &FiniteSeq) -> ChoiceStream {
    ChoiceStream::zeros_after(a)
}

/// Outcome of a bounded check that every prefix of a stream lies in a subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntersVerdict {
    /// Prefixes of length `0..=depth` are all members.
    ConsistentToDepth(usize),
    /// The prefix of length `k` is not a member.
    FailsAt { k: usize, prefix: FiniteSeq },
}

/// Checks `prefix(k) ∈ U` for all `k ≤ depth`. A failure refutes `α ⊆ U`;
/// success only confirms it up to `depth`.
pub fn enters_positivity_bounded(alpha: &ChoiceStream, u: &DecidableSubset, depth: usize) -> EntersVerdict {
    let mut prefix = Vec::with_capacity(depth);
    for k in 0..=depth {
        if !u.contains_raw(&prefix) {
            return EntersVerdict::FailsAt {
                k,
                prefix: FiniteSeq::new(prefix),
            };
        }
        prefix.push(alpha.at(k as u64));
    }
    EntersVerdict::ConsistentToDepth(depth)
}
