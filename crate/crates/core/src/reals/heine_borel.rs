use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::decide::{decide, Decision};
use super::{Mode, RatInterval, RealsError};
use crate::rational::Rational;

/// A countable family of intervals `C₀, C₁, …` given by a total function.
#[derive(Clone)]
pub struct EnumeratedCover {
    next: Arc<dyn Fn(u64) -> RatInterval + Send + Sync>,
}

impl EnumeratedCover {
    pub fn from_fn(f: impl Fn(u64) -> RatInterval + Send + Sync + 'static) -> Self {
        EnumeratedCover { next: Arc::new(f) }
    }

    pub fn constant(iv: RatInterval) -> Self {
        Self::from_fn(move |_| iv.clone())
    }

    /// The listed intervals, then the last one repeated. `None` when empty.
    pub fn from_list(list: Vec<RatInterval>) -> Option<Self> {
        if list.is_empty() {
            return None;
        }
        Some(Self::from_fn(move |i| {
            let i = usize::try_from(i).unwrap_or(usize::MAX).min(list.len() - 1);
            list[i].clone()
        }))
    }

    /// `(1/2, 2)`, then `(−1/(n+2), n/(n+2))` for `n ≥ 1`. Covers `[0, 1]`:
    /// the right ends climb past `1/2`.
    pub fn shrinking() -> Self {
        Self::from_fn(|i| {
            if i == 0 {
                RatInterval::of(1, 2, 2, 1)
            } else {
                let d = i as i64 + 2;
                RatInterval::of(-1, d, i as i64, d)
            }
        })
    }

    /// `(1/(n+3), 1 − 1/(n+3))`. Every finite prefix misses a neighbourhood of
    /// 0, so no prefix covers `(0, 1)`.
    pub fn inner() -> Self {
        Self::from_fn(|i| {
            let d = i as i64 + 3;
            RatInterval::of(1, d, d - 1, d)
        })
    }

    pub fn get(&self, i: u64) -> RatInterval {
        (self.next)(i)
    }

    pub fn prefix(&self, len: usize) -> Vec<RatInterval> {
        (0..len as u64).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for EnumeratedCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.prefix(4)).finish()
    }
}

/// The least covering prefix of an enumerated cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcover {
    /// `C₀, …, C_k`; dropping `C_k` breaks the cover.
    pub prefix: Vec<RatInterval>,
    /// The members the sweep actually used, in sweep order.
    pub chain: Vec<RatInterval>,
}

/// Searches `C₀..=C_k` for `k < fuel` and returns the first prefix that
/// covers `t`.
pub fn heine_borel(mode: Mode, t: &RatInterval, cover: &EnumeratedCover, fuel: usize) -> Result<Subcover, RealsError> {
    let mut prefix = Vec::new();
    for k in 0..fuel {
        prefix.push(cover.get(k as u64));
        if let Decision::Covered { chain } = decide(mode, t, &prefix) {
            let chain = chain.into_iter().map(|i| prefix[i].clone()).collect();
            return Ok(Subcover { prefix, chain });
        }
    }
    Err(RealsError::FuelExhausted { fuel })
}

/// The first uncovered point found in each prefix `C₀..=C_k`, `k < len`.
pub fn prefix_witnesses(mode: Mode, t: &RatInterval, cover: &EnumeratedCover, len: usize) -> Vec<Option<Rational>> {
    (1..=len)
        .map(|k| match decide(mode, t, &cover.prefix(k)) {
            Decision::Covered { .. } => None,
            Decision::Uncovered { witness } => Some(witness),
        })
        .collect()
}
