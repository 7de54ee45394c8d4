//! Finite sequences of natural numbers and the reverse-prefix order.
//!
//! `a ≤ b` in the Baire order means that `b` is an initial segment of `a`:
//! longer sequences are *smaller* (more refined) neighbourhoods. Every
//! function here follows that convention.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// An element of ℕ*: a finite, possibly empty, list of naturals.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSeq(Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("operation requires a non-empty sequence")]
    NonEmptyRequired,
    #[error("malformed sequence token `{0}`: expected `[n,m,...]`")]
    Malformed(alloc::string::String),
}

impl FiniteSeq {
    /// The empty sequence `nil`.
    pub const fn nil() -> Self {
        FiniteSeq(Vec::new())
    }

    pub fn new(entries: Vec<u64>) -> Self {
        FiniteSeq(entries)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nil(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<u64> {
        self.0.get(index).copied()
    }

    /// `a * b`.
    pub fn concat(&self, other: &FiniteSeq) -> FiniteSeq {
        let mut entries = Vec::with_capacity(self.len() + other.len());
        entries.extend_from_slice(&self.0);
        entries.extend_from_slice(&other.0);
        FiniteSeq(entries)
    }

    /// `a * n`.
    pub fn push(&self, n: u64) -> FiniteSeq {
        let mut entries = Vec::with_capacity(self.len() + 1);
        entries.extend_from_slice(&self.0);
        entries.push(n);
        FiniteSeq(entries)
    }

    /// The initial segment of length `n` (the whole sequence when `n` is too large).
    pub fn initial_segment(&self, n: usize) -> FiniteSeq {
        FiniteSeq(self.0[..n.min(self.len())].to_vec())
    }

    /// Splits `a * n` into `(a, n)`.
    pub fn split_last(&self) -> Result<(FiniteSeq, u64), SeqError> {
        match self.0.split_last() {
            Some((last, init)) => Ok((FiniteSeq(init.to_vec()), *last)),
            None => Err(SeqError::NonEmptyRequired),
        }
    }

    /// True iff `prefix` is an initial segment of `self`.
    pub fn has_prefix(&self, prefix: &FiniteSeq) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// All initial segments, shortest first: `nil, ā1, …, a`.
    pub fn prefixes(&self) -> impl Iterator<Item = FiniteSeq> + '_ {
        (0..=self.len()).map(move |n| self.initial_segment(n))
    }
}

/// The Baire order: `a ≤_B b` iff `b` is an initial segment of `a`.
pub fn leq_b(a: &FiniteSeq, b: &FiniteSeq) -> bool {
    a.has_prefix(b)
}

pub fn concat(a: &FiniteSeq, b: &FiniteSeq) -> FiniteSeq {
    a.concat(b)
}

pub fn split_last(a: &FiniteSeq) -> Result<(FiniteSeq, u64), SeqError> {
    a.split_last()
}

impl From<Vec<u64>> for FiniteSeq {
    fn from(entries: Vec<u64>) -> Self {
        FiniteSeq(entries)
    }
}

impl From<&[u64]> for FiniteSeq {
    fn from(entries: &[u64]) -> Self {
        FiniteSeq(entries.to_vec())
    }
}

impl<const N: usize> From<[u64; N]> for FiniteSeq {
    fn from(entries: [u64; N]) -> Self {
        FiniteSeq(entries.to_vec())
    }
}

impl fmt::Display for FiniteSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for FiniteSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FiniteSeq {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || SeqError::Malformed(s.into());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(malformed)?;
        if inner.trim().is_empty() {
            return Ok(FiniteSeq::nil());
        }
        inner
            .split(',')
            .map(|tok| tok.trim().parse::<u64>().map_err(|_| malformed()))
            .collect::<Result<Vec<_>, _>>()
            .map(FiniteSeq)
    }
}

/// Every sequence of length exactly `len` over `{0, …, alphabet-1}`, in
/// lexicographic order.
pub fn all_of_length(alphabet: u64, len: usize) -> Vec<FiniteSeq> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fill(alphabet, len, &mut current, &mut out);
    out
}

/// Every sequence of length at most `max_len` over `{0, …, alphabet-1}`,
/// shorter ones first.
pub fn all_up_to_length(alphabet: u64, max_len: usize) -> Vec<FiniteSeq> {
    (0..=max_len).flat_map(|len| all_of_length(alphabet, len)).collect()
}

fn fill(alphabet: u64, len: usize, current: &mut Vec<u64>, out: &mut Vec<FiniteSeq>) {
    if current.len() == len {
        out.push(FiniteSeq(current.clone()));
        return;
    }
    for n in 0..alphabet {
        current.push(n);
        fill(alphabet, len, current, out);
        current.pop();
    }
}
