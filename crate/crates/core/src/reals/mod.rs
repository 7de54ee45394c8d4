//! Formal reals on rational open intervals.
//!
//! The base is `{(p, q) | p < q}` ordered by inclusion. The cover is
//! generated by four rules (η, `≤`-weakening, `<`-approximation and
//! overlap splitting); the unit interval adds two rules that discard
//! intervals lying entirely below 0 or above 1. For a finite family `U`,
//! `(p, q) ◁ U` holds exactly when the points of `(p, q)` (intersected with
//! `[0, 1]` for the unit interval) lie in the union of `U`, and
//! [`decide`] settles that by an endpoint sweep.

mod certificate;
mod decide;
mod heine_borel;

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::rational::{Rational, RationalError};

pub use certificate::{certify, validate, CertificateViolation, RealCertificate};
pub use decide::{decide, finite_cover_decide, target_segment, Decision, Segment};
pub use heine_borel::{heine_borel, prefix_witnesses, EnumeratedCover, Subcover};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealsError {
    #[error("empty interval: {p} is not below {q}")]
    EmptyInterval { p: Rational, q: Rational },
    #[error("malformed interval `{0}`: expected `p/q,r/s` or `p/q..r/s`")]
    Malformed(String),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error("not covered: {witness} is missed")]
    NotCoverable { witness: Rational },
    #[error("no prefix of the first {fuel} elements covers the target")]
    FuelExhausted { fuel: usize },
}

/// Which topology a cover question is asked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// The formal reals.
    Real,
    /// The formal unit interval.
    UnitInterval,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Real => "r",
            Mode::UnitInterval => "i01",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "r" | "R" => Ok(Mode::Real),
            "i01" | "I01" => Ok(Mode::UnitInterval),
            other => Err(alloc::format!("unknown mode `{other}`: expected `r` or `i01`")),
        }
    }
}

/// An open interval `(p, q)` with rational endpoints and `p < q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatInterval {
    p: Rational,
    q: Rational,
}

impl RatInterval {
    pub fn new(p: Rational, q: Rational) -> Result<Self, RealsError> {
        if p < q {
            Ok(RatInterval { p, q })
        } else {
            Err(RealsError::EmptyInterval { p, q })
        }
    }

    /// `(a/b, c/d)`; panics unless `a/b < c/d`.
    pub fn of(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(Rational::new(a, b), Rational::new(c, d)).expect("left endpoint below right")
    }

    pub fn left(&self) -> &Rational {
        &self.p
    }

    pub fn right(&self) -> &Rational {
        &self.q
    }

    /// `self ≤ other`: `other.p ≤ p` and `q ≤ other.q`.
    pub fn leq(&self, other: &RatInterval) -> bool {
        other.p <= self.p && self.q <= other.q
    }

    /// `self < other`: `other.p < p` and `q < other.q`.
    pub fn lt(&self, other: &RatInterval) -> bool {
        other.p < self.p && self.q < other.q
    }

    /// Whether the point `x` lies in the open interval.
    pub fn contains(&self, x: &Rational) -> bool {
        &self.p < x && x < &self.q
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p,q`, `p..q` and `(p,q)`.
impl FromStr for RatInterval {
    type Err = RealsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(trimmed);
        let (p, q) = inner
            .split_once("..")
            .or_else(|| inner.split_once(','))
            .ok_or_else(|| RealsError::Malformed(trimmed.into()))?;
        Self::new(p.parse()?, q.parse()?)
    }
}
