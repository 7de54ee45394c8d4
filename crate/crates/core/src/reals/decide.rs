use alloc::vec::Vec;

use super::{Mode, RatInterval};
use crate::rational::Rational;

/// The set of points a cover of `t` has to reach: `(p, q)` for the reals and
/// `(p, q) ∩ [0, 1]` for the unit interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl Segment {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }
}

/// `None` when the segment is empty.
pub fn target_segment(mode: Mode, t: &RatInterval) -> Option<Segment> {
    let (p, q) = (t.left(), t.right());
    let seg = match mode {
        Mode::Real => Segment {
            lo: p.clone(),
            lo_closed: false,
            hi: q.clone(),
            hi_closed: false,
        },
        Mode::UnitInterval => {
            let (zero, one) = (Rational::zero(), Rational::one());
            Segment {
                lo: p.max(&zero).clone(),
                lo_closed: p < &zero,
                hi: q.min(&one).clone(),
                hi_closed: q > &one,
            }
        }
    };
    let inhabited = seg.lo < seg.hi || (seg.lo == seg.hi && seg.lo_closed && seg.hi_closed);
    inhabited.then_some(seg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// Indices into the family, in sweep order. Consecutive members overlap
    /// strictly; the first reaches below the segment and the last beyond it.
    Covered { chain: Vec<usize> },
    /// A point of the target segment outside every member.
    Uncovered { witness: Rational },
}

impl Decision {
    pub fn is_covered(&self) -> bool {
        matches!(self, Decision::Covered { .. })
    }
}

/// Decides `t ◁ U` for a finite `U` by sweeping the target segment from
/// left to right. At each frontier it takes, among the members that reach
/// the frontier, the one extending furthest.
pub fn decide(mode: Mode, t: &RatInterval, u: &[RatInterval]) -> Decision {
    let Some(seg) = target_segment(mode, t) else {
        return Decision::Covered { chain: Vec::new() };
    };
    let mut cur = seg.lo.clone();
    // Whether `cur` itself still has to be covered.
    let mut need = seg.lo_closed;
    let mut chain = Vec::new();
    loop {
        let best = u
            .iter()
            .enumerate()
            .filter(|(_, iv)| {
                let reaches = if need { iv.left() < &cur } else { iv.left() <= &cur };
                reaches && iv.right() > &cur
            })
            .max_by(|(i, a), (j, b)| a.right().cmp(b.right()).then(j.cmp(i)));
        let Some((i, iv)) = best else {
            let witness = if need {
                cur
            } else {
                let next = u
                    .iter()
                    .map(RatInterval::left)
                    .filter(|a| *a > &cur)
                    .fold(seg.hi.clone(), |m, a| if a < &m { a.clone() } else { m });
                cur.midpoint(&next)
            };
            return Decision::Uncovered { witness };
        };
        chain.push(i);
        cur = iv.right().clone();
        need = true;
        let done = if seg.hi_closed { cur > seg.hi } else { cur >= seg.hi };
        if done {
            return Decision::Covered { chain };
        }
    }
}

pub fn finite_cover_decide(mode: Mode, t: &RatInterval, u: &[RatInterval]) -> bool {
    decide(mode, t, u).is_covered()
}
