//! Spreads: decidable, prefix-closed trees in which every node has a child.
//!
//! A spread `U` relativises the Baire space: `a ◁_U V` is `a ◁ ¬U ∪ V` and
//! `a ⋉_U V` is `a ⋉ U ∩ V`. The retraction sends every sequence to the
//! nearest branch of `U`, choosing the least admissible digit whenever the
//! input leaves the tree. The binary spread is the Cantor space.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::baire::{enters_positivity_bounded, ChoiceStream, DecidableSubset, Derivation, EntersVerdict};
use crate::seq::{all_up_to_length, FiniteSeq};

type Member = Arc<dyn Fn(&[u64]) -> bool + Send + Sync>;
type Hint = Arc<dyn Fn(&[u64]) -> u64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpreadError {
    #[error("not a spread: {0}")]
    InvalidSpread(String),
    #[error("no child of {at} below {fuel} is in the spread")]
    FuelExhausted { at: FiniteSeq, fuel: u64 },
    #[error("no uniform bar depth up to {max}")]
    DepthExhausted { max: usize },
}

/// A decidable tree `U ⊆ ℕ*` with `nil ∈ U`, closed under prefixes, and
/// with a child below every node.
///
/// The optional hint proposes a child of a member; it only speeds up
/// validity checks and never changes which child the retraction picks.
#[derive(Clone)]
pub struct Spread {
    member: Member,
    hint: Option<Hint>,
}

impl Spread {
    pub fn from_fn(member: impl Fn(&[u64]) -> bool + Send + Sync + 'static) -> Self {
        Spread {
            member: Arc::new(member),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Fn(&[u64]) -> u64 + Send + Sync + 'static) -> Self {
        self.hint = Some(Arc::new(hint));
        self
    }

    /// Entries in `{0, 1}`.
    pub fn binary() -> Self {
        Self::kary(2).expect("arity 2 is positive")
    }

    /// Entries below `k`; `None` when `k = 0`.
    pub fn kary(k: u64) -> Option<Self> {
        (k > 0).then(|| Self::from_fn(move |a| a.iter().all(|&x| x < k)).with_hint(|_| 0))
    }

    /// Entries at least `c`.
    pub fn min_entry(c: u64) -> Self {
        Self::from_fn(move |a| a.iter().all(|&x| x >= c)).with_hint(move |_| c)
    }

    /// The entry at index `i` has the parity of `i`.
    pub fn parity() -> Self {
        Self::from_fn(|a| a.iter().enumerate().all(|(i, &x)| x % 2 == i as u64 % 2)).with_hint(|a| a.len() as u64 % 2)
    }

    /// Membership listed up to length `depth`; longer sequences are members
    /// iff their length-`depth` prefix is. `None` unless the listed set is a
    /// tree through `nil` in which every member shorter than `depth` has a
    /// listed child.
    pub fn table(depth: usize, members: impl IntoIterator<Item = FiniteSeq>) -> Option<Self> {
        let set: BTreeSet<Vec<u64>> = members.into_iter().map(FiniteSeq::into_entries).collect();
        if !set.contains(&Vec::new()) || set.iter().any(|a| a.len() > depth) {
            return None;
        }
        for a in &set {
            if !a.is_empty() && !set.contains(&a[..a.len() - 1]) {
                return None;
            }
            if a.len() < depth && !set.iter().any(|b| b.len() == a.len() + 1 && b.starts_with(a)) {
                return None;
            }
        }
        let children: Vec<(Vec<u64>, u64)> = set
            .iter()
            .filter(|a| a.len() < depth)
            .map(|a| {
                let child = set
                    .iter()
                    .find(|b| b.len() == a.len() + 1 && b.starts_with(a))
                    .expect("checked above");
                (a.clone(), child[a.len()])
            })
            .collect();
        let member = move |a: &[u64]| set.contains(&a[..a.len().min(depth)]);
        let hint = move |a: &[u64]| children.iter().find(|(b, _)| b.as_slice() == a).map_or(0, |&(_, n)| n);
        Some(Self::from_fn(member).with_hint(hint))
    }

    /// A reproducible pseudorandom spread. At every member `a` the digit
    /// `h(a) mod 4` is always allowed, and each other digit below 8 is
    /// allowed with probability about 1/3.
    pub fn seeded(seed: u64) -> Self {
        let member = move |a: &[u64]| (0..a.len()).all(|i| seeded_allows(seed, &a[..i], a[i]));
        Self::from_fn(member).with_hint(move |a| seeded_default(seed, a))
    }

    pub fn contains(&self, a: &FiniteSeq) -> bool {
        (self.member)(a.entries())
    }

    pub fn contains_raw(&self, a: &[u64]) -> bool {
        (self.member)(a)
    }

    pub fn hint(&self, a: &[u64]) -> Option<u64> {
        self.hint.as_ref().map(|h| h(a))
    }

    /// `U` as a decidable subset of ℕ*.
    pub fn to_subset(&self) -> DecidableSubset {
        let m = self.member.clone();
        DecidableSubset::from_fn(move |a| m(a))
    }

    /// `¬U`.
    pub fn complement(&self) -> DecidableSubset {
        let m = self.member.clone();
        DecidableSubset::monotone(move |a| !m(a))
    }

    /// Checks the spread conditions on every sequence of length `≤ depth`
    /// with entries below `alphabet`; extension is checked via the hint when
    /// present and by searching children below `fuel` otherwise.
    pub fn validate(&self, depth: usize, alphabet: u64, fuel: u64) -> Result<(), SpreadError> {
        if !self.contains_raw(&[]) {
            return Err(SpreadError::InvalidSpread("nil is not a member".to_string()));
        }
        for a in all_up_to_length(alphabet, depth) {
            let a = a.entries();
            if !self.contains_raw(a) {
                continue;
            }
            if !a.is_empty() && !self.contains_raw(&a[..a.len() - 1]) {
                return Err(SpreadError::InvalidSpread(alloc::format!(
                    "{} is a member but its parent is not",
                    FiniteSeq::from(a)
                )));
            }
            let mut child = a.to_vec();
            match self.hint(a) {
                Some(n) => {
                    child.push(n);
                    if !self.contains_raw(&child) {
                        return Err(SpreadError::InvalidSpread(alloc::format!(
                            "hint {n} at {} leaves the spread",
                            FiniteSeq::from(a)
                        )));
                    }
                }
                None => {
                    least_child(self, a, fuel)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Spread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Spread")
            .field("hinted", &self.hint.is_some())
            .finish_non_exhaustive()
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn node_hash(seed: u64, a: &[u64]) -> u64 {
    a.iter().fold(mix(seed), |h, &x| mix(h ^ mix(x)))
}

fn seeded_default(seed: u64, a: &[u64]) -> u64 {
    node_hash(seed, a) % 4
}

fn seeded_allows(seed: u64, a: &[u64], n: u64) -> bool {
    n == seeded_default(seed, a) || (n < 8 && mix(node_hash(seed, a) ^ n).is_multiple_of(3))
}

/// The least `l < fuel` with `a * l ∈ U`.
fn least_child(u: &Spread, a: &[u64], fuel: u64) -> Result<u64, SpreadError> {
    let mut child = a.to_vec();
    child.push(0);
    for l in 0..fuel {
        *child.last_mut().expect("pushed") = l;
        if u.contains_raw(&child) {
            return Ok(l);
        }
    }
    Err(SpreadError::FuelExhausted {
        at: FiniteSeq::from(a),
        fuel,
    })
}

/// The unique `b` with `a s b` for the retraction `s` onto `U`:
///
/// * `nil s nil`;
/// * `a s b` and `b * n ∈ U` give `a * n s b * n`;
/// * `a s b` and `b * n ∉ U` give `a * n s b * l`, `l` least with `b * l ∈ U`.
pub fn retract_seq(u: &Spread, a: &FiniteSeq, fuel: u64) -> Result<FiniteSeq, SpreadError> {
    if !u.contains_raw(&[]) {
        return Err(SpreadError::InvalidSpread("nil is not a member".to_string()));
    }
    let mut b = Vec::with_capacity(a.len());
    for &n in a.entries() {
        b.push(n);
        if !u.contains_raw(&b) {
            b.pop();
            let l = least_child(u, &b, fuel)?;
            b.push(l);
        }
    }
    Ok(FiniteSeq::new(b))
}

/// The first `k` values of the retracted stream.
pub fn retract_prefix(u: &Spread, alpha: &ChoiceStream, k: usize, fuel: u64) -> Result<FiniteSeq, SpreadError> {
    retract_seq(u, &alpha.prefix(k), fuel)
}

/// The stream whose length-`k` prefix is the retraction of `α`'s.
///
/// The retraction commutes with one-step extension, so entry `i` depends
/// only on `α`'s first `i + 1` values. Panics when a least-digit search
/// runs out of fuel; call [`retract_prefix`] to handle that as an error.
pub fn retract_stream(u: &Spread, alpha: &ChoiceStream, fuel: u64) -> ChoiceStream {
    let (u, alpha) = (u.clone(), alpha.clone());
    ChoiceStream::from_fn(move |i| {
        let b = retract_prefix(&u, &alpha, i as usize + 1, fuel).unwrap_or_else(|e| panic!("{e}"));
        b.get(i as usize).expect("retraction preserves length")
    })
}

/// `a ◁_U V` restated over the Baire space as `a ◁ target`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub at: FiniteSeq,
    /// `¬U ∪ V`.
    pub target: DecidableSubset,
}

/// Reduces `a ◁_U V` to `a ◁ ¬U ∪ V`; certificates for the latter certify
/// the former.
pub fn relativized_cover_via_baire(u: &Spread, a: &FiniteSeq, v: &DecidableSubset) -> Reduction {
    Reduction {
        at: a.clone(),
        target: u.complement().union(v),
    }
}

/// Bounded check of `a ⋉_U V` witnessed by `α`: every prefix of `α` up to
/// `depth` lies in `U ∩ V`.
pub fn relativized_positivity_bounded(
    u: &Spread,
    alpha: &ChoiceStream,
    v: &DecidableSubset,
    depth: usize,
) -> EntersVerdict {
    enters_positivity_bounded(alpha, &u.to_subset().intersection(v), depth)
}

/// A derivation of `a ◁ ¬U ∪ {a * b | lh b = n}`: `n` fan layers whose
/// branches leaving `U` stop at an η-leaf in `¬U`.
pub fn spread_level_derivation(u: &Spread, a: &FiniteSeq, n: usize) -> Derivation {
    if n == 0 || !u.contains(a) {
        return Derivation::eta(a.clone());
    }
    let (u, a0) = (u.clone(), a.clone());
    Derivation::fan(a.clone(), move |k| spread_level_derivation(&u, &a0.push(k), n - 1))
}

/// The least `k ≤ max` such that every binary sequence of length `k` has a
/// prefix in `U`.
pub fn fan_uniform_depth(u: &DecidableSubset, max: usize) -> Result<usize, SpreadError> {
    fn height(u: &DecidableSubset, node: &mut Vec<u64>, max: usize) -> Option<usize> {
        if u.contains_raw(node) {
            return Some(node.len());
        }
        if node.len() >= max {
            return None;
        }
        let mut deepest = 0;
        for bit in 0..2 {
            node.push(bit);
            let h = height(u, node, max);
            node.pop();
            deepest = deepest.max(h?);
        }
        Some(deepest)
    }
    height(u, &mut Vec::new(), max).ok_or(SpreadError::DepthExhausted { max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baire::{check_derivation, split_cover};

    fn s(v: &[u64]) -> FiniteSeq {
        FiniteSeq::from(v)
    }

    #[test]
    fn binary_retraction_examples() {
        let u = Spread::binary();
        assert_eq!(retract_seq(&u, &s(&[5]), 100), Ok(s(&[0])));
        assert_eq!(retract_seq(&u, &s(&[5, 7]), 100), Ok(s(&[0, 0])));
        assert_eq!(retract_seq(&u, &s(&[0, 1]), 100), Ok(s(&[0, 1])));
        assert_eq!(retract_seq(&u, &s(&[1, 3, 1]), 100), Ok(s(&[1, 0, 1])));
    }

    #[test]
    fn retracted_streams() {
        let alpha = ChoiceStream::table(alloc::vec![5, 7], alloc::vec![9]).unwrap();
        assert_eq!(
            retract_stream(&Spread::binary(), &alpha, 100).prefix(4),
            s(&[0, 0, 0, 0])
        );
        let min3 = Spread::min_entry(3);
        assert_eq!(
            retract_stream(&min3, &ChoiceStream::constant(0), 100).prefix(5),
            s(&[3; 5])
        );
        let through = ChoiceStream::periodic(alloc::vec![1, 0, 0]).unwrap();
        assert_eq!(
            retract_stream(&Spread::binary(), &through, 100).prefix(100),
            through.prefix(100)
        );
    }

    #[test]
    fn invalid_spreads_are_reported() {
        let no_nil = Spread::from_fn(|a| !a.is_empty());
        assert!(matches!(
            retract_seq(&no_nil, &s(&[1]), 10),
            Err(SpreadError::InvalidSpread(_))
        ));
        let dead_end = Spread::from_fn(|a| a.len() <= 1);
        assert_eq!(
            retract_seq(&dead_end, &s(&[0, 0]), 10),
            Err(SpreadError::FuelExhausted { at: s(&[0]), fuel: 10 })
        );
        assert!(dead_end.validate(2, 2, 10).is_err());
        assert!(Spread::table(1, [FiniteSeq::nil()]).is_none());
        assert!(Spread::table(1, [s(&[1])]).is_none());
        assert!(Spread::kary(0).is_none());
    }

    #[test]
    fn generated_spreads_validate() {
        let table = Spread::table(2, [FiniteSeq::nil(), s(&[2]), s(&[2, 0]), s(&[2, 5])]).unwrap();
        assert!(table.contains(&s(&[2, 5, 9, 9])));
        assert!(!table.contains(&s(&[0])));
        for u in [
            Spread::binary(),
            Spread::kary(3).unwrap(),
            Spread::min_entry(2),
            Spread::parity(),
            table,
        ] {
            assert_eq!(u.validate(3, 4, 50), Ok(()));
        }
        for seed in 0..20 {
            assert_eq!(Spread::seeded(seed).validate(3, 9, 50), Ok(()));
        }
    }

    #[test]
    fn relativized_cover_reduction() {
        let u = Spread::binary();
        let outside = relativized_cover_via_baire(&u, &s(&[4]), &DecidableSubset::empty());
        assert!(outside.target.contains(&s(&[4])));

        let red = relativized_cover_via_baire(&u, &FiniteSeq::nil(), &DecidableSubset::level(2));
        let d = spread_level_derivation(&u, &FiniteSeq::nil(), 2);
        let probes = [s(&[0, 1]), s(&[1, 1]), s(&[7]), s(&[0, 7])];
        assert!(check_derivation(&d, &red.target, &probes, 100).unwrap().locally_valid());
        let alpha = ChoiceStream::table(alloc::vec![1, 0], alloc::vec![1]).unwrap();
        assert_eq!(split_cover(&alpha, &d, &red.target, 100), Ok(s(&[1, 0])));
    }

    #[test]
    fn relativized_positivity() {
        let u = Spread::binary();
        let alpha = ChoiceStream::periodic(alloc::vec![0, 1]).unwrap();
        assert_eq!(
            relativized_positivity_bounded(&u, &alpha, &DecidableSubset::all(), 100),
            EntersVerdict::ConsistentToDepth(100)
        );
        assert!(matches!(
            relativized_positivity_bounded(&u, &ChoiceStream::constant(2), &DecidableSubset::all(), 5),
            EntersVerdict::FailsAt { k: 1, .. }
        ));
    }

    #[test]
    fn fan_depth_examples() {
        assert_eq!(fan_uniform_depth(&DecidableSubset::level(3), 10), Ok(3));
        assert_eq!(
            fan_uniform_depth(&DecidableSubset::finite([s(&[0])]), 12),
            Err(SpreadError::DepthExhausted { max: 12 })
        );
        assert_eq!(
            fan_uniform_depth(&DecidableSubset::finite([FiniteSeq::nil()]), 0),
            Ok(0)
        );
        let uneven = DecidableSubset::finite([s(&[0]), s(&[1, 0]), s(&[1, 1, 0]), s(&[1, 1, 1])]);
        assert_eq!(fan_uniform_depth(&uneven, 5), Ok(3));
    }
}
