//! Relations `s ⊆ ℕ* × ℕ` read as neighbourhood functions.
//!
//! A monotone, single-valued relation whose domain is a bar presents a
//! continuous map from choice sequences to ℕ: the value at `α` is read off
//! the first prefix of `α` with a non-empty fiber. This module evaluates such
//! maps on streams, extracts moduli, runs bounded checks of the
//! partial-function conditions, and implements the bar transforms for Σ⁰₁
//! and Π⁰₁ presentations.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::baire::{alpha_point, ChoiceStream, DecidableSubset};
use crate::pairing::unpair;
use crate::seq::{all_up_to_length, FiniteSeq};

type Fiber = Arc<dyn Fn(&[u64]) -> Vec<u64> + Send + Sync>;
type Predicate2 = Arc<dyn Fn(&[u64], u64) -> bool + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContinuityError {
    #[error("no prefix with a non-empty fiber among the first {fuel} prefixes")]
    FuelExhausted { fuel: usize },
    #[error("fiber at {at} has {} values; single-valuedness violated", values.len())]
    NotSingleValued { at: FiniteSeq, values: Vec<u64> },
}

/// A relation `ℕ* → Fin(ℕ)` given by its fibers `s{a}`.
///
/// The `monotone` and `single_valued` flags are claims made by the
/// constructor; [`check_pfunction_conditions`] spot-checks them.
#[derive(Clone)]
pub struct SeqNatRelation {
    fiber: Fiber,
    monotone: bool,
    single_valued: bool,
}

impl SeqNatRelation {
    /// A relation with no claimed properties. Fibers are sorted and deduplicated
    /// on every call.
    pub fn from_fn(f: impl Fn(&[u64]) -> Vec<u64> + Send + Sync + 'static) -> Self {
        SeqNatRelation {
            fiber: Arc::new(f),
            monotone: false,
            single_valued: false,
        }
    }

    /// A relation with at most one value per node.
    pub fn partial_fn(f: impl Fn(&[u64]) -> Option<u64> + Send + Sync + 'static) -> Self {
        SeqNatRelation {
            fiber: Arc::new(move |a| f(a).into_iter().collect()),
            monotone: false,
            single_valued: true,
        }
    }

    pub fn declare_monotone(mut self) -> Self {
        self.monotone = true;
        self
    }

    pub fn declare_single_valued(mut self) -> Self {
        self.single_valued = true;
        self
    }

    pub fn empty() -> Self {
        Self::partial_fn(|_| None).declare_monotone()
    }

    /// `{n}` at every node.
    pub fn constant(n: u64) -> Self {
        Self::partial_fn(move |_| Some(n)).declare_monotone()
    }

    /// `a ↦ a₀`, defined once `lh a ≥ 1`.
    pub fn first_entry() -> Self {
        Self::partial_fn(|a| a.first().copied()).declare_monotone()
    }

    /// `a ↦ a₀ + … + a_{k-1}`, defined once `lh a ≥ k`.
    ///
    /// The sum saturates at `u64::MAX`.
    pub fn sum_first_k(k: usize) -> Self {
        Self::partial_fn(move |a| (a.len() >= k).then(|| a[..k].iter().fold(0u64, |acc, &x| acc.saturating_add(x))))
            .declare_monotone()
    }

    /// `a s n ⇔ a ∈ U ∧ n = 0`; monotone when `U` is.
    pub fn indicator(u: DecidableSubset) -> Self {
        let monotone = u.is_declared_monotone();
        let rel = Self::partial_fn(move |a| u.contains_raw(a).then_some(0));
        if monotone {
            rel.declare_monotone()
        } else {
            rel
        }
    }

    /// The finite relation `{(a, n)}` listed in `pairs`; fibers are exact, with no
    /// inheritance along prefixes.
    pub fn from_table(pairs: impl IntoIterator<Item = (FiniteSeq, u64)>) -> Self {
        let mut table: Vec<(Vec<u64>, u64)> = pairs.into_iter().map(|(a, n)| (a.into_entries(), n)).collect();
        table.sort();
        table.dedup();
        let single_valued = table.windows(2).all(|w| w[0].0 != w[1].0);
        let rel = Self::from_fn(move |a| {
            let start = table.partition_point(|(b, _)| b.as_slice() < a);
            table[start..]
                .iter()
                .take_while(|(b, _)| b.as_slice() == a)
                .map(|&(_, n)| n)
                .collect()
        });
        if single_valued {
            rel.declare_single_valued()
        } else {
            rel
        }
    }

    pub fn is_declared_monotone(&self) -> bool {
        self.monotone
    }

    pub fn is_declared_single_valued(&self) -> bool {
        self.single_valued
    }

    /// `s{a}`, sorted and without duplicates.
    pub fn fiber(&self, a: &FiniteSeq) -> Vec<u64> {
        self.fiber_raw(a.entries())
    }

    pub fn fiber_raw(&self, a: &[u64]) -> Vec<u64> {
        let mut values = (self.fiber)(a);
        values.sort_unstable();
        values.dedup();
        values
    }

    pub fn relates(&self, a: &FiniteSeq, n: u64) -> bool {
        self.fiber(a).contains(&n)
    }

    /// Whether `a ∈ dom(s)`.
    pub fn defined_at(&self, a: &FiniteSeq) -> bool {
        !self.fiber(a).is_empty()
    }

    /// `s⁻n = {a | a s n}` as a decidable subset.
    pub fn inverse_image(&self, n: u64) -> DecidableSubset {
        let s = self.clone();
        let sub = move |a: &[u64]| s.fiber_raw(a).contains(&n);
        if self.monotone {
            DecidableSubset::monotone(sub)
        } else {
            DecidableSubset::from_fn(sub)
        }
    }

    /// `dom(s)` as a decidable subset.
    pub fn domain(&self) -> DecidableSubset {
        let s = self.clone();
        let sub = move |a: &[u64]| !s.fiber_raw(a).is_empty();
        if self.monotone {
            DecidableSubset::monotone(sub)
        } else {
            DecidableSubset::from_fn(sub)
        }
    }
}

impl fmt::Debug for SeqNatRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeqNatRelation")
            .field("monotone", &self.monotone)
            .field("single_valued", &self.single_valued)
            .finish_non_exhaustive()
    }
}

/// `s ∘ ≤`: the fiber at `a` is the union of the fibers at all prefixes of `a`.
pub fn monotonise(s: &SeqNatRelation) -> SeqNatRelation {
    if s.monotone {
        return s.clone();
    }
    let inner = s.clone();
    SeqNatRelation {
        fiber: Arc::new(move |a| (0..=a.len()).flat_map(|k| inner.fiber_raw(&a[..k])).collect()),
        monotone: true,
        single_valued: false,
    }
}

/// The first prefix of `α` with a non-empty fiber, and its value.
///
/// Scans `prefix(0), …, prefix(fuel - 1)`.
pub fn modulus(s: &SeqNatRelation, alpha: &ChoiceStream, fuel: usize) -> Result<(FiniteSeq, u64), ContinuityError> {
    let mut prefix = Vec::new();
    for k in 0..fuel {
        if k > 0 {
            prefix.push(alpha.at(k as u64 - 1));
        }
        let values = s.fiber_raw(&prefix);
        match values.as_slice() {
            [] => {}
            [n] => return Ok((FiniteSeq::new(prefix), *n)),
            _ => {
                return Err(ContinuityError::NotSingleValued {
                    at: FiniteSeq::new(prefix),
                    values,
                })
            }
        }
    }
    Err(ContinuityError::FuelExhausted { fuel })
}

/// The value of the induced map at `α`.
pub fn eval_point(s: &SeqNatRelation, alpha: &ChoiceStream, fuel: usize) -> Result<u64, ContinuityError> {
    modulus(s, alpha, fuel).map(|(_, n)| n)
}

/// Bounded verdict on whether `dom(s)` is a bar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BarVerdict {
    /// Every sequence of length `level` over `{0, …, alphabet-1}` has a prefix
    /// in `dom(s)`, and `level` is the least such length.
    Confirmed { level: usize, alphabet: u64 },
    /// `escape` has length `depth` and none of its prefixes is in `dom(s)`.
    /// Over ℕ this never refutes barhood outright.
    NotConfirmed { escape: FiniteSeq },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PFunctionReport {
    /// Alphabet `{0, …, alphabet-1}` used for every sample.
    pub alphabet: u64,
    /// A node with two or more values, if any was found.
    pub multi_valued: Option<(FiniteSeq, Vec<u64>)>,
    /// A pair `a ≤ b` with `n ∈ s{b}` but `n ∉ s{a}`.
    pub monotonicity_failure: Option<(FiniteSeq, FiniteSeq, u64)>,
    pub bar: BarVerdict,
}

impl PFunctionReport {
    pub fn single_valued(&self) -> bool {
        self.multi_valued.is_none()
    }

    pub fn bar_confirmed(&self) -> Option<usize> {
        match self.bar {
            BarVerdict::Confirmed { level, .. } => Some(level),
            BarVerdict::NotConfirmed { .. } => None,
        }
    }
}

/// Checks single-valuedness and monotonicity on every sequence of length
/// `≤ depth` with entries below `max(2, depth)`, and searches for the least
/// level at which `dom(s)` bars the same finite tree.
pub fn check_pfunction_conditions(s: &SeqNatRelation, depth: usize) -> PFunctionReport {
    let alphabet = depth.max(2) as u64;
    let mut multi_valued = None;
    let mut monotonicity_failure = None;
    for a in all_up_to_length(alphabet, depth) {
        let values = s.fiber(&a);
        if multi_valued.is_none() && values.len() > 1 {
            multi_valued = Some((a.clone(), values.clone()));
        }
        if monotonicity_failure.is_none() && !a.is_nil() {
            let parent = a.initial_segment(a.len() - 1);
            let below = s.fiber(&parent);
            // One-step checks suffice: the order is generated by one-step extensions.
            if let Some(&n) = below.iter().find(|n| !values.contains(n)) {
                monotonicity_failure = Some((a.clone(), parent, n));
            }
        }
    }
    let bar = match bar_level(s, &mut Vec::new(), alphabet, depth) {
        Ok(level) => BarVerdict::Confirmed { level, alphabet },
        Err(escape) => BarVerdict::NotConfirmed {
            escape: FiniteSeq::new(escape),
        },
    };
    PFunctionReport {
        alphabet,
        multi_valued,
        monotonicity_failure,
        bar,
    }
}

/// Least extra length after which every extension of `node` within the
/// alphabet has hit `dom(s)`; `Err` carries an escaping path of full depth.
fn bar_level(s: &SeqNatRelation, node: &mut Vec<u64>, alphabet: u64, depth: usize) -> Result<usize, Vec<u64>> {
    if !s.fiber_raw(node).is_empty() {
        return Ok(0);
    }
    if node.len() >= depth {
        return Err(node.clone());
    }
    let mut worst = 0;
    for n in 0..alphabet {
        node.push(n);
        let below = bar_level(s, node, alphabet, depth);
        node.pop();
        worst = worst.max(below? + 1);
    }
    Ok(worst)
}

/// A Σ⁰₁ subset `U = {a | ∃n D(a, n)}`.
#[derive(Clone)]
pub struct Sigma01Presentation {
    d: Predicate2,
}

impl Sigma01Presentation {
    pub fn new(d: impl Fn(&[u64], u64) -> bool + Send + Sync + 'static) -> Self {
        Sigma01Presentation { d: Arc::new(d) }
    }

    pub fn holds(&self, a: &[u64], n: u64) -> bool {
        (self.d)(a, n)
    }

    /// The least `n < bound` with `D(a, n)`.
    pub fn witness(&self, a: &FiniteSeq, bound: u64) -> Option<u64> {
        (0..bound).find(|&n| self.holds(a.entries(), n))
    }

    /// `D′(a, n) ⇔ ∃k ≤ lh a. D(ā k, n)`; presents `↓U`, which is monotone.
    pub fn close_under_extension(&self) -> Self {
        let d = self.d.clone();
        Self::new(move |a, n| (0..=a.len()).any(|k| d(&a[..k], n)))
    }
}

impl fmt::Debug for Sigma01Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Sigma01Presentation")
    }
}

/// A Π⁰₁ subset `U = {a | ∀n D(a, n)}`.
#[derive(Clone)]
pub struct Pi01Presentation {
    d: Predicate2,
}

impl Pi01Presentation {
    pub fn new(d: impl Fn(&[u64], u64) -> bool + Send + Sync + 'static) -> Self {
        Pi01Presentation { d: Arc::new(d) }
    }

    pub fn holds(&self, a: &[u64], n: u64) -> bool {
        (self.d)(a, n)
    }

    /// The least `n < horizon` with `¬D(a, n)`, refuting `a ∈ U`.
    pub fn refute(&self, a: &[u64], horizon: u64) -> Option<u64> {
        (0..horizon).find(|&n| !self.holds(a, n))
    }

    /// `a ∈ U` as far as `n < horizon` can tell.
    pub fn member_to_horizon(&self, a: &[u64], horizon: u64) -> bool {
        self.refute(a, horizon).is_none()
    }
}

impl fmt::Debug for Pi01Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Pi01Presentation")
    }
}

/// `V(a) ⇔ D(ā j₀(lh a), j₁(lh a))`.
///
/// `V` is decidable and, when `U` is monotone, `V ⊆ U`. If `α` has its
/// length-`k` prefix in `U` with witness `n`, then its prefix of length
/// `⟨k, n⟩` is in `V`.
pub fn sigma_to_decidable_bar(p: &Sigma01Presentation) -> DecidableSubset {
    let d = p.d.clone();
    DecidableSubset::from_fn(move |a| {
        let (i, n) = unpair(a.len() as u64);
        let i = i as usize;
        assert!(i <= a.len(), "pair coding lost dominance at length {}", a.len());
        d(&a[..i], n)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainVerdict {
    /// `s(α_a) ≠ s(α_{a*witness})`, so `a` is outside the modulus domain.
    Refuted { witness: FiniteSeq, base: u64, value: u64 },
    /// All `b` with `lh b ≤ bound` and entries `< bound` agree with `base`.
    ConsistentToBound { bound: usize, base: u64 },
}

/// Bounded check of `∀b. s(α_a) = s(α_{a*b})`, the domain condition of the
/// Π⁰₁ modulus of `s`.
pub fn pi01_domain_refuter(
    s: &SeqNatRelation,
    a: &FiniteSeq,
    bound: usize,
    fuel: usize,
) -> Result<DomainVerdict, ContinuityError> {
    let base = eval_point(s, &alpha_point(a), fuel)?;
    for b in all_up_to_length(bound as u64, bound) {
        let value = eval_point(s, &alpha_point(&a.concat(&b)), fuel)?;
        if value != base {
            return Ok(DomainVerdict::Refuted {
                witness: b,
                base,
                value,
            });
        }
    }
    Ok(DomainVerdict::ConsistentToBound { bound, base })
}

/// The Π⁰₁ modulus `a s′ n ⇔ (∀b. s(α_a) = s(α_{a*b})) ∧ n = s(α_a)`, with
/// the universal quantifier cut down as in [`pi01_domain_refuter`].
///
/// Nodes where evaluation fails have an empty fiber.
pub fn bounded_modulus_relation(s: &SeqNatRelation, bound: usize, fuel: usize) -> SeqNatRelation {
    let s = s.clone();
    SeqNatRelation::partial_fn(
        move |a| match pi01_domain_refuter(&s, &FiniteSeq::from(a), bound, fuel) {
            Ok(DomainVerdict::ConsistentToBound { base, .. }) => Some(base),
            _ => None,
        },
    )
}

/// The constructions that turn a Π⁰₁ monotone bar `U = {a | ∀n D(a, n)}`
/// into a monotone partial function:
///
/// * `D̄(a) ⇔ lh a > 0 → D(head a, tail a)`;
/// * `Ū(a) ⇔ U(a) ∧ D̄(a)`;
/// * `a s n ⇔ Ū(a) ∧ [(n < lh a ∧ ¬D̄(ā n) ∧ ∀m < lh a (n < m → D̄(ā m)))
///   ∨ (∀m < lh a D̄(ā m) ∧ n = 1)]`.
///
/// Membership in `U` is only refutable, so `Ū` and `s` are evaluated up to
/// a horizon on the universal quantifier.
#[derive(Debug, Clone)]
pub struct Pi01BarConstruction {
    u: Pi01Presentation,
    horizon: u64,
}

impl Pi01BarConstruction {
    pub fn new(u: Pi01Presentation, horizon: u64) -> Self {
        Pi01BarConstruction { u, horizon }
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// `D̄(a)`; decidable.
    pub fn dbar(&self, a: &[u64]) -> bool {
        match a.split_last() {
            None => true,
            Some((&tail, head)) => self.u.holds(head, tail),
        }
    }

    /// `Ū` presented as `∀n (D(a, n) ∧ D̄(a))`.
    pub fn ubar(&self) -> Pi01Presentation {
        let this = self.clone();
        Pi01Presentation::new(move |a, n| this.u.holds(a, n) && this.dbar(a))
    }

    /// `Ū(a)` up to the horizon.
    pub fn ubar_member(&self, a: &[u64]) -> bool {
        self.dbar(a) && self.u.member_to_horizon(a, self.horizon)
    }

    /// The value of `s` at `a` ignoring the `Ū(a)` conjunct.
    pub fn case_value(&self, a: &[u64]) -> u64 {
        // The greatest failing index is the only candidate in the first case.
        match (0..a.len()).rev().find(|&m| !self.dbar(&a[..m])) {
            Some(n) => n as u64,
            None => 1,
        }
    }

    /// The relation `s`, with `Ū` cut at the horizon.
    pub fn relation(&self) -> SeqNatRelation {
        let this = self.clone();
        SeqNatRelation::partial_fn(move |a| this.ubar_member(a).then(|| this.case_value(a))).declare_monotone()
    }
}

/// `a s̄′ n ⇔ n < lh a ∧ ∃b. a ≤ b ∧ b s′ n`, where `b` ranges over the prefixes
/// of `a`.
pub fn restrict_below_length(s: &SeqNatRelation) -> SeqNatRelation {
    let s = s.clone();
    SeqNatRelation::from_fn(move |a| {
        (0..=a.len())
            .flat_map(|k| s.fiber_raw(&a[..k]))
            .filter(|&n| n < a.len() as u64)
            .collect()
    })
    .declare_monotone()
}
