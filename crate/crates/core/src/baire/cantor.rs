//! The binary fragment: fans branch only over `{0, 1}`, and every non-binary
//! sequence counts as covered. Covers here are decided and checked
//! exhaustively up to a depth bound.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{DecidableSubset, Derivation, DerivationError, Rule, Violation};
use crate::seq::FiniteSeq;

/// Largest depth a [`BinaryTable`] can hold: `2⁶ - 1` nodes fit in a `u64`.
pub const MAX_TABLE_DEPTH: usize = 5;

fn is_binary(a: &[u64]) -> bool {
    a.iter().all(|&x| x <= 1)
}

/// A subset of the binary sequences of length at most `depth`, one bit per node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryTable {
    depth: usize,
    bits: u64,
}

impl BinaryTable {
    pub fn new(depth: usize, bits: u64) -> Self {
        assert!(depth <= MAX_TABLE_DEPTH, "binary table depth above {MAX_TABLE_DEPTH}");
        let mask = if depth == MAX_TABLE_DEPTH {
            u64::MAX >> 1
        } else {
            (1u64 << ((1 << (depth + 1)) - 1)) - 1
        };
        BinaryTable {
            depth,
            bits: bits & mask,
        }
    }

    pub fn from_members<'a>(depth: usize, members: impl IntoIterator<Item = &'a FiniteSeq>) -> Self {
        let mut bits = 0;
        for a in members {
            if let Some(i) = node_index(depth, a.entries()) {
                bits |= 1 << i;
            }
        }
        Self::new(depth, bits)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, a: &[u64]) -> bool {
        node_index(self.depth, a).is_some_and(|i| self.bits >> i & 1 == 1)
    }

    /// Membership in `↓U`.
    pub fn closure_contains(&self, a: &[u64]) -> bool {
        (0..=a.len().min(self.depth)).any(|k| self.contains(&a[..k]))
    }

    /// `U ∪ C_a`, with `C_a` cut down to binary sequences.
    pub fn with_complement(&self, a: &FiniteSeq) -> Self {
        let mut bits = self.bits;
        let len = a.len();
        if len <= self.depth {
            for v in 0..(1u64 << len) {
                let b: Vec<u64> = (0..len).map(|i| v >> (len - 1 - i) & 1).collect();
                if b != a.entries() {
                    bits |= 1 << node_index(self.depth, &b).expect("binary and short");
                }
            }
        }
        Self::new(self.depth, bits)
    }

    /// The subset of ℕ* whose members are the table's nodes.
    pub fn to_subset(&self) -> DecidableSubset {
        let table = *self;
        DecidableSubset::from_fn(move |a| table.contains(a))
    }

    /// Decides `a ◁ U` in the binary fragment.
    pub fn covers(&self, a: &[u64]) -> bool {
        if !is_binary(a) {
            return true;
        }
        let mut buf = a.to_vec();
        self.covers_rec(&mut buf)
    }

    fn covers_rec(&self, c: &mut Vec<u64>) -> bool {
        if self.closure_contains(c) {
            return true;
        }
        if c.len() >= self.depth {
            return false;
        }
        (0..2).all(|n| {
            c.push(n);
            let ok = self.covers_rec(c);
            c.pop();
            ok
        })
    }

    /// Every antichain of the binary tree of height `depth`, as tables.
    ///
    /// Two subsets with the same minimal elements have the same `↓U`, and
    /// the minimal elements of any subset form an antichain.
    pub fn antichains(depth: usize) -> Vec<BinaryTable> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        for bits in antichains_below(depth, &mut path) {
            out.push(Self::new(depth, bits));
        }
        out
    }
}

fn antichains_below(depth: usize, path: &mut Vec<u64>) -> Vec<u64> {
    let here = 1u64 << node_index(depth, path).expect("path within depth");
    if path.len() == depth {
        return alloc::vec![0, here];
    }
    path.push(0);
    let left = antichains_below(depth, path);
    path.pop();
    path.push(1);
    let right = antichains_below(depth, path);
    path.pop();
    let mut out = Vec::with_capacity(1 + left.len() * right.len());
    out.push(here);
    for l in &left {
        for r in &right {
            out.push(l | r);
        }
    }
    out
}

/// Index of a binary sequence of length `≤ depth` in level order.
pub fn node_index(depth: usize, a: &[u64]) -> Option<usize> {
    if a.len() > depth || !is_binary(a) {
        return None;
    }
    let value = a.iter().fold(0usize, |acc, &x| acc << 1 | x as usize);
    Some((1 << a.len()) - 1 + value)
}

/// `U ∪ ¬Bin`: the target a binary-fragment derivation of `a ◁ U` really proves.
pub fn cantor_target(u: &DecidableSubset) -> DecidableSubset {
    u.union(&DecidableSubset::binary().complement())
}

/// Decides `a ◁ U` in the binary fragment by expanding fans over `{0, 1}`
/// down to length `max(depth, lh a)`. Exact when every member of `U` that
/// matters has length at most `depth`; otherwise `false` means "not within
/// the bound".
pub fn cantor_cover_bounded(a: &FiniteSeq, u: &DecidableSubset, depth: usize) -> bool {
    if !is_binary(a.entries()) {
        return true;
    }
    let limit = depth.max(a.len());
    let down = u.monotone_closure();
    let mut buf = a.entries().to_vec();
    covers_generic(&down, &mut buf, limit)
}

fn covers_generic(down: &DecidableSubset, c: &mut Vec<u64>, limit: usize) -> bool {
    if down.contains_raw(c) {
        return true;
    }
    if c.len() >= limit {
        return false;
    }
    (0..2).all(|n| {
        c.push(n);
        let ok = covers_generic(down, c, limit);
        c.pop();
        ok
    })
}

/// How a binary-fragment derivation is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationShape {
    /// η at members, ζ to the shortest member prefix, fans elsewhere.
    Canonical,
    /// ζ from the conclusion to its parent whenever the parent is covered.
    ViaParent,
    /// Fans all the way down to the given length, then ζ back to members.
    Overshoot(usize),
}

/// A derivation of `a ◁ U ∪ ¬Bin` when `a ◁ U` holds in the binary fragment
/// within `depth`; `None` otherwise.
pub fn cantor_derivation(
    a: &FiniteSeq,
    u: &DecidableSubset,
    depth: usize,
    shape: DerivationShape,
) -> Option<Derivation> {
    if !cantor_cover_bounded(a, u, depth) {
        return None;
    }
    let u = Arc::new(u.clone());
    match shape {
        DerivationShape::Canonical => Some(canonical(a.clone(), u)),
        DerivationShape::ViaParent => match a.split_last() {
            Ok((parent, _)) if cantor_cover_bounded(&parent, &u, depth) => {
                Some(Derivation::zeta(a.clone(), canonical(parent, u)))
            }
            _ => Some(canonical(a.clone(), u)),
        },
        DerivationShape::Overshoot(level) => Some(overshoot(a.clone(), u, level)),
    }
}

fn non_binary_leaf(c: &FiniteSeq, n: u64) -> Option<Derivation> {
    (n > 1 || !is_binary(c.entries())).then(|| Derivation::eta(c.push(n)))
}

fn canonical(c: FiniteSeq, u: Arc<DecidableSubset>) -> Derivation {
    if !is_binary(c.entries()) {
        return Derivation::eta(c);
    }
    if let Some(k) = (0..=c.len()).find(|&k| u.contains_raw(&c.entries()[..k])) {
        return if k == c.len() {
            Derivation::eta(c)
        } else {
            Derivation::zeta(c.clone(), Derivation::eta(c.initial_segment(k)))
        };
    }
    let node = c.clone();
    Derivation::fan(c, move |n| {
        non_binary_leaf(&node, n).unwrap_or_else(|| canonical(node.push(n), u.clone()))
    })
}

fn overshoot(c: FiniteSeq, u: Arc<DecidableSubset>, level: usize) -> Derivation {
    if c.len() >= level || !is_binary(c.entries()) {
        return canonical(c, u);
    }
    let node = c.clone();
    Derivation::fan(c, move |n| {
        non_binary_leaf(&node, n).unwrap_or_else(|| overshoot(node.push(n), u.clone(), level))
    })
}

/// Outcome of an exhaustive binary check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryVerdict {
    pub nodes_checked: usize,
    /// η leaves reached over all binary paths.
    pub leaves: usize,
    /// ζ nodes met; zero for an η/ϝ derivation.
    pub zeta_nodes: usize,
    pub violation: Option<Violation>,
}

impl BinaryVerdict {
    pub fn valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks every node of `d` reachable through fan branches `0` and `1`.
/// More than `max_fan_depth` fans on one path is an error, never a truncation.
pub fn check_binary(
    d: &Derivation,
    u: &DecidableSubset,
    max_fan_depth: usize,
) -> Result<BinaryVerdict, DerivationError> {
    let mut verdict = BinaryVerdict {
        nodes_checked: 0,
        leaves: 0,
        zeta_nodes: 0,
        violation: None,
    };
    check_binary_rec(d, u, max_fan_depth, 0, &mut verdict)?;
    Ok(verdict)
}

fn check_binary_rec(
    d: &Derivation,
    u: &DecidableSubset,
    max_fan_depth: usize,
    fans: usize,
    verdict: &mut BinaryVerdict,
) -> Result<(), DerivationError> {
    if verdict.violation.is_some() {
        return Ok(());
    }
    verdict.nodes_checked += 1;
    match d {
        Derivation::Eta { at } => {
            verdict.leaves += 1;
            if !u.contains(at) {
                verdict.violation = Some(Violation {
                    rule: Rule::Eta,
                    at: at.clone(),
                    reason: "conclusion is not a member of the target".into(),
                });
            }
            Ok(())
        }
        Derivation::Zeta { at, via, premise } => {
            verdict.zeta_nodes += 1;
            if premise.conclusion() != via {
                return Err(DerivationError::MalformedTree {
                    at: at.clone(),
                    reason: alloc::format!("premise concludes {} instead of {via}", premise.conclusion()),
                });
            }
            if !crate::seq::leq_b(at, via) {
                verdict.violation = Some(Violation {
                    rule: Rule::Zeta,
                    at: at.clone(),
                    reason: alloc::format!("{via} is not an initial segment of {at}"),
                });
                return Ok(());
            }
            check_binary_rec(premise, u, max_fan_depth, fans, verdict)
        }
        Derivation::Fan { .. } => {
            if fans == max_fan_depth {
                return Err(DerivationError::DepthExceeded(max_fan_depth));
            }
            for n in 0..2 {
                check_binary_rec(&d.child(n)?, u, max_fan_depth, fans + 1, verdict)?;
            }
            Ok(())
        }
    }
}
