use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{atoms, bit, contains, format_mask, full, is_subset, subsets, supersets, Bounds, FiniteError, Mask};

/// How the positivity of a topology built from axioms is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositivitySpec {
    /// The greatest positivity compatible with the cover.
    Greatest,
    /// `a ⋉ U` never holds.
    Empty,
    /// `a ⋉ U ↔ a ∈ U`.
    Membership,
    /// `a ⋉ U ↔ (a, V)` is listed for some `V ⊆ U`.
    Generated(Vec<(usize, Mask)>),
}

/// A positive topology `(S, ◁, ⋉)` on the base `{0, …, size-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePositiveTopology {
    size: usize,
    cover: Vec<Mask>,
    pos: Vec<Mask>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    Reflexivity,
    Transitivity,
    DownRight,
    Coreflexivity,
    Cotransitivity,
    Compatibility,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Reflexivity => "reflexivity",
            Law::Transitivity => "transitivity",
            Law::DownRight => "down-right",
            Law::Coreflexivity => "coreflexivity",
            Law::Cotransitivity => "cotransitivity",
            Law::Compatibility => "compatibility",
        })
    }
}

/// A failed instance of a law: `atom` with the subsets the law was applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawViolation {
    pub law: Law,
    pub atom: usize,
    pub left: Mask,
    pub right: Mask,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at atom {} with {} and {}",
            self.law,
            self.atom,
            format_mask(self.left),
            format_mask(self.right)
        )
    }
}

/// Which laws of a positive topology hold; `None` means the law holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TopologyLaws {
    pub reflexivity: Option<LawViolation>,
    pub transitivity: Option<LawViolation>,
    pub down_right: Option<LawViolation>,
    pub coreflexivity: Option<LawViolation>,
    pub cotransitivity: Option<LawViolation>,
    pub compatibility: Option<LawViolation>,
}

impl TopologyLaws {
    pub fn first_violation(&self) -> Option<LawViolation> {
        self.reflexivity
            .or(self.transitivity)
            .or(self.down_right)
            .or(self.coreflexivity)
            .or(self.cotransitivity)
            .or(self.compatibility)
    }

    pub fn all_hold(&self) -> bool {
        self.first_violation().is_none()
    }

    /// Every law except ↓-right holds.
    pub fn all_but_down_right(&self) -> bool {
        TopologyLaws {
            down_right: None,
            ..*self
        }
        .all_hold()
    }
}

impl FinitePositiveTopology {
    /// Builds the topology generated by `axioms` (pairs `a ◁ V`), with the
    /// requested positivity. A generated positivity that is not a positivity
    /// compatible with the cover is rejected.
    pub fn from_axioms(
        size: usize,
        axioms: &[(usize, Mask)],
        positivity: PositivitySpec,
        bounds: &Bounds,
    ) -> Result<Self, FiniteError> {
        let cover = cover_closure(size, axioms, bounds)?;
        let pos = match positivity {
            PositivitySpec::Greatest => greatest_positivity_table(size, &cover),
            PositivitySpec::Empty => vec![0; cover.len()],
            PositivitySpec::Membership => subsets(size).collect(),
            PositivitySpec::Generated(pairs) => generated_positivity(size, &pairs)?,
        };
        Self::from_tables(size, cover, pos)
    }

    /// The discrete topology: `a ◁ U ↔ a ∈ U ↔ a ⋉ U`.
    pub fn discrete(size: usize) -> Self {
        assert!(size <= super::MAX_ATOMS, "base too large for table representation");
        let table: Vec<Mask> = subsets(size).collect();
        FinitePositiveTopology {
            size,
            cover: table.clone(),
            pos: table,
        }
    }

    /// Validates a cover table and a positivity table against every law.
    pub fn from_tables(size: usize, cover: Vec<Mask>, pos: Vec<Mask>) -> Result<Self, FiniteError> {
        let t = Self::from_tables_unchecked(size, cover, pos);
        match t.laws().first_violation() {
            None => Ok(t),
            Some(v) => Err(FiniteError::LawViolated(v)),
        }
    }

    pub(crate) fn from_tables_unchecked(size: usize, cover: Vec<Mask>, pos: Vec<Mask>) -> Self {
        assert!(size <= super::MAX_ATOMS, "base too large for table representation");
        assert_eq!(cover.len(), 1 << size);
        assert_eq!(pos.len(), 1 << size);
        FinitePositiveTopology { size, cover, pos }
    }

    /// Same cover, positivity replaced by the greatest compatible one.
    pub fn with_greatest_positivity(&self) -> Self {
        FinitePositiveTopology {
            size: self.size,
            cover: self.cover.clone(),
            pos: greatest_positivity_table(self.size, &self.cover),
        }
    }

    /// Same cover with another positivity; fails unless it is a compatible positivity.
    pub fn with_positivity(&self, pos: Vec<Mask>) -> Result<Self, FiniteError> {
        Self::from_tables(self.size, self.cover.clone(), pos)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn base(&self) -> Mask {
        full(self.size)
    }

    pub fn cover_table(&self) -> &[Mask] {
        &self.cover
    }

    pub fn positivity_table(&self) -> &[Mask] {
        &self.pos
    }

    /// `A(U) = {a | a ◁ U}`.
    pub fn covered_by(&self, u: Mask) -> Mask {
        self.cover[u as usize]
    }

    /// `a ◁ U`.
    pub fn covers(&self, a: usize, u: Mask) -> bool {
        contains(self.cover[u as usize], a)
    }

    /// `V ◁ U`: every element of `V` is covered by `U`.
    pub fn covers_all(&self, v: Mask, u: Mask) -> bool {
        is_subset(v, self.cover[u as usize])
    }

    /// `{a | a ⋉ U}`.
    pub fn positive_in(&self, u: Mask) -> Mask {
        self.pos[u as usize]
    }

    /// `a ⋉ U`.
    pub fn positive(&self, a: usize, u: Mask) -> bool {
        contains(self.pos[u as usize], a)
    }

    /// `↓U = {c | c ◁ {u} for some u ∈ U}`.
    pub fn down_closure(&self, u: Mask) -> Mask {
        atoms(u).fold(0, |acc, a| acc | self.cover[bit(a) as usize])
    }

    /// `a ↓ b`.
    pub fn meet(&self, a: usize, b: usize) -> Mask {
        self.cover[bit(a) as usize] & self.cover[bit(b) as usize]
    }

    /// `U ↓ V`.
    pub fn meet_sets(&self, u: Mask, v: Mask) -> Mask {
        self.down_closure(u) & self.down_closure(v)
    }

    pub fn laws(&self) -> TopologyLaws {
        TopologyLaws {
            reflexivity: check_reflexive(self.size, &self.cover),
            transitivity: check_transitive(self.size, &self.cover),
            down_right: check_down_right(self.size, &self.cover),
            coreflexivity: check_coreflexive(self.size, &self.pos),
            cotransitivity: check_cotransitive(self.size, &self.pos),
            compatibility: check_compatible(self.size, &self.cover, &self.pos),
        }
    }

    /// Checks `a` and every atom of `u` against the base.
    pub fn check_atom(&self, a: usize) -> Result<(), FiniteError> {
        if a >= self.size {
            return Err(FiniteError::AtomNotInBase {
                atom: a,
                size: self.size,
            });
        }
        Ok(())
    }

    pub fn check_subset(&self, u: Mask) -> Result<(), FiniteError> {
        if !is_subset(u, self.base()) {
            return Err(FiniteError::SubsetNotInBase {
                mask: u,
                size: self.size,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for FinitePositiveTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinitePositiveTopology(size={}; ", self.size)?;
        for u in subsets(self.size) {
            write!(f, "A{}={} ", format_mask(u), format_mask(self.cover[u as usize]))?;
        }
        f.write_str("; ")?;
        for u in subsets(self.size) {
            if self.pos[u as usize] != 0 {
                write!(f, "P{}={} ", format_mask(u), format_mask(self.pos[u as usize]))?;
            }
        }
        f.write_str(")")
    }
}

/// Decides `a ◁ U`.
pub fn cover_decide(t: &FinitePositiveTopology, a: usize, u: Mask) -> Result<bool, FiniteError> {
    t.check_atom(a)?;
    t.check_subset(u)?;
    Ok(t.covers(a, u))
}

/// The least cover containing `axioms`, as the table `U ↦ A(U)`.
///
/// Knaster–Tarski iteration: start from membership plus the axioms and close
/// under monotonicity, transitivity and ↓-right until nothing changes.
pub fn cover_closure(size: usize, axioms: &[(usize, Mask)], bounds: &Bounds) -> Result<Vec<Mask>, FiniteError> {
    bounds.check_pow(size)?;
    let base = full(size);
    let mut cover: Vec<Mask> = subsets(size).collect();
    for &(a, v) in axioms {
        if a >= size {
            return Err(FiniteError::AtomNotInBase { atom: a, size });
        }
        if !is_subset(v, base) {
            return Err(FiniteError::SubsetNotInBase { mask: v, size });
        }
        cover[v as usize] |= bit(a);
    }
    loop {
        let before = cover.clone();
        // Monotonicity: ascending order propagates along whole chains.
        for u in subsets(size) {
            let mut acc = cover[u as usize];
            for a in atoms(u) {
                acc |= cover[(u & !bit(a)) as usize];
            }
            cover[u as usize] = acc;
        }
        // Transitivity: W ⊆ A(U) and a ◁ W give a ◁ U; monotone A makes A(A(U)) enough.
        for u in subsets(size) {
            let reach = cover[u as usize];
            cover[u as usize] |= cover[reach as usize];
        }
        // ↓-right: a ◁ V and a ◁ W give a ◁ V ↓ W.
        let singles: Vec<Mask> = (0..size).map(|a| cover[bit(a) as usize]).collect();
        let down = |m: Mask| atoms(m).fold(0, |acc, a| acc | singles[a]);
        for v in subsets(size) {
            for w in v..=base {
                let both = cover[v as usize] & cover[w as usize];
                if both != 0 {
                    let target = (down(v) & down(w)) as usize;
                    cover[target] |= both;
                }
            }
        }
        if cover == before {
            return Ok(cover);
        }
    }
}

/// The greatest positivity compatible with the cover of `t`:
/// `a ⋉ U` iff some `V` with `a ∈ V ⊆ U` satisfies `V ⋔ A(W) → V ⋔ W` for all `W`.
pub fn greatest_positivity(t: &FinitePositiveTopology, bounds: &Bounds) -> Result<Vec<Mask>, FiniteError> {
    bounds.check_pow(t.size)?;
    Ok(greatest_positivity_table(t.size, &t.cover))
}

fn greatest_positivity_table(size: usize, cover: &[Mask]) -> Vec<Mask> {
    let mut pos = vec![0; 1 << size];
    for v in subsets(size) {
        let splits = subsets(size).all(|w| v & cover[w as usize] == 0 || v & w != 0);
        if v != 0 && splits {
            for u in supersets(v, size) {
                pos[u as usize] |= v;
            }
        }
    }
    pos
}

fn generated_positivity(size: usize, pairs: &[(usize, Mask)]) -> Result<Vec<Mask>, FiniteError> {
    let mut pos = vec![0; 1 << size];
    for &(a, v) in pairs {
        if a >= size {
            return Err(FiniteError::AtomNotInBase { atom: a, size });
        }
        if !is_subset(v, full(size)) {
            return Err(FiniteError::SubsetNotInBase { mask: v, size });
        }
        for u in supersets(v, size) {
            pos[u as usize] |= bit(a);
        }
    }
    Ok(pos)
}

/// True iff `pos` is coreflexive and cotransitive.
pub fn is_positivity(size: usize, pos: &[Mask]) -> bool {
    check_coreflexive(size, pos).is_none() && check_cotransitive(size, pos).is_none()
}

/// True iff `a ◁ U` and `a ⋉ V` always give `U ⋉ V`.
pub fn is_compatible(size: usize, cover: &[Mask], pos: &[Mask]) -> bool {
    check_compatible(size, cover, pos).is_none()
}

/// Every positivity compatible with the cover of `t`, each exactly once.
pub fn enumerate_positivities(t: &FinitePositiveTopology, bounds: &Bounds) -> Result<Vec<Vec<Mask>>, FiniteError> {
    bounds.check_pow(t.size)?;
    let size = t.size;
    // A positivity is upward closed in U, so it is generated by its pairs (a, U) with a ∈ U.
    let candidates: Vec<(usize, Mask)> = subsets(size).flat_map(|u| atoms(u).map(move |a| (a, u))).collect();
    if candidates.len() > 20 {
        return Err(FiniteError::BaseTooLarge { size, bound: 3 });
    }
    let mut found: Vec<Vec<Mask>> = Vec::new();
    for choice in 0u32..(1 << candidates.len()) {
        let pairs: Vec<(usize, Mask)> = atoms(choice).map(|i| candidates[i]).collect();
        let pos = generated_positivity(size, &pairs)?;
        if is_positivity(size, &pos) && is_compatible(size, &t.cover, &pos) && !found.contains(&pos) {
            found.push(pos);
        }
    }
    Ok(found)
}

fn violation(law: Law, atom: usize, left: Mask, right: Mask) -> Option<LawViolation> {
    Some(LawViolation { law, atom, left, right })
}

fn check_reflexive(size: usize, cover: &[Mask]) -> Option<LawViolation> {
    for u in subsets(size) {
        if let Some(a) = atoms(u & !cover[u as usize]).next() {
            return violation(Law::Reflexivity, a, u, u);
        }
    }
    None
}

fn check_transitive(size: usize, cover: &[Mask]) -> Option<LawViolation> {
    for u in subsets(size) {
        let reach = cover[u as usize];
        // every W ⊆ A(U)
        let mut w = reach;
        loop {
            if let Some(a) = atoms(cover[w as usize] & !reach).next() {
                return violation(Law::Transitivity, a, w, u);
            }
            if w == 0 {
                break;
            }
            w = (w - 1) & reach;
        }
    }
    None
}

fn check_down_right(size: usize, cover: &[Mask]) -> Option<LawViolation> {
    let down = |m: Mask| atoms(m).fold(0, |acc, a| acc | cover[bit(a) as usize]);
    for v in subsets(size) {
        for w in subsets(size) {
            let both = cover[v as usize] & cover[w as usize];
            let meet = down(v) & down(w);
            if let Some(a) = atoms(both & !cover[meet as usize]).next() {
                return violation(Law::DownRight, a, v, w);
            }
        }
    }
    None
}

fn check_coreflexive(size: usize, pos: &[Mask]) -> Option<LawViolation> {
    for u in subsets(size) {
        if let Some(a) = atoms(pos[u as usize] & !u).next() {
            return violation(Law::Coreflexivity, a, u, u);
        }
    }
    None
}

fn check_cotransitive(size: usize, pos: &[Mask]) -> Option<LawViolation> {
    for u in subsets(size) {
        let p = pos[u as usize];
        if p == 0 {
            continue;
        }
        for v in supersets(p, size) {
            if let Some(a) = atoms(p & !pos[v as usize]).next() {
                return violation(Law::Cotransitivity, a, u, v);
            }
        }
    }
    None
}

fn check_compatible(size: usize, cover: &[Mask], pos: &[Mask]) -> Option<LawViolation> {
    for u in subsets(size) {
        for v in subsets(size) {
            let p = pos[v as usize];
            if let Some(a) = atoms(cover[u as usize] & p).next() {
                if u & p == 0 {
                    return violation(Law::Compatibility, a, u, v);
                }
            }
        }
    }
    None
}
