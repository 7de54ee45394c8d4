use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{atoms, bit, contains, full, is_subset, Bounds, FiniteError, Mask};

/// A relation `s ⊆ S × T` between two finite bases, stored row by row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    source: usize,
    target: usize,
    rows: Vec<Mask>,
}

impl FiniteRelation {
    pub fn empty(source: usize, target: usize) -> Self {
        FiniteRelation {
            source,
            target,
            rows: vec![0; source],
        }
    }

    pub fn identity(size: usize) -> Self {
        FiniteRelation {
            source: size,
            target: size,
            rows: (0..size).map(bit).collect(),
        }
    }

    pub fn from_pairs(source: usize, target: usize, pairs: &[(usize, usize)]) -> Result<Self, FiniteError> {
        let mut rel = Self::empty(source, target);
        for &(a, b) in pairs {
            if a >= source {
                return Err(FiniteError::AtomNotInBase { atom: a, size: source });
            }
            if b >= target {
                return Err(FiniteError::AtomNotInBase { atom: b, size: target });
            }
            rel.rows[a] |= bit(b);
        }
        Ok(rel)
    }

    /// Builds a relation from one row per source atom.
    pub fn from_rows(target: usize, rows: Vec<Mask>) -> Result<Self, FiniteError> {
        if let Some(&bad) = rows.iter().find(|r| !is_subset(**r, full(target))) {
            return Err(FiniteError::SubsetNotInBase {
                mask: bad,
                size: target,
            });
        }
        Ok(FiniteRelation {
            source: rows.len(),
            target,
            rows,
        })
    }

    /// The relation whose pair `(a, b)` is present iff bit `a·target + b` of `code` is set.
    pub fn from_code(source: usize, target: usize, code: u32) -> Self {
        let row_mask = full(target);
        let rows = (0..source).map(|a| (code >> (a * target)) & row_mask).collect();
        FiniteRelation { source, target, rows }
    }

    /// Every relation `S × T`, in increasing code order; the empty relation comes first.
    pub fn enumerate(
        source: usize,
        target: usize,
        bounds: &Bounds,
    ) -> Result<impl Iterator<Item = FiniteRelation>, FiniteError> {
        bounds.check_relations(source, target)?;
        let count: u32 = 1 << (source * target);
        Ok((0..count).map(move |c| Self::from_code(source, target, c)))
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn row(&self, a: usize) -> Mask {
        self.rows[a]
    }

    pub fn relates(&self, a: usize, b: usize) -> bool {
        contains(self.rows[a], b)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.source).flat_map(move |a| atoms(self.rows[a]).map(move |b| (a, b)))
    }

    /// `s U = {b | a s b for some a ∈ U}`.
    pub fn image(&self, u: Mask) -> Mask {
        atoms(u).fold(0, |acc, a| acc | self.rows[a])
    }

    /// `s⁻V = {a | a s b for some b ∈ V}`.
    pub fn inverse_image(&self, v: Mask) -> Mask {
        (0..self.source)
            .filter(|&a| self.rows[a] & v != 0)
            .fold(0, |acc, a| acc | bit(a))
    }

    /// `s*V = {a | s{a} ⊆ V}`.
    pub fn universal_image(&self, v: Mask) -> Mask {
        (0..self.source)
            .filter(|&a| is_subset(self.rows[a], v))
            .fold(0, |acc, a| acc | bit(a))
    }

    pub fn inverse(&self) -> FiniteRelation {
        let mut rows = vec![0; self.target];
        for (a, b) in self.pairs() {
            rows[b] |= bit(a);
        }
        FiniteRelation {
            source: self.target,
            target: self.source,
            rows,
        }
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &FiniteRelation) -> Result<FiniteRelation, FiniteError> {
        if self.target != other.source {
            return Err(FiniteError::ShapeMismatch {
                expected: (self.target, other.target),
                found: (other.source, other.target),
            });
        }
        Ok(FiniteRelation {
            source: self.source,
            target: other.target,
            rows: self.rows.iter().map(|&r| other.image(r)).collect(),
        })
    }

    pub(crate) fn check_shape(&self, source: usize, target: usize) -> Result<(), FiniteError> {
        if self.source != source || self.target != target {
            return Err(FiniteError::ShapeMismatch {
                expected: (source, target),
                found: (self.source, self.target),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn images() {
        // 0 -> {0,1}, 1 -> {}, 2 -> {1}
        let s = FiniteRelation::from_pairs(3, 2, &[(0, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(s.image(0b101), 0b11);
        assert_eq!(s.inverse_image(0b10), 0b101);
        assert_eq!(s.inverse_image(0b01), 0b001);
        // row 1 is empty, so s*∅ ∋ 1
        assert_eq!(s.universal_image(0), 0b010);
        assert_eq!(s.universal_image(0b10), 0b110);
        assert_eq!(s.inverse().inverse(), s);
    }

    #[test]
    fn composition_and_identity() {
        let s = FiniteRelation::from_pairs(2, 3, &[(0, 2), (1, 0)]).unwrap();
        let id2 = FiniteRelation::identity(2);
        let id3 = FiniteRelation::identity(3);
        assert_eq!(id2.then(&s).unwrap(), s);
        assert_eq!(s.then(&id3).unwrap(), s);
        assert!(s.then(&s).is_err());
    }

    #[test]
    fn enumeration_starts_with_empty_and_is_complete() {
        let all: Vec<_> = FiniteRelation::enumerate(2, 2, &Bounds::default()).unwrap().collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0], FiniteRelation::empty(2, 2));
        for (i, r) in all.iter().enumerate() {
            assert!(all[..i].iter().all(|o| o != r));
        }
        assert!(FiniteRelation::enumerate(4, 4, &Bounds::default()).is_err());
    }

    #[test]
    fn pairs_out_of_range_are_rejected() {
        assert_eq!(
            FiniteRelation::from_pairs(1, 1, &[(0, 1)]),
            Err(FiniteError::AtomNotInBase { atom: 1, size: 1 })
        );
    }
}
