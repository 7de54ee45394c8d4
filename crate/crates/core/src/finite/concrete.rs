use alloc::vec::Vec;
use core::fmt;

use super::{
    atoms, bit, check_formal_map, contains, full, is_subset, subsets, FiniteError, FinitePositiveTopology,
    FiniteRelation, FormalMapReport, Mask, MAX_ATOMS,
};

/// A failed base condition of a concrete space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcreteViolation {
    /// `ext a ∩ ext b ≠ ext(a ↓ b)`.
    B1 { a: usize, b: usize },
    /// The point forces no basic neighbourhood.
    B2 { point: usize },
}

impl fmt::Display for ConcreteViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConcreteViolation::B1 { a, b } => {
                write!(f, "B1: ext {a} ∩ ext {b} differs from the extension of their meet")
            }
            ConcreteViolation::B2 { point } => {
                write!(f, "B2: point {point} lies in no basic neighbourhood")
            }
        }
    }
}

/// A triple `(X, ⊩, S)` with finite `X` and `S`, stored as `◇x` for each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteConcreteSpace {
    base: usize,
    neighbourhoods: Vec<Mask>,
}

impl FiniteConcreteSpace {
    /// Validates B1 and B2.
    pub fn new(points: usize, base: usize, forcing: &[(usize, usize)]) -> Result<Self, FiniteError> {
        if base > MAX_ATOMS {
            return Err(FiniteError::BaseTooLarge {
                size: base,
                bound: MAX_ATOMS,
            });
        }
        if points > 32 {
            return Err(FiniteError::BaseTooLarge {
                size: points,
                bound: 32,
            });
        }
        let mut neighbourhoods = alloc::vec![0; points];
        for &(x, a) in forcing {
            if x >= points {
                return Err(FiniteError::AtomNotInBase { atom: x, size: points });
            }
            if a >= base {
                return Err(FiniteError::AtomNotInBase { atom: a, size: base });
            }
            neighbourhoods[x] |= bit(a);
        }
        let space = FiniteConcreteSpace { base, neighbourhoods };
        match space.violation() {
            None => Ok(space),
            Some(v) => Err(FiniteError::ConcreteSpaceInvalid(v)),
        }
    }

    pub fn points(&self) -> usize {
        self.neighbourhoods.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// `◇x = {a | x ⊩ a}`.
    pub fn neighbourhoods(&self, x: usize) -> Mask {
        self.neighbourhoods[x]
    }

    /// `ext a`, as a mask over points.
    pub fn ext(&self, a: usize) -> u32 {
        self.ext_set(bit(a))
    }

    /// `ext U = ⋃_{a ∈ U} ext a`.
    pub fn ext_set(&self, u: Mask) -> u32 {
        self.neighbourhoods
            .iter()
            .enumerate()
            .filter(|(_, &n)| n & u != 0)
            .fold(0, |acc, (x, _)| acc | (1 << x))
    }

    /// `rest U = {x | ◇x ⊆ U}`.
    pub fn rest(&self, u: Mask) -> u32 {
        self.neighbourhoods
            .iter()
            .enumerate()
            .filter(|(_, &n)| is_subset(n, u))
            .fold(0, |acc, (x, _)| acc | (1 << x))
    }

    /// `U ↓ V = {c | ext c ⊆ ext a ∩ ext b for some a ∈ U, b ∈ V}`.
    pub fn meet_sets(&self, u: Mask, v: Mask) -> Mask {
        let mut out = 0;
        for a in atoms(u) {
            for b in atoms(v) {
                let both = self.ext(a) & self.ext(b);
                for c in 0..self.base {
                    if is_subset(self.ext(c), both) {
                        out |= bit(c);
                    }
                }
            }
        }
        out
    }

    fn violation(&self) -> Option<ConcreteViolation> {
        for a in 0..self.base {
            for b in 0..self.base {
                let meet = self.meet_sets(bit(a), bit(b));
                if self.ext(a) & self.ext(b) != self.ext_set(meet) {
                    return Some(ConcreteViolation::B1 { a, b });
                }
            }
        }
        if let Some(point) = self.neighbourhoods.iter().position(|&n| n == 0) {
            return Some(ConcreteViolation::B2 { point });
        }
        None
    }
}

/// The representable topology: `a ◁ U ↔ ext a ⊆ ext U`, `a ⋉ U ↔ ext a ⋔ rest U`.
pub fn representable(space: &FiniteConcreteSpace) -> Result<FinitePositiveTopology, FiniteError> {
    let size = space.base;
    let mut cover = Vec::with_capacity(1 << size);
    let mut pos = Vec::with_capacity(1 << size);
    for u in subsets(size) {
        let ext_u = space.ext_set(u);
        let rest_u = space.rest(u);
        let mut c = 0;
        let mut p = 0;
        for a in 0..size {
            if is_subset(space.ext(a), ext_u) {
                c |= bit(a);
            }
            if space.ext(a) & rest_u != 0 {
                p |= bit(a);
            }
        }
        cover.push(c);
        pos.push(p);
    }
    FinitePositiveTopology::from_tables(size, cover, pos)
}

/// `x r_s y ↔ ◇y ⊆ s◇x`.
pub fn relation_from_formal_map(
    s: &FiniteRelation,
    xs: &FiniteConcreteSpace,
    ys: &FiniteConcreteSpace,
) -> Result<FiniteRelation, FiniteError> {
    s.check_shape(xs.base, ys.base)?;
    let rows = (0..xs.points())
        .map(|x| {
            let image = s.image(xs.neighbourhoods(x));
            (0..ys.points())
                .filter(|&y| is_subset(ys.neighbourhoods(y), image))
                .fold(0, |acc, y| acc | bit(y))
        })
        .collect();
    FiniteRelation::from_rows(ys.points(), rows)
}

/// Outcome of checking a relation pair `(r, s)` between concrete spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentPairReport {
    /// `(x, b)` on which `⊩' ∘ r` and `s ∘ ⊩` disagree.
    pub commutation_failure: Option<(usize, usize)>,
    /// `(b, c)` with `ext(s⁻b ↓ s⁻c) ≠ ext s⁻(b ↓' c)`.
    pub c1_failure: Option<(usize, usize)>,
    /// `ext S = ext s⁻T`.
    pub c2: bool,
    /// The formal-map report for `s` between the representable topologies,
    /// present when the pair is convergent.
    pub formal_map: Option<FormalMapReport>,
}

impl ConvergentPairReport {
    pub fn convergent(&self) -> bool {
        self.commutation_failure.is_none() && self.c1_failure.is_none() && self.c2
    }
}

pub fn check_convergent_pair(
    r: &FiniteRelation,
    s: &FiniteRelation,
    xs: &FiniteConcreteSpace,
    ys: &FiniteConcreteSpace,
) -> Result<ConvergentPairReport, FiniteError> {
    r.check_shape(xs.points(), ys.points())?;
    s.check_shape(xs.base, ys.base)?;

    let mut commutation_failure = None;
    'outer: for x in 0..xs.points() {
        let via_r = atoms(r.row(x)).fold(0, |acc, y| acc | ys.neighbourhoods(y));
        let via_s = s.image(xs.neighbourhoods(x));
        for b in 0..ys.base {
            if contains(via_r, b) != contains(via_s, b) {
                commutation_failure = Some((x, b));
                break 'outer;
            }
        }
    }

    let mut c1_failure = None;
    'c1: for b in 0..ys.base {
        for c in 0..ys.base {
            let lhs = xs.ext_set(xs.meet_sets(s.inverse_image(bit(b)), s.inverse_image(bit(c))));
            let rhs = xs.ext_set(s.inverse_image(ys.meet_sets(bit(b), bit(c))));
            if lhs != rhs {
                c1_failure = Some((b, c));
                break 'c1;
            }
        }
    }

    let c2 = xs.ext_set(full(xs.base)) == xs.ext_set(s.inverse_image(full(ys.base)));

    let mut report = ConvergentPairReport {
        commutation_failure,
        c1_failure,
        c2,
        formal_map: None,
    };
    if report.convergent() {
        report.formal_map = Some(check_formal_map(s, &representable(xs)?, &representable(ys)?)?);
    }
    Ok(report)
}

/// Equality of relation pairs into `ys`: `⊩' ∘ r = ⊩' ∘ r'`.
pub fn relation_pairs_equal(r: &FiniteRelation, other: &FiniteRelation, ys: &FiniteConcreteSpace) -> bool {
    let forced = |rel: &FiniteRelation, x: usize| atoms(rel.row(x)).fold(0, |acc, y| acc | ys.neighbourhoods(y));
    r.source() == other.source() && (0..r.source()).all(|x| forced(r, x) == forced(other, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{bispatiality, ideal_points, Bounds};

    fn sierpinski() -> FiniteConcreteSpace {
        // x = 0, y = 1, a = 0, b = 1
        FiniteConcreteSpace::new(2, 2, &[(0, 0), (0, 1), (1, 1)]).unwrap()
    }

    #[test]
    fn singleton_space() {
        let space = FiniteConcreteSpace::new(1, 1, &[(0, 0)]).unwrap();
        let t = representable(&space).unwrap();
        assert!(t.covers(0, 0b1));
        assert!(!t.covers(0, 0));
        assert!(t.positive(0, 0b1));
        assert_eq!(ideal_points(&t, &Bounds::default()).unwrap(), [0b1]);
    }

    #[test]
    fn sierpinski_cover() {
        let space = sierpinski();
        let t = representable(&space).unwrap();
        assert!(!t.covers(1, 0b01));
        assert!(t.covers(0, 0b10));
        let b = Bounds::default();
        let points = ideal_points(&t, &b).unwrap();
        for x in 0..space.points() {
            assert!(points.contains(&space.neighbourhoods(x)));
        }
        assert!(bispatiality(&t, &b).unwrap().bispatial());
    }

    #[test]
    fn invalid_spaces() {
        assert_eq!(
            FiniteConcreteSpace::new(2, 1, &[(0, 0)]),
            Err(FiniteError::ConcreteSpaceInvalid(ConcreteViolation::B2 { point: 1 }))
        );
        // ext a ∩ ext b = {y} but nothing has extension inside {y}
        assert_eq!(
            FiniteConcreteSpace::new(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)]),
            Err(FiniteError::ConcreteSpaceInvalid(ConcreteViolation::B1 { a: 0, b: 1 }))
        );
    }

    #[test]
    fn identity_pair_and_reconstruction() {
        let space = sierpinski();
        let id_points = FiniteRelation::identity(2);
        let id_base = FiniteRelation::identity(2);
        let report = check_convergent_pair(&id_points, &id_base, &space, &space).unwrap();
        assert!(report.convergent());
        assert!(report.formal_map.unwrap().is_formal_map());
        let r = relation_from_formal_map(&id_base, &space, &space).unwrap();
        assert!(relation_pairs_equal(&r, &id_points, &space));
    }

    #[test]
    fn commutation_failure_is_located() {
        let space = sierpinski();
        // swap the points but keep the base fixed
        let r = FiniteRelation::from_pairs(2, 2, &[(0, 1), (1, 0)]).unwrap();
        let report = check_convergent_pair(&r, &FiniteRelation::identity(2), &space, &space).unwrap();
        assert_eq!(report.commutation_failure, Some((0, 0)));
        assert!(report.formal_map.is_none());
    }
}
