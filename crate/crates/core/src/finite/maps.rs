use alloc::vec::Vec;
use core::fmt;

use super::{
    atoms, bit, format_mask, is_subset, subsets, FiniteError, FinitePositiveTopology, FiniteRelation, Mask,
    TopologyLaws,
};

/// A witness that one of the four formal-map conditions fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmCounterexample {
    /// `atom` is not covered by `s⁻T`.
    Totality { atom: usize },
    /// `atom ∈ s⁻b ↓ s⁻c` is not covered by `s⁻(b ↓ c)`.
    Convergence { b: usize, c: usize, atom: usize },
    /// `b ◁ V` in the target but `s⁻b ◁ s⁻V` fails in the source.
    Continuity { b: usize, v: Mask },
    /// `s⁻b ⋉ s*V` in the source but `b ⋉ V` fails in the target.
    Positivity { b: usize, v: Mask },
}

impl fmt::Display for FmCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FmCounterexample::Totality { atom } => {
                write!(f, "totality: {atom} is not covered by the preimage of the base")
            }
            FmCounterexample::Convergence { b, c, atom } => write!(
                f,
                "convergence: {atom} lies in the meet of the preimages of {b} and {c} but is not covered by the preimage of their meet"
            ),
            FmCounterexample::Continuity { b, v } => write!(
                f,
                "continuity: {b} is covered by {} but its preimage is not covered by the preimage",
                format_mask(v)
            ),
            FmCounterexample::Positivity { b, v } => write!(
                f,
                "positivity: the preimage of {b} is positive in s*{} but {b} is not positive in it",
                format_mask(v)
            ),
        }
    }
}

/// Outcome of checking a relation against the four formal-map conditions.
///
/// A condition is false iff a counterexample for it is recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMapReport {
    pub fm1: bool,
    pub fm2: bool,
    pub fm3: bool,
    pub fm4: bool,
    pub counterexamples: Vec<FmCounterexample>,
}

impl FormalMapReport {
    pub fn is_formal_map(&self) -> bool {
        self.fm1 && self.fm2 && self.fm3 && self.fm4
    }
}

/// Evaluates the formal-map conditions for `s ⊆ S × T` exactly, recording
/// the first witness for each failed condition.
pub fn check_formal_map(
    s: &FiniteRelation,
    src: &FinitePositiveTopology,
    tgt: &FinitePositiveTopology,
) -> Result<FormalMapReport, FiniteError> {
    s.check_shape(src.size(), tgt.size())?;
    let mut counterexamples = Vec::new();

    let fm1 = match atoms(src.base() & !src.covered_by(s.inverse_image(tgt.base()))).next() {
        Some(atom) => {
            counterexamples.push(FmCounterexample::Totality { atom });
            false
        }
        None => true,
    };

    let mut fm2 = true;
    'fm2: for b in 0..tgt.size() {
        for c in 0..tgt.size() {
            let lhs = src.meet_sets(s.inverse_image(bit(b)), s.inverse_image(bit(c)));
            let rhs = src.covered_by(s.inverse_image(tgt.meet(b, c)));
            if let Some(atom) = atoms(lhs & !rhs).next() {
                counterexamples.push(FmCounterexample::Convergence { b, c, atom });
                fm2 = false;
                break 'fm2;
            }
        }
    }

    let mut fm3 = true;
    'fm3: for v in subsets(tgt.size()) {
        for b in atoms(tgt.covered_by(v)) {
            if !src.covers_all(s.inverse_image(bit(b)), s.inverse_image(v)) {
                counterexamples.push(FmCounterexample::Continuity { b, v });
                fm3 = false;
                break 'fm3;
            }
        }
    }

    let mut fm4 = true;
    'fm4: for v in subsets(tgt.size()) {
        let positive = src.positive_in(s.universal_image(v));
        for b in 0..tgt.size() {
            if s.inverse_image(bit(b)) & positive != 0 && !tgt.positive(b, v) {
                counterexamples.push(FmCounterexample::Positivity { b, v });
                fm4 = false;
                break 'fm4;
            }
        }
    }

    Ok(FormalMapReport {
        fm1,
        fm2,
        fm3,
        fm4,
        counterexamples,
    })
}

pub fn is_formal_map(
    s: &FiniteRelation,
    src: &FinitePositiveTopology,
    tgt: &FinitePositiveTopology,
) -> Result<bool, FiniteError> {
    Ok(check_formal_map(s, src, tgt)?.is_formal_map())
}

/// Equality of formal maps: `a ◁ s⁻b ↔ a ◁ s'⁻b` for all `a ∈ S`, `b ∈ T`.
pub fn formal_maps_equal(
    s: &FiniteRelation,
    other: &FiniteRelation,
    src: &FinitePositiveTopology,
) -> Result<bool, FiniteError> {
    s.check_shape(src.size(), other.target())?;
    other.check_shape(src.size(), s.target())?;
    Ok((0..s.target()).all(|b| src.covered_by(s.inverse_image(bit(b))) == src.covered_by(other.inverse_image(bit(b)))))
}

/// The image structure `Im[s]` together with the two factors through it.
#[derive(Debug, Clone)]
pub struct ImageFactorization {
    /// `(T, ◁_s, ⋉_s)`; a positive topology whenever `fm2_fm3` holds.
    pub topology: FinitePositiveTopology,
    /// Whether `s` satisfies the convergence and continuity conditions.
    pub fm2_fm3: bool,
    pub laws: TopologyLaws,
    /// `s` viewed as a map from the source into `Im[s]`.
    pub source_factor: FormalMapReport,
    /// The identity on `T` viewed as a map from `Im[s]` into the target.
    pub inclusion_factor: FormalMapReport,
}

/// `b ◁_s V ↔ s⁻b ◁ s⁻V` and `b ⋉_s V ↔ s⁻b ⋉ s*V`.
pub fn image_topology(
    s: &FiniteRelation,
    src: &FinitePositiveTopology,
    tgt: &FinitePositiveTopology,
) -> Result<ImageFactorization, FiniteError> {
    let original = check_formal_map(s, src, tgt)?;
    let size = tgt.size();
    let mut cover = Vec::with_capacity(1 << size);
    let mut pos = Vec::with_capacity(1 << size);
    for v in subsets(size) {
        let reach = src.covered_by(s.inverse_image(v));
        let positive = src.positive_in(s.universal_image(v));
        let mut c: Mask = 0;
        let mut p: Mask = 0;
        for b in 0..size {
            let pre = s.inverse_image(bit(b));
            if is_subset(pre, reach) {
                c |= bit(b);
            }
            if pre & positive != 0 {
                p |= bit(b);
            }
        }
        cover.push(c);
        pos.push(p);
    }
    let topology = FinitePositiveTopology::from_tables_unchecked(size, cover, pos);
    let laws = topology.laws();
    let source_factor = check_formal_map(s, src, &topology)?;
    let inclusion_factor = check_formal_map(&FiniteRelation::identity(size), &topology, tgt)?;
    Ok(ImageFactorization {
        topology,
        fm2_fm3: original.fm2 && original.fm3,
        laws,
        source_factor,
        inclusion_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{Bounds, PositivitySpec};

    fn no_point() -> FinitePositiveTopology {
        FinitePositiveTopology::from_axioms(1, &[], PositivitySpec::Empty, &Bounds::default()).unwrap()
    }

    #[test]
    fn identity_is_a_formal_map() {
        let t = FinitePositiveTopology::from_axioms(
            3,
            &[(0, 0b110), (1, 0b100)],
            PositivitySpec::Greatest,
            &Bounds::default(),
        )
        .unwrap();
        let report = check_formal_map(&FiniteRelation::identity(3), &t, &t).unwrap();
        assert!(report.is_formal_map());
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn empty_relation_out_of_no_point_topology_fails_totality() {
        let src = no_point();
        let tgt = FinitePositiveTopology::discrete(1);
        let report = check_formal_map(&FiniteRelation::empty(1, 1), &src, &tgt).unwrap();
        assert!(!report.fm1);
        assert!(report.fm2 && report.fm3 && report.fm4);
        assert_eq!(report.counterexamples, [FmCounterexample::Totality { atom: 0 }]);
    }

    #[test]
    fn function_graphs_between_discrete_topologies() {
        let src = FinitePositiveTopology::discrete(3);
        let tgt = FinitePositiveTopology::discrete(2);
        let f = FiniteRelation::from_pairs(3, 2, &[(0, 1), (1, 0), (2, 1)]).unwrap();
        assert!(is_formal_map(&f, &src, &tgt).unwrap());
        // two-valued at 0 breaks convergence
        let g = FiniteRelation::from_pairs(3, 2, &[(0, 0), (0, 1), (1, 0), (2, 1)]).unwrap();
        let report = check_formal_map(&g, &src, &tgt).unwrap();
        assert!(!report.fm2);
        assert_eq!(
            report.counterexamples,
            [FmCounterexample::Convergence { b: 0, c: 1, atom: 0 }]
        );
    }

    #[test]
    fn image_of_identity_is_the_target() {
        let t =
            FinitePositiveTopology::from_axioms(2, &[(0, 0b10)], PositivitySpec::Greatest, &Bounds::default()).unwrap();
        let image = image_topology(&FiniteRelation::identity(2), &t, &t).unwrap();
        assert_eq!(image.topology, t);
        assert!(image.source_factor.is_formal_map());
        assert!(image.inclusion_factor.is_formal_map());
    }

    #[test]
    fn shape_is_checked() {
        let t = FinitePositiveTopology::discrete(2);
        assert!(check_formal_map(&FiniteRelation::identity(3), &t, &t).is_err());
    }
}
