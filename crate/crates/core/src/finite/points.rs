use alloc::vec::Vec;

use super::{
    atoms, bit, check_formal_map, contains, is_subset, subsets, supersets, Bounds, FiniteError, FinitePositiveTopology,
    FiniteRelation, Mask,
};

/// Which of the four ideal-point clauses a subset satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClauses {
    pub inhabited: bool,
    pub filtering: bool,
    pub splits: bool,
    pub enters: bool,
}

impl PointClauses {
    pub fn all(&self) -> bool {
        self.inhabited && self.filtering && self.splits && self.enters
    }
}

pub fn point_clauses(t: &FinitePositiveTopology, alpha: Mask) -> PointClauses {
    let inhabited = alpha != 0;
    let filtering = atoms(alpha).all(|a| atoms(alpha).all(|b| t.meet(a, b) & alpha != 0));
    // a ◁ U with a ∈ α forces α ⋔ U
    let splits = subsets(t.size()).all(|u| t.covered_by(u) & alpha == 0 || u & alpha != 0);
    let enters = supersets(alpha, t.size()).all(|v| is_subset(alpha, t.positive_in(v)));
    PointClauses {
        inhabited,
        filtering,
        splits,
        enters,
    }
}

pub fn is_ideal_point(t: &FinitePositiveTopology, alpha: Mask) -> bool {
    point_clauses(t, alpha).all()
}

/// `Pt(S)`, in increasing mask order.
pub fn ideal_points(t: &FinitePositiveTopology, bounds: &Bounds) -> Result<Vec<Mask>, FiniteError> {
    bounds.check_pow(t.size())?;
    Ok(subsets(t.size()).filter(|&a| is_ideal_point(t, a)).collect())
}

/// The topology `S_Ip` induced on the base by its ideal points:
/// `a ◁_Ip U` iff every point containing `a` meets `U`, and
/// `a ⋉_Ip U` iff some point contains `a` and lies inside `U`.
pub fn pointwise_topology(t: &FinitePositiveTopology, bounds: &Bounds) -> Result<FinitePositiveTopology, FiniteError> {
    let points = ideal_points(t, bounds)?;
    Ok(pointwise_from_points(t.size(), &points))
}

pub(crate) fn pointwise_from_points(size: usize, points: &[Mask]) -> FinitePositiveTopology {
    let mut cover = Vec::with_capacity(1 << size);
    let mut pos = Vec::with_capacity(1 << size);
    for u in subsets(size) {
        let mut c: Mask = 0;
        let mut p: Mask = 0;
        for a in 0..size {
            let mut through_a = points.iter().filter(|&&alpha| contains(alpha, a));
            if through_a.clone().all(|&alpha| alpha & u != 0) {
                c |= bit(a);
            }
            if through_a.any(|&alpha| is_subset(alpha, u)) {
                p |= bit(a);
            }
        }
        cover.push(c);
        pos.push(p);
    }
    FinitePositiveTopology::from_tables_unchecked(size, cover, pos)
}

/// Spatiality and reducibility, each with a failing `(a, U)` when absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bispatiality {
    /// `a ◁_Ip U` without `a ◁ U`.
    pub spatial_failure: Option<(usize, Mask)>,
    /// `a ⋉ U` without `a ⋉_Ip U`.
    pub reducible_failure: Option<(usize, Mask)>,
}

impl Bispatiality {
    pub fn spatial(&self) -> bool {
        self.spatial_failure.is_none()
    }

    pub fn reducible(&self) -> bool {
        self.reducible_failure.is_none()
    }

    pub fn bispatial(&self) -> bool {
        self.spatial() && self.reducible()
    }
}

pub fn bispatiality(t: &FinitePositiveTopology, bounds: &Bounds) -> Result<Bispatiality, FiniteError> {
    let ip = pointwise_topology(t, bounds)?;
    let mut spatial_failure = None;
    let mut reducible_failure = None;
    for u in subsets(t.size()) {
        if spatial_failure.is_none() {
            if let Some(a) = atoms(ip.covered_by(u) & !t.covered_by(u)).next() {
                spatial_failure = Some((a, u));
            }
        }
        if reducible_failure.is_none() {
            if let Some(a) = atoms(t.positive_in(u) & !ip.positive_in(u)).next() {
                reducible_failure = Some((a, u));
            }
        }
    }
    Ok(Bispatiality {
        spatial_failure,
        reducible_failure,
    })
}

/// True iff `s` sends every point of `src` to a point of `tgt`.
fn maps_points(s: &FiniteRelation, src_points: &[Mask], tgt: &FinitePositiveTopology) -> bool {
    src_points.iter().all(|&alpha| is_ideal_point(tgt, s.image(alpha)))
}

/// Relation-level outcome of [`check_equicontop`]; each list holds the
/// relations (as pair lists) on which the named equivalence failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquicontinuityReport {
    pub relations_checked: usize,
    /// Item `i` of the four clause-by-clause equivalences between a
    /// condition on `S_Ip` and the matching clause on all image points.
    pub clause_failures: [Vec<FiniteRelation>; 4],
    /// Maps points to points, but is not a formal map `S_Ip → T`, or conversely.
    pub pointwise_map_failures: Vec<FiniteRelation>,
    /// Is a formal map `S → T`, but fails to map points to points.
    pub formal_map_failures: Vec<FiniteRelation>,
    /// Number of relations that are formal maps `S → T`.
    pub formal_maps: usize,
}

impl EquicontinuityReport {
    pub fn holds(&self) -> bool {
        self.clause_failures.iter().all(Vec::is_empty)
            && self.pointwise_map_failures.is_empty()
            && self.formal_map_failures.is_empty()
    }
}

/// Enumerates every relation `S × T` and checks that
///
/// * each condition of a formal map `S_Ip → T` matches the corresponding
///   clause holding for every image `s α` of a point `α`;
/// * `s` maps points to points iff it is a formal map `S_Ip → T`;
/// * every formal map `S → T` maps points to points.
pub fn check_equicontop(
    src: &FinitePositiveTopology,
    tgt: &FinitePositiveTopology,
    bounds: &Bounds,
) -> Result<EquicontinuityReport, FiniteError> {
    bounds.check_pow(tgt.size())?;
    let points = ideal_points(src, bounds)?;
    let ip = pointwise_from_points(src.size(), &points);
    let mut report = EquicontinuityReport::default();
    for s in FiniteRelation::enumerate(src.size(), tgt.size(), bounds)? {
        report.relations_checked += 1;
        let pointwise = check_formal_map(&s, &ip, tgt)?;
        let images: Vec<PointClauses> = points.iter().map(|&alpha| point_clauses(tgt, s.image(alpha))).collect();
        let clauses = [
            images.iter().all(|c| c.inhabited),
            images.iter().all(|c| c.filtering),
            images.iter().all(|c| c.splits),
            images.iter().all(|c| c.enters),
        ];
        let conditions = [pointwise.fm1, pointwise.fm2, pointwise.fm3, pointwise.fm4];
        for i in 0..4 {
            if clauses[i] != conditions[i] {
                report.clause_failures[i].push(s.clone());
            }
        }
        let maps = maps_points(&s, &points, tgt);
        if maps != pointwise.is_formal_map() {
            report.pointwise_map_failures.push(s.clone());
        }
        if check_formal_map(&s, src, tgt)?.is_formal_map() {
            report.formal_maps += 1;
            if !maps {
                report.formal_map_failures.push(s);
            }
        }
    }
    Ok(report)
}

/// Outcome of evaluating the continuity principle for a pair of topologies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopcReport {
    pub holds: bool,
    /// The first relation (in enumeration order) that maps points to points
    /// without being a formal map.
    pub counterexample: Option<FiniteRelation>,
    pub relations_checked: usize,
}

/// Checks that every relation mapping points to points is a formal map `src → tgt`.
pub fn check_popc(
    src: &FinitePositiveTopology,
    tgt: &FinitePositiveTopology,
    bounds: &Bounds,
) -> Result<PopcReport, FiniteError> {
    bounds.check_pow(tgt.size())?;
    let points = ideal_points(src, bounds)?;
    let mut relations_checked = 0;
    for s in FiniteRelation::enumerate(src.size(), tgt.size(), bounds)? {
        relations_checked += 1;
        if maps_points(&s, &points, tgt) && !check_formal_map(&s, src, tgt)?.is_formal_map() {
            return Ok(PopcReport {
                holds: false,
                counterexample: Some(s),
                relations_checked,
            });
        }
    }
    Ok(PopcReport {
        holds: true,
        counterexample: None,
        relations_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::PositivitySpec;

    fn no_point() -> FinitePositiveTopology {
        FinitePositiveTopology::from_axioms(1, &[], PositivitySpec::Empty, &Bounds::default()).unwrap()
    }

    #[test]
    fn discrete_points_are_singletons() {
        let t = FinitePositiveTopology::discrete(3);
        assert_eq!(ideal_points(&t, &Bounds::default()).unwrap(), [0b001, 0b010, 0b100]);
        assert!(bispatiality(&t, &Bounds::default()).unwrap().bispatial());
    }

    #[test]
    fn no_point_topology() {
        let t = no_point();
        let b = Bounds::default();
        assert!(ideal_points(&t, &b).unwrap().is_empty());
        let clauses = point_clauses(&t, 0b1);
        assert!(clauses.inhabited && clauses.filtering && clauses.splits && !clauses.enters);
        // with no points every cover holds pointwise, including ∅
        let ip = pointwise_topology(&t, &b).unwrap();
        assert_eq!(ip.cover_table(), &[0b1, 0b1]);
        let bs = bispatiality(&t, &b).unwrap();
        assert_eq!(bs.spatial_failure, Some((0, 0)));
        assert!(bs.reducible());

        let popc = check_popc(&t, &FinitePositiveTopology::discrete(1), &b).unwrap();
        assert!(!popc.holds);
        assert_eq!(popc.counterexample, Some(FiniteRelation::empty(1, 1)));
    }

    #[test]
    fn equicontinuity_on_small_discrete_topologies() {
        let b = Bounds::default();
        let d = FinitePositiveTopology::discrete(2);
        let report = check_equicontop(&d, &d, &b).unwrap();
        assert_eq!(report.relations_checked, 16);
        assert!(report.holds(), "{report:?}");
        // total functions {0,1} -> {0,1}
        assert_eq!(report.formal_maps, 4);

        let report = check_equicontop(&no_point(), &d, &b).unwrap();
        assert!(report.holds());
        assert_eq!(report.relations_checked, 4);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let d = FinitePositiveTopology::discrete(4);
        let wide = Bounds {
            max_pow_atoms: 5,
            max_relation_pairs: 12,
        };
        assert!(matches!(
            check_popc(&d, &d, &wide),
            Err(FiniteError::EnumerationTooLarge { pairs: 16, .. })
        ));
    }
}
