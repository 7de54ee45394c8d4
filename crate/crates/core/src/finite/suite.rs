//! Exhaustive verification of the finite theory over small topologies.
//!
//! Every check quantifies over a finite family of topologies, relations or
//! concrete spaces and counts the instances it examined. A check passes
//! when no instance fails; the first failure is kept as a readable witness.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{
    bispatiality, check_equicontop, check_formal_map, check_popc, formal_maps_equal, image_topology, is_compatible,
    representable, subsets, Bounds, FiniteConcreteSpace, FiniteError, FinitePositiveTopology, FiniteRelation, Mask,
};

/// The properties the suite tracks, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// Every generated structure satisfies the six laws.
    Laws,
    /// Each formal-map condition on `S_Ip → T` matches its ideal-point clause on images.
    PointClauses,
    /// Mapping points to points coincides with being a formal map `S_Ip → T`.
    PointsToPoints,
    /// Formal maps `S → T` send points to points.
    FormalMapsPreservePoints,
    /// `Im[s]` satisfies every law except possibly ↓-right.
    ImageLaws,
    /// Under convergence and continuity, `Im[s]` is a positive topology.
    ImagePositive,
    /// Under convergence and continuity, `s : S → Im[s]` is a formal map iff `s` is total.
    ImageSourceFactor,
    /// Under convergence and continuity, `id : Im[s] → T` is a formal map iff `s` is positive.
    ImageInclusionFactor,
    /// Every formal map factors as `s` followed by the inclusion of its image.
    Factorization,
    /// A positivity compatible with a cover stays compatible with every smaller cover.
    CompatibilityInheritance,
    /// Into a target with the greatest positivity, the first three conditions suffice.
    GreatestCodomain,
    /// A spatial source and a target with the greatest positivity satisfy the continuity principle.
    SpatialPopc,
    /// Every representable topology is spatial and reducible.
    RepresentableBispatial,
    /// The topology under verification is spatial.
    Spatial,
    /// The topology under verification is reducible.
    Reducible,
    /// Every relation mapping points to points is a formal map.
    Popc,
}

impl Check {
    pub const ALL: [Check; 16] = [
        Check::Laws,
        Check::PointClauses,
        Check::PointsToPoints,
        Check::FormalMapsPreservePoints,
        Check::ImageLaws,
        Check::ImagePositive,
        Check::ImageSourceFactor,
        Check::ImageInclusionFactor,
        Check::Factorization,
        Check::CompatibilityInheritance,
        Check::GreatestCodomain,
        Check::SpatialPopc,
        Check::RepresentableBispatial,
        Check::Spatial,
        Check::Reducible,
        Check::Popc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Laws => "laws",
            Check::PointClauses => "point-clauses",
            Check::PointsToPoints => "points-to-points",
            Check::FormalMapsPreservePoints => "formal-maps-preserve-points",
            Check::ImageLaws => "image-laws",
            Check::ImagePositive => "image-positive",
            Check::ImageSourceFactor => "image-source-factor",
            Check::ImageInclusionFactor => "image-inclusion-factor",
            Check::Factorization => "factorization",
            Check::CompatibilityInheritance => "compatibility-inheritance",
            Check::GreatestCodomain => "greatest-codomain",
            Check::SpatialPopc => "spatial-popc",
            Check::RepresentableBispatial => "representable-bispatial",
            Check::Spatial => "spatial",
            Check::Reducible => "reducible",
            Check::Popc => "popc",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: Check,
    pub instances: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Outcomes in [`Check::ALL`] order; checks that never ran are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn get(&self, check: Check) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.check == check)
    }

    fn record(&mut self, check: Check, ok: bool, witness: impl FnOnce() -> String) {
        let pos = match self.outcomes.iter().position(|o| o.check == check) {
            Some(pos) => pos,
            None => {
                self.outcomes.push(CheckOutcome {
                    check,
                    instances: 0,
                    failures: 0,
                    first_failure: None,
                });
                self.outcomes.sort_by_key(|o| o.check);
                self.outcomes.iter().position(|o| o.check == check).unwrap_or(0)
            }
        };
        let o = &mut self.outcomes[pos];
        o.instances += 1;
        if !ok {
            o.failures += 1;
            if o.first_failure.is_none() {
                o.first_failure = Some(witness());
            }
        }
    }
}

/// Every positive topology on `1..=max_size` atoms whose cover is generated
/// by at most `max_axioms` axioms, paired with each compatible positivity.
/// Covers are deduplicated; the order is deterministic.
pub fn topology_family(
    max_size: usize,
    max_axioms: usize,
    bounds: &Bounds,
) -> Result<Vec<FinitePositiveTopology>, FiniteError> {
    let mut family = Vec::new();
    for size in 1..=max_size {
        bounds.check_pow(size)?;
        let candidates: Vec<(usize, Mask)> = (0..size).flat_map(|a| subsets(size).map(move |u| (a, u))).collect();
        let mut covers: Vec<Vec<Mask>> = Vec::new();
        for axioms in combinations(&candidates, max_axioms) {
            let cover = super::cover_closure(size, &axioms, bounds)?;
            if !covers.contains(&cover) {
                covers.push(cover);
            }
        }
        for cover in covers {
            let probe = FinitePositiveTopology::from_tables_unchecked(size, cover.clone(), alloc::vec![0; 1 << size]);
            for pos in super::enumerate_positivities(&probe, bounds)? {
                family.push(FinitePositiveTopology::from_tables_unchecked(size, cover.clone(), pos));
            }
        }
    }
    Ok(family)
}

/// All subsets of `items` with at most `k` elements.
fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = alloc::vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<T>)> = alloc::vec![(0, Vec::new())];
    for _ in 0..k {
        let mut next = Vec::new();
        for (start, chosen) in &frontier {
            for (i, item) in items.iter().enumerate().skip(*start) {
                let mut grown = chosen.clone();
                grown.push(item.clone());
                out.push(grown.clone());
                next.push((i + 1, grown));
            }
        }
        frontier = next;
    }
    out
}

/// Every concrete space with at most `max_points` points and `max_base`
/// atoms that satisfies the base conditions.
pub fn concrete_family(max_points: usize, max_base: usize) -> Vec<FiniteConcreteSpace> {
    let mut family = Vec::new();
    for points in 1..=max_points {
        for base in 1..=max_base {
            let cells: Vec<(usize, usize)> = (0..points).flat_map(|x| (0..base).map(move |a| (x, a))).collect();
            for code in 0u32..(1 << cells.len()) {
                let forcing: Vec<(usize, usize)> = (0..cells.len())
                    .filter(|i| code & (1 << i) != 0)
                    .map(|i| cells[i])
                    .collect();
                if let Ok(space) = FiniteConcreteSpace::new(points, base, &forcing) {
                    family.push(space);
                }
            }
        }
    }
    family
}

fn describe_topology(t: &FinitePositiveTopology) -> String {
    format!("{t:?}")
}

/// Checks every law on each member of the family.
pub fn check_laws(family: &[FinitePositiveTopology], report: &mut SuiteReport) {
    for t in family {
        let laws = t.laws();
        report.record(Check::Laws, laws.all_hold(), || {
            format!("{}: {:?}", describe_topology(t), laws.first_violation())
        });
    }
}

/// For each pair of covers on the same base with `◁' ⊆ ◁`, every positivity
/// compatible with `◁` is compatible with `◁'`.
pub fn check_compatibility_inheritance(family: &[FinitePositiveTopology], report: &mut SuiteReport) {
    let mut covers: Vec<(usize, &[Mask])> = Vec::new();
    for t in family {
        if !covers.iter().any(|(s, c)| *s == t.size() && *c == t.cover_table()) {
            covers.push((t.size(), t.cover_table()));
        }
    }
    for t in family {
        for &(size, smaller) in &covers {
            let below = size == t.size() && smaller.iter().zip(t.cover_table()).all(|(a, b)| a & !b == 0);
            if below {
                let ok = is_compatible(size, smaller, t.positivity_table());
                report.record(Check::CompatibilityInheritance, ok, || {
                    format!(
                        "positivity of {} is not compatible with the smaller cover {:?}",
                        describe_topology(t),
                        smaller
                    )
                });
            }
        }
    }
}

/// The relation-level checks for one source and one target.
pub fn check_pair(
    src: &FinitePositiveTopology,
    tgt: &FinitePositiveTopology,
    bounds: &Bounds,
    report: &mut SuiteReport,
) -> Result<(), FiniteError> {
    let pair = || format!("source {} target {}", describe_topology(src), describe_topology(tgt));

    let equi = check_equicontop(src, tgt, bounds)?;
    let clauses_ok = equi.clause_failures.iter().all(Vec::is_empty);
    report.record(Check::PointClauses, clauses_ok, || {
        let (i, rels) = equi
            .clause_failures
            .iter()
            .enumerate()
            .find(|(_, r)| !r.is_empty())
            .map(|(i, r)| (i + 1, r))
            .unwrap_or((0, &equi.pointwise_map_failures));
        format!("{}: condition {i} mismatched on {:?}", pair(), rels.first())
    });
    report.record(Check::PointsToPoints, equi.pointwise_map_failures.is_empty(), || {
        format!("{}: {:?}", pair(), equi.pointwise_map_failures.first())
    });
    report.record(
        Check::FormalMapsPreservePoints,
        equi.formal_map_failures.is_empty(),
        || format!("{}: {:?}", pair(), equi.formal_map_failures.first()),
    );

    let greatest = tgt.with_greatest_positivity();
    let spatial = bispatiality(src, bounds)?.spatial();
    for s in FiniteRelation::enumerate(src.size(), tgt.size(), bounds)? {
        let rel = || format!("{}: relation {s:?}", pair());
        let original = check_formal_map(&s, src, tgt)?;
        let image = image_topology(&s, src, tgt)?;
        report.record(Check::ImageLaws, image.laws.all_but_down_right(), || {
            format!("{}: {:?}", rel(), image.laws.first_violation())
        });
        if image.fm2_fm3 {
            report.record(Check::ImagePositive, image.laws.all_hold(), || {
                format!("{}: {:?}", rel(), image.laws.first_violation())
            });
            report.record(
                Check::ImageSourceFactor,
                image.source_factor.is_formal_map() == original.fm1,
                rel,
            );
            report.record(
                Check::ImageInclusionFactor,
                image.inclusion_factor.is_formal_map() == original.fm4,
                rel,
            );
        }
        if original.is_formal_map() {
            let composite = s.then(&FiniteRelation::identity(tgt.size()))?;
            let ok = image.source_factor.is_formal_map()
                && image.inclusion_factor.is_formal_map()
                && formal_maps_equal(&composite, &s, src)?;
            report.record(Check::Factorization, ok, rel);
        }
        let into_greatest = check_formal_map(&s, src, &greatest)?;
        if into_greatest.fm1 && into_greatest.fm2 && into_greatest.fm3 {
            report.record(Check::GreatestCodomain, into_greatest.fm4, rel);
        }
    }

    if spatial {
        let popc = check_popc(src, &greatest, bounds)?;
        report.record(Check::SpatialPopc, popc.holds, || {
            format!("{}: counterexample {:?}", pair(), popc.counterexample)
        });
    }
    Ok(())
}

/// Every representable topology of the given concrete spaces is bi-spatial.
pub fn check_representable(
    spaces: &[FiniteConcreteSpace],
    bounds: &Bounds,
    report: &mut SuiteReport,
) -> Result<(), FiniteError> {
    for space in spaces {
        let t = representable(space)?;
        let b = bispatiality(&t, bounds)?;
        report.record(Check::RepresentableBispatial, b.bispatial(), || {
            format!("{space:?}: {b:?}")
        });
    }
    Ok(())
}

/// Sizes of the exhaustive run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub max_size: usize,
    pub max_axioms: usize,
    /// Largest source base of an enumerated relation.
    pub source_size: usize,
    /// Largest target base of an enumerated relation.
    pub target_size: usize,
    pub max_points: usize,
    pub max_concrete_base: usize,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams {
            max_size: 3,
            max_axioms: 2,
            source_size: 3,
            target_size: 2,
            max_points: 3,
            max_concrete_base: 3,
        }
    }
}

/// Runs every theory check over the generated families.
pub fn run_family_suite(params: &FamilyParams, bounds: &Bounds) -> Result<SuiteReport, FiniteError> {
    let family = topology_family(params.max_size, params.max_axioms, bounds)?;
    let mut report = SuiteReport::default();
    check_laws(&family, &mut report);
    check_compatibility_inheritance(&family, &mut report);
    let sources = family.iter().filter(|t| t.size() <= params.source_size);
    let targets: Vec<&FinitePositiveTopology> = family.iter().filter(|t| t.size() <= params.target_size).collect();
    for src in sources {
        for tgt in &targets {
            check_pair(src, tgt, bounds, &mut report)?;
        }
    }
    let spaces = concrete_family(params.max_points, params.max_concrete_base);
    check_representable(&spaces, bounds, &mut report)?;
    Ok(report)
}

/// Verifies one topology: its laws, its spatiality and reducibility, and the
/// relation-level checks and the continuity principle against every target
/// in `targets` that the bounds allow.
pub fn verify_topology(
    t: &FinitePositiveTopology,
    targets: &[FinitePositiveTopology],
    bounds: &Bounds,
) -> Result<SuiteReport, FiniteError> {
    let mut report = SuiteReport::default();
    check_laws(core::slice::from_ref(t), &mut report);
    let b = bispatiality(t, bounds)?;
    report.record(Check::Spatial, b.spatial(), || {
        let (a, u) = b.spatial_failure.unwrap_or_default();
        format!("{a} is covered by {} pointwise but not formally", super::format_mask(u))
    });
    report.record(Check::Reducible, b.reducible(), || {
        let (a, u) = b.reducible_failure.unwrap_or_default();
        format!(
            "{a} is positive in {} but no point through {a} lies inside it",
            super::format_mask(u)
        )
    });
    for tgt in targets {
        check_pair(t, tgt, bounds, &mut report)?;
        let popc = check_popc(t, tgt, bounds)?;
        report.record(Check::Popc, popc.holds, || {
            let s = popc
                .counterexample
                .clone()
                .unwrap_or_else(|| FiniteRelation::empty(t.size(), tgt.size()));
            let reason = check_formal_map(&s, t, tgt)
                .ok()
                .and_then(|r| r.counterexamples.first().map(|c| format!("{c}")))
                .unwrap_or_default();
            format!(
                "relation {s:?} into a {}-atom target maps points to points but is not a formal map ({reason})",
                tgt.size()
            )
        });
    }
    Ok(report)
}
