use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::decide::{decide, Decision};
use super::{Mode, RatInterval, RealsError};
use crate::rational::Rational;

/// A derivation of `t ◁ U` in the interval rules.
#[derive(Clone, PartialEq, Eq)]
pub enum RealCertificate {
    /// `at ∈ U`.
    Eta { at: RatInterval },
    /// `at ≤ wider` and `wider ◁ U`.
    Weaken {
        at: RatInterval,
        wider: RatInterval,
        premise: Box<RealCertificate>,
    },
    /// `p < p′ < q′ < q` with `(p, q′) ◁ U` and `(p′, q) ◁ U`.
    Split {
        at: RatInterval,
        p1: Rational,
        q1: Rational,
        left: Box<RealCertificate>,
        right: Box<RealCertificate>,
    },
    /// Unit interval only: `p < q < 0`.
    DiscardBelow { at: RatInterval },
    /// Unit interval only: `1 < p < q`.
    DiscardAbove { at: RatInterval },
    /// Unit interval only, `q ≤ 0`: every `(p′, q′) < at` has `q′ < 0` and
    /// is discarded below. The approximation rule applied uniformly.
    ApproxBelow { at: RatInterval },
    /// Unit interval only, `1 ≤ p`: every `(p′, q′) < at` has `1 < p′`.
    ApproxAbove { at: RatInterval },
}

impl RealCertificate {
    pub fn conclusion(&self) -> &RatInterval {
        match self {
            RealCertificate::Eta { at }
            | RealCertificate::Weaken { at, .. }
            | RealCertificate::Split { at, .. }
            | RealCertificate::DiscardBelow { at }
            | RealCertificate::DiscardAbove { at }
            | RealCertificate::ApproxBelow { at }
            | RealCertificate::ApproxAbove { at } => at,
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            RealCertificate::Eta { .. } => "eta",
            RealCertificate::Weaken { .. } => "weaken",
            RealCertificate::Split { .. } => "split",
            RealCertificate::DiscardBelow { .. } => "discard-below",
            RealCertificate::DiscardAbove { .. } => "discard-above",
            RealCertificate::ApproxBelow { .. } => "approx-below",
            RealCertificate::ApproxAbove { .. } => "approx-above",
        }
    }

    /// Nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            RealCertificate::Weaken { premise, .. } => 1 + premise.size(),
            RealCertificate::Split { left, right, .. } => 1 + left.size() + right.size(),
            _ => 1,
        }
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        write!(
            f,
            "{:width$}{} {}",
            "",
            self.rule_name(),
            self.conclusion(),
            width = 2 * indent
        )?;
        match self {
            RealCertificate::Weaken { wider, premise, .. } => {
                writeln!(f, " <= {wider}")?;
                premise.write_tree(f, indent + 1)
            }
            RealCertificate::Split {
                p1, q1, left, right, ..
            } => {
                writeln!(f, " at {p1} {q1}")?;
                left.write_tree(f, indent + 1)?;
                right.write_tree(f, indent + 1)
            }
            _ => writeln!(f),
        }
    }
}

/// One line per node, children indented by two spaces.
impl fmt::Display for RealCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

impl fmt::Debug for RealCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A piece of the target: it either sits inside a member of the family or
/// can be discarded at the boundary of the unit interval.
#[derive(Debug, Clone)]
struct Piece {
    lo: Rational,
    hi: Rational,
    member: Option<usize>,
}

/// Builds a certificate for `t ◁ U` from the sweep chain.
///
/// The target is cut into pieces with strictly increasing endpoints that
/// overlap strictly; the split rule peels them off from the left, cutting
/// at points inside each overlap.
pub fn certify(mode: Mode, t: &RatInterval, u: &[RatInterval]) -> Result<RealCertificate, RealsError> {
    let chain = match decide(mode, t, u) {
        Decision::Covered { chain } => chain,
        Decision::Uncovered { witness } => return Err(RealsError::NotCoverable { witness }),
    };
    let (p, q) = (t.left().clone(), t.right().clone());
    if chain.is_empty() {
        // Only the unit interval has empty segments.
        let zero = Rational::zero();
        return Ok(if q < zero {
            RealCertificate::DiscardBelow { at: t.clone() }
        } else if q == zero {
            RealCertificate::ApproxBelow { at: t.clone() }
        } else if p > Rational::one() {
            RealCertificate::DiscardAbove { at: t.clone() }
        } else {
            RealCertificate::ApproxAbove { at: t.clone() }
        });
    }
    let mut pieces: Vec<Piece> = chain
        .iter()
        .map(|&i| Piece {
            lo: u[i].left().clone(),
            hi: u[i].right().clone(),
            member: Some(i),
        })
        .collect();
    let first = pieces.first_mut().expect("non-empty chain");
    if first.lo <= p {
        first.lo = p.clone();
    } else {
        // The chain starts inside the target, which only happens below 0.
        let cut = first.lo.midpoint(&Rational::zero());
        pieces.insert(
            0,
            Piece {
                lo: p.clone(),
                hi: cut,
                member: None,
            },
        );
    }
    let last = pieces.last_mut().expect("non-empty chain");
    if last.hi >= q {
        last.hi = q.clone();
    } else {
        let cut = Rational::one().midpoint(&last.hi);
        pieces.push(Piece {
            lo: cut,
            hi: q.clone(),
            member: None,
        });
    }
    Ok(peel(&pieces, p, u))
}

fn peel(pieces: &[Piece], lo: Rational, u: &[RatInterval]) -> RealCertificate {
    let hi = pieces.last().expect("non-empty").hi.clone();
    let at = RatInterval::new(lo.clone(), hi.clone()).expect("pieces advance");
    match pieces {
        [only] => leaf(at, only, u),
        [head, rest @ ..] => {
            let (l, r) = (&rest[0].lo, &head.hi);
            let m = l.midpoint(r);
            let p1 = l.midpoint(&m);
            let q1 = m.midpoint(r);
            let left_at = RatInterval::new(lo, q1.clone()).expect("cut inside target");
            let left = leaf(left_at, head, u);
            let right = peel(rest, p1.clone(), u);
            RealCertificate::Split {
                at,
                p1,
                q1,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
        [] => unreachable!("non-empty"),
    }
}

fn leaf(at: RatInterval, piece: &Piece, u: &[RatInterval]) -> RealCertificate {
    match piece.member {
        Some(i) if at == u[i] => RealCertificate::Eta { at },
        Some(i) => RealCertificate::Weaken {
            at,
            wider: u[i].clone(),
            premise: Box::new(RealCertificate::Eta { at: u[i].clone() }),
        },
        None if at.right() < &Rational::zero() => RealCertificate::DiscardBelow { at },
        None => RealCertificate::DiscardAbove { at },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateViolation {
    pub rule: &'static str,
    pub at: RatInterval,
    pub reason: String,
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule, self.at, self.reason)
    }
}

/// Checks every node's side condition and that the root concludes `t`.
pub fn validate(
    mode: Mode,
    t: &RatInterval,
    u: &[RatInterval],
    cert: &RealCertificate,
) -> Result<(), CertificateViolation> {
    if cert.conclusion() != t {
        return Err(violation(
            cert,
            alloc::format!("concludes {} instead of {t}", cert.conclusion()),
        ));
    }
    check_node(mode, u, cert)
}

fn violation(cert: &RealCertificate, reason: String) -> CertificateViolation {
    CertificateViolation {
        rule: cert.rule_name(),
        at: cert.conclusion().clone(),
        reason,
    }
}

fn check_node(mode: Mode, u: &[RatInterval], cert: &RealCertificate) -> Result<(), CertificateViolation> {
    let fail = |reason: &str| Err(violation(cert, reason.into()));
    let (zero, one) = (Rational::zero(), Rational::one());
    let unit_only = matches!(
        cert,
        RealCertificate::DiscardBelow { .. }
            | RealCertificate::DiscardAbove { .. }
            | RealCertificate::ApproxBelow { .. }
            | RealCertificate::ApproxAbove { .. }
    );
    if unit_only && mode != Mode::UnitInterval {
        return fail("boundary rules exist only on the unit interval");
    }
    match cert {
        RealCertificate::Eta { at } => {
            if !u.contains(at) {
                return fail("not a member of the family");
            }
        }
        RealCertificate::Weaken { at, wider, premise } => {
            if !at.leq(wider) {
                return fail("not contained in the wider interval");
            }
            if premise.conclusion() != wider {
                return fail("premise does not conclude the wider interval");
            }
            check_node(mode, u, premise)?;
        }
        RealCertificate::Split {
            at,
            p1,
            q1,
            left,
            right,
        } => {
            if !(at.left() < p1 && p1 < q1 && q1 < at.right()) {
                return fail("cut points are not strictly inside and ordered");
            }
            if left.conclusion().left() != at.left() || left.conclusion().right() != q1 {
                return fail("left premise is not (p, q')");
            }
            if right.conclusion().left() != p1 || right.conclusion().right() != at.right() {
                return fail("right premise is not (p', q)");
            }
            check_node(mode, u, left)?;
            check_node(mode, u, right)?;
        }
        RealCertificate::DiscardBelow { at } => {
            if at.right() >= &zero {
                return fail("right endpoint is not below 0");
            }
        }
        RealCertificate::DiscardAbove { at } => {
            if at.left() <= &one {
                return fail("left endpoint is not above 1");
            }
        }
        RealCertificate::ApproxBelow { at } => {
            if at.right() > &zero {
                return fail("right endpoint exceeds 0");
            }
        }
        RealCertificate::ApproxAbove { at } => {
            if at.left() < &one {
                return fail("left endpoint is below 1");
            }
        }
    }
    Ok(())
}
