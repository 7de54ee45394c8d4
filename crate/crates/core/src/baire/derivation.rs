use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use super::{ChoiceStream, DecidableSubset};
use crate::seq::{leq_b, FiniteSeq};

/// The three cover rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Eta,
    Zeta,
    Fan,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Eta => "eta",
            Rule::Zeta => "zeta",
            Rule::Fan => "fan",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("malformed derivation at {at}: {reason}")]
    MalformedTree { at: FiniteSeq, reason: String },
    #[error("{rule} side condition fails at {at}: {reason}")]
    SideCondition { rule: Rule, at: FiniteSeq, reason: String },
    #[error("fuel exhausted after {0} fan steps")]
    FuelExhausted(usize),
    #[error("fan depth exceeds the bound {0}")]
    DepthExceeded(usize),
}

type BranchFn = dyn Fn(u64) -> Result<Derivation, DerivationError> + Send + Sync;

/// A cover derivation `a ◁ U` built from the rules
///
/// * η: `a ∈ U` gives `a ◁ U`;
/// * ζ: `a ≤ b` and `b ◁ U` give `a ◁ U`;
/// * ϝ: `a * n ◁ U` for every `n` gives `a ◁ U`.
///
/// Fan branches are computed on demand, so a derivation can only be
/// checked along the branches somebody asks for.
#[derive(Clone)]
pub enum Derivation {
    Eta {
        at: FiniteSeq,
    },
    Zeta {
        at: FiniteSeq,
        via: FiniteSeq,
        premise: Arc<Derivation>,
    },
    Fan {
        at: FiniteSeq,
        branch: Arc<BranchFn>,
    },
}

impl Derivation {
    pub fn eta(at: FiniteSeq) -> Self {
        Derivation::Eta { at }
    }

    pub fn zeta(at: FiniteSeq, premise: Derivation) -> Self {
        Derivation::Zeta {
            at,
            via: premise.conclusion().clone(),
            premise: Arc::new(premise),
        }
    }

    pub fn fan(at: FiniteSeq, branch: impl Fn(u64) -> Derivation + Send + Sync + 'static) -> Self {
        Derivation::Fan {
            at,
            branch: Arc::new(move |n| Ok(branch(n))),
        }
    }

    pub fn fan_fallible(
        at: FiniteSeq,
        branch: impl Fn(u64) -> Result<Derivation, DerivationError> + Send + Sync + 'static,
    ) -> Self {
        Derivation::Fan {
            at,
            branch: Arc::new(branch),
        }
    }

    /// The sequence `a` of the conclusion `a ◁ U`.
    pub fn conclusion(&self) -> &FiniteSeq {
        match self {
            Derivation::Eta { at } | Derivation::Zeta { at, .. } | Derivation::Fan { at, .. } => at,
        }
    }

    pub fn rule(&self) -> Rule {
        match self {
            Derivation::Eta { .. } => Rule::Eta,
            Derivation::Zeta { .. } => Rule::Zeta,
            Derivation::Fan { .. } => Rule::Fan,
        }
    }

    /// The premise for `a * n`, checked to conclude exactly that.
    pub fn child(&self, n: u64) -> Result<Derivation, DerivationError> {
        match self {
            Derivation::Fan { at, branch } => {
                let child = branch(n)?;
                let expected = at.push(n);
                if child.conclusion() != &expected {
                    return Err(DerivationError::MalformedTree {
                        at: at.clone(),
                        reason: alloc::format!("branch {n} concludes {} instead of {expected}", child.conclusion()),
                    });
                }
                Ok(child)
            }
            other => Err(DerivationError::MalformedTree {
                at: other.conclusion().clone(),
                reason: alloc::format!("{} node has no fan branches", other.rule()),
            }),
        }
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Eta { at } => write!(f, "(eta {at})"),
            Derivation::Zeta { at, premise, .. } => write!(f, "(zeta {at} {premise:?})"),
            Derivation::Fan { at, .. } => write!(f, "(fan {at} ..)"),
        }
    }
}

/// A side condition that fails at a reachable node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub at: FiniteSeq,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule, self.at, self.reason)
    }
}

/// What a probing check looked at and what it found.
///
/// `violation == None` means locally valid on the probed part only: fan
/// nodes branch over all of ℕ and were followed only along `probes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeVerdict {
    /// The branch choices actually followed, one per probe.
    pub probed: Vec<FiniteSeq>,
    /// Number of nodes whose side condition was checked.
    pub nodes_checked: usize,
    /// Fan nodes reached after a probe ran out of entries, left unexplored.
    pub frontier: usize,
    pub violation: Option<Violation>,
}

impl ProbeVerdict {
    pub fn locally_valid(&self) -> bool {
        self.violation.is_none()
    }
}

fn eta_violation(at: &FiniteSeq) -> Violation {
    Violation {
        rule: Rule::Eta,
        at: at.clone(),
        reason: String::from("conclusion is not a member of the target"),
    }
}

fn zeta_violation(at: &FiniteSeq, via: &FiniteSeq) -> Option<Violation> {
    (!leq_b(at, via)).then(|| Violation {
        rule: Rule::Zeta,
        at: at.clone(),
        reason: alloc::format!("{via} is not an initial segment of {at}"),
    })
}

fn premise_mismatch(at: &FiniteSeq, via: &FiniteSeq, premise: &Derivation) -> Option<DerivationError> {
    (premise.conclusion() != via).then(|| DerivationError::MalformedTree {
        at: at.clone(),
        reason: alloc::format!("premise concludes {} instead of {via}", premise.conclusion()),
    })
}

/// Checks the side conditions of `d` against `U` along each probe.
///
/// Each probe supplies one branch choice per fan node met on its path; ζ and
/// η nodes are checked wherever they are reached. Fan steps across all probes
/// are limited by `fuel`.
pub fn check_derivation(
    d: &Derivation,
    u: &DecidableSubset,
    probes: &[FiniteSeq],
    fuel: usize,
) -> Result<ProbeVerdict, DerivationError> {
    let mut verdict = ProbeVerdict {
        probed: Vec::new(),
        nodes_checked: 0,
        frontier: 0,
        violation: None,
    };
    let mut steps = 0;
    let probe_list: Vec<FiniteSeq> = if probes.is_empty() {
        alloc::vec![FiniteSeq::nil()]
    } else {
        probes.to_vec()
    };
    for probe in &probe_list {
        let mut followed = Vec::new();
        let mut node = d.clone();
        let mut remaining = probe.entries().iter();
        loop {
            verdict.nodes_checked += 1;
            match node {
                Derivation::Eta { ref at } => {
                    if !u.contains(at) {
                        verdict.violation = Some(eta_violation(at));
                    }
                    break;
                }
                Derivation::Zeta {
                    ref at,
                    ref via,
                    ref premise,
                } => {
                    if let Some(e) = premise_mismatch(at, via, premise) {
                        return Err(e);
                    }
                    if let Some(v) = zeta_violation(at, via) {
                        verdict.violation = Some(v);
                        break;
                    }
                    let next = (**premise).clone();
                    node = next;
                }
                Derivation::Fan { .. } => match remaining.next() {
                    None => {
                        verdict.frontier += 1;
                        break;
                    }
                    Some(&n) => {
                        steps += 1;
                        if steps > fuel {
                            return Err(DerivationError::FuelExhausted(fuel));
                        }
                        followed.push(n);
                        node = node.child(n)?;
                    }
                },
            }
        }
        verdict.probed.push(FiniteSeq::new(followed));
        if verdict.violation.is_some() {
            break;
        }
    }
    Ok(verdict)
}

/// Turns a derivation of `a ◁ U` into one of `a ◁ ↓U` that uses only η and ϝ.
///
/// Fan nodes are translated branch by branch when the branch is requested.
pub fn zeta_eliminate(d: &Derivation) -> Result<Derivation, DerivationError> {
    match d {
        Derivation::Eta { at } => Ok(Derivation::eta(at.clone())),
        Derivation::Fan { at, .. } => {
            let original = d.clone();
            Ok(Derivation::fan_fallible(at.clone(), move |n| {
                zeta_eliminate(&original.child(n)?)
            }))
        }
        Derivation::Zeta { at, via, premise } => {
            if let Some(e) = premise_mismatch(at, via, premise) {
                return Err(e);
            }
            if let Some(v) = zeta_violation(at, via) {
                return Err(DerivationError::SideCondition {
                    rule: v.rule,
                    at: v.at,
                    reason: v.reason,
                });
            }
            transport(at, zeta_eliminate(premise)?)
        }
    }
}

/// Given an η/ϝ derivation of `b ◁ ↓U` and `a ≤ b`, derives `a ◁ ↓U`.
fn transport(a: &FiniteSeq, e: Derivation) -> Result<Derivation, DerivationError> {
    let mut e = e;
    loop {
        match e {
            // b ∈ ↓U and a ≤ b give a ∈ ↓U
            Derivation::Eta { .. } => return Ok(Derivation::eta(a.clone())),
            Derivation::Fan { ref at, .. } => {
                if at == a {
                    return Ok(e);
                }
                let n = a.get(at.len()).expect("a extends the fan node");
                e = e.child(n)?;
            }
            Derivation::Zeta { ref at, .. } => {
                return Err(DerivationError::MalformedTree {
                    at: at.clone(),
                    reason: String::from("zeta node survived elimination"),
                })
            }
        }
    }
}

/// Follows `d` along `α`: a fan at node `c` takes branch `α(lh c)`. Returns
/// the η leaf reached, which is a prefix of `α` lying in `U`.
pub fn split_cover(
    alpha: &ChoiceStream,
    d: &Derivation,
    u: &DecidableSubset,
    fuel: usize,
) -> Result<FiniteSeq, DerivationError> {
    if !alpha.passes_through(d.conclusion()) {
        return Err(DerivationError::SideCondition {
            rule: d.rule(),
            at: d.conclusion().clone(),
            reason: String::from("conclusion is not a prefix of the stream"),
        });
    }
    let mut node = d.clone();
    let mut steps = 0;
    loop {
        match node {
            Derivation::Eta { ref at } => {
                if !u.contains(at) {
                    let v = eta_violation(at);
                    return Err(DerivationError::SideCondition {
                        rule: v.rule,
                        at: v.at,
                        reason: v.reason,
                    });
                }
                return Ok(at.clone());
            }
            Derivation::Zeta {
                ref at,
                ref via,
                ref premise,
            } => {
                if let Some(e) = premise_mismatch(at, via, premise) {
                    return Err(e);
                }
                if let Some(v) = zeta_violation(at, via) {
                    return Err(DerivationError::SideCondition {
                        rule: v.rule,
                        at: v.at,
                        reason: v.reason,
                    });
                }
                let next = (**premise).clone();
                node = next;
            }
            Derivation::Fan { ref at, .. } => {
                if steps == fuel {
                    return Err(DerivationError::FuelExhausted(fuel));
                }
                steps += 1;
                let n = alpha.at(at.len() as u64);
                node = node.child(n)?;
            }
        }
    }
}

/// `a ◁ {a * b | lh b = n}` by `n` nested fans.
pub fn level_derivation(a: &FiniteSeq, n: usize) -> Derivation {
    if n == 0 {
        return Derivation::eta(a.clone());
    }
    let base = a.clone();
    Derivation::fan(a.clone(), move |k| level_derivation(&base.push(k), n - 1))
}
