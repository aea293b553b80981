//! Checkers for the donation axioms.
//!
//! Each axiom is universally quantified over instances and perturbations.
//! The checkers here test one supplied perturbation at a time: a returned
//! [`Violation`] is an exact refutation, an empty result only says the
//! axiom held for that perturbation. [`fuzz`] supplies the quantification.

mod fuzz;
mod shrink;

use alloc::vec::Vec;
use core::fmt;

pub use fuzz::{fuzz, random_instance, FuzzConfig, FuzzReport};
pub use shrink::shrink;

use crate::model::{Bundle, Instance};
use crate::solve::{Enumerator, RuleSpec};
use crate::{variants, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    /// No voter is worse off than without any donations.
    NoHarm,
    /// Raising a donation to a winning project keeps it winning.
    ProjectMono,
    /// Raising a donation never lowers the winner's score.
    WelfareMono,
    /// A voter never gains by withdrawing her donation to a project.
    VoterMono,
    /// Enough single-minded supporters make a fundable project win.
    WeakContinuity,
}

impl AxiomId {
    pub const ALL: [AxiomId; 5] =
        [AxiomId::NoHarm, AxiomId::ProjectMono, AxiomId::WelfareMono, AxiomId::VoterMono, AxiomId::WeakContinuity];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomId::NoHarm => "no-harm",
            AxiomId::ProjectMono => "project-mono",
            AxiomId::WelfareMono => "welfare-mono",
            AxiomId::VoterMono => "voter-mono",
            AxiomId::WeakContinuity => "weak-continuity",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == name)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The change applied to an instance before comparing outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Perturbation {
    /// Compare against the same instance with all donations removed.
    StripDonations,
    /// Raise `voter`'s donation to `project` by `amount`.
    Increase { voter: usize, project: usize, amount: u64 },
    /// Set `voter`'s donation to `project` to zero.
    Withdraw { voter: usize, project: usize },
    /// Add `count` non-donating voters satisfied only by `project`, each with `value`.
    AddSupporters { project: usize, count: usize, value: u64 },
}

/// Outcomes before and after the perturbation.
///
/// The compared values depend on the axiom: a voter utility for
/// no-harm and voter-monotonicity, a score for welfare-monotonicity, and
/// 1/0 membership of the project for project-monotonicity and weak
/// continuity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Evidence {
    pub voter: Option<usize>,
    pub original_winner: Bundle,
    pub perturbed_winner: Bundle,
    pub original_value: u64,
    pub perturbed_value: u64,
    /// Old and new donation of the perturbed coordinate, when one changes.
    pub donation_change: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub axiom: AxiomId,
    pub rule: RuleSpec,
    pub instance: Instance,
    pub perturbation: Perturbation,
    pub evidence: Evidence,
}

impl Violation {
    /// Re-evaluates the stored instance and perturbation; true iff the
    /// exact same violation comes out.
    pub fn replay(&self) -> Result<bool> {
        Ok(evaluate(self.axiom, self.rule, &self.instance, self.perturbation)?.as_ref() == Some(self))
    }
}

fn bump(inst: &Instance, voter: usize, project: usize, value: u64) -> Result<Instance> {
    let mut donation = inst.voter(voter).donation.clone();
    donation[project] = value;
    inst.replace_donation(voter, donation)
}

fn check_indices(inst: &Instance, voter: Option<usize>, project: usize) -> Result<()> {
    if let Some(v) = voter {
        if v >= inst.num_voters() {
            return Err(Error::IndexOutOfRange { index: v, limit: inst.num_voters() });
        }
    }
    if project >= inst.num_projects() {
        return Err(Error::IndexOutOfRange { index: project, limit: inst.num_projects() });
    }
    Ok(())
}

fn membership(bundle: &Bundle, j: usize) -> u64 {
    u64::from(bundle.contains(j))
}

/// Tests `axiom` under `rule` for one perturbation of `inst`.
pub fn evaluate(axiom: AxiomId, rule: RuleSpec, inst: &Instance, perturbation: Perturbation) -> Result<Option<Violation>> {
    let violation = |evidence: Evidence| Violation { axiom, rule, instance: inst.clone(), perturbation, evidence };
    let base = rule.rule();
    match (axiom, perturbation) {
        (AxiomId::NoHarm, Perturbation::StripDonations) => {
            let with = variants::solve(rule, inst)?;
            let without = variants::solve(rule, &inst.zero_donations())?;
            for x in 0..inst.num_voters() {
                let (u, u0) = (base.utility(inst, x, &with), base.utility(inst, x, &without));
                if u < u0 {
                    return Ok(Some(violation(Evidence {
                        voter: Some(x),
                        original_winner: with,
                        perturbed_winner: without,
                        original_value: u,
                        perturbed_value: u0,
                        donation_change: None,
                    })));
                }
            }
            Ok(None)
        }
        (AxiomId::ProjectMono | AxiomId::WelfareMono, Perturbation::Increase { voter, project, amount }) => {
            check_indices(inst, Some(voter), project)?;
            if amount == 0 {
                return Err(Error::Precondition("donation increment must be positive"));
            }
            let before = variants::solve(rule, inst)?;
            if axiom == AxiomId::ProjectMono && !before.contains(project) {
                return Ok(None);
            }
            let old = inst.voter(voter).donation[project];
            let new = old + amount;
            let after = variants::solve(rule, &bump(inst, voter, project, new)?)?;
            let (original_value, perturbed_value) = if axiom == AxiomId::ProjectMono {
                (membership(&before, project), membership(&after, project))
            } else {
                (base.score(inst, &before), base.score(inst, &after))
            };
            Ok((perturbed_value < original_value).then(|| {
                violation(Evidence {
                    voter: Some(voter),
                    original_winner: before,
                    perturbed_winner: after,
                    original_value,
                    perturbed_value,
                    donation_change: Some((old, new)),
                })
            }))
        }
        (AxiomId::VoterMono, Perturbation::Withdraw { voter, project }) => {
            check_indices(inst, Some(voter), project)?;
            let old = inst.voter(voter).donation[project];
            if old == 0 {
                return Ok(None);
            }
            let before = variants::solve(rule, inst)?;
            let after = variants::solve(rule, &bump(inst, voter, project, 0)?)?;
            let (u, u_after) = (base.utility(inst, voter, &before), base.utility(inst, voter, &after));
            Ok((u_after > u).then(|| {
                violation(Evidence {
                    voter: Some(voter),
                    original_winner: before,
                    perturbed_winner: after,
                    original_value: u,
                    perturbed_value: u_after,
                    donation_change: Some((old, 0)),
                })
            }))
        }
        (AxiomId::WeakContinuity, Perturbation::AddSupporters { project, count, value }) => {
            check_indices(inst, None, project)?;
            if !weak_continuity_applies(inst, project) || count == 0 || value == 0 {
                return Ok(None);
            }
            let before = variants::solve(rule, inst)?;
            let after = variants::solve(rule, &inst.with_supporters(project, count, value))?;
            Ok((!after.contains(project)).then(|| {
                violation(Evidence {
                    voter: None,
                    original_value: membership(&before, project),
                    original_winner: before,
                    perturbed_winner: after,
                    perturbed_value: 0,
                    donation_change: None,
                })
            }))
        }
        _ => Err(Error::Precondition("perturbation does not match the axiom")),
    }
}

/// Voters are no worse off at the winner with donations than without.
pub fn check_no_harm(rule: RuleSpec, inst: &Instance) -> Result<Option<Violation>> {
    evaluate(AxiomId::NoHarm, rule, inst, Perturbation::StripDonations)
}

/// If project `j` wins, it still wins after voter `x` adds `increment` to it.
pub fn check_project_mono(rule: RuleSpec, inst: &Instance, x: usize, j: usize, increment: u64) -> Result<Option<Violation>> {
    evaluate(AxiomId::ProjectMono, rule, inst, Perturbation::Increase { voter: x, project: j, amount: increment })
}

/// The winner's score does not drop after voter `x` adds `increment` to `j`.
pub fn check_welfare_mono(rule: RuleSpec, inst: &Instance, x: usize, j: usize, increment: u64) -> Result<Option<Violation>> {
    evaluate(AxiomId::WelfareMono, rule, inst, Perturbation::Increase { voter: x, project: j, amount: increment })
}

/// Voter `x` does not gain by zeroing her donation to `j`. Passes
/// vacuously when she donates nothing to `j`.
pub fn check_voter_mono(rule: RuleSpec, inst: &Instance, x: usize, j: usize) -> Result<Option<Violation>> {
    evaluate(AxiomId::VoterMono, rule, inst, Perturbation::Withdraw { voter: x, project: j })
}

/// Every voter values `j` and some feasible bundle contains it.
pub fn weak_continuity_applies(inst: &Instance, j: usize) -> bool {
    if inst.voters().iter().any(|v| v.sat[j] == 0) {
        return false;
    }
    let mut found = false;
    Enumerator::new(inst, crate::UtilityFlavor::Additive).for_each(|members, _| found |= members.contains(&j));
    found
}

/// Smallest `(k, c)` in lexicographic order, with `k <= k_max` and
/// `c <= c_max`, such that adding `k` supporters of `j` with satisfaction
/// `c` puts `j` in the winner.
pub fn weak_continuity_witness(rule: RuleSpec, inst: &Instance, j: usize, k_max: usize, c_max: u64) -> Result<(usize, u64)> {
    check_indices(inst, None, j)?;
    if !weak_continuity_applies(inst, j) {
        return Err(Error::NotApplicable("project must be valued by every voter and fit in some feasible bundle"));
    }
    for k in 1..=k_max {
        for c in 1..=c_max {
            if variants::solve(rule, &inst.with_supporters(j, k, c))?.contains(j) {
                return Ok((k, c));
            }
        }
    }
    Err(Error::NotFound)
}

/// Every perturbation of the given axiom's shape that touches an existing
/// donation or winning project: used by the CLI when no perturbation is
/// named explicitly.
pub fn all_perturbations(axiom: AxiomId, inst: &Instance, increment: u64) -> Vec<Perturbation> {
    let (n, m) = (inst.num_voters(), inst.num_projects());
    match axiom {
        AxiomId::NoHarm => alloc::vec![Perturbation::StripDonations],
        AxiomId::ProjectMono | AxiomId::WelfareMono => (0..n)
            .flat_map(|voter| (0..m).map(move |project| Perturbation::Increase { voter, project, amount: increment }))
            .collect(),
        AxiomId::VoterMono => (0..n)
            .flat_map(|voter| (0..m).map(move |project| Perturbation::Withdraw { voter, project }))
            .filter(|p| matches!(*p, Perturbation::Withdraw { voter, project } if inst.voter(voter).donation[project] > 0))
            .collect(),
        AxiomId::WeakContinuity => Vec::new(),
    }
}
