//! Sequential and Pareto donation handling on top of the base rules.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Bundle, Instance};
use crate::scoring::{self, Aggregator, UtilityFlavor};
use crate::solve::{self, rank, Best, Enumerator, RuleSpec, Variant};
use crate::{Error, Result};

/// One donation-free round of the sequential variant. Indices are in terms
/// of the original instance; budget and bounds are the values left after
/// the round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialRound {
    pub selected: Bundle,
    pub budget: u64,
    pub lower: Vec<u64>,
    pub upper: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SequentialTrace {
    pub rounds: Vec<SequentialRound>,
    /// Projects added by the closing donation-aware round.
    pub final_addition: Bundle,
}

/// Runs the base rule on the donation-free residual instance until no new
/// project gets selected, charging each round's reduced costs against the
/// budget, then closes with one donation-aware round on what is left.
///
/// Only the first round can be infeasible: it satisfies every lower bound,
/// after which the residual lower bounds are zero.
pub fn solve_sequential(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance) -> Result<(Bundle, SequentialTrace)> {
    let m = inst.num_projects();
    let t = inst.num_types();
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut budget = inst.budget();
    let mut lower = inst.lower().to_vec();
    let mut upper = inst.upper().to_vec();
    let mut trace = SequentialTrace::default();
    let mut selected = Bundle::empty();

    while !remaining.is_empty() {
        let residual = inst.restrict(&remaining, budget, lower.clone(), upper.clone())?.zero_donations();
        let pick = match solve::solve_plain(flavor, agg, &residual) {
            Ok(pick) => pick,
            Err(Error::Infeasible) if !trace.rounds.is_empty() => break,
            Err(e) => return Err(e),
        };
        if pick.is_empty() {
            break;
        }
        let picked = Bundle::new(pick.iter().map(|k| remaining[k]));
        let mut counts = vec![0u64; t];
        for j in picked.iter() {
            for (z, c) in counts.iter_mut().enumerate() {
                *c += u64::from(inst.project(j).types[z]);
            }
            budget = budget.saturating_sub(inst.reduced_cost(j));
        }
        for z in 0..t {
            lower[z] = lower[z].saturating_sub(counts[z]);
            upper[z] = upper[z].saturating_sub(counts[z]);
        }
        remaining.retain(|&j| !picked.contains(j));
        selected = selected.union(&picked);
        trace.rounds.push(SequentialRound { selected: picked, budget, lower: lower.clone(), upper: upper.clone() });
    }

    if !remaining.is_empty() {
        let residual = inst.restrict(&remaining, budget, lower, upper)?;
        let last = solve::solve_plain(flavor, agg, &residual)?;
        trace.final_addition = Bundle::new(last.iter().map(|k| remaining[k]));
    }
    Ok((selected.union(&trace.final_addition), trace))
}

/// The donation-free winner together with the scored members of the
/// candidate set: that winner plus every bundle feasible under donations
/// that dominates it.
fn pareto_candidates(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance) -> Result<Vec<(u64, Vec<usize>)>> {
    let base = solve::solve_plain(flavor, agg, &inst.zero_donations())?;
    let base_utils = scoring::utilities(flavor, inst, &base);
    let mut out = vec![(scoring::score(flavor, agg, inst, &base), base.members().to_vec())];
    Enumerator::new(inst, flavor).for_each(|members, utils| {
        let weakly = utils.iter().zip(&base_utils).all(|(a, b)| a >= b);
        if weakly && utils != base_utils.as_slice() {
            out.push((agg.combine(utils), members.to_vec()));
        }
    });
    Ok(out)
}

/// Highest-scoring bundle among the donation-free winner and the bundles
/// dominating it, ties broken by the fixed order.
pub fn solve_pareto(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance) -> Result<Bundle> {
    let mut best = Best::default();
    for (score, members) in pareto_candidates(flavor, agg, inst)? {
        best.offer(score, &members);
    }
    best.into_bundle().ok_or(Error::Infeasible)
}

/// Every maximum-score member of the Pareto candidate set.
pub fn pareto_cowinners(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance) -> Result<Vec<Bundle>> {
    let candidates = pareto_candidates(flavor, agg, inst)?;
    let top = candidates.iter().map(|(s, _)| *s).max().ok_or(Error::Infeasible)?;
    let mut winners: Vec<Vec<usize>> = candidates.into_iter().filter(|(s, _)| *s == top).map(|(_, m)| m).collect();
    winners.sort_by(|a, b| rank(top, a, top, b));
    winners.dedup();
    Ok(winners.into_iter().map(Bundle::from_sorted).collect())
}

/// Winner under any rule/variant combination.
pub fn solve(rule: RuleSpec, inst: &Instance) -> Result<Bundle> {
    match rule.variant {
        Variant::Plain => solve::solve_plain(rule.flavor, rule.agg, inst),
        Variant::Sequential => solve_sequential(rule.flavor, rule.agg, inst).map(|(b, _)| b),
        Variant::Pareto => solve_pareto(rule.flavor, rule.agg, inst),
    }
}

/// Co-winners under a rule/variant combination. The sequential variant is
/// single-valued under the fixed tie-break, so it yields exactly its winner.
pub fn cowinners(rule: RuleSpec, inst: &Instance) -> Result<Vec<Bundle>> {
    match rule.variant {
        Variant::Plain => solve::cowinners(rule.flavor, rule.agg, inst),
        Variant::Sequential => Ok(vec![solve_sequential(rule.flavor, rule.agg, inst)?.0]),
        Variant::Pareto => pareto_cowinners(rule.flavor, rule.agg, inst),
    }
}

/// Whether `bundle` is among [`cowinners`].
pub fn is_cowinner(rule: RuleSpec, inst: &Instance, bundle: &Bundle) -> Result<bool> {
    match rule.variant {
        Variant::Plain => Ok(solve::is_cowinner(rule.flavor, rule.agg, inst, bundle)),
        _ => Ok(cowinners(rule, inst)?.iter().any(|b| b == bundle)),
    }
}

impl RuleSpec {
    pub fn winner(self, inst: &Instance) -> Result<Bundle> {
        solve(self, inst)
    }
}
