//! Exact winner determination for the four base rules.
//!
//! Enumeration over feasible bundles is the reference semantics and owns the
//! tie-break. The dynamic program in [`dp`] answers the co-winner question
//! for the additive-sum rule without enumerating.

pub mod dp;
mod enumerate;

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

pub(crate) use enumerate::Enumerator;

use crate::model::{Bundle, Instance};
use crate::scoring::{self, Aggregator, Rule, UtilityFlavor};
use crate::{Error, Result};

/// How donations are handled on top of a base rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Donations only reduce project costs.
    Plain,
    /// Repeated donation-free rounds, then one donation-aware round.
    Sequential,
    /// Best bundle among those dominating the donation-free winner.
    Pareto,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Plain, Variant::Sequential, Variant::Pareto];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Sequential => "sequential",
            Variant::Pareto => "pareto",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == name)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Base rule plus donation-handling variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleSpec {
    pub flavor: UtilityFlavor,
    pub agg: Aggregator,
    pub variant: Variant,
}

impl RuleSpec {
    pub const fn new(rule: Rule, variant: Variant) -> Self {
        Self { flavor: rule.flavor, agg: rule.agg, variant }
    }

    pub const fn plain(rule: Rule) -> Self {
        Self::new(rule, Variant::Plain)
    }

    pub const fn rule(self) -> Rule {
        Rule { flavor: self.flavor, agg: self.agg }
    }

    /// All twelve rule/variant combinations.
    pub fn all() -> impl Iterator<Item = RuleSpec> {
        Variant::ALL.into_iter().flat_map(|v| Rule::ALL.into_iter().map(move |r| RuleSpec::new(r, v)))
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.rule(), self.variant)
    }
}

/// Position in the tie-break order: higher score first, then more
/// projects, then the lexicographically smaller index sequence.
pub(crate) fn rank(score_a: u64, a: &[usize], score_b: u64, b: &[usize]) -> Ordering {
    score_b.cmp(&score_a).then(b.len().cmp(&a.len())).then_with(|| a.cmp(b))
}

/// `a` strictly precedes `b` in the fixed tie-break order.
pub fn tie_break_less(inst: &Instance, flavor: UtilityFlavor, agg: Aggregator, a: &Bundle, b: &Bundle) -> bool {
    let (sa, sb) = (scoring::score(flavor, agg, inst, a), scoring::score(flavor, agg, inst, b));
    rank(sa, a.members(), sb, b.members()) == Ordering::Less
}

/// Keeps the first element of the tie-break order among offered bundles.
#[derive(Default)]
pub(crate) struct Best {
    best: Option<(u64, Vec<usize>)>,
}

impl Best {
    pub(crate) fn offer(&mut self, score: u64, members: &[usize]) {
        let better = match &self.best {
            None => true,
            Some((s, b)) => rank(score, members, *s, b) == Ordering::Less,
        };
        if better {
            self.best = Some((score, members.to_vec()));
        }
    }

    pub(crate) fn into_bundle(self) -> Option<Bundle> {
        self.best.map(|(_, m)| Bundle::from_sorted(m))
    }
}

/// Winner of the base rule: the tie-break-first feasible bundle of maximum
/// score. Since both utilities are monotone and larger bundles win ties,
/// the winner is always exhaustive.
pub fn solve_plain(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance) -> Result<Bundle> {
    let mut best = Best::default();
    Enumerator::new(inst, flavor).for_each(|members, utils| best.offer(agg.combine(utils), members));
    best.into_bundle().ok_or(Error::Infeasible)
}

/// Maximum score over all feasible bundles.
pub fn max_score(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance) -> Result<u64> {
    let mut best = None;
    Enumerator::new(inst, flavor).for_each(|_, utils| {
        let s = agg.combine(utils);
        best = Some(best.map_or(s, |b: u64| b.max(s)));
    });
    best.ok_or(Error::Infeasible)
}

/// Every feasible bundle attaining the maximum score, in tie-break order.
pub fn cowinners(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance) -> Result<Vec<Bundle>> {
    let mut top: Option<u64> = None;
    let mut found: Vec<Vec<usize>> = Vec::new();
    Enumerator::new(inst, flavor).for_each(|members, utils| {
        let s = agg.combine(utils);
        match top.map(|t| s.cmp(&t)) {
            Some(Ordering::Less) => {}
            Some(Ordering::Equal) => found.push(members.to_vec()),
            _ => {
                top = Some(s);
                found.clear();
                found.push(members.to_vec());
            }
        }
    });
    if top.is_none() {
        return Err(Error::Infeasible);
    }
    found.sort_by(|a, b| rank(0, a, 0, b));
    Ok(found.into_iter().map(Bundle::from_sorted).collect())
}

/// Table entries above which [`is_cowinner`] skips the DP.
const DP_ROUTE_LIMIT: u128 = 4_000_000;

/// `bundle` is feasible and no feasible bundle scores strictly higher.
///
/// The additive-sum rule goes through the DP when the table is small;
/// everything else enumerates.
pub fn is_cowinner(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance, bundle: &Bundle) -> bool {
    if !inst.is_feasible(bundle) {
        return false;
    }
    if (flavor, agg) == (UtilityFlavor::Additive, Aggregator::Sum) {
        if let Ok(answer) = dp::dp_is_cowinner_with_cap(inst, bundle, DP_ROUTE_LIMIT) {
            return answer;
        }
    }
    is_cowinner_by_enumeration(flavor, agg, inst, bundle)
}

/// Enumeration-only co-winner check.
pub fn is_cowinner_by_enumeration(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance, bundle: &Bundle) -> bool {
    if !inst.is_feasible(bundle) {
        return false;
    }
    let own = scoring::score(flavor, agg, inst, bundle);
    max_score(flavor, agg, inst).is_ok_and(|best| own >= best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Project, Voter};
    use alloc::vec;

    fn theorem1() -> Instance {
        let projects = vec![Project::untyped("p1", 2), Project::untyped("p2", 4), Project::untyped("p3", 3)];
        let voters = vec![
            Voter::new("v1", vec![6, 1, 0], vec![0; 3]),
            Voter::new("v2", vec![2, 4, 5], vec![0; 3]),
            Voter::new("v3", vec![2, 4, 3], vec![0; 3]),
        ];
        Instance::without_types(projects, voters, 5).unwrap()
    }

    #[test]
    fn tie_break_order() {
        assert_eq!(rank(19, &[0, 1], 13, &[0, 2]), Ordering::Less);
        assert_eq!(rank(5, &[0, 1, 2], 5, &[3, 4]), Ordering::Less);
        assert_eq!(rank(5, &[0, 1], 5, &[0, 2]), Ordering::Less);
        assert_eq!(rank(5, &[0, 2], 5, &[0, 2]), Ordering::Equal);
        let inst = theorem1();
        assert!(tie_break_less(&inst, UtilityFlavor::Additive, Aggregator::Sum, &Bundle::new([0, 2]), &Bundle::new([1])));
        assert!(!tie_break_less(&inst, UtilityFlavor::Additive, Aggregator::Sum, &Bundle::new([1]), &Bundle::new([1])));
    }

    #[test]
    fn all_rules_pick_the_same_bundle_without_donations() {
        let inst = theorem1();
        for rule in Rule::ALL {
            assert_eq!(solve_plain(rule.flavor, rule.agg, &inst).unwrap(), Bundle::new([0, 2]), "{rule}");
        }
    }

    #[test]
    fn single_affordable_project() {
        let inst = Instance::without_types(vec![Project::untyped("p0", 3)], vec![Voter::new("v", vec![1], vec![0])], 3).unwrap();
        assert_eq!(solve_plain(UtilityFlavor::Additive, Aggregator::Sum, &inst).unwrap(), Bundle::new([0]));
        assert_eq!(cowinners(UtilityFlavor::Additive, Aggregator::Sum, &inst).unwrap(), vec![Bundle::new([0])]);
    }

    #[test]
    fn unsatisfiable_lower_bound_is_infeasible() {
        let inst = Instance::new(
            1,
            vec![Project::new("a", 5, vec![true])],
            vec![Voter::new("v", vec![1], vec![0])],
            2,
            vec![1],
            vec![1],
        )
        .unwrap();
        assert_eq!(solve_plain(UtilityFlavor::Maximum, Aggregator::Min, &inst), Err(Error::Infeasible));
        assert_eq!(cowinners(UtilityFlavor::Maximum, Aggregator::Min, &inst), Err(Error::Infeasible));
        assert!(!is_cowinner(UtilityFlavor::Additive, Aggregator::Sum, &inst, &Bundle::empty()));
    }

    #[test]
    fn cowinner_checks() {
        let inst = theorem1();
        let a1 = Bundle::new([0, 2]);
        for rule in Rule::ALL {
            assert!(is_cowinner(rule.flavor, rule.agg, &inst, &a1));
        }
        let donated = inst.replace_donation(2, vec![0, 1, 0]).unwrap();
        assert!(!is_cowinner(UtilityFlavor::Additive, Aggregator::Sum, &donated, &a1));
        assert!(is_cowinner(UtilityFlavor::Maximum, Aggregator::Sum, &donated, &a1));
        assert!(!is_cowinner(UtilityFlavor::Additive, Aggregator::Sum, &inst, &Bundle::new([0, 1])));
    }

    #[test]
    fn rule_spec_names() {
        assert_eq!(RuleSpec::all().count(), 12);
        assert_eq!(Variant::from_name("pareto"), Some(Variant::Pareto));
        assert_eq!(alloc::format!("{}", RuleSpec::new(Rule::ADD_MIN, Variant::Sequential)), "add-min/sequential");
    }
}
