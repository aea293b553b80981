//! Utilities, scores and dominance.

use core::fmt;

use crate::model::{Bundle, Instance};

/// How a voter's per-project satisfaction lifts to a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UtilityFlavor {
    Additive,
    Maximum,
}

/// How voter utilities combine into a bundle score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aggregator {
    Sum,
    Min,
}

/// One of the four base aggregation rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub flavor: UtilityFlavor,
    pub agg: Aggregator,
}

impl Rule {
    pub const ADD_SUM: Rule = Rule { flavor: UtilityFlavor::Additive, agg: Aggregator::Sum };
    pub const MAX_SUM: Rule = Rule { flavor: UtilityFlavor::Maximum, agg: Aggregator::Sum };
    pub const ADD_MIN: Rule = Rule { flavor: UtilityFlavor::Additive, agg: Aggregator::Min };
    pub const MAX_MIN: Rule = Rule { flavor: UtilityFlavor::Maximum, agg: Aggregator::Min };
    pub const ALL: [Rule; 4] = [Rule::ADD_SUM, Rule::MAX_SUM, Rule::ADD_MIN, Rule::MAX_MIN];

    pub const fn new(flavor: UtilityFlavor, agg: Aggregator) -> Self {
        Self { flavor, agg }
    }

    pub fn score(self, inst: &Instance, bundle: &Bundle) -> u64 {
        score(self.flavor, self.agg, inst, bundle)
    }

    pub fn utility(self, inst: &Instance, voter: usize, bundle: &Bundle) -> u64 {
        utility(self.flavor, inst, voter, bundle)
    }

    /// Short name: `add-sum`, `max-sum`, `add-min` or `max-min`.
    pub fn as_str(self) -> &'static str {
        match (self.flavor, self.agg) {
            (UtilityFlavor::Additive, Aggregator::Sum) => "add-sum",
            (UtilityFlavor::Maximum, Aggregator::Sum) => "max-sum",
            (UtilityFlavor::Additive, Aggregator::Min) => "add-min",
            (UtilityFlavor::Maximum, Aggregator::Min) => "max-min",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.as_str() == name)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl UtilityFlavor {
    /// Folds one more satisfaction value into a running utility.
    #[inline]
    pub(crate) fn lift(self, acc: u64, sat: u64) -> u64 {
        match self {
            UtilityFlavor::Additive => acc + sat,
            UtilityFlavor::Maximum => acc.max(sat),
        }
    }
}

impl Aggregator {
    /// Combines per-voter utilities. `utilities` must be non-empty for `Min`
    /// to be meaningful; an empty slice scores 0.
    #[inline]
    pub(crate) fn combine(self, utilities: &[u64]) -> u64 {
        match self {
            Aggregator::Sum => utilities.iter().sum(),
            Aggregator::Min => utilities.iter().copied().min().unwrap_or(0),
        }
    }
}

/// Voter `i`'s utility for `bundle`. Both flavors give 0 on the empty bundle.
pub fn utility(flavor: UtilityFlavor, inst: &Instance, i: usize, bundle: &Bundle) -> u64 {
    let sat = &inst.voter(i).sat;
    bundle.iter().fold(0, |acc, j| flavor.lift(acc, sat[j]))
}

pub fn utilities(flavor: UtilityFlavor, inst: &Instance, bundle: &Bundle) -> alloc::vec::Vec<u64> {
    (0..inst.num_voters()).map(|i| utility(flavor, inst, i, bundle)).collect()
}

/// Score of `bundle`. Donations never enter the score.
pub fn score(flavor: UtilityFlavor, agg: Aggregator, inst: &Instance, bundle: &Bundle) -> u64 {
    agg.combine(&utilities(flavor, inst, bundle))
}

/// `a` is weakly better than `b` for every voter and strictly better for
/// at least one.
pub fn dominates(flavor: UtilityFlavor, inst: &Instance, a: &Bundle, b: &Bundle) -> bool {
    let mut strict = false;
    for i in 0..inst.num_voters() {
        let (ua, ub) = (utility(flavor, inst, i, a), utility(flavor, inst, i, b));
        if ua < ub {
            return false;
        }
        strict |= ua > ub;
    }
    strict
}
