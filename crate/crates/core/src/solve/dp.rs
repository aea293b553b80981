//! Pseudo-polynomial dynamic program for the additive-sum rule.
//!
//! `entry(b, tau, j)` is the best total satisfaction of a bundle drawn from
//! the first `j` projects whose type-count vector is exactly `tau` and whose
//! reduced cost is at most `b`. Filling the table takes
//! `O(n*m + (B+1) * T * m * t)` where `T` is the number of type-count
//! vectors; deciding co-winnership then scans the final layer at full
//! budget.
//!
//! The type axis for type `z` stops at `min(m, upper[z])`: counts beyond
//! the upper bound can never appear in an answer and entries only depend on
//! smaller counts, so the truncated table is exact.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Bundle, Instance};
use crate::scoring::Rule;
use crate::{Error, Result};

/// Default cap on the number of table entries.
pub const DEFAULT_TABLE_CAP: u128 = 100_000_000;

const UNREACHABLE: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable {
    budget: u64,
    num_projects: usize,
    /// Extent of each type axis (`min(m, upper[z]) + 1`).
    dims: Vec<usize>,
    strides: Vec<usize>,
    configs: usize,
    values: Vec<u64>,
}

impl DpTable {
    fn index(&self, budget_used: u64, config: usize, j: usize) -> usize {
        (j * self.configs + config) * (self.budget as usize + 1) + budget_used as usize
    }

    fn config_index(&self, tau: &[usize]) -> Option<usize> {
        if tau.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0;
        for ((&x, &d), &s) in tau.iter().zip(&self.dims).zip(&self.strides) {
            if x >= d {
                return None;
            }
            idx += x * s;
        }
        Some(idx)
    }

    /// Best score over the first `j` projects with exactly `tau` projects
    /// per type and reduced cost at most `budget_used`; `None` if no such
    /// bundle exists or the coordinates fall outside the table.
    pub fn entry(&self, budget_used: u64, tau: &[usize], j: usize) -> Option<u64> {
        if budget_used > self.budget || j > self.num_projects {
            return None;
        }
        let config = self.config_index(tau)?;
        match self.values[self.index(budget_used, config, j)] {
            UNREACHABLE => None,
            v => Some(v),
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn num_projects(&self) -> usize {
        self.num_projects
    }

    pub fn type_extents(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Maximum of `entry(B, tau, m)` over type-count vectors inside
    /// `[lower, upper]`.
    pub fn best_within(&self, lower: &[u64], upper: &[u64]) -> Option<u64> {
        let mut tau = vec![0usize; self.dims.len()];
        let mut best: Option<u64> = None;
        for config in 0..self.configs {
            for (z, t) in tau.iter_mut().enumerate() {
                *t = config / self.strides[z] % self.dims[z];
            }
            let in_box = tau.iter().zip(lower.iter().zip(upper)).all(|(&x, (&lo, &hi))| lo <= x as u64 && x as u64 <= hi);
            if !in_box {
                continue;
            }
            let v = self.values[self.index(self.budget, config, self.num_projects)];
            if v != UNREACHABLE {
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
        best
    }
}

pub fn dp_max_scores(inst: &Instance) -> Result<DpTable> {
    dp_max_scores_with_cap(inst, DEFAULT_TABLE_CAP)
}

/// Fills the table, refusing with [`Error::ResourceLimit`] when it would
/// hold more than `cap` entries.
pub fn dp_max_scores_with_cap(inst: &Instance, cap: u128) -> Result<DpTable> {
    let m = inst.num_projects();
    let dims: Vec<usize> = inst.upper().iter().map(|&hi| (m as u64).min(hi) as usize + 1).collect();
    let configs_wide = dims.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128));
    let required = (u128::from(inst.budget()) + 1).saturating_mul(configs_wide).saturating_mul(m as u128 + 1);
    if required > cap || required > usize::MAX as u128 {
        return Err(Error::ResourceLimit { required, cap });
    }
    let configs = configs_wide as usize;
    let mut strides = vec![1usize; dims.len()];
    for z in 1..dims.len() {
        strides[z] = strides[z - 1] * dims[z - 1];
    }
    let width = inst.budget() as usize + 1;
    let mut table = DpTable {
        budget: inst.budget(),
        num_projects: m,
        dims,
        strides,
        configs,
        values: vec![UNREACHABLE; required as usize],
    };

    // The empty prefix reaches only the zero type vector, at every budget.
    table.values[..width].fill(0);

    let gains: Vec<u64> = (0..m).map(|j| inst.voters().iter().map(|v| v.sat[j]).sum()).collect();
    let costs = inst.reduced_costs();
    let mut tau = vec![0usize; table.dims.len()];
    for j in 1..=m {
        let project = inst.project(j - 1);
        let cost = costs[j - 1];
        let gain = gains[j - 1];
        let shift: usize = project.types.iter().zip(&table.strides).map(|(&ty, &s)| usize::from(ty) * s).sum();
        for config in 0..configs {
            for (z, t) in tau.iter_mut().enumerate() {
                *t = config / table.strides[z] % table.dims[z];
            }
            let can_take = tau.iter().zip(&project.types).all(|(&x, &ty)| x >= usize::from(ty));
            let here = table.index(0, config, j);
            let skip_base = table.index(0, config, j - 1);
            let take_base = if can_take { Some(table.index(0, config - shift, j - 1)) } else { None };
            for b in 0..width {
                let mut v = table.values[skip_base + b];
                if let Some(base) = take_base {
                    if b as u64 >= cost {
                        let prev = table.values[base + b - cost as usize];
                        if prev != UNREACHABLE {
                            let taken = prev + gain;
                            if v == UNREACHABLE || taken > v {
                                v = taken;
                            }
                        }
                    }
                }
                table.values[here + b] = v;
            }
        }
    }
    Ok(table)
}

/// Optimal additive-sum score, or `None` when no bundle is feasible.
pub fn dp_max_score(inst: &Instance) -> Result<Option<u64>> {
    Ok(dp_max_scores(inst)?.best_within(inst.lower(), inst.upper()))
}

pub fn dp_is_cowinner(inst: &Instance, bundle: &Bundle) -> Result<bool> {
    dp_is_cowinner_with_cap(inst, bundle, DEFAULT_TABLE_CAP)
}

/// `bundle` is feasible and its additive-sum score reaches the DP optimum.
pub fn dp_is_cowinner_with_cap(inst: &Instance, bundle: &Bundle, cap: u128) -> Result<bool> {
    if !inst.is_feasible(bundle) {
        return Ok(false);
    }
    let table = dp_max_scores_with_cap(inst, cap)?;
    let own = Rule::ADD_SUM.score(inst, bundle);
    Ok(table.best_within(inst.lower(), inst.upper()).is_some_and(|best| own >= best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Project, Voter};
    use alloc::format;

    fn example1() -> Instance {
        let projects = [3, 3, 2, 3, 1].iter().enumerate().map(|(j, &c)| Project::untyped(format!("p{}", j + 1), c)).collect();
        let voters = vec![
            Voter::new("v1", vec![5, 9, 1, 3, 1], vec![1, 0, 0, 0, 0]),
            Voter::new("v2", vec![5, 0, 2, 3, 1], vec![0; 5]),
        ];
        Instance::without_types(projects, voters, 5).unwrap()
    }

    #[test]
    fn untyped_instance_is_plain_knapsack() {
        let inst = example1();
        let table = dp_max_scores(&inst).unwrap();
        assert_eq!(table.entry(5, &[], 5), Some(19));
        assert_eq!(table.entry(0, &[], 0), Some(0));
        assert_eq!(table.entry(3, &[], 0), Some(0));
        assert_eq!(dp_max_score(&inst).unwrap(), Some(19));
        assert!(dp_is_cowinner(&inst, &Bundle::new([0, 1])).unwrap());
        assert!(!dp_is_cowinner(&inst, &Bundle::new([0, 3])).unwrap());
    }

    #[test]
    fn free_projects_take_everything() {
        let projects = vec![
            Project::new("a", 0, vec![true, false]),
            Project::new("b", 0, vec![true, true]),
            Project::new("c", 0, vec![false, false]),
        ];
        let voters = vec![Voter::new("v", vec![1, 2, 3], vec![0; 3]), Voter::new("w", vec![4, 0, 1], vec![0; 3])];
        let inst = Instance::new(2, projects, voters, 0, vec![0, 0], vec![3, 3]).unwrap();
        let table = dp_max_scores(&inst).unwrap();
        assert_eq!(table.entry(0, &[2, 1], 3), Some(11));
        assert_eq!(dp_max_score(&inst).unwrap(), Some(11));
    }

    #[test]
    fn entries_grow_with_budget() {
        let inst = example1();
        let table = dp_max_scores(&inst).unwrap();
        for j in 0..=5 {
            let row: Vec<_> = (0..=5).map(|b| table.entry(b, &[], j).unwrap()).collect();
            assert!(row.windows(2).all(|w| w[0] <= w[1]), "{row:?}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = dp_max_scores_with_cap(&example1(), 10).unwrap_err();
        assert_eq!(err, Error::ResourceLimit { required: 36, cap: 10 });
    }

    #[test]
    fn below_optimum_is_not_cowinner() {
        let inst = example1();
        assert!(!dp_is_cowinner(&inst, &Bundle::empty()).unwrap());
        assert!(!dp_is_cowinner(&inst, &Bundle::new([0, 1, 2])).unwrap());
    }
}
