use alloc::vec;
use alloc::vec::Vec;

use crate::model::Instance;
use crate::scoring::UtilityFlavor;

/// Depth-first walk over every feasible bundle of an instance.
///
/// Branches are cut when the reduced cost exceeds the budget, when a type
/// count passes its upper bound, or when the remaining projects can no
/// longer reach a lower bound. Cuts only skip infeasible subtrees, so every
/// feasible bundle is visited exactly once.
pub(crate) struct Enumerator<'a> {
    inst: &'a Instance,
    flavor: UtilityFlavor,
    costs: Vec<u64>,
    /// `sats[j][i]`: satisfaction of voter `i` with project `j`.
    sats: Vec<Vec<u64>>,
    /// `reachable[j][z]`: projects `k >= j` carrying type `z`.
    reachable: Vec<Vec<u64>>,
}

impl<'a> Enumerator<'a> {
    pub(crate) fn new(inst: &'a Instance, flavor: UtilityFlavor) -> Self {
        let m = inst.num_projects();
        let t = inst.num_types();
        let sats = (0..m).map(|j| inst.voters().iter().map(|v| v.sat[j]).collect()).collect();
        let mut reachable = vec![vec![0u64; t]; m + 1];
        for j in (0..m).rev() {
            let types = &inst.project(j).types;
            reachable[j] = reachable[j + 1].iter().zip(types).map(|(&r, &has)| r + u64::from(has)).collect();
        }
        Self { inst, flavor, costs: inst.reduced_costs(), sats, reachable }
    }

    /// Calls `visit(members, utilities)` for every feasible bundle; members
    /// are sorted ascending and `utilities[i]` is voter `i`'s utility.
    pub(crate) fn for_each(&self, visit: impl FnMut(&[usize], &[u64])) {
        let n = self.inst.num_voters();
        let m = self.inst.num_projects();
        let mut walk = Walk {
            e: self,
            visit,
            members: Vec::with_capacity(m),
            counts: vec![0; self.inst.num_types()],
            levels: vec![vec![0; n]; m + 1],
        };
        walk.descend(0, 0);
    }
}

struct Walk<'e, 'a, F> {
    e: &'e Enumerator<'a>,
    visit: F,
    members: Vec<usize>,
    counts: Vec<u64>,
    levels: Vec<Vec<u64>>,
}

impl<F: FnMut(&[usize], &[u64])> Walk<'_, '_, F> {
    fn descend(&mut self, j: usize, spent: u64) {
        let inst = self.e.inst;
        let lower = inst.lower();
        if self.counts.iter().zip(lower).zip(&self.e.reachable[j]).any(|((&c, &lo), &r)| c + r < lo) {
            return;
        }
        if j == inst.num_projects() {
            (self.visit)(&self.members, &self.levels[self.members.len()]);
            return;
        }

        let cost = self.e.costs[j];
        let types = &inst.project(j).types;
        let fits_budget = spent + cost <= inst.budget();
        let fits_types = self.counts.iter().zip(types).zip(inst.upper()).all(|((&c, &ty), &hi)| c + u64::from(ty) <= hi);
        if fits_budget && fits_types {
            let depth = self.members.len();
            let (done, rest) = self.levels.split_at_mut(depth + 1);
            for ((next, &prev), &sat) in rest[0].iter_mut().zip(&done[depth]).zip(&self.e.sats[j]) {
                *next = self.e.flavor.lift(prev, sat);
            }
            self.members.push(j);
            for (c, &ty) in self.counts.iter_mut().zip(types) {
                *c += u64::from(ty);
            }
            self.descend(j + 1, spent + cost);
            for (c, &ty) in self.counts.iter_mut().zip(types) {
                *c -= u64::from(ty);
            }
            self.members.pop();
        }
        self.descend(j + 1, spent);
    }
}
