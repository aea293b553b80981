//! Exact search for donation vectors that raise one voter's utility.
//!
//! A voter's new vector replaces the old one entirely and its total is
//! bounded by `delta`, so withdrawing everything is always a candidate.
//! Per project the search stops at the amount that already brings the
//! reduced cost to zero: larger amounts leave every reduced cost, and hence
//! every winner, unchanged.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::Instance;
use crate::solve::RuleSpec;
use crate::variants;
use crate::{Error, Result};

/// Default cap on the number of candidate vectors examined.
pub const DEFAULT_NODE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DonationQuery {
    pub voter: usize,
    pub delta: u64,
    pub rule: RuleSpec,
}

impl DonationQuery {
    pub fn run(&self, inst: &Instance) -> Result<DonationAnswer> {
        find_improving_donation(self.rule, inst, self.voter, self.delta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DonationAnswer {
    pub improving: bool,
    pub witness: Option<Vec<u64>>,
    pub baseline_utility: u64,
    pub new_utility: u64,
}

fn check_voter(inst: &Instance, v: usize) -> Result<()> {
    if v >= inst.num_voters() {
        return Err(Error::IndexOutOfRange { index: v, limit: inst.num_voters() });
    }
    Ok(())
}

fn baseline(rule: RuleSpec, inst: &Instance, v: usize) -> Result<u64> {
    let winner = variants::solve(rule, inst)?;
    Ok(rule.rule().utility(inst, v, &winner))
}

fn evaluate(rule: RuleSpec, inst: &Instance, v: usize, donation: &[u64], base: u64) -> Result<DonationAnswer> {
    let changed = inst.replace_donation(v, donation.to_vec())?;
    let winner = variants::solve(rule, &changed)?;
    let new_utility = rule.rule().utility(inst, v, &winner);
    let improving = new_utility > base;
    Ok(DonationAnswer {
        improving,
        witness: improving.then(|| donation.to_vec()),
        baseline_utility: base,
        new_utility,
    })
}

/// Compares voter `v`'s utility at the winner of `inst` with that at the
/// winner after `v`'s contribution vector becomes `donation`.
pub fn check_improving(rule: RuleSpec, inst: &Instance, v: usize, donation: &[u64]) -> Result<DonationAnswer> {
    check_voter(inst, v)?;
    let base = baseline(rule, inst, v)?;
    evaluate(rule, inst, v, donation, base)
}

/// Per-project search bound: `min(delta, cost minus other voters' donations)`.
pub fn donation_caps(inst: &Instance, v: usize, delta: u64) -> Vec<u64> {
    (0..inst.num_projects())
        .map(|j| {
            let others = inst.total_donation(j) - inst.voter(v).donation[j];
            inst.project(j).cost.saturating_sub(others).min(delta)
        })
        .collect()
}

/// Number of vectors bounded entrywise by `caps` whose total is at most
/// `delta`, saturating at `u128::MAX`. Intended for `delta` small enough to
/// allocate a `delta + 1` row.
pub fn search_space_size(caps: &[u64], delta: u64) -> u128 {
    let width = delta as usize + 1;
    let mut ways = vec![0u128; width];
    ways[0] = 1;
    for &cap in caps {
        let mut prefix = vec![0u128; width + 1];
        for s in 0..width {
            prefix[s + 1] = prefix[s].saturating_add(ways[s]);
        }
        for s in 0..width {
            let lo = s.saturating_sub(cap as usize);
            ways[s] = prefix[s + 1] - prefix[lo];
        }
    }
    ways.iter().fold(0u128, |acc, &w| acc.saturating_add(w))
}

pub fn find_improving_donation(rule: RuleSpec, inst: &Instance, v: usize, delta: u64) -> Result<DonationAnswer> {
    find_improving_donation_with_cap(rule, inst, v, delta, DEFAULT_NODE_CAP)
}

/// Exhaustive search in order of increasing total, lexicographically
/// ascending within a total. Returns the first improving vector found.
pub fn find_improving_donation_with_cap(
    rule: RuleSpec,
    inst: &Instance,
    v: usize,
    delta: u64,
    node_cap: u128,
) -> Result<DonationAnswer> {
    check_voter(inst, v)?;
    let caps = donation_caps(inst, v, delta);
    let reach: u64 = caps.iter().sum();
    let effective = delta.min(reach);
    // Every total in 0..=effective is attainable, so the space has at least
    // effective + 1 vectors.
    if u128::from(effective) >= node_cap {
        return Err(Error::ResourceLimit { required: u128::from(effective) + 1, cap: node_cap });
    }
    let size = search_space_size(&caps, effective);
    if size > node_cap {
        return Err(Error::ResourceLimit { required: size, cap: node_cap });
    }

    let base = baseline(rule, inst, v)?;
    let mut suffix = vec![0u64; caps.len() + 1];
    for j in (0..caps.len()).rev() {
        suffix[j] = suffix[j + 1] + caps[j];
    }
    let mut buf = vec![0u64; caps.len()];
    for total in 0..=effective {
        let mut visit = |candidate: &[u64]| -> Result<Option<DonationAnswer>> {
            let answer = evaluate(rule, inst, v, candidate, base)?;
            Ok(answer.improving.then_some(answer))
        };
        if let Some(found) = walk(0, total, &caps, &suffix, &mut buf, &mut visit)? {
            return Ok(found);
        }
    }
    Ok(DonationAnswer { improving: false, witness: None, baseline_utility: base, new_utility: base })
}

/// Enumerates vectors with entries `buf[pos..]` summing to `left`, in
/// lexicographically ascending order, stopping at the first hit.
fn walk<T>(
    pos: usize,
    left: u64,
    caps: &[u64],
    suffix: &[u64],
    buf: &mut [u64],
    visit: &mut impl FnMut(&[u64]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if pos == caps.len() {
        return if left == 0 { visit(buf) } else { Ok(None) };
    }
    let lo = left.saturating_sub(suffix[pos + 1]);
    let hi = caps[pos].min(left);
    for amount in lo..=hi {
        buf[pos] = amount;
        if let Some(hit) = walk(pos + 1, left - amount, caps, suffix, buf, visit)? {
            return Ok(Some(hit));
        }
    }
    buf[pos] = 0;
    Ok(None)
}
