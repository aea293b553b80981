#![allow(dead_code)]

use pbdonate_core::axioms::{random_instance, FuzzConfig};
use pbdonate_core::donation::check_improving;
use pbdonate_core::{Bundle, Instance, Project, Rule, RuleSpec, Voter};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn untyped(costs: &[u64]) -> Vec<Project> {
    costs.iter().enumerate().map(|(j, &c)| Project::untyped(format!("p{}", j + 1), c)).collect()
}

pub fn example1() -> Instance {
    let voters = vec![
        Voter::new("v1", vec![5, 9, 1, 3, 1], vec![1, 0, 0, 0, 0]),
        Voter::new("v2", vec![5, 0, 2, 3, 1], vec![0; 5]),
    ];
    Instance::without_types(untyped(&[3, 3, 2, 3, 1]), voters, 5).unwrap()
}

pub fn theorem1() -> Instance {
    let voters = vec![
        Voter::new("v1", vec![6, 1, 0], vec![0; 3]),
        Voter::new("v2", vec![2, 4, 5], vec![0; 3]),
        Voter::new("v3", vec![2, 4, 3], vec![0; 3]),
    ];
    Instance::without_types(untyped(&[2, 4, 3]), voters, 5).unwrap()
}

pub fn theorem1_donated() -> Instance {
    theorem1().replace_donation(2, vec![0, 1, 0]).unwrap()
}

pub fn welfare_mono() -> Instance {
    let voters = vec![
        Voter::new("v1", vec![5, 0, 0, 0], vec![4, 0, 0, 0]),
        Voter::new("v2", vec![1, 2, 3, 0], vec![0, 0, 2, 0]),
        Voter::new("v3", vec![1, 2, 0, 3], vec![0, 0, 0, 2]),
    ];
    Instance::without_types(untyped(&[6, 5, 3, 3]), voters, 6).unwrap()
}

/// Three projects and two crossing donors, without supporters of p1.
pub fn theorem8_base() -> Instance {
    let voters = vec![
        Voter::new("v1", vec![1, 2, 3], vec![0, 1, 2]),
        Voter::new("v2", vec![1, 3, 2], vec![0, 2, 1]),
    ];
    Instance::without_types(untyped(&[3, 4, 4]), voters, 4).unwrap()
}

/// Supporter count and value shipped with the family fixture.
pub const THEOREM8_SUPPORTERS: (usize, u64) = (1, 3);

pub fn theorem8_family() -> Instance {
    let (k, c) = THEOREM8_SUPPORTERS;
    theorem8_base().with_supporters(0, k, c)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random(seed: u64, config: &FuzzConfig) -> Instance {
    random_instance(&mut rng(seed), config)
}

/// Brute-force feasibility straight from the definitions, with no pruning.
pub fn oracle_feasible(inst: &Instance, mask: u64) -> bool {
    let m = inst.num_projects();
    let mut cost = 0u64;
    let mut counts = vec![0u64; inst.num_types()];
    for j in 0..m {
        if mask >> j & 1 == 1 {
            let donated: u64 = inst.voters().iter().map(|v| v.donation[j]).sum();
            cost += inst.project(j).cost.saturating_sub(donated);
            for (z, c) in counts.iter_mut().enumerate() {
                if inst.project(j).types[z] {
                    *c += 1;
                }
            }
        }
    }
    cost <= inst.budget() && (0..inst.num_types()).all(|z| inst.lower()[z] <= counts[z] && counts[z] <= inst.upper()[z])
}

pub fn mask_bundle(mask: u64, m: usize) -> Bundle {
    Bundle::new((0..m).filter(|j| mask >> j & 1 == 1))
}

pub fn oracle_score(rule: Rule, inst: &Instance, mask: u64) -> u64 {
    let m = inst.num_projects();
    let utils = inst.voters().iter().map(|v| {
        let sats = (0..m).filter(|j| mask >> j & 1 == 1).map(|j| v.sat[j]);
        match rule.flavor {
            pbdonate_core::UtilityFlavor::Additive => sats.sum::<u64>(),
            pbdonate_core::UtilityFlavor::Maximum => sats.max().unwrap_or(0),
        }
    });
    match rule.agg {
        pbdonate_core::Aggregator::Sum => utils.sum(),
        pbdonate_core::Aggregator::Min => utils.min().unwrap(),
    }
}

/// All feasible bundles with their scores, by brute force over 2^m masks.
pub fn oracle_feasible_scored(rule: Rule, inst: &Instance) -> Vec<(u64, Bundle)> {
    let m = inst.num_projects();
    (0..1u64 << m)
        .filter(|&mask| oracle_feasible(inst, mask))
        .map(|mask| (oracle_score(rule, inst, mask), mask_bundle(mask, m)))
        .collect()
}

pub fn oracle_max_score(rule: Rule, inst: &Instance) -> Option<u64> {
    oracle_feasible_scored(rule, inst).iter().map(|(s, _)| *s).max()
}

pub fn oracle_cowinners(rule: Rule, inst: &Instance) -> Vec<Bundle> {
    let all = oracle_feasible_scored(rule, inst);
    let top = all.iter().map(|(s, _)| *s).max();
    let mut out: Vec<Bundle> = all.into_iter().filter(|(s, _)| Some(*s) == top).map(|(_, b)| b).collect();
    out.sort();
    out
}

/// Tie-break-first co-winner: most projects, then smallest index sequence.
pub fn oracle_winner(rule: Rule, inst: &Instance) -> Option<Bundle> {
    let mut cw = oracle_cowinners(rule, inst);
    cw.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    cw.into_iter().next()
}

/// Unpruned search: every vector with entries up to `delta` and total at
/// most `delta`.
pub fn naive_improving(rule: RuleSpec, inst: &Instance, v: usize, delta: u64) -> Option<bool> {
    let m = inst.num_projects();
    let mut vec = vec![0u64; m];
    loop {
        if vec.iter().sum::<u64>() <= delta {
            match check_improving(rule, inst, v, &vec) {
                Ok(a) if a.improving => return Some(true),
                Ok(_) => {}
                Err(_) => return None,
            }
        }
        let mut k = 0;
        loop {
            if k == m {
                return Some(false);
            }
            if vec[k] < delta {
                vec[k] += 1;
                break;
            }
            vec[k] = 0;
            k += 1;
        }
    }
}
