use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate, shrink, AxiomId, Perturbation, Violation};
use crate::model::{Instance, Project, Voter};
use crate::solve::RuleSpec;
use crate::{variants, Error, Result};

/// Bounds for randomly generated instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_projects: usize,
    pub max_voters: usize,
    pub max_types: usize,
    pub max_cost: u64,
    pub max_sat: u64,
    pub max_donation: u64,
    pub max_budget: u64,
    pub max_increment: u64,
    /// Candidate evaluations allowed while shrinking a counterexample.
    pub shrink_steps: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 1000,
            max_projects: 6,
            max_voters: 4,
            max_types: 2,
            max_cost: 6,
            max_sat: 5,
            max_donation: 3,
            max_budget: 12,
            max_increment: 3,
            shrink_steps: 2000,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        let ones = [
            self.max_projects as u64,
            self.max_voters as u64,
            self.max_cost,
            self.max_sat,
            self.max_donation,
            self.max_budget,
            self.max_increment,
        ];
        if ones.contains(&0) {
            return Err(Error::Precondition("fuzz bounds must be at least 1 (max_types may be 0)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub axiom: AxiomId,
    pub rule: RuleSpec,
    pub seed: u64,
    pub trials_run: usize,
    /// Trials whose instance had no feasible bundle under the rule.
    pub skipped: usize,
    /// First violation of each offending trial, by trial index.
    pub violations: Vec<(usize, Violation)>,
    /// Greedily minimised copy of the first violation.
    pub shrunk: Option<Violation>,
}

/// Draws an instance within the configured bounds. Diversity bounds are
/// drawn around the actual type counts so that they bind without being
/// hopeless most of the time.
pub fn random_instance(rng: &mut impl Rng, config: &FuzzConfig) -> Instance {
    let m = rng.random_range(1..=config.max_projects.max(1));
    let n = rng.random_range(1..=config.max_voters.max(1));
    let t = rng.random_range(0..=config.max_types);
    let projects: Vec<Project> = (0..m)
        .map(|j| {
            let cost = rng.random_range(0..=config.max_cost);
            let types = (0..t).map(|_| rng.random_bool(0.5)).collect();
            Project::new(alloc::format!("p{}", j + 1), cost, types)
        })
        .collect();
    let voters = (0..n)
        .map(|i| {
            let sat = (0..m).map(|_| rng.random_range(0..=config.max_sat)).collect();
            let donation = (0..m)
                .map(|_| if rng.random_bool(0.3) { rng.random_range(1..=config.max_donation.max(1)) } else { 0 })
                .collect();
            Voter::new(alloc::format!("v{}", i + 1), sat, donation)
        })
        .collect();
    let budget = rng.random_range(0..=config.max_budget);
    let mut lower = Vec::with_capacity(t);
    let mut upper = Vec::with_capacity(t);
    for z in 0..t {
        let count = projects.iter().filter(|p| p.types[z]).count() as u64;
        let lo = if count > 0 && rng.random_bool(0.5) { 1 } else { 0 };
        lower.push(lo);
        upper.push(rng.random_range(lo..=count.max(lo)));
    }
    Instance::new(t, projects, voters, budget, lower, upper).expect("generated instances are well-formed")
}

/// The perturbations tried on one trial instance.
fn perturbations(axiom: AxiomId, rule: RuleSpec, inst: &Instance, rng: &mut impl Rng, config: &FuzzConfig) -> Result<Vec<Perturbation>> {
    let (n, m) = (inst.num_voters(), inst.num_projects());
    let mut out = Vec::new();
    match axiom {
        AxiomId::NoHarm => out.push(Perturbation::StripDonations),
        AxiomId::ProjectMono => {
            let winner = variants::solve(rule, inst)?;
            for voter in 0..n {
                for project in winner.iter() {
                    let amount = rng.random_range(1..=config.max_increment);
                    out.push(Perturbation::Increase { voter, project, amount });
                }
            }
        }
        AxiomId::WelfareMono => {
            for voter in 0..n {
                for project in 0..m {
                    let amount = rng.random_range(1..=config.max_increment);
                    out.push(Perturbation::Increase { voter, project, amount });
                }
            }
        }
        AxiomId::VoterMono => {
            for voter in 0..n {
                for project in 0..m {
                    if inst.voter(voter).donation[project] > 0 {
                        out.push(Perturbation::Withdraw { voter, project });
                    }
                }
            }
        }
        AxiomId::WeakContinuity => {
            // One supporter whose value beats any achievable score of the
            // unmodified instance.
            let total: u64 = inst.voters().iter().flat_map(|v| v.sat.iter()).sum();
            for project in 0..m {
                out.push(Perturbation::AddSupporters { project, count: 1, value: total + 1 });
            }
        }
    }
    Ok(out)
}

fn run_trial(axiom: AxiomId, rule: RuleSpec, config: &FuzzConfig, trial: usize) -> Result<Option<Violation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64);
    let inst = random_instance(&mut rng, config);
    variants::solve(rule, &inst)?;
    variants::solve(rule, &inst.zero_donations())?;
    for p in perturbations(axiom, rule, &inst, &mut rng, config)? {
        if let Some(v) = evaluate(axiom, rule, &inst, p)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Seeded search for counterexamples to `axiom` under `rule`.
///
/// Trial `k` draws from stream `k` of a ChaCha8 generator seeded with
/// `config.seed`, so reports are reproducible and independent of the order
/// in which trials run. Instances without a feasible bundle (with or
/// without donations) are skipped.
pub fn fuzz(axiom: AxiomId, rule: RuleSpec, config: &FuzzConfig) -> Result<FuzzReport> {
    config.validate()?;
    let mut report = FuzzReport {
        axiom,
        rule,
        seed: config.seed,
        trials_run: 0,
        skipped: 0,
        violations: Vec::new(),
        shrunk: None,
    };
    for trial in 0..config.trials {
        report.trials_run += 1;
        match run_trial(axiom, rule, config, trial) {
            Ok(Some(v)) => report.violations.push((trial, v)),
            Ok(None) => {}
            Err(Error::Infeasible) => report.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    report.shrunk = report.violations.first().map(|(_, v)| shrink(v, config.shrink_steps));
    Ok(report)
}
