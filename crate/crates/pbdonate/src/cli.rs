use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pbdonate_core::axioms::{self, evaluate, AxiomId, FuzzConfig, Perturbation, Violation};
use pbdonate_core::donation::{find_improving_donation_with_cap, DonationAnswer, DEFAULT_NODE_CAP};
use pbdonate_core::variants::{self, solve_sequential};
use pbdonate_core::{Bundle, Error, Instance, Rule, RuleSpec, Variant};
use serde_json::{json, Value};

use crate::document::{load_instance, DocumentError, InstanceDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pbdonate", version, about = "Participatory budgeting with donations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    Rule::from_name(s).ok_or_else(|| format!("unknown rule {s:?} (expected add-sum, max-sum, add-min or max-min)"))
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    Variant::from_name(s).ok_or_else(|| format!("unknown variant {s:?} (expected plain, sequential or pareto)"))
}

fn parse_axiom(s: &str) -> Result<AxiomId, String> {
    AxiomId::from_name(s).ok_or_else(|| {
        format!("unknown axiom {s:?} (expected no-harm, project-mono, welfare-mono, voter-mono or weak-continuity)")
    })
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    #[arg(long, value_parser = parse_rule)]
    pub rule: Rule,
    #[arg(long, value_parser = parse_variant, default_value = "plain")]
    pub variant: Variant,
}

impl RuleArgs {
    fn spec(&self) -> RuleSpec {
        RuleSpec::new(self.rule, self.variant)
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Instance document (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Machine-readable output on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the winning bundle.
    Solve {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Decide whether a bundle is a co-winner. Exits 1 if it is not.
    CheckWinner {
        #[command(flatten)]
        rule: RuleArgs,
        /// Comma-separated project names; empty for the empty bundle.
        #[arg(long, allow_hyphen_values = true)]
        bundle: String,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Search for a donation of at most DELTA that raises the voter's
    /// utility. Exits 1 if there is none.
    FindDonation {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        voter: String,
        #[arg(long)]
        delta: u64,
        /// Largest number of candidate vectors to examine.
        #[arg(long, default_value_t = DEFAULT_NODE_CAP as u64)]
        max_nodes: u64,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Check an axiom on perturbations of the instance. Exits 1 on a
    /// violation.
    CheckAxiom {
        #[arg(long, value_parser = parse_axiom)]
        axiom: AxiomId,
        #[command(flatten)]
        rule: RuleArgs,
        /// Restrict to perturbations by this voter.
        #[arg(long)]
        voter: Option<String>,
        /// Restrict to perturbations of this project.
        #[arg(long)]
        project: Option<String>,
        /// Donation increase for project- and welfare-monotonicity.
        #[arg(long, default_value_t = 1)]
        increment: u64,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Search random instances for axiom violations. Exits 1 if one is found.
    Fuzz {
        #[arg(long, value_parser = parse_axiom)]
        axiom: AxiomId,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 6)]
    pub max_projects: usize,
    #[arg(long, default_value_t = 4)]
    pub max_voters: usize,
    #[arg(long, default_value_t = 2)]
    pub max_types: usize,
    #[arg(long, default_value_t = 6)]
    pub max_cost: u64,
    #[arg(long, default_value_t = 5)]
    pub max_sat: u64,
    #[arg(long, default_value_t = 3)]
    pub max_donation: u64,
    #[arg(long, default_value_t = 12)]
    pub max_budget: u64,
    #[arg(long, default_value_t = 3)]
    pub max_increment: u64,
    /// Candidate evaluations allowed while shrinking the first violation.
    #[arg(long, default_value_t = 2000)]
    pub shrink_steps: usize,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(Error::Infeasible) => EXIT_INFEASIBLE,
            Failure::Core(Error::ResourceLimit { .. }) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        }
    }
}

/// Output of a successful command: text or JSON, plus the exit code.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

fn names(inst: &Instance, bundle: &Bundle) -> Vec<String> {
    bundle.iter().map(|j| inst.project(j).name.clone()).collect()
}

fn show(inst: &Instance, bundle: &Bundle) -> String {
    if bundle.is_empty() {
        "(empty)".into()
    } else {
        names(inst, bundle).join(",")
    }
}

fn voter_index(inst: &Instance, name: &str) -> Result<usize, Failure> {
    inst.voter_index(name).ok_or_else(|| Failure::Usage(format!("no voter named {name:?}")))
}

fn project_index(inst: &Instance, name: &str) -> Result<usize, Failure> {
    inst.project_index(name).ok_or_else(|| Failure::Usage(format!("no project named {name:?}")))
}

fn parse_bundle(inst: &Instance, text: &str) -> Result<Bundle, Failure> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|name| project_index(inst, name)).collect()
}

fn solve(rule: RuleSpec, inst: &Instance) -> Result<Report, Failure> {
    let base = rule.rule();
    let winner = variants::solve(rule, inst)?;
    let score = base.score(inst, &winner);
    let utilities: Vec<(String, u64)> =
        inst.voters().iter().enumerate().map(|(i, v)| (v.name.clone(), base.utility(inst, i, &winner))).collect();

    let mut text = format!("rule: {rule}\nwinner: {}\nscore: {score}\n", show(inst, &winner));
    text.push_str("utilities:");
    for (name, u) in &utilities {
        text.push_str(&format!(" {name}={u}"));
    }
    text.push('\n');
    let mut json = json!({
        "rule": base.as_str(),
        "variant": rule.variant.as_str(),
        "winner": names(inst, &winner),
        "score": score,
        "utilities": utilities.iter().map(|(name, u)| (name.clone(), json!(u))).collect::<serde_json::Map<_, _>>(),
    });
    if rule.variant == Variant::Sequential {
        let (_, trace) = solve_sequential(rule.flavor, rule.agg, inst)?;
        let mut rounds = Vec::new();
        for (k, round) in trace.rounds.iter().enumerate() {
            text.push_str(&format!("round {}: {} (budget left {})\n", k + 1, show(inst, &round.selected), round.budget));
            rounds.push(json!({ "selected": names(inst, &round.selected), "budget_left": round.budget }));
        }
        text.push_str(&format!("final round: {}\n", show(inst, &trace.final_addition)));
        json["rounds"] = Value::Array(rounds);
        json["final_addition"] = json!(names(inst, &trace.final_addition));
    }
    Ok(Report { text, json, code: EXIT_OK })
}

fn check_winner(rule: RuleSpec, inst: &Instance, bundle: &str) -> Result<Report, Failure> {
    let bundle = parse_bundle(inst, bundle)?;
    let yes = variants::is_cowinner(rule, inst, &bundle)?;
    Ok(Report {
        text: format!("co-winner: {}\n", if yes { "yes" } else { "no" }),
        json: json!({ "rule": rule.rule().as_str(), "variant": rule.variant.as_str(), "bundle": names(inst, &bundle), "cowinner": yes }),
        code: if yes { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn witness_text(inst: &Instance, witness: &[u64]) -> String {
    let parts: Vec<String> =
        witness.iter().enumerate().filter(|(_, &x)| x > 0).map(|(j, x)| format!("{}:{x}", inst.project(j).name)).collect();
    if parts.is_empty() {
        "(no donation)".into()
    } else {
        parts.join(",")
    }
}

fn find_donation(rule: RuleSpec, inst: &Instance, voter: &str, delta: u64, max_nodes: u64) -> Result<Report, Failure> {
    let v = voter_index(inst, voter)?;
    let DonationAnswer { improving, witness, baseline_utility, new_utility } =
        find_improving_donation_with_cap(rule, inst, v, delta, u128::from(max_nodes))?;
    let mut text = match &witness {
        Some(w) => format!("witness: {}\n", witness_text(inst, w)),
        None => "witness: none\n".into(),
    };
    text.push_str(&format!("utility: {baseline_utility}"));
    if improving {
        text.push_str(&format!(" -> {new_utility}"));
    }
    text.push('\n');
    let witness_json = witness.as_ref().map(|w| {
        w.iter().enumerate().map(|(j, &x)| (inst.project(j).name.clone(), json!(x))).collect::<serde_json::Map<_, _>>()
    });
    Ok(Report {
        text,
        json: json!({
            "rule": rule.rule().as_str(),
            "variant": rule.variant.as_str(),
            "voter": voter,
            "delta": delta,
            "improving": improving,
            "witness": witness_json,
            "baseline_utility": baseline_utility,
            "new_utility": new_utility,
        }),
        code: if improving { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn perturbation_json(inst: &Instance, p: Perturbation) -> Value {
    match p {
        Perturbation::StripDonations => json!({ "kind": "strip-donations" }),
        Perturbation::Increase { voter, project, amount } => json!({
            "kind": "increase",
            "voter": inst.voter(voter).name,
            "project": inst.project(project).name,
            "amount": amount,
        }),
        Perturbation::Withdraw { voter, project } => json!({
            "kind": "withdraw",
            "voter": inst.voter(voter).name,
            "project": inst.project(project).name,
        }),
        Perturbation::AddSupporters { project, count, value } => json!({
            "kind": "add-supporters",
            "project": inst.project(project).name,
            "count": count,
            "value": value,
        }),
    }
}

fn perturbation_text(inst: &Instance, p: Perturbation) -> String {
    match p {
        Perturbation::StripDonations => "all donations removed".into(),
        Perturbation::Increase { voter, project, amount } => {
            format!("{} donates {amount} more to {}", inst.voter(voter).name, inst.project(project).name)
        }
        Perturbation::Withdraw { voter, project } => {
            format!("{} withdraws the donation to {}", inst.voter(voter).name, inst.project(project).name)
        }
        Perturbation::AddSupporters { project, count, value } => {
            format!("{count} supporters of {} with satisfaction {value} join", inst.project(project).name)
        }
    }
}

fn violation_json(v: &Violation) -> Value {
    let inst = &v.instance;
    let e = &v.evidence;
    json!({
        "axiom": v.axiom.as_str(),
        "rule": v.rule.rule().as_str(),
        "variant": v.rule.variant.as_str(),
        "perturbation": perturbation_json(inst, v.perturbation),
        "voter": e.voter.map(|i| inst.voter(i).name.clone()),
        "original_winner": names(inst, &e.original_winner),
        "perturbed_winner": names(inst, &e.perturbed_winner),
        "original_value": e.original_value,
        "perturbed_value": e.perturbed_value,
        "donation_change": e.donation_change.map(|(old, new)| json!([old, new])),
    })
}

fn violation_text(v: &Violation) -> String {
    let inst = &v.instance;
    let e = &v.evidence;
    let mut text = format!("violation of {} under {}\n", v.axiom.as_str(), v.rule);
    text.push_str(&format!("  perturbation: {}\n", perturbation_text(inst, v.perturbation)));
    if let Some(i) = e.voter {
        text.push_str(&format!("  voter: {}\n", inst.voter(i).name));
    }
    text.push_str(&format!("  winner: {} -> {}\n", show(inst, &e.original_winner), show(inst, &e.perturbed_winner)));
    text.push_str(&format!("  value: {} -> {}\n", e.original_value, e.perturbed_value));
    text
}

fn check_axiom(
    axiom: AxiomId,
    rule: RuleSpec,
    inst: &Instance,
    voter: Option<&str>,
    project: Option<&str>,
    increment: u64,
) -> Result<Report, Failure> {
    if axiom == AxiomId::WeakContinuity {
        return Err(Failure::Usage("weak-continuity has no fixed perturbation; use `fuzz --axiom weak-continuity`".into()));
    }
    if increment == 0 {
        return Err(Failure::Usage("--increment must be positive".into()));
    }
    let voter = voter.map(|name| voter_index(inst, name)).transpose()?;
    let project = project.map(|name| project_index(inst, name)).transpose()?;
    let keep = |p: &Perturbation| match *p {
        Perturbation::Increase { voter: x, project: j, .. } | Perturbation::Withdraw { voter: x, project: j } => {
            voter.is_none_or(|v| v == x) && project.is_none_or(|q| q == j)
        }
        _ => true,
    };
    let perturbations: Vec<Perturbation> = axioms::all_perturbations(axiom, inst, increment).into_iter().filter(keep).collect();
    let mut found = Vec::new();
    for &p in &perturbations {
        if let Some(v) = evaluate(axiom, rule, inst, p)? {
            found.push(v);
        }
    }
    let text = if found.is_empty() {
        format!("holds on supplied perturbations ({})\n", perturbations.len())
    } else {
        found.iter().map(violation_text).collect()
    };
    Ok(Report {
        text,
        json: json!({
            "axiom": axiom.as_str(),
            "rule": rule.rule().as_str(),
            "variant": rule.variant.as_str(),
            "perturbations": perturbations.len(),
            "holds": found.is_empty(),
            "violations": found.iter().map(violation_json).collect::<Vec<_>>(),
        }),
        code: if found.is_empty() { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn fuzz(axiom: AxiomId, rule: RuleSpec, trials: usize, seed: u64, b: &BoundArgs) -> Result<Report, Failure> {
    let config = FuzzConfig {
        seed,
        trials,
        max_projects: b.max_projects,
        max_voters: b.max_voters,
        max_types: b.max_types,
        max_cost: b.max_cost,
        max_sat: b.max_sat,
        max_donation: b.max_donation,
        max_budget: b.max_budget,
        max_increment: b.max_increment,
        shrink_steps: b.shrink_steps,
    };
    let report = axioms::fuzz(axiom, rule, &config)?;
    let mut text = format!(
        "{} under {rule}: {} trials, {} skipped as infeasible, {} with violations\n",
        axiom.as_str(),
        report.trials_run,
        report.skipped,
        report.violations.len()
    );
    let mut json = json!({
        "axiom": axiom.as_str(),
        "rule": rule.rule().as_str(),
        "variant": rule.variant.as_str(),
        "seed": seed,
        "trials": report.trials_run,
        "skipped": report.skipped,
        "violating_trials": report.violations.iter().map(|(t, _)| *t).collect::<Vec<_>>(),
        "shrunk": Value::Null,
    });
    if let Some(v) = &report.shrunk {
        let (trial, _) = report.violations[0];
        text.push_str(&format!("first violation at trial {trial}, shrunk:\n"));
        text.push_str(&violation_text(v));
        text.push_str("instance:\n");
        text.push_str(&InstanceDocument::from_instance(&v.instance).to_json());
        let mut shrunk = violation_json(v);
        shrunk["trial"] = json!(trial);
        shrunk["instance"] = serde_json::to_value(InstanceDocument::from_instance(&v.instance)).expect("documents serialize");
        json["shrunk"] = shrunk;
    }
    Ok(Report { text, json, code: if report.violations.is_empty() { EXIT_OK } else { EXIT_NEGATIVE } })
}

fn dispatch(command: &Command) -> Result<(Report, bool), Failure> {
    Ok(match command {
        Command::Solve { rule, input } => (solve(rule.spec(), &load_instance(&input.input)?)?, input.json),
        Command::CheckWinner { rule, bundle, input } => {
            (check_winner(rule.spec(), &load_instance(&input.input)?, bundle)?, input.json)
        }
        Command::FindDonation { rule, voter, delta, max_nodes, input } => {
            (find_donation(rule.spec(), &load_instance(&input.input)?, voter, *delta, *max_nodes)?, input.json)
        }
        Command::CheckAxiom { axiom, rule, voter, project, increment, input } => {
            let inst = load_instance(&input.input)?;
            (check_axiom(*axiom, rule.spec(), &inst, voter.as_deref(), project.as_deref(), *increment)?, input.json)
        }
        Command::Fuzz { axiom, rule, trials, seed, bounds, json } => (fuzz(*axiom, rule.spec(), *trials, *seed, bounds)?, *json),
    })
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok((report, as_json)) => {
            let _ = if as_json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("values serialize"))
            } else {
                write!(out, "{}", report.text)
            };
            report.code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            failure.exit_code()
        }
    }
}
