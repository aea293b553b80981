use alloc::vec::Vec;

use super::{evaluate, Perturbation, Violation};
use crate::model::Instance;

/// Greedy counterexample minimisation.
///
/// Repeatedly tries to drop a project, voter or type, or to lower a single
/// number, and keeps the first candidate that still violates the axiom.
/// Every step strictly shrinks the instance, so the loop ends; `max_steps`
/// bounds the number of candidates evaluated. The result is re-derived by
/// evaluation and therefore replays exactly.
pub fn shrink(violation: &Violation, max_steps: usize) -> Violation {
    let mut current = violation.clone();
    let mut steps = 0;
    'outer: loop {
        for (inst, p) in candidates(&current.instance, current.perturbation) {
            if steps >= max_steps {
                break 'outer;
            }
            steps += 1;
            if let Ok(Some(v)) = evaluate(current.axiom, current.rule, &inst, p) {
                current = v;
                continue 'outer;
            }
        }
        break;
    }
    current
}

fn touched(p: Perturbation) -> (Option<usize>, Option<usize>) {
    match p {
        Perturbation::StripDonations => (None, None),
        Perturbation::Increase { voter, project, .. } | Perturbation::Withdraw { voter, project } => {
            (Some(voter), Some(project))
        }
        Perturbation::AddSupporters { project, .. } => (None, Some(project)),
    }
}

fn shift_project(p: Perturbation, removed: usize) -> Perturbation {
    let fix = |j: usize| if j > removed { j - 1 } else { j };
    match p {
        Perturbation::Increase { voter, project, amount } => Perturbation::Increase { voter, project: fix(project), amount },
        Perturbation::Withdraw { voter, project } => Perturbation::Withdraw { voter, project: fix(project) },
        Perturbation::AddSupporters { project, count, value } => {
            Perturbation::AddSupporters { project: fix(project), count, value }
        }
        other => other,
    }
}

fn shift_voter(p: Perturbation, removed: usize) -> Perturbation {
    let fix = |i: usize| if i > removed { i - 1 } else { i };
    match p {
        Perturbation::Increase { voter, project, amount } => Perturbation::Increase { voter: fix(voter), project, amount },
        Perturbation::Withdraw { voter, project } => Perturbation::Withdraw { voter: fix(voter), project },
        other => other,
    }
}

/// Smaller values to try in place of `x`, most aggressive first.
fn smaller(x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for y in [0, x / 2, x.saturating_sub(1)] {
        if y < x && !out.contains(&y) {
            out.push(y);
        }
    }
    out
}

fn candidates(inst: &Instance, p: Perturbation) -> Vec<(Instance, Perturbation)> {
    let (voter, project) = touched(p);
    let mut out = Vec::new();

    for j in (0..inst.num_projects()).filter(|&j| Some(j) != project) {
        if let Ok(smaller) = inst.without_project(j) {
            out.push((smaller, shift_project(p, j)));
        }
    }
    for i in (0..inst.num_voters()).filter(|&i| Some(i) != voter) {
        if let Ok(smaller) = inst.without_voter(i) {
            out.push((smaller, shift_voter(p, i)));
        }
    }
    for z in 0..inst.num_types() {
        if let Ok(smaller) = inst.without_type(z) {
            out.push((smaller, p));
        }
    }
    for z in 0..inst.num_types() {
        for lo in smaller(inst.lower()[z]) {
            let mut lower = inst.lower().to_vec();
            lower[z] = lo;
            if let Ok(relaxed) = inst.with_bounds(lower, inst.upper().to_vec()) {
                out.push((relaxed, p));
            }
        }
    }
    match p {
        Perturbation::Increase { voter, project, amount } => {
            for a in smaller(amount).into_iter().filter(|&a| a > 0) {
                out.push((inst.clone(), Perturbation::Increase { voter, project, amount: a }));
            }
        }
        Perturbation::AddSupporters { project, count, value } => {
            for c in smaller(count as u64).into_iter().filter(|&c| c > 0) {
                out.push((inst.clone(), Perturbation::AddSupporters { project, count: c as usize, value }));
            }
            for v in smaller(value).into_iter().filter(|&v| v > 0) {
                out.push((inst.clone(), Perturbation::AddSupporters { project, count, value: v }));
            }
        }
        _ => {}
    }
    for b in smaller(inst.budget()) {
        out.push((inst.with_budget(b), p));
    }
    for j in 0..inst.num_projects() {
        for c in smaller(inst.project(j).cost) {
            let mut next = inst.clone();
            next.project_mut(j).cost = c;
            out.push((next, p));
        }
    }
    for i in 0..inst.num_voters() {
        for j in 0..inst.num_projects() {
            for s in smaller(inst.voter(i).sat[j]) {
                let mut next = inst.clone();
                next.voter_mut(i).sat[j] = s;
                out.push((next, p));
            }
            for d in smaller(inst.voter(i).donation[j]) {
                let mut next = inst.clone();
                next.voter_mut(i).donation[j] = d;
                out.push((next, p));
            }
        }
    }
    out
}
