//! Instance representation, feasibility and instance surgery.
//!
//! All money and satisfaction values are exact non-negative integers.
//! Instances are immutable once built; every modifying operation returns a
//! fresh [`Instance`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Project {
    pub name: String,
    pub cost: u64,
    /// `types[z]` is true when the project carries type `z`.
    pub types: Vec<bool>,
}

impl Project {
    pub fn new(name: impl Into<String>, cost: u64, types: Vec<bool>) -> Self {
        Self { name: name.into(), cost, types }
    }

    /// A project without any type.
    pub fn untyped(name: impl Into<String>, cost: u64) -> Self {
        Self::new(name, cost, Vec::new())
    }

    pub fn has_type(&self, z: usize) -> bool {
        self.types.get(z).copied().unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Voter {
    pub name: String,
    /// Satisfaction per project.
    pub sat: Vec<u64>,
    /// Money pledged per project.
    pub donation: Vec<u64>,
}

impl Voter {
    pub fn new(name: impl Into<String>, sat: Vec<u64>, donation: Vec<u64>) -> Self {
        Self { name: name.into(), sat, donation }
    }

    pub fn total_donation(&self) -> u64 {
        self.donation.iter().sum()
    }
}

/// A set of project indices, kept strictly increasing.
///
/// The derived ordering is lexicographic over the sorted index sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bundle(Vec<usize>);

impl Bundle {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self(members)
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn with(&self, j: usize) -> Self {
        match self.0.binary_search(&j) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut members = self.0.clone();
                members.insert(pos, j);
                Self(members)
            }
        }
    }

    pub fn union(&self, other: &Bundle) -> Self {
        Self::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn is_subset(&self, other: &Bundle) -> bool {
        self.0.iter().all(|&j| other.contains(j))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<usize> for Bundle {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter)
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str("}")
    }
}

/// A participatory budgeting instance: projects, voters, a budget and
/// per-type lower and upper bounds on the number of funded projects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    num_types: usize,
    projects: Vec<Project>,
    voters: Vec<Voter>,
    budget: u64,
    lower: Vec<u64>,
    upper: Vec<u64>,
}

impl Instance {
    /// Validates dimensions and bounds. At least one project and one voter
    /// are required and `lower[z] <= upper[z]` must hold for every type.
    pub fn new(
        num_types: usize,
        projects: Vec<Project>,
        voters: Vec<Voter>,
        budget: u64,
        lower: Vec<u64>,
        upper: Vec<u64>,
    ) -> Result<Self> {
        let m = projects.len();
        if m == 0 {
            return Err(Error::InvalidInstance("at least one project is required".into()));
        }
        if voters.is_empty() {
            return Err(Error::InvalidInstance("at least one voter is required".into()));
        }
        for p in &projects {
            if p.types.len() != num_types {
                return Err(Error::InvalidInstance(format!(
                    "project {}: type vector has {} entries, expected {num_types}",
                    p.name,
                    p.types.len()
                )));
            }
        }
        for v in &voters {
            if v.sat.len() != m {
                return Err(Error::InvalidInstance(format!(
                    "voter {}: satisfaction vector has {} entries, expected {m}",
                    v.name,
                    v.sat.len()
                )));
            }
            if v.donation.len() != m {
                return Err(Error::InvalidInstance(format!(
                    "voter {}: donation vector has {} entries, expected {m}",
                    v.name,
                    v.donation.len()
                )));
            }
        }
        if lower.len() != num_types || upper.len() != num_types {
            return Err(Error::InvalidInstance(format!(
                "bounds must have {num_types} entries (lower has {}, upper has {})",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(z) = (0..num_types).find(|&z| lower[z] > upper[z]) {
            return Err(Error::InvalidInstance(format!(
                "type {z}: lower bound {} exceeds upper bound {}",
                lower[z], upper[z]
            )));
        }
        Ok(Self { num_types, projects, voters, budget, lower, upper })
    }

    /// An instance without diversity constraints.
    pub fn without_types(projects: Vec<Project>, voters: Vec<Voter>, budget: u64) -> Result<Self> {
        Self::new(0, projects, voters, budget, Vec::new(), Vec::new())
    }

    pub fn num_types(&self) -> usize {
        self.num_types
    }

    pub fn num_projects(&self) -> usize {
        self.projects.len()
    }

    pub fn num_voters(&self) -> usize {
        self.voters.len()
    }

    pub fn projects(&self) -> &[Project] {
        &self.projects
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn project(&self, j: usize) -> &Project {
        &self.projects[j]
    }

    pub fn voter(&self, i: usize) -> &Voter {
        &self.voters[i]
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn lower(&self) -> &[u64] {
        &self.lower
    }

    pub fn upper(&self) -> &[u64] {
        &self.upper
    }

    pub fn project_index(&self, name: &str) -> Option<usize> {
        self.projects.iter().position(|p| p.name == name)
    }

    pub fn voter_index(&self, name: &str) -> Option<usize> {
        self.voters.iter().position(|v| v.name == name)
    }

    /// Checks that every member of `bundle` names a project of this instance.
    pub fn check_bundle(&self, bundle: &Bundle) -> Result<()> {
        match bundle.members().last() {
            Some(&j) if j >= self.num_projects() => {
                Err(Error::IndexOutOfRange { index: j, limit: self.num_projects() })
            }
            _ => Ok(()),
        }
    }

    /// Sum of all voters' donations to project `j`.
    pub fn total_donation(&self, j: usize) -> u64 {
        self.voters.iter().map(|v| v.donation[j]).sum()
    }

    /// Public money project `j` consumes: its cost minus all donations,
    /// clamped at zero.
    pub fn reduced_cost(&self, j: usize) -> u64 {
        self.projects[j].cost.saturating_sub(self.total_donation(j))
    }

    pub fn reduced_costs(&self) -> Vec<u64> {
        (0..self.num_projects()).map(|j| self.reduced_cost(j)).collect()
    }

    /// Number of projects of each type in `bundle`.
    pub fn type_counts(&self, bundle: &Bundle) -> Vec<u64> {
        let mut counts = alloc::vec![0u64; self.num_types];
        for j in bundle.iter() {
            for (z, count) in counts.iter_mut().enumerate() {
                if self.projects[j].types[z] {
                    *count += 1;
                }
            }
        }
        counts
    }

    pub fn bundle_cost(&self, bundle: &Bundle) -> u64 {
        bundle.iter().map(|j| self.reduced_cost(j)).sum()
    }

    /// Budget and diversity constraints both hold for `bundle`.
    pub fn is_feasible(&self, bundle: &Bundle) -> bool {
        if self.check_bundle(bundle).is_err() || self.bundle_cost(bundle) > self.budget {
            return false;
        }
        self.type_counts(bundle)
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&c, (&lo, &hi))| lo <= c && c <= hi)
    }

    /// No project outside `bundle` can be added without breaking a
    /// constraint. Fails if `bundle` itself is infeasible.
    pub fn is_exhaustive(&self, bundle: &Bundle) -> Result<bool> {
        if !self.is_feasible(bundle) {
            return Err(Error::Precondition("exhaustiveness is only defined for feasible bundles"));
        }
        Ok((0..self.num_projects())
            .filter(|&j| !bundle.contains(j))
            .all(|j| !self.is_feasible(&bundle.with(j))))
    }

    /// Copy of the instance with every donation set to zero.
    pub fn zero_donations(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.voters {
            v.donation.iter_mut().for_each(|b| *b = 0);
        }
        out
    }

    pub fn has_donations(&self) -> bool {
        self.voters.iter().any(|v| v.donation.iter().any(|&b| b > 0))
    }

    /// Copy of the instance where voter `v`'s contribution vector is
    /// `donation`.
    pub fn replace_donation(&self, v: usize, donation: Vec<u64>) -> Result<Self> {
        if v >= self.num_voters() {
            return Err(Error::IndexOutOfRange { index: v, limit: self.num_voters() });
        }
        if donation.len() != self.num_projects() {
            return Err(Error::LengthMismatch { expected: self.num_projects(), found: donation.len() });
        }
        let mut out = self.clone();
        out.voters[v].donation = donation;
        Ok(out)
    }

    /// Voter `i` never donates to a project she is indifferent to, and
    /// donates strictly more to strictly preferred projects.
    pub fn is_satisfaction_consistent(&self, i: usize) -> bool {
        let v = &self.voters[i];
        let m = self.num_projects();
        if (0..m).any(|j| v.sat[j] == 0 && v.donation[j] > 0) {
            return false;
        }
        (0..m).all(|j| (0..m).all(|k| v.sat[j] <= v.sat[k] || v.donation[j] > v.donation[k]))
    }

    /// Sub-instance over `keep` (original order preserved) with new budget
    /// and bounds. Donations are carried over.
    pub(crate) fn restrict(
        &self,
        keep: &[usize],
        budget: u64,
        lower: Vec<u64>,
        upper: Vec<u64>,
    ) -> Result<Self> {
        let projects = keep.iter().map(|&j| self.projects[j].clone()).collect();
        let voters = self
            .voters
            .iter()
            .map(|v| Voter {
                name: v.name.clone(),
                sat: keep.iter().map(|&j| v.sat[j]).collect(),
                donation: keep.iter().map(|&j| v.donation[j]).collect(),
            })
            .collect();
        Self::new(self.num_types, projects, voters, budget, lower, upper)
    }

    /// Copy with `count` extra voters who donate nothing and are satisfied
    /// (with `value`) by project `j` only.
    pub fn with_supporters(&self, j: usize, count: usize, value: u64) -> Self {
        let mut out = self.clone();
        let m = self.num_projects();
        let start = self.num_voters();
        for k in 0..count {
            let mut sat = alloc::vec![0; m];
            sat[j] = value;
            out.voters.push(Voter::new(format!("supporter{}", start + k + 1), sat, alloc::vec![0; m]));
        }
        out
    }

    pub(crate) fn with_budget(&self, budget: u64) -> Self {
        let mut out = self.clone();
        out.budget = budget;
        out
    }

    pub(crate) fn with_bounds(&self, lower: Vec<u64>, upper: Vec<u64>) -> Result<Self> {
        Self::new(self.num_types, self.projects.clone(), self.voters.clone(), self.budget, lower, upper)
    }

    pub(crate) fn project_mut(&mut self, j: usize) -> &mut Project {
        &mut self.projects[j]
    }

    pub(crate) fn voter_mut(&mut self, i: usize) -> &mut Voter {
        &mut self.voters[i]
    }

    pub(crate) fn without_project(&self, j: usize) -> Result<Self> {
        let keep: Vec<usize> = (0..self.num_projects()).filter(|&k| k != j).collect();
        self.restrict(&keep, self.budget, self.lower.clone(), self.upper.clone())
    }

    pub(crate) fn without_voter(&self, i: usize) -> Result<Self> {
        let mut voters = self.voters.clone();
        voters.remove(i);
        Self::new(self.num_types, self.projects.clone(), voters, self.budget, self.lower.clone(), self.upper.clone())
    }

    pub(crate) fn without_type(&self, z: usize) -> Result<Self> {
        let mut projects = self.projects.clone();
        for p in &mut projects {
            p.types.remove(z);
        }
        let mut lower = self.lower.clone();
        let mut upper = self.upper.clone();
        lower.remove(z);
        upper.remove(z);
        Self::new(self.num_types - 1, projects, self.voters.clone(), self.budget, lower, upper)
    }
}

/// `b` and `b_prime` agree everywhere except possibly at `j`.
pub fn is_j_variant(b: &[u64], b_prime: &[u64], j: usize) -> bool {
    b.len() == b_prime.len() && b.iter().zip(b_prime).enumerate().all(|(k, (x, y))| k == j || x == y)
}
