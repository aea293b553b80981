//! JSON instance documents.
//!
//! ```json
//! {
//!   "budget": 5,
//!   "num_types": 1,
//!   "projects": [{ "name": "p1", "cost": 3, "types": [0] }],
//!   "voters": [{ "name": "v1", "sat": [5], "donation": [1] }],
//!   "lower": [0],
//!   "upper": [1]
//! }
//! ```
//!
//! Numbers are read as signed integers so that negative values are reported
//! as validation errors rather than as syntax errors.

use std::collections::HashSet;
use std::path::Path;

use pbdonate_core::{Instance, Project, Voter};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectEntry {
    pub name: String,
    pub cost: i64,
    #[serde(default)]
    pub types: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterEntry {
    pub name: String,
    pub sat: Vec<i64>,
    pub donation: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub budget: i64,
    pub num_types: i64,
    pub projects: Vec<ProjectEntry>,
    pub voters: Vec<VoterEntry>,
    #[serde(default)]
    pub lower: Vec<i64>,
    #[serde(default)]
    pub upper: Vec<i64>,
}

fn non_negative(value: i64, field: impl FnOnce() -> String) -> Result<u64, DocumentError> {
    u64::try_from(value).map_err(|_| DocumentError::Validation(format!("{} is negative ({value})", field())))
}

fn non_negative_all(values: &[i64], field: &str) -> Result<Vec<u64>, DocumentError> {
    values.iter().enumerate().map(|(k, &x)| non_negative(x, || format!("{field}[{k}]"))).collect()
}

fn unique<'a>(names: impl Iterator<Item = &'a str>, kind: &str) -> Result<(), DocumentError> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(DocumentError::Validation(format!("duplicate {kind} name {name:?}")));
        }
    }
    Ok(())
}

impl InstanceDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents always serialize");
        text.push('\n');
        text
    }

    pub fn to_instance(&self) -> Result<Instance, DocumentError> {
        let t = non_negative(self.num_types, || "num_types".into())? as usize;
        unique(self.projects.iter().map(|p| p.name.as_str()), "project")?;
        unique(self.voters.iter().map(|v| v.name.as_str()), "voter")?;

        let mut projects = Vec::with_capacity(self.projects.len());
        for (j, entry) in self.projects.iter().enumerate() {
            let cost = non_negative(entry.cost, || format!("projects[{j}].cost"))?;
            let mut types = vec![false; t];
            for &z in &entry.types {
                let idx = usize::try_from(z).ok().filter(|&z| z < t).ok_or_else(|| {
                    DocumentError::Validation(format!("project {:?}: type index {z} outside 0..{t}", entry.name))
                })?;
                types[idx] = true;
            }
            projects.push(Project::new(entry.name.clone(), cost, types));
        }
        let voters = self
            .voters
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let sat = non_negative_all(&v.sat, &format!("voters[{i}].sat"))?;
                let donation = non_negative_all(&v.donation, &format!("voters[{i}].donation"))?;
                Ok(Voter::new(v.name.clone(), sat, donation))
            })
            .collect::<Result<Vec<_>, DocumentError>>()?;
        let budget = non_negative(self.budget, || "budget".into())?;
        let lower = non_negative_all(&self.lower, "lower")?;
        let upper = non_negative_all(&self.upper, "upper")?;
        Instance::new(t, projects, voters, budget, lower, upper).map_err(|e| DocumentError::Validation(e.to_string()))
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let int = |x: u64| i64::try_from(x).expect("value fits in a signed 64-bit integer");
        let ints = |xs: &[u64]| xs.iter().map(|&x| int(x)).collect();
        InstanceDocument {
            budget: int(inst.budget()),
            num_types: inst.num_types() as i64,
            projects: inst
                .projects()
                .iter()
                .map(|p| ProjectEntry {
                    name: p.name.clone(),
                    cost: int(p.cost),
                    types: (0..inst.num_types()).filter(|&z| p.types[z]).map(|z| z as i64).collect(),
                })
                .collect(),
            voters: inst
                .voters()
                .iter()
                .map(|v| VoterEntry { name: v.name.clone(), sat: ints(&v.sat), donation: ints(&v.donation) })
                .collect(),
            lower: ints(inst.lower()),
            upper: ints(inst.upper()),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, DocumentError> {
    InstanceDocument::from_json(text)?.to_instance()
}

pub fn serialize_instance(inst: &Instance) -> String {
    InstanceDocument::from_instance(inst).to_json()
}

pub fn load_instance(path: &Path) -> Result<Instance, DocumentError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io { path: path.display().to_string(), source })?;
    parse_instance(&text)
}
