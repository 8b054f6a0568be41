use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Result;
use crate::query::eval_ucq;
use crate::value::{format_tuple, Tuple};

use super::schema::{FunctionalDependency, InclusionDependency, ViewDefinition};
use super::{Constraint, RawData, Schema};

/// A failed constraint with the tuples that witness the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub constraint: String,
    pub detail: String,
    pub witnesses: Vec<Tuple>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.constraint, self.detail)?;
        if !self.witnesses.is_empty() {
            let shown: Vec<String> = self.witnesses.iter().take(5).map(|t| format_tuple(t)).collect();
            write!(f, " [{}", shown.join(", "))?;
            if self.witnesses.len() > 5 {
                write!(f, ", ... {} more", self.witnesses.len() - 5)?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub constraint: String,
    pub violation: Option<Violation>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub results: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn violations(&self) -> Vec<&Violation> {
        self.results.iter().filter_map(|r| r.violation.as_ref()).collect()
    }
}

/// Relations of the schema missing from `data` read as empty.
fn complete(schema: &Schema, data: &RawData) -> RawData {
    let mut full = data.clone();
    for r in schema.relations() {
        full.entry(r.name.clone()).or_default();
    }
    full
}

/// Checks every constraint of the schema; failures become report entries.
pub fn validate_constraints(schema: &Schema, data: &RawData) -> ValidationReport {
    let data = complete(schema, data);
    let results = schema
        .constraints()
        .iter()
        .map(|c| {
            let violation = match c {
                Constraint::Fd(fd) => check_fd(fd, &data),
                Constraint::Id(id) => check_id(id, &data),
                Constraint::View(v) => check_view(v, &data),
            };
            CheckResult {
                constraint: c.to_string(),
                violation: violation.map(|(detail, witnesses)| Violation {
                    constraint: c.to_string(),
                    detail,
                    witnesses,
                }),
            }
        })
        .collect();
    ValidationReport { results }
}

type Failure = Option<(String, Vec<Tuple>)>;

fn check_fd(fd: &FunctionalDependency, data: &RawData) -> Failure {
    let mut groups: BTreeMap<Tuple, Vec<&Tuple>> = BTreeMap::new();
    for row in &data[&fd.relation] {
        let key = fd.lhs_positions.iter().map(|&p| row[p].clone()).collect();
        groups.entry(key).or_default().push(row);
    }
    let mut witnesses = Vec::new();
    for rows in groups.values() {
        let image = |r: &Tuple| -> Tuple { fd.rhs_positions.iter().map(|&p| r[p].clone()).collect() };
        let first = image(rows[0]);
        if rows.iter().any(|r| image(r) != first) {
            witnesses.extend(rows.iter().map(|r| (*r).clone()));
        }
    }
    (!witnesses.is_empty()).then(|| ("rows agree on the left side but not the right".to_string(), witnesses))
}

fn check_id(id: &InclusionDependency, data: &RawData) -> Failure {
    let present: BTreeSet<Tuple> = data[&id.to]
        .iter()
        .map(|r| id.to_positions.iter().map(|&p| r[p].clone()).collect())
        .collect();
    let missing: BTreeSet<Tuple> = data[&id.from]
        .iter()
        .map(|r| id.from_positions.iter().map(|&p| r[p].clone()).collect())
        .filter(|k| !present.contains(k))
        .collect();
    (!missing.is_empty()).then(|| (format!("values missing from {}", id.to), missing.into_iter().collect()))
}

fn check_view(v: &ViewDefinition, data: &RawData) -> Failure {
    let expected = match eval_ucq(&v.body, data) {
        Ok(rows) => rows,
        Err(e) => return Some((format!("definition cannot be evaluated: {e}"), Vec::new())),
    };
    let stored = &data[&v.view];
    if &expected == stored {
        return None;
    }
    let absent: Vec<Tuple> = expected.difference(stored).cloned().collect();
    let extra: Vec<Tuple> = stored.difference(&expected).cloned().collect();
    let detail = format!(
        "stored extent differs from the definition ({} missing, {} unexpected)",
        absent.len(),
        extra.len()
    );
    Some((detail, absent.into_iter().chain(extra).collect()))
}

/// Computes every view from the base relations, in dependency order.
/// Stored view extents in `base` are replaced.
pub fn materialize_views(schema: &Schema, base: &RawData) -> Result<RawData> {
    let mut data = complete(schema, base);
    for v in schema.view_order() {
        let rows = eval_ucq(&v.body, &data)?;
        data.insert(v.view.clone(), rows);
    }
    Ok(data)
}
