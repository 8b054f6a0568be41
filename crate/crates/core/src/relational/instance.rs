use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::value::{Constant, Tuple};

use super::{materialize_views, validate_constraints, Facts, RawData, Schema};

/// A database instance that satisfies every constraint of its schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    schema: Schema,
    relations: RawData,
    adom: BTreeSet<Constant>,
}

impl Instance {
    /// Checks arities, fills in absent view relations and validates all
    /// constraints. Absent base relations are empty.
    pub fn new(schema: Schema, data: RawData) -> Result<Instance> {
        for (name, rows) in &data {
            let rel = schema.relation(name)?;
            if let Some(bad) = rows.iter().find(|r| r.len() != rel.arity()) {
                return Err(Error::Arity {
                    relation: name.clone(),
                    expected: rel.arity(),
                    found: bad.len(),
                });
            }
        }
        let mut relations = data;
        let missing_views = schema.views().any(|v| !relations.contains_key(&v.view));
        if missing_views {
            let computed = materialize_views(&schema, &relations)?;
            for v in schema.views() {
                if !relations.contains_key(&v.view) {
                    relations.insert(v.view.clone(), computed[&v.view].clone());
                }
            }
        }
        for r in schema.relations() {
            relations.entry(r.name.clone()).or_default();
        }
        let report = validate_constraints(&schema, &relations);
        if !report.passed() {
            return Err(Error::ConstraintViolation(
                report.violations().into_iter().cloned().collect(),
            ));
        }
        let adom = relations.values().flatten().flatten().cloned().collect();
        Ok(Instance {
            schema,
            relations,
            adom,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// All relations, views included.
    pub fn data(&self) -> &RawData {
        &self.relations
    }

    pub fn get(&self, relation: &str) -> Result<&BTreeSet<Tuple>> {
        self.relations
            .get(relation)
            .ok_or_else(|| Error::UnknownRelation(relation.to_string()))
    }

    /// Active domain: every constant occurring in some fact.
    pub fn adom(&self) -> &BTreeSet<Constant> {
        &self.adom
    }

    /// The same data under another schema over the same relations, e.g. one
    /// with fewer constraints.
    pub fn with_schema(&self, schema: Schema) -> Result<Instance> {
        Instance::new(schema, self.relations.clone())
    }
}

impl Facts for Instance {
    fn tuples(&self, relation: &str) -> Option<&BTreeSet<Tuple>> {
        self.relations.get(relation)
    }
}

/// Reads one `<relation>.csv` per relation from `dir`. Headers name the
/// attributes in any order. View files are optional and are computed when
/// absent.
pub fn load_instance(schema: Schema, dir: impl AsRef<Path>) -> Result<Instance> {
    let dir = dir.as_ref();
    let mut data: RawData = BTreeMap::new();
    for rel in schema.relations() {
        let path = dir.join(format!("{}.csv", rel.name));
        if !path.exists() {
            if schema.is_view(&rel.name) {
                continue;
            }
            return Err(Error::format(
                "instance",
                format!("no data file for relation `{}` ({})", rel.name, path.display()),
            ));
        }
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(&path)?;
        let headers = reader.headers()?.clone();
        if headers.len() != rel.arity() {
            return Err(Error::Arity {
                relation: rel.name.clone(),
                expected: rel.arity(),
                found: headers.len(),
            });
        }
        // column i of the file holds attribute order[i]
        let order = headers
            .iter()
            .map(|h| rel.position(h))
            .collect::<Result<Vec<usize>>>()?;
        if order.iter().collect::<BTreeSet<_>>().len() != order.len() {
            return Err(Error::format(
                "instance",
                format!("{} repeats a column", path.display()),
            ));
        }
        let mut rows = BTreeSet::new();
        for record in reader.records() {
            let record = record?;
            let mut row = vec![Constant::int(0); rel.arity()];
            for (value, &pos) in record.iter().zip(&order) {
                row[pos] = Constant::parse(value);
            }
            rows.insert(row);
        }
        data.insert(rel.name.clone(), rows);
    }
    Instance::new(schema, data)
}
