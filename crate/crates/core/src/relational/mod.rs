//! Schemas, instances and integrity constraints.

mod instance;
mod schema;
mod validate;

use std::collections::{BTreeMap, BTreeSet};

pub use instance::{load_instance, Instance};
pub use schema::{
    load_schema, Constraint, FunctionalDependency, InclusionDependency, Relation, Schema,
    ViewDefinition,
};
pub use validate::{materialize_views, validate_constraints, CheckResult, ValidationReport, Violation};

use crate::value::Tuple;

/// Tuples per relation name, before validation.
pub type RawData = BTreeMap<String, BTreeSet<Tuple>>;

/// Anything queries can be evaluated over.
pub trait Facts {
    fn tuples(&self, relation: &str) -> Option<&BTreeSet<Tuple>>;
}

impl Facts for RawData {
    fn tuples(&self, relation: &str) -> Option<&BTreeSet<Tuple>> {
        self.get(relation)
    }
}
