use std::path::PathBuf;

use crate::relational::{load_instance, load_schema, Instance, Schema};

pub(crate) fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/trains").join(name)
}

pub(crate) fn schema() -> Schema {
    load_schema(fixture("schema.json")).unwrap()
}

pub(crate) fn instance() -> Instance {
    load_instance(schema(), fixture("data")).unwrap()
}
