//! Ontologies induced by a DL-Lite_R TBox, a relational schema and GAV
//! mappings from the schema into the TBox vocabulary.

mod spec;
mod tbox;

use std::fmt;

pub use spec::{load_obda, Mapping, ObdaSpec, Saturation};
pub use tbox::{Axiom, Expr, TBox};

/// An atomic role `P` or its inverse `P-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub name: String,
    pub inverse: bool,
}

impl Role {
    pub fn new(name: impl Into<String>, inverse: bool) -> Self {
        Role {
            name: name.into(),
            inverse,
        }
    }

    pub fn inverted(&self) -> Role {
        Role::new(self.name.clone(), !self.inverse)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.inverse {
            f.write_str("-")?;
        }
        Ok(())
    }
}

/// `A`, `exists P` or `exists P-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicConcept {
    Atomic(String),
    Exists(Role),
}

impl BasicConcept {
    pub fn atomic(name: impl Into<String>) -> Self {
        BasicConcept::Atomic(name.into())
    }

    pub fn exists(role: impl Into<String>, inverse: bool) -> Self {
        BasicConcept::Exists(Role::new(role, inverse))
    }
}

impl fmt::Display for BasicConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicConcept::Atomic(a) => f.write_str(a),
            BasicConcept::Exists(r) => write!(f, "exists {r}"),
        }
    }
}
