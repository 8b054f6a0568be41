//! Ontology-based why-not explanations for relational query answers.
//!
//! Given a query `q`, an instance `I` and a tuple `a` missing from `q(I)`,
//! an explanation is a tuple of concepts whose extensions cover `a` and
//! avoid every answer. This crate computes most-general explanations for
//! finite ontologies, ontologies induced by DL-Lite_R/GAV specifications,
//! and the concept language derived from the schema or the instance.

pub mod concept;
pub mod explain;
pub mod error;
pub mod obda;
pub mod ontology;
pub mod query;
pub mod relational;
pub mod value;

mod syntax;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use value::{format_tuple, Constant, Tuple};
