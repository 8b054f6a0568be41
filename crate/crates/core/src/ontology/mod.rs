//! The ontology interface: concepts, a subsumption pre-order and an
//! extension function over instances.

mod derived;
mod finite;

use std::fmt::{Debug, Display};

pub use derived::{InstanceOntology, SchemaOntology, WithUniverse};
pub use finite::{load_ontology, ExtDefinition, FiniteOntology};

use crate::concept::Extension;
use crate::error::Result;
use crate::relational::Instance;

pub trait Ontology {
    type Concept: Clone + Ord + Display + Debug;

    /// Whether `sub ⊑ sup`.
    fn subsumes(&self, sub: &Self::Concept, sup: &Self::Concept) -> Result<bool>;

    fn ext(&self, concept: &Self::Concept, instance: &Instance) -> Result<Extension>;

    /// Extensions of several concepts; implementations may share work.
    fn extensions(&self, concepts: &[Self::Concept], instance: &Instance) -> Result<Vec<Extension>> {
        concepts.iter().map(|c| self.ext(c, instance)).collect()
    }

    /// Length of the concept's written form, used to prefer short
    /// explanations.
    fn symbol_length(&self, concept: &Self::Concept) -> usize;
}

/// An ontology whose concepts can be listed.
pub trait FiniteUniverse: Ontology {
    fn universe(&self) -> Vec<Self::Concept>;
}

/// A subsumption `sub ⊑ sup` contradicted on an instance by `witness`, a
/// member of `sub`'s extension missing from `sup`'s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency<C> {
    pub sub: C,
    pub sup: C,
    pub witness: Option<crate::value::Constant>,
}

impl<C: Display> Display for Inconsistency<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} is subsumed by {} but ", self.sub, self.sup)?;
        match &self.witness {
            Some(w) => write!(f, "{w} belongs only to the former"),
            None => f.write_str("the former's extension is unbounded"),
        }
    }
}

/// Checks every subsumption between universe members against the
/// extensions on `instance`. An empty result means the instance is
/// consistent with the ontology.
pub fn check_consistency<O: FiniteUniverse>(ontology: &O, instance: &Instance) -> Result<Vec<Inconsistency<O::Concept>>> {
    let universe = ontology.universe();
    let exts = ontology.extensions(&universe, instance)?;
    let mut out = Vec::new();
    for (i, sub) in universe.iter().enumerate() {
        for (j, sup) in universe.iter().enumerate() {
            if i == j || !ontology.subsumes(sub, sup)? || exts[i].is_subset(&exts[j]) {
                continue;
            }
            let witness = match (&exts[i], &exts[j]) {
                (Extension::Finite(a), b) => a.iter().find(|c| !b.contains(c)).cloned(),
                (Extension::All, _) => None,
            };
            out.push(Inconsistency {
                sub: sub.clone(),
                sup: sup.clone(),
                witness,
            });
        }
    }
    Ok(out)
}
