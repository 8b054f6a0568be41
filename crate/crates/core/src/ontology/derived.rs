use crate::concept::{subsumed_by_schema, Concept, Extension, Fragment};
use crate::error::Result;
use crate::relational::{Instance, Schema};

use super::{FiniteUniverse, Ontology};

/// O_I: concepts of a fragment of L_S ordered by extension inclusion on one
/// fixed instance.
#[derive(Debug, Clone, Copy)]
pub struct InstanceOntology<'a> {
    pub instance: &'a Instance,
    pub fragment: Fragment,
}

impl<'a> InstanceOntology<'a> {
    pub fn new(instance: &'a Instance, fragment: Fragment) -> Self {
        InstanceOntology { instance, fragment }
    }
}

impl Ontology for InstanceOntology<'_> {
    type Concept = Concept;

    fn subsumes(&self, sub: &Concept, sup: &Concept) -> Result<bool> {
        Ok(sub.extension(self.instance).is_subset(&sup.extension(self.instance)))
    }

    fn ext(&self, concept: &Concept, instance: &Instance) -> Result<Extension> {
        Ok(concept.extension(instance))
    }

    fn symbol_length(&self, concept: &Concept) -> usize {
        concept.symbol_length()
    }
}

/// O_S: concepts of a fragment of L_S ordered by subsumption on every
/// instance of the schema.
#[derive(Debug, Clone)]
pub struct SchemaOntology {
    pub schema: Schema,
    pub fragment: Fragment,
}

impl SchemaOntology {
    pub fn new(schema: Schema, fragment: Fragment) -> Self {
        SchemaOntology { schema, fragment }
    }
}

impl Ontology for SchemaOntology {
    type Concept = Concept;

    fn subsumes(&self, sub: &Concept, sup: &Concept) -> Result<bool> {
        subsumed_by_schema(sub, sup, &self.schema)
    }

    fn ext(&self, concept: &Concept, instance: &Instance) -> Result<Extension> {
        Ok(concept.extension(instance))
    }

    fn symbol_length(&self, concept: &Concept) -> usize {
        concept.symbol_length()
    }
}

/// An ontology cut down to an explicit list of concepts.
#[derive(Debug, Clone)]
pub struct WithUniverse<O: Ontology> {
    pub inner: O,
    pub universe: Vec<O::Concept>,
}

impl<O: Ontology> WithUniverse<O> {
    pub fn new(inner: O, universe: Vec<O::Concept>) -> Self {
        WithUniverse { inner, universe }
    }
}

impl<O: Ontology> Ontology for WithUniverse<O> {
    type Concept = O::Concept;

    fn subsumes(&self, sub: &O::Concept, sup: &O::Concept) -> Result<bool> {
        self.inner.subsumes(sub, sup)
    }

    fn ext(&self, concept: &O::Concept, instance: &Instance) -> Result<Extension> {
        self.inner.ext(concept, instance)
    }

    fn extensions(&self, concepts: &[O::Concept], instance: &Instance) -> Result<Vec<Extension>> {
        self.inner.extensions(concepts, instance)
    }

    fn symbol_length(&self, concept: &O::Concept) -> usize {
        self.inner.symbol_length(concept)
    }
}

impl<O: Ontology> FiniteUniverse for WithUniverse<O> {
    fn universe(&self) -> Vec<O::Concept> {
        self.universe.clone()
    }
}
