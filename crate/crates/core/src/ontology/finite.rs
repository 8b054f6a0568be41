use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use crate::concept::Extension;
use crate::error::{Error, Result};
use crate::query::{eval_ucq, Ucq};
use crate::relational::{Instance, Schema};
use crate::value::Constant;

use super::{FiniteUniverse, Ontology};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtDefinition {
    /// Fixed members, the same on every instance.
    List(BTreeSet<Constant>),
    /// A unary query evaluated on the instance.
    Query(Ucq),
}

/// Named concepts with a reflexive-transitive subsumption relation and an
/// extension definition per concept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOntology {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    /// `closure[i][j]` iff concept i is subsumed by concept j.
    closure: Vec<Vec<bool>>,
    ext: Vec<ExtDefinition>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    concepts: Vec<String>,
    #[serde(default)]
    subsumptions: Vec<(String, String)>,
    #[serde(default)]
    ext: BTreeMap<String, ExtFile>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum ExtFile {
    List(Vec<serde_json::Value>),
    Query(String),
}

impl FiniteOntology {
    /// Builds the ontology and closes `edges` (pairs `sub ⊑ sup`) under
    /// reflexivity and transitivity.
    pub fn new(names: Vec<String>, edges: &[(String, String)], ext: Vec<ExtDefinition>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::format("ontology", format!("concept `{n}` is declared twice")));
            }
        }
        if ext.len() != names.len() {
            return Err(Error::format("ontology", "one extension definition per concept is required"));
        }
        let n = names.len();
        let mut closure = vec![vec![false; n]; n];
        for (i, row) in closure.iter_mut().enumerate() {
            row[i] = true;
        }
        for (sub, sup) in edges {
            let lookup = |name: &String| index.get(name).copied().ok_or_else(|| Error::UnknownConcept(name.clone()));
            closure[lookup(sub)?][lookup(sup)?] = true;
        }
        for k in 0..n {
            let via = closure[k].clone();
            for row in closure.iter_mut().filter(|row| row[k]) {
                for (cell, &reach) in row.iter_mut().zip(&via) {
                    *cell |= reach;
                }
            }
        }
        Ok(FiniteOntology {
            names,
            index,
            closure,
            ext,
        })
    }

    /// Parses the JSON ontology format; query extensions are checked
    /// against `schema`.
    pub fn from_json(text: &str, schema: &Schema) -> Result<Self> {
        let file: File = serde_json::from_str(text)?;
        let mut ext_files = file.ext;
        let mut ext = Vec::new();
        for name in &file.concepts {
            let def = match ext_files.remove(name) {
                None => {
                    return Err(Error::format("ontology", format!("concept `{name}` has no extension definition")));
                }
                Some(ExtFile::List(items)) => ExtDefinition::List(
                    items
                        .iter()
                        .map(|v| match v {
                            serde_json::Value::String(s) => Ok(Constant::parse(s)),
                            serde_json::Value::Number(n) => Ok(Constant::parse(&n.to_string())),
                            other => Err(Error::format("ontology", format!("`{other}` is not a constant"))),
                        })
                        .collect::<Result<_>>()?,
                ),
                Some(ExtFile::Query(q)) => {
                    let q = Ucq::parse(&q)?;
                    q.check(schema)?;
                    if q.arity() != 1 {
                        return Err(Error::format(
                            "ontology",
                            format!("the query for `{name}` must have one answer variable"),
                        ));
                    }
                    ExtDefinition::Query(q)
                }
            };
            ext.push(def);
        }
        if let Some(name) = ext_files.keys().next() {
            return Err(Error::UnknownConcept(name.clone()));
        }
        FiniteOntology::new(file.concepts, &file.subsumptions, ext)
    }

    pub fn concepts(&self) -> &[String] {
        &self.names
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownConcept(name.to_string()))
    }

    pub fn definition(&self, name: &str) -> Result<&ExtDefinition> {
        Ok(&self.ext[self.position(name)?])
    }

    /// The closed subsumption relation as `(sub, sup)` pairs, reflexive
    /// pairs omitted.
    pub fn subsumption_pairs(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        for (i, row) in self.closure.iter().enumerate() {
            for (j, &yes) in row.iter().enumerate() {
                if yes && i != j {
                    out.push((self.names[i].as_str(), self.names[j].as_str()));
                }
            }
        }
        out
    }
}

impl Ontology for FiniteOntology {
    type Concept = String;

    fn subsumes(&self, sub: &String, sup: &String) -> Result<bool> {
        Ok(self.closure[self.position(sub)?][self.position(sup)?])
    }

    fn ext(&self, concept: &String, instance: &Instance) -> Result<Extension> {
        Ok(Extension::Finite(match self.definition(concept)? {
            ExtDefinition::List(items) => items.clone(),
            ExtDefinition::Query(q) => eval_ucq(q, instance)?.into_iter().map(|mut t| t.remove(0)).collect(),
        }))
    }

    /// Named concepts count one symbol per character of the name.
    fn symbol_length(&self, concept: &String) -> usize {
        concept.chars().count()
    }
}

impl FiniteUniverse for FiniteOntology {
    fn universe(&self) -> Vec<String> {
        self.names.clone()
    }
}

pub fn load_ontology(path: impl AsRef<Path>, schema: &Schema) -> Result<FiniteOntology> {
    FiniteOntology::from_json(&std::fs::read_to_string(path)?, schema)
}
