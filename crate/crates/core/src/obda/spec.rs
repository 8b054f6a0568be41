use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use crate::concept::Extension;
use crate::error::{Error, Result};
use crate::ontology::{FiniteUniverse, Ontology};
use crate::query::{eval_cq, parse_atom_text, parse_body, Atom, ConjunctiveQuery};
use crate::relational::{Instance, Schema};
use crate::value::Constant;

use super::tbox::{Axiom, Expr, TBox};
use super::{BasicConcept, Role};

/// `body → head` with `head` an atomic concept or role over body variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    pub head: Atom,
    /// The body as a query whose answers are the head's arguments.
    pub query: ConjunctiveQuery,
}

/// A TBox, a schema and GAV mappings between them.
#[derive(Debug, Clone)]
pub struct ObdaSpec {
    pub tbox: TBox,
    pub schema: Schema,
    pub mappings: Vec<Mapping>,
}

/// Certain memberships of every basic concept and role on one instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Saturation {
    concepts: BTreeMap<BasicConcept, BTreeSet<Constant>>,
    /// Pairs per role name, in the role's own direction.
    roles: BTreeMap<String, BTreeSet<(Constant, Constant)>>,
}

impl Saturation {
    pub fn members(&self, c: &BasicConcept) -> BTreeSet<Constant> {
        self.concepts.get(c).cloned().unwrap_or_default()
    }

    pub fn pairs(&self, r: &Role) -> BTreeSet<(Constant, Constant)> {
        let pairs = self.roles.get(&r.name).into_iter().flatten();
        if r.inverse {
            pairs.map(|(a, b)| (b.clone(), a.clone())).collect()
        } else {
            pairs.cloned().collect()
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    concepts: Vec<String>,
    #[serde(default)]
    roles: Vec<String>,
    #[serde(default)]
    axioms: Vec<AxiomFile>,
    #[serde(default)]
    mappings: Vec<MappingFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomFile {
    lhs: String,
    rhs: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingFile {
    body: String,
    head: String,
}

impl ObdaSpec {
    pub fn new(tbox: TBox, schema: Schema, mappings: Vec<Mapping>) -> Result<ObdaSpec> {
        for m in &mappings {
            let name = &m.head.relation;
            let expected = if tbox.concept_names().contains(name) {
                1
            } else if tbox.role_names().contains(name) {
                2
            } else {
                return Err(Error::UnknownConcept(name.clone()));
            };
            if m.head.args.len() != expected {
                return Err(Error::ArityMismatch {
                    expected,
                    found: m.head.args.len(),
                });
            }
            m.query.check(&schema)?;
        }
        Ok(ObdaSpec { tbox, schema, mappings })
    }

    pub fn from_json(text: &str, schema: Schema) -> Result<ObdaSpec> {
        let file: File = serde_json::from_str(text)?;
        let names = TBox::new(file.concepts.clone(), file.roles.clone(), Vec::new())?;
        let mut axioms = Vec::new();
        for a in &file.axioms {
            let (lhs, lhs_negated) = names.parse_expr(&a.lhs)?;
            let (rhs, negated) = names.parse_expr(&a.rhs)?;
            if lhs_negated {
                return Err(Error::format("TBox", format!("negation on the left of `{}`", a.lhs)));
            }
            axioms.push(Axiom { lhs, rhs, negated });
        }
        let tbox = TBox::new(file.concepts, file.roles, axioms)?;
        let mut mappings = Vec::new();
        for m in &file.mappings {
            let head = parse_atom_text("mapping head", &m.head)?;
            let (atoms, comparisons) = parse_body(&m.body)?;
            let query = ConjunctiveQuery::new(head.args.clone(), atoms, comparisons);
            mappings.push(Mapping { head, query });
        }
        ObdaSpec::new(tbox, schema, mappings)
    }

    /// Asserts the mapping heads on `instance` and closes them under the
    /// positive axioms. Axioms `B ⊑ exists R` only record membership of
    /// `exists R`; no role pairs are invented.
    pub fn saturate_unchecked(&self, instance: &Instance) -> Result<Saturation> {
        let mut asserted: BTreeMap<BasicConcept, BTreeSet<Constant>> = BTreeMap::new();
        let mut roles: BTreeMap<String, BTreeSet<(Constant, Constant)>> = BTreeMap::new();
        for m in &self.mappings {
            let rows = eval_cq(&m.query, instance)?;
            let name = &m.head.relation;
            if m.head.args.len() == 1 {
                asserted
                    .entry(BasicConcept::atomic(name.clone()))
                    .or_default()
                    .extend(rows.into_iter().map(|mut r| r.remove(0)));
                continue;
            }
            for sup in self.tbox.supers(&Expr::Role(Role::new(name.clone(), false))) {
                let Expr::Role(s) = sup else { continue };
                let target = roles.entry(s.name.clone()).or_default();
                for r in &rows {
                    let (a, b) = (r[0].clone(), r[1].clone());
                    target.insert(if s.inverse { (b, a) } else { (a, b) });
                }
            }
        }
        for (name, pairs) in &roles {
            for (a, b) in pairs {
                asserted.entry(BasicConcept::exists(name.clone(), false)).or_default().insert(a.clone());
                asserted.entry(BasicConcept::exists(name.clone(), true)).or_default().insert(b.clone());
            }
        }
        let mut concepts: BTreeMap<BasicConcept, BTreeSet<Constant>> = BTreeMap::new();
        for (c, members) in &asserted {
            for sup in self.tbox.supers(&Expr::Concept(c.clone())) {
                if let Expr::Concept(s) = sup {
                    concepts.entry(s.clone()).or_default().extend(members.iter().cloned());
                }
            }
        }
        Ok(Saturation { concepts, roles })
    }

    /// Negative axioms violated on the saturated instance, each with a
    /// witness. Empty when the instance has a solution.
    pub fn solution_violations(&self, instance: &Instance) -> Result<Vec<String>> {
        let sat = self.saturate_unchecked(instance)?;
        Ok(violations(&self.tbox, &sat))
    }

    pub fn check_solution_exists(&self, instance: &Instance) -> Result<bool> {
        Ok(self.solution_violations(instance)?.is_empty())
    }

    /// Saturation of an instance that has a solution.
    pub fn saturate(&self, instance: &Instance) -> Result<Saturation> {
        let sat = self.saturate_unchecked(instance)?;
        let bad = violations(&self.tbox, &sat);
        if bad.is_empty() {
            Ok(sat)
        } else {
            Err(Error::NoSolution(bad))
        }
    }

    /// Members of `c` in every solution for `instance`.
    pub fn certain_extension(&self, instance: &Instance, c: &BasicConcept) -> Result<BTreeSet<Constant>> {
        self.tbox.subsumes(c, c)?;
        Ok(self.saturate(instance)?.members(c))
    }
}

fn violations(tbox: &TBox, sat: &Saturation) -> Vec<String> {
    let mut out = Vec::new();
    for a in tbox.negative_axioms() {
        match (&a.lhs, &a.rhs) {
            (Expr::Concept(x), Expr::Concept(y)) => {
                let (mx, my) = (sat.members(x), sat.members(y));
                if let Some(w) = mx.intersection(&my).next() {
                    out.push(format!("{a}: {w} belongs to both"));
                }
            }
            (Expr::Role(x), Expr::Role(y)) => {
                let (px, py) = (sat.pairs(x), sat.pairs(y));
                if let Some((u, v)) = px.intersection(&py).next() {
                    out.push(format!("{a}: ({u}, {v}) belongs to both"));
                }
            }
            _ => {}
        }
    }
    out
}

pub fn load_obda(path: impl AsRef<Path>, schema: Schema) -> Result<ObdaSpec> {
    ObdaSpec::from_json(&std::fs::read_to_string(path)?, schema)
}

impl Ontology for ObdaSpec {
    type Concept = BasicConcept;

    fn subsumes(&self, sub: &BasicConcept, sup: &BasicConcept) -> Result<bool> {
        self.tbox.subsumes(sub, sup)
    }

    fn ext(&self, concept: &BasicConcept, instance: &Instance) -> Result<Extension> {
        Ok(Extension::Finite(self.certain_extension(instance, concept)?))
    }

    fn extensions(&self, concepts: &[BasicConcept], instance: &Instance) -> Result<Vec<Extension>> {
        let sat = self.saturate(instance)?;
        concepts
            .iter()
            .map(|c| {
                self.tbox.subsumes(c, c)?;
                Ok(Extension::Finite(sat.members(c)))
            })
            .collect()
    }

    fn symbol_length(&self, concept: &BasicConcept) -> usize {
        concept.to_string().chars().count()
    }
}

impl FiniteUniverse for ObdaSpec {
    fn universe(&self) -> Vec<BasicConcept> {
        self.tbox.occurring_concepts()
    }
}
