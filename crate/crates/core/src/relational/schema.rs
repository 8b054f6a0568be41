use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::query::Ucq;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub attributes: Vec<String>,
}

impl Relation {
    pub fn new(name: impl Into<String>, attributes: Vec<String>) -> Result<Self> {
        let name = name.into();
        if attributes.is_empty() {
            return Err(Error::format("schema", format!("relation `{name}` has no attributes")));
        }
        let mut seen = BTreeSet::new();
        for a in &attributes {
            if !seen.insert(a) {
                return Err(Error::format(
                    "schema",
                    format!("attribute `{a}` appears twice in `{name}`"),
                ));
            }
        }
        Ok(Relation { name, attributes })
    }

    pub fn arity(&self) -> usize {
        self.attributes.len()
    }

    /// Zero-based position of an attribute. A 1-based number is accepted
    /// as well, so `R.1` names the first column.
    pub fn position(&self, attribute: &str) -> Result<usize> {
        if let Some(i) = self.attributes.iter().position(|a| a == attribute) {
            return Ok(i);
        }
        match attribute.parse::<usize>() {
            Ok(n) if (1..=self.arity()).contains(&n) => Ok(n - 1),
            _ => Err(Error::UnknownAttribute {
                relation: self.name.clone(),
                attribute: attribute.to_string(),
            }),
        }
    }
}

/// `R: X -> Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalDependency {
    pub relation: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub(crate) lhs_positions: Vec<usize>,
    pub(crate) rhs_positions: Vec<usize>,
}

/// `R[A1..An] ⊆ S[B1..Bn]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionDependency {
    pub from: String,
    pub from_attrs: Vec<String>,
    pub to: String,
    pub to_attrs: Vec<String>,
    pub(crate) from_positions: Vec<usize>,
    pub(crate) to_positions: Vec<usize>,
    pub(crate) to_arity: usize,
}

/// `V(x) <-> q1(x) ∨ ... ∨ qk(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewDefinition {
    pub view: String,
    pub body: Ucq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    Fd(FunctionalDependency),
    Id(InclusionDependency),
    View(ViewDefinition),
}

impl fmt::Display for FunctionalDependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.relation, self.lhs.join(","), self.rhs.join(","))
    }
}

impl fmt::Display for InclusionDependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}] ⊆ {}[{}]",
            self.from,
            self.from_attrs.join(","),
            self.to,
            self.to_attrs.join(",")
        )
    }
}

impl fmt::Display for ViewDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "view {}: {}", self.view, self.body)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Fd(c) => write!(f, "FD {c}"),
            Constraint::Id(c) => write!(f, "ID {c}"),
            Constraint::View(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    relations: BTreeMap<String, Relation>,
    constraints: Vec<Constraint>,
}

impl Schema {
    /// Builds a schema, checking every constraint against the declared
    /// relations and the view dependency graph for cycles.
    pub fn new(relations: Vec<Relation>, constraints: Vec<Constraint>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for r in relations {
            if map.contains_key(&r.name) {
                return Err(Error::format("schema", format!("relation `{}` declared twice", r.name)));
            }
            map.insert(r.name.clone(), r);
        }
        let schema = Schema {
            relations: map,
            constraints,
        };
        schema.check()?;
        Ok(schema)
    }

    fn check(&self) -> Result<()> {
        let mut defined = BTreeSet::new();
        for c in &self.constraints {
            if let Constraint::View(v) = c {
                let rel = self.relation(&v.view)?;
                if !defined.insert(v.view.as_str()) {
                    return Err(Error::format(
                        "schema",
                        format!("view `{}` has more than one definition", v.view),
                    ));
                }
                if v.body.arity() != rel.arity() {
                    return Err(Error::Arity {
                        relation: v.view.clone(),
                        expected: rel.arity(),
                        found: v.body.arity(),
                    });
                }
                v.body.check(self)?;
            }
        }
        if let Some(cycle) = self.view_cycle() {
            return Err(Error::CyclicViews(cycle));
        }
        Ok(())
    }

    pub fn relation(&self, name: &str) -> Result<&Relation> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    pub fn relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.values()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn fds(&self) -> impl Iterator<Item = &FunctionalDependency> {
        self.constraints.iter().filter_map(|c| match c {
            Constraint::Fd(fd) => Some(fd),
            _ => None,
        })
    }

    pub fn ids(&self) -> impl Iterator<Item = &InclusionDependency> {
        self.constraints.iter().filter_map(|c| match c {
            Constraint::Id(id) => Some(id),
            _ => None,
        })
    }

    pub fn views(&self) -> impl Iterator<Item = &ViewDefinition> {
        self.constraints.iter().filter_map(|c| match c {
            Constraint::View(v) => Some(v),
            _ => None,
        })
    }

    pub fn view(&self, name: &str) -> Option<&ViewDefinition> {
        self.views().find(|v| v.view == name)
    }

    pub fn is_view(&self, name: &str) -> bool {
        self.view(name).is_some()
    }

    pub fn max_arity(&self) -> usize {
        self.relations.values().map(Relation::arity).max().unwrap_or(0)
    }

    /// The same relations with only the constraints `keep` accepts. Views
    /// whose definitions are dropped become base relations.
    pub fn restricted(&self, keep: impl Fn(&Constraint) -> bool) -> Schema {
        Schema {
            relations: self.relations.clone(),
            constraints: self.constraints.iter().filter(|c| keep(c)).cloned().collect(),
        }
    }

    /// Views ordered so that each comes after the views it depends on.
    pub fn view_order(&self) -> Vec<&ViewDefinition> {
        let mut order = Vec::new();
        let mut done = BTreeSet::new();
        fn visit<'s>(
            s: &'s Schema,
            v: &'s ViewDefinition,
            done: &mut BTreeSet<&'s str>,
            order: &mut Vec<&'s ViewDefinition>,
        ) {
            if !done.insert(v.view.as_str()) {
                return;
            }
            for dep in v.body.relations() {
                if let Some(d) = s.view(dep) {
                    visit(s, d, done, order);
                }
            }
            order.push(v);
        }
        for v in self.views() {
            visit(self, v, &mut done, &mut order);
        }
        order
    }

    fn view_cycle(&self) -> Option<Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn dfs<'s>(
            s: &'s Schema,
            name: &'s str,
            marks: &mut BTreeMap<&'s str, Mark>,
            stack: &mut Vec<&'s str>,
        ) -> Option<Vec<String>> {
            match marks.get(name) {
                Some(Mark::Done) => return None,
                Some(Mark::Active) => {
                    let start = stack.iter().position(|n| *n == name).unwrap_or(0);
                    let mut cycle: Vec<String> = stack[start..].iter().map(|n| n.to_string()).collect();
                    cycle.push(name.to_string());
                    return Some(cycle);
                }
                None => {}
            }
            marks.insert(name, Mark::Active);
            stack.push(name);
            if let Some(v) = s.view(name) {
                for dep in v.body.relations() {
                    if s.is_view(dep) {
                        if let Some(c) = dfs(s, dep, marks, stack) {
                            return Some(c);
                        }
                    }
                }
            }
            stack.pop();
            marks.insert(name, Mark::Done);
            None
        }
        let mut marks = BTreeMap::new();
        for v in self.views() {
            let mut stack = Vec::new();
            if let Some(c) = dfs(self, &v.view, &mut marks, &mut stack) {
                return Some(c);
            }
        }
        None
    }

    pub fn fd(&self, relation: &str, lhs: &[&str], rhs: &[&str]) -> Result<FunctionalDependency> {
        let rel = self.relation(relation)?;
        let resolve = |attrs: &[&str]| -> Result<Vec<usize>> { attrs.iter().map(|a| rel.position(a)).collect() };
        Ok(FunctionalDependency {
            relation: relation.to_string(),
            lhs: lhs.iter().map(|s| s.to_string()).collect(),
            rhs: rhs.iter().map(|s| s.to_string()).collect(),
            lhs_positions: resolve(lhs)?,
            rhs_positions: resolve(rhs)?,
        })
    }

    pub fn inclusion(
        &self,
        from: &str,
        from_attrs: &[&str],
        to: &str,
        to_attrs: &[&str],
    ) -> Result<InclusionDependency> {
        let r = self.relation(from)?;
        let s = self.relation(to)?;
        if from_attrs.len() != to_attrs.len() || from_attrs.is_empty() {
            return Err(Error::format(
                "schema",
                format!("inclusion dependency {from}[..] ⊆ {to}[..] needs equal, non-empty attribute lists"),
            ));
        }
        Ok(InclusionDependency {
            from: from.to_string(),
            from_attrs: from_attrs.iter().map(|s| s.to_string()).collect(),
            to: to.to_string(),
            to_attrs: to_attrs.iter().map(|s| s.to_string()).collect(),
            from_positions: from_attrs.iter().map(|a| r.position(a)).collect::<Result<_>>()?,
            to_positions: to_attrs.iter().map(|a| s.position(a)).collect::<Result<_>>()?,
            to_arity: s.arity(),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaFile {
    relations: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    fds: Vec<FdEntry>,
    #[serde(default)]
    ids: Vec<IdEntry>,
    #[serde(default)]
    views: Vec<ViewEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FdEntry {
    rel: String,
    lhs: Vec<String>,
    rhs: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdEntry {
    from: (String, Vec<String>),
    to: (String, Vec<String>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ViewEntry {
    rel: String,
    body: String,
}

impl Schema {
    /// Parses the JSON schema format.
    pub fn from_json(text: &str) -> Result<Schema> {
        let file: SchemaFile = serde_json::from_str(text)?;
        let relations = file
            .relations
            .into_iter()
            .map(|(name, attrs)| Relation::new(name, attrs))
            .collect::<Result<Vec<_>>>()?;
        let bare = Schema::new(relations.clone(), Vec::new())?;
        let mut constraints = Vec::new();
        for fd in &file.fds {
            let lhs: Vec<&str> = fd.lhs.iter().map(String::as_str).collect();
            let rhs: Vec<&str> = fd.rhs.iter().map(String::as_str).collect();
            constraints.push(Constraint::Fd(bare.fd(&fd.rel, &lhs, &rhs)?));
        }
        for id in &file.ids {
            let fa: Vec<&str> = id.from.1.iter().map(String::as_str).collect();
            let ta: Vec<&str> = id.to.1.iter().map(String::as_str).collect();
            constraints.push(Constraint::Id(bare.inclusion(&id.from.0, &fa, &id.to.0, &ta)?));
        }
        for v in file.views {
            let mut body = Ucq::parse(&v.body)?;
            if body.name != v.rel {
                return Err(Error::format(
                    "schema",
                    format!("view `{}` is defined by a rule with head `{}`", v.rel, body.name),
                ));
            }
            body.name = v.rel.clone();
            constraints.push(Constraint::View(ViewDefinition { view: v.rel, body }));
        }
        Schema::new(relations, constraints)
    }
}

pub fn load_schema(path: impl AsRef<Path>) -> Result<Schema> {
    let text = std::fs::read_to_string(path)?;
    Schema::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = include_str!("../../fixtures/trains/schema.json");

    #[test]
    fn train_schema() {
        let s = Schema::from_json(FIG1).unwrap();
        assert_eq!(s.relations().count(), 5);
        assert_eq!(s.constraints().len(), 7);
        assert_eq!(s.fds().count(), 1);
        assert_eq!(s.ids().count(), 3);
        assert_eq!(s.views().count(), 3);
        assert!(s.is_view("Reachable"));
        assert_eq!(s.relation("Cities").unwrap().position("continent").unwrap(), 3);
        assert_eq!(s.relation("Cities").unwrap().position("2").unwrap(), 1);
    }

    #[test]
    fn empty_constraints() {
        let s = Schema::from_json(r#"{"relations":{"R":["a"]}}"#).unwrap();
        assert!(s.constraints().is_empty());
    }

    #[test]
    fn cyclic_views_are_reported() {
        let err = Schema::from_json(
            r#"{"relations":{"A":["x"],"B":["x"],"R":["x"]},
                "views":[{"rel":"A","body":"A(x) :- B(x)"},{"rel":"B","body":"B(x) :- A(x); R(x)"}]}"#,
        )
        .unwrap_err();
        match err {
            Error::CyclicViews(cycle) => {
                assert_eq!(cycle.first(), cycle.last());
                assert!(cycle.contains(&"A".to_string()) && cycle.contains(&"B".to_string()));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_names_in_constraints() {
        let err = Schema::from_json(r#"{"relations":{"R":["a"]},"fds":[{"rel":"R","lhs":["a"],"rhs":["b"]}]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::UnknownAttribute { .. }));
        let err = Schema::from_json(r#"{"relations":{"R":["a"]},"ids":[{"from":["R",["a"]],"to":["S",["a"]]}]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::UnknownRelation(_)));
    }

    #[test]
    fn view_order_respects_dependencies() {
        let s = Schema::from_json(
            r#"{"relations":{"A":["x"],"B":["x"],"R":["x"]},
                "views":[{"rel":"A","body":"A(x) :- B(x)"},{"rel":"B","body":"B(x) :- R(x)"}]}"#,
        )
        .unwrap();
        let order: Vec<&str> = s.view_order().iter().map(|v| v.view.as_str()).collect();
        assert_eq!(order, vec!["B", "A"]);
    }
}
