use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

use super::{BasicConcept, Role};

/// A basic concept or a basic role.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Concept(BasicConcept),
    Role(Role),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Concept(c) => c.fmt(f),
            Expr::Role(r) => r.fmt(f),
        }
    }
}

/// `lhs ⊑ rhs`, or `lhs ⊑ ¬rhs` when `negated`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub lhs: Expr,
    pub rhs: Expr,
    pub negated: bool,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊑ {}{}", self.lhs, if self.negated { "¬" } else { "" }, self.rhs)
    }
}

/// A DL-Lite_R TBox with its positive inclusions closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TBox {
    concepts: Vec<String>,
    roles: Vec<String>,
    axioms: Vec<Axiom>,
    /// Everything each expression is subsumed by through positive axioms,
    /// itself included.
    up: BTreeMap<Expr, BTreeSet<Expr>>,
    unsat: BTreeSet<Expr>,
}

impl TBox {
    pub fn new(concepts: Vec<String>, roles: Vec<String>, axioms: Vec<Axiom>) -> Result<TBox> {
        let mut tbox = TBox {
            concepts,
            roles,
            axioms: Vec::new(),
            up: BTreeMap::new(),
            unsat: BTreeSet::new(),
        };
        for a in &axioms {
            tbox.check_expr(&a.lhs)?;
            tbox.check_expr(&a.rhs)?;
            if matches!(a.lhs, Expr::Concept(_)) != matches!(a.rhs, Expr::Concept(_)) {
                return Err(Error::format("TBox", format!("`{a}` relates a concept to a role")));
            }
        }
        tbox.axioms = axioms;
        tbox.close();
        Ok(tbox)
    }

    fn check_expr(&self, e: &Expr) -> Result<()> {
        let known = match e {
            Expr::Concept(BasicConcept::Atomic(a)) => self.concepts.contains(a),
            Expr::Concept(BasicConcept::Exists(r)) | Expr::Role(r) => self.roles.contains(&r.name),
        };
        if known {
            Ok(())
        } else {
            Err(Error::UnknownConcept(e.to_string()))
        }
    }

    /// Reads `A`, `exists P`, `exists P-`, `P` or `P-`, optionally prefixed
    /// by `!` for negation.
    pub fn parse_expr(&self, text: &str) -> Result<(Expr, bool)> {
        let text = text.trim();
        let (negated, text) = match text.strip_prefix('!') {
            Some(rest) => (true, rest.trim()),
            None => (false, text),
        };
        let role = |name: &str| -> Option<Role> {
            if self.roles.iter().any(|r| r == name) {
                Some(Role::new(name, false))
            } else {
                name.strip_suffix('-')
                    .filter(|base| self.roles.iter().any(|r| r == base))
                    .map(|base| Role::new(base, true))
            }
        };
        let expr = if let Some(r) = text.strip_prefix("exists ") {
            Expr::Concept(BasicConcept::Exists(
                role(r.trim()).ok_or_else(|| Error::UnknownConcept(text.to_string()))?,
            ))
        } else if self.concepts.iter().any(|c| c == text) {
            Expr::Concept(BasicConcept::Atomic(text.to_string()))
        } else if let Some(r) = role(text) {
            Expr::Role(r)
        } else {
            return Err(Error::UnknownConcept(text.to_string()));
        };
        Ok((expr, negated))
    }

    pub fn parse_concept(&self, text: &str) -> Result<BasicConcept> {
        match self.parse_expr(text)? {
            (Expr::Concept(c), false) => Ok(c),
            _ => Err(Error::format("basic concept", format!("`{text}` is not a basic concept"))),
        }
    }

    pub fn concept_names(&self) -> &[String] {
        &self.concepts
    }

    pub fn role_names(&self) -> &[String] {
        &self.roles
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    fn nodes(&self) -> Vec<Expr> {
        let mut out: Vec<Expr> = self
            .concepts
            .iter()
            .map(|c| Expr::Concept(BasicConcept::Atomic(c.clone())))
            .collect();
        for r in &self.roles {
            for inverse in [false, true] {
                out.push(Expr::Concept(BasicConcept::exists(r.clone(), inverse)));
                out.push(Expr::Role(Role::new(r.clone(), inverse)));
            }
        }
        out
    }

    fn close(&mut self) {
        let mut edges: BTreeMap<Expr, BTreeSet<Expr>> = BTreeMap::new();
        let mut disjoint: Vec<(Expr, Expr)> = Vec::new();
        for a in &self.axioms {
            let mut pairs = vec![(a.lhs.clone(), a.rhs.clone())];
            if let (Expr::Role(r), Expr::Role(s)) = (&a.lhs, &a.rhs) {
                pairs.push((Expr::Role(r.inverted()), Expr::Role(s.inverted())));
                if !a.negated {
                    for (x, y) in [(r.clone(), s.clone()), (r.inverted(), s.inverted())] {
                        pairs.push((
                            Expr::Concept(BasicConcept::Exists(x)),
                            Expr::Concept(BasicConcept::Exists(y)),
                        ));
                    }
                }
            }
            for (x, y) in pairs {
                if a.negated {
                    disjoint.push((x, y));
                } else {
                    edges.entry(x).or_default().insert(y);
                }
            }
        }
        let nodes = self.nodes();
        for n in &nodes {
            let mut seen = BTreeSet::from([n.clone()]);
            let mut stack = vec![n.clone()];
            while let Some(x) = stack.pop() {
                for y in edges.get(&x).into_iter().flatten() {
                    if seen.insert(y.clone()) {
                        stack.push(y.clone());
                    }
                }
            }
            self.up.insert(n.clone(), seen);
        }
        loop {
            let mut changed = false;
            for n in &nodes {
                if self.unsat.contains(n) {
                    continue;
                }
                let up = &self.up[n];
                let linked: Vec<Expr> = match n {
                    Expr::Role(r) => vec![
                        Expr::Role(r.inverted()),
                        Expr::Concept(BasicConcept::Exists(r.clone())),
                        Expr::Concept(BasicConcept::Exists(r.inverted())),
                    ],
                    Expr::Concept(BasicConcept::Exists(r)) => vec![Expr::Role(r.clone())],
                    Expr::Concept(BasicConcept::Atomic(_)) => Vec::new(),
                };
                let empty = up.iter().chain(&linked).any(|m| self.unsat.contains(m))
                    || disjoint.iter().any(|(x, y)| up.contains(x) && up.contains(y));
                if empty {
                    self.unsat.insert(n.clone());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// `T ⊨ c1 ⊑ c2`.
    pub fn subsumes(&self, c1: &BasicConcept, c2: &BasicConcept) -> Result<bool> {
        let (e1, e2) = (Expr::Concept(c1.clone()), Expr::Concept(c2.clone()));
        self.check_expr(&e1)?;
        self.check_expr(&e2)?;
        Ok(self.unsat.contains(&e1) || self.up[&e1].contains(&e2))
    }

    /// Whether the concept is empty in every model.
    pub fn is_unsatisfiable(&self, c: &BasicConcept) -> bool {
        self.unsat.contains(&Expr::Concept(c.clone()))
    }

    /// Basic concepts and roles that `e` is subsumed by through positive
    /// axioms, `e` included.
    pub(crate) fn supers(&self, e: &Expr) -> impl Iterator<Item = &Expr> {
        self.up.get(e).into_iter().flatten()
    }

    /// Pairs of expressions declared disjoint, in both directions of the
    /// inverse for roles.
    pub(crate) fn negative_axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(|a| a.negated)
    }

    /// The basic concepts written somewhere in the axioms: atomic concepts
    /// in declaration order, then `exists P` and `exists P-` per role.
    pub fn occurring_concepts(&self) -> Vec<BasicConcept> {
        let written: BTreeSet<&BasicConcept> = self
            .axioms
            .iter()
            .flat_map(|a| [&a.lhs, &a.rhs])
            .filter_map(|e| match e {
                Expr::Concept(c) => Some(c),
                Expr::Role(_) => None,
            })
            .collect();
        let mut out: Vec<BasicConcept> = self
            .concepts
            .iter()
            .map(|c| BasicConcept::Atomic(c.clone()))
            .filter(|c| written.contains(c))
            .collect();
        for r in &self.roles {
            for inverse in [false, true] {
                let c = BasicConcept::exists(r.clone(), inverse);
                if written.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }
}
