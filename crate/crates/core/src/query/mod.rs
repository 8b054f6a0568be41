//! Conjunctive queries with constant comparisons, and unions of them.
//!
//! Text syntax: `q(x,y) :- TC(x,z), TC(z,y), y >= 5.` Atoms and comparison
//! literals are comma-separated; disjuncts of a union are separated by `;`
//! and may repeat the head. Bare identifiers are variables, constants are
//! numbers or double-quoted strings.

mod chase;
mod containment;
mod eval;
mod parse;
mod unfold;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use chase::{chase_with_ids, ChaseOutcome, ChaseTerm, Fact};
pub use containment::{contains_cq, contains_ucq};
pub use eval::{eval_cq, eval_ucq};
pub use unfold::unfold_views;

use crate::error::{Error, Result};
use crate::relational::Schema;
use crate::value::Constant;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(Constant),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => f.write_str(&query_literal(c)),
        }
    }
}

/// Text constants are always quoted in query syntax, since bare words are
/// variables there.
pub(crate) fn query_literal(c: &Constant) -> String {
    match c {
        Constant::Number(_) => c.to_string(),
        Constant::Text(s) => format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub relation: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(relation: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            relation: relation.into(),
            args,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Lt,
    Gt,
    Le,
    Ge,
}

impl CmpOp {
    pub fn holds(self, left: &Constant, right: &Constant) -> bool {
        match self {
            CmpOp::Eq => left == right,
            CmpOp::Lt => left < right,
            CmpOp::Gt => left > right,
            CmpOp::Le => left <= right,
            CmpOp::Ge => left >= right,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
        }
    }

    pub const ALL: [CmpOp; 5] = [CmpOp::Eq, CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge];
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `var op constant`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comparison {
    pub var: String,
    pub op: CmpOp,
    pub value: Constant,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.var, self.op, query_literal(&self.value))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjunctiveQuery {
    pub head: Vec<Term>,
    pub atoms: Vec<Atom>,
    pub comparisons: Vec<Comparison>,
}

impl ConjunctiveQuery {
    pub fn new(head: Vec<Term>, atoms: Vec<Atom>, comparisons: Vec<Comparison>) -> Self {
        ConjunctiveQuery {
            head,
            atoms,
            comparisons,
        }
    }

    /// A query with no answers on any instance.
    pub fn unsatisfiable(arity: usize) -> Self {
        let head: Vec<Term> = (0..arity).map(|i| Term::var(format!("_e{i}"))).collect();
        let mut comparisons: Vec<Comparison> = (0..arity)
            .map(|i| Comparison {
                var: format!("_e{i}"),
                op: CmpOp::Eq,
                value: Constant::int(0),
            })
            .collect();
        for value in [0, 1] {
            comparisons.push(Comparison {
                var: "_e".into(),
                op: CmpOp::Eq,
                value: Constant::int(value),
            });
        }
        ConjunctiveQuery::new(head, Vec::new(), comparisons)
    }

    pub fn arity(&self) -> usize {
        self.head.len()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        let terms = self.head.iter().chain(self.atoms.iter().flat_map(|a| a.args.iter()));
        for t in terms {
            if let Term::Var(v) = t {
                vars.insert(v.clone());
            }
        }
        vars.extend(self.comparisons.iter().map(|c| c.var.clone()));
        vars
    }

    /// Variables occurring in some atom.
    pub fn body_variables(&self) -> BTreeSet<&str> {
        self.atoms
            .iter()
            .flat_map(|a| a.args.iter())
            .filter_map(Term::as_var)
            .collect()
    }

    /// Safety: every variable occurs in an atom or is pinned by an equality
    /// comparison.
    pub fn check_safe(&self) -> Result<()> {
        let body = self.body_variables();
        let pinned: BTreeSet<&str> = self
            .comparisons
            .iter()
            .filter(|c| c.op == CmpOp::Eq)
            .map(|c| c.var.as_str())
            .collect();
        for v in self.variables() {
            if !body.contains(v.as_str()) && !pinned.contains(v.as_str()) {
                return Err(Error::IllFormedQuery(format!(
                    "variable `{v}` is not bound by any atom in `{self}`"
                )));
            }
        }
        Ok(())
    }

    /// Checks relation names and arities against a schema, plus safety.
    pub fn check(&self, schema: &Schema) -> Result<()> {
        for atom in &self.atoms {
            let rel = schema.relation(&atom.relation)?;
            if rel.arity() != atom.args.len() {
                return Err(Error::Arity {
                    relation: atom.relation.clone(),
                    expected: rel.arity(),
                    found: atom.args.len(),
                });
            }
        }
        self.check_safe()
    }

    /// Applies a variable substitution to every position. Comparisons on
    /// variables replaced by constants are decided on the spot; `None` means
    /// one of them failed and the query is empty.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Option<ConjunctiveQuery> {
        let sub = |t: &Term| match t {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        };
        let mut comparisons = Vec::new();
        for c in &self.comparisons {
            match map.get(&c.var) {
                Some(Term::Var(v)) => comparisons.push(Comparison {
                    var: v.clone(),
                    op: c.op,
                    value: c.value.clone(),
                }),
                Some(Term::Const(k)) => {
                    if !c.op.holds(k, &c.value) {
                        return None;
                    }
                }
                None => comparisons.push(c.clone()),
            }
        }
        Some(ConjunctiveQuery {
            head: self.head.iter().map(sub).collect(),
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom::new(a.relation.clone(), a.args.iter().map(sub).collect()))
                .collect(),
            comparisons,
        })
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_head(f, "q", &self.head)?;
        f.write_str(" :- ")?;
        write_body(f, self)
    }
}

fn write_head(f: &mut fmt::Formatter<'_>, name: &str, head: &[Term]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, t) in head.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    f.write_str(")")
}

fn write_body(f: &mut fmt::Formatter<'_>, q: &ConjunctiveQuery) -> fmt::Result {
    let mut first = true;
    for a in &q.atoms {
        if !first {
            f.write_str(", ")?;
        }
        first = false;
        write!(f, "{a}")?;
    }
    for c in &q.comparisons {
        if !first {
            f.write_str(", ")?;
        }
        first = false;
        write!(f, "{c}")?;
    }
    if first {
        f.write_str("true")?;
    }
    Ok(())
}

/// Union of conjunctive queries sharing one head arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ucq {
    pub name: String,
    pub disjuncts: Vec<ConjunctiveQuery>,
}

impl Ucq {
    pub fn new(name: impl Into<String>, disjuncts: Vec<ConjunctiveQuery>) -> Result<Self> {
        let name = name.into();
        let Some(first) = disjuncts.first() else {
            return Err(Error::IllFormedQuery(format!("`{name}` has no disjuncts")));
        };
        let arity = first.arity();
        if let Some(bad) = disjuncts.iter().find(|d| d.arity() != arity) {
            return Err(Error::IllFormedQuery(format!(
                "disjunct `{bad}` has arity {}, expected {arity}",
                bad.arity()
            )));
        }
        Ok(Ucq { name, disjuncts })
    }

    pub fn single(q: ConjunctiveQuery) -> Self {
        Ucq {
            name: "q".into(),
            disjuncts: vec![q],
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse::parse_ucq(text)
    }

    pub fn arity(&self) -> usize {
        self.disjuncts[0].arity()
    }

    pub fn check(&self, schema: &Schema) -> Result<()> {
        self.disjuncts.iter().try_for_each(|d| d.check(schema))
    }

    pub fn relations(&self) -> BTreeSet<&str> {
        self.disjuncts
            .iter()
            .flat_map(|d| d.atoms.iter().map(|a| a.relation.as_str()))
            .collect()
    }
}

impl fmt::Display for Ucq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write_head(f, &self.name, &d.head)?;
            f.write_str(" :- ")?;
            write_body(f, d)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Ucq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ucq::parse(s)
    }
}

pub use parse::parse_body;
pub(crate) use parse::parse_atom_text;
