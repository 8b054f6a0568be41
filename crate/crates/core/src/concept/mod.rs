//! The concept language L_S: `T`, nominals `{c}`, projections of selected
//! relations `R[A op c, ...].B`, and intersections `C & D`.

mod enumerate;
mod lub;
mod parse;
mod schema_subsumption;

use std::collections::BTreeSet;
use std::fmt;

pub use enumerate::{conjunction_closure, enumerate_concepts, intersection_closure, selections, EnumerateOptions};
pub use lub::{lub, lub_selection_free, lub_with_selections};
pub use parse::parse_concept;
pub use schema_subsumption::{subsumed_by_schema, subsumed_by_schema_with_bound};

use crate::error::{Error, Result};
use crate::query::{Atom, CmpOp, Comparison, ConjunctiveQuery, Term, Ucq};
use crate::relational::{Facts, Schema};
use crate::value::Constant;

/// `A op c` inside a selection. `attr` is the zero-based position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub attr: usize,
    pub attr_name: String,
    pub op: CmpOp,
    pub value: Constant,
}

impl Condition {
    pub fn holds(&self, row: &[Constant]) -> bool {
        self.op.holds(&row[self.attr], &self.value)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.attr_name, self.op, self.value.quoted())
    }
}

/// `π_attr(σ_selection(relation))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Projection {
    pub relation: String,
    pub attr: usize,
    pub attr_name: String,
    /// Sorted and free of duplicates.
    pub selection: Vec<Condition>,
}

impl Projection {
    pub fn new(relation: impl Into<String>, attr: usize, attr_name: impl Into<String>, mut selection: Vec<Condition>) -> Self {
        selection.sort();
        selection.dedup();
        Projection {
            relation: relation.into(),
            attr,
            attr_name: attr_name.into(),
            selection,
        }
    }

    fn values(&self, data: &impl Facts) -> BTreeSet<Constant> {
        let Some(rows) = data.tuples(&self.relation) else {
            return BTreeSet::new();
        };
        rows.iter()
            .filter(|r| self.selection.iter().all(|c| c.holds(r)))
            .map(|r| r[self.attr].clone())
            .collect()
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.relation)?;
        if !self.selection.is_empty() {
            let conds: Vec<String> = self.selection.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", conds.join(", "))?;
        }
        write!(f, ".{}", self.attr_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomicConcept {
    Top,
    Nominal(Constant),
    Proj(Projection),
}

impl fmt::Display for AtomicConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicConcept::Top => f.write_str("T"),
            AtomicConcept::Nominal(c) => {
                let bare = match c {
                    Constant::Number(_) => true,
                    Constant::Text(s) => {
                        !s.is_empty() && s.trim() == s && Constant::parse(s) == *c && !s.contains(['{', '}', '"', '\\'])
                    }
                };
                if bare {
                    write!(f, "{{{c}}}")
                } else {
                    write!(f, "{{{}}}", c.quoted())
                }
            }
            AtomicConcept::Proj(p) => p.fmt(f),
        }
    }
}

/// A conjunction of atomic concepts in canonical form: sorted, without
/// duplicates, and with `T` only when it is the sole conjunct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Concept {
    conjuncts: Vec<AtomicConcept>,
}

impl Concept {
    pub fn new(conjuncts: impl IntoIterator<Item = AtomicConcept>) -> Self {
        let mut conjuncts: Vec<AtomicConcept> = conjuncts
            .into_iter()
            .filter(|c| *c != AtomicConcept::Top)
            .collect();
        conjuncts.sort();
        conjuncts.dedup();
        if conjuncts.is_empty() {
            conjuncts.push(AtomicConcept::Top);
        }
        Concept { conjuncts }
    }

    pub fn top() -> Self {
        Concept::new([])
    }

    pub fn nominal(c: impl Into<Constant>) -> Self {
        Concept::new([AtomicConcept::Nominal(c.into())])
    }

    pub fn projection(p: Projection) -> Self {
        Concept::new([AtomicConcept::Proj(p)])
    }

    pub fn and(&self, other: &Concept) -> Concept {
        Concept::new(self.conjuncts.iter().chain(&other.conjuncts).cloned())
    }

    pub fn conjuncts(&self) -> &[AtomicConcept] {
        &self.conjuncts
    }

    pub fn is_top(&self) -> bool {
        self.conjuncts == [AtomicConcept::Top]
    }

    pub fn has_selection(&self) -> bool {
        self.projections().any(|p| !p.selection.is_empty())
    }

    pub fn projections(&self) -> impl Iterator<Item = &Projection> {
        self.conjuncts.iter().filter_map(|c| match c {
            AtomicConcept::Proj(p) => Some(p),
            _ => None,
        })
    }

    pub fn nominals(&self) -> impl Iterator<Item = &Constant> {
        self.conjuncts.iter().filter_map(|c| match c {
            AtomicConcept::Nominal(k) => Some(k),
            _ => None,
        })
    }

    /// Constants mentioned in nominals and selections.
    pub fn constants(&self) -> BTreeSet<Constant> {
        let mut out: BTreeSet<Constant> = self.nominals().cloned().collect();
        for p in self.projections() {
            out.extend(p.selection.iter().map(|c| c.value.clone()));
        }
        out
    }

    pub fn extension(&self, data: &impl Facts) -> Extension {
        self.conjuncts.iter().fold(Extension::All, |acc, c| {
            let ext = match c {
                AtomicConcept::Top => return acc,
                AtomicConcept::Nominal(k) => Extension::Finite(BTreeSet::from([k.clone()])),
                AtomicConcept::Proj(p) => Extension::Finite(p.values(data)),
            };
            acc.intersect(&ext)
        })
    }

    /// Number of symbols needed to write the concept: one for `T` or a
    /// nominal, three for `π_A(R)` plus three per selection condition, and
    /// one per intersection sign.
    pub fn symbol_length(&self) -> usize {
        let atoms: usize = self
            .conjuncts
            .iter()
            .map(|c| match c {
                AtomicConcept::Top | AtomicConcept::Nominal(_) => 1,
                AtomicConcept::Proj(p) => 3 + 3 * p.selection.len(),
            })
            .sum();
        atoms + self.conjuncts.len() - 1
    }

    pub fn in_fragment(&self, fragment: Fragment) -> bool {
        fragment.admits(self)
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            c.fmt(f)?;
        }
        Ok(())
    }
}

/// Sublanguages of L_S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    /// Neither selections nor intersections.
    Min,
    SelectionFree,
    IntersectionFree,
    Full,
}

impl Fragment {
    pub fn allows_selection(self) -> bool {
        matches!(self, Fragment::IntersectionFree | Fragment::Full)
    }

    pub fn allows_intersection(self) -> bool {
        matches!(self, Fragment::SelectionFree | Fragment::Full)
    }

    pub fn admits(self, c: &Concept) -> bool {
        (self.allows_selection() || !c.has_selection()) && (self.allows_intersection() || c.conjuncts.len() == 1)
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Min => "min",
            Fragment::SelectionFree => "selection-free",
            Fragment::IntersectionFree => "intersection-free",
            Fragment::Full => "full",
        })
    }
}

impl std::str::FromStr for Fragment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Fragment::Min),
            "selection-free" => Ok(Fragment::SelectionFree),
            "intersection-free" => Ok(Fragment::IntersectionFree),
            "full" => Ok(Fragment::Full),
            _ => Err(Error::format(
                "fragment",
                format!("`{s}` is not one of min, selection-free, intersection-free, full"),
            )),
        }
    }
}

/// The extension of a concept on an instance. `All` stands for the whole
/// (infinite) constant domain, the extension of `T`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extension {
    All,
    Finite(BTreeSet<Constant>),
}

impl Extension {
    pub fn contains(&self, c: &Constant) -> bool {
        match self {
            Extension::All => true,
            Extension::Finite(s) => s.contains(c),
        }
    }

    pub fn intersect(&self, other: &Extension) -> Extension {
        match (self, other) {
            (Extension::All, e) | (e, Extension::All) => e.clone(),
            (Extension::Finite(a), Extension::Finite(b)) => Extension::Finite(a.intersection(b).cloned().collect()),
        }
    }

    pub fn union(&self, other: &Extension) -> Extension {
        match (self, other) {
            (Extension::All, _) | (_, Extension::All) => Extension::All,
            (Extension::Finite(a), Extension::Finite(b)) => Extension::Finite(a.union(b).cloned().collect()),
        }
    }

    pub fn is_subset(&self, other: &Extension) -> bool {
        match (self, other) {
            (_, Extension::All) => true,
            (Extension::All, Extension::Finite(_)) => false,
            (Extension::Finite(a), Extension::Finite(b)) => a.is_subset(b),
        }
    }

    /// `None` for `All`.
    pub fn len(&self) -> Option<usize> {
        match self {
            Extension::All => None,
            Extension::Finite(s) => Some(s.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn as_finite(&self) -> Option<&BTreeSet<Constant>> {
        match self {
            Extension::All => None,
            Extension::Finite(s) => Some(s),
        }
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extension::All => f.write_str("<all constants>"),
            Extension::Finite(s) => {
                let items: Vec<String> = s.iter().map(|c| c.to_string()).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
        }
    }
}

/// `C1 ⊑_I C2`: the extension of `c1` on the instance is contained in that of `c2`.
pub fn subsumed_by_instance(c1: &Concept, c2: &Concept, data: &impl Facts) -> bool {
    c1.extension(data).is_subset(&c2.extension(data))
}

/// The unary query `q(x)` whose answers are the concept's extension.
/// Nominals become `x = c`. `T` alone has no such query.
pub fn concept_to_query(c: &Concept, schema: &Schema) -> Result<Ucq> {
    if c.is_top() {
        return Err(Error::IllFormedQuery("T denotes every constant and has no query".into()));
    }
    let x = "x".to_string();
    let mut atoms = Vec::new();
    let mut comparisons = Vec::new();
    for (i, conjunct) in c.conjuncts.iter().enumerate() {
        match conjunct {
            AtomicConcept::Top => {}
            AtomicConcept::Nominal(k) => comparisons.push(Comparison {
                var: x.clone(),
                op: CmpOp::Eq,
                value: k.clone(),
            }),
            AtomicConcept::Proj(p) => {
                let arity = schema.relation(&p.relation)?.arity();
                let var = |j: usize| if j == p.attr { x.clone() } else { format!("v{i}_{j}") };
                atoms.push(Atom::new(p.relation.clone(), (0..arity).map(|j| Term::Var(var(j))).collect()));
                for s in &p.selection {
                    comparisons.push(Comparison {
                        var: var(s.attr),
                        op: s.op,
                        value: s.value.clone(),
                    });
                }
            }
        }
    }
    Ok(Ucq::single(ConjunctiveQuery::new(vec![Term::Var(x)], atoms, comparisons)))
}

/// Drops conjuncts, in canonical order, whose removal leaves the extension
/// unchanged. The result is equivalent on the instance and irredundant.
pub fn minimize_irredundant(c: &Concept, data: &impl Facts) -> Concept {
    let target = c.extension(data);
    let mut keep: Vec<AtomicConcept> = c.conjuncts.clone();
    let mut i = 0;
    while i < keep.len() {
        let mut without = keep.clone();
        without.remove(i);
        if !without.is_empty() && Concept::new(without.clone()).extension(data) == target {
            keep = without;
        } else {
            i += 1;
        }
    }
    Concept::new(keep)
}
