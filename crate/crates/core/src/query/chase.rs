use std::collections::BTreeSet;
use std::fmt;

use crate::relational::InclusionDependency;
use crate::value::Constant;

/// A constant or a labeled null introduced by the chase.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChaseTerm {
    Const(Constant),
    Null(u32),
}

impl fmt::Display for ChaseTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChaseTerm::Const(c) => write!(f, "{c}"),
            ChaseTerm::Null(n) => write!(f, "_N{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub relation: String,
    pub args: Vec<ChaseTerm>,
}

impl Fact {
    pub fn new(relation: impl Into<String>, args: Vec<ChaseTerm>) -> Self {
        Fact {
            relation: relation.into(),
            args,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
        write!(f, "{}({})", self.relation, args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChaseOutcome {
    Fixpoint(BTreeSet<Fact>),
    /// The round limit was hit; the facts are sound but possibly incomplete.
    BoundExceeded(BTreeSet<Fact>),
}

impl ChaseOutcome {
    pub fn facts(&self) -> &BTreeSet<Fact> {
        match self {
            ChaseOutcome::Fixpoint(f) | ChaseOutcome::BoundExceeded(f) => f,
        }
    }

    pub fn is_fixpoint(&self) -> bool {
        matches!(self, ChaseOutcome::Fixpoint(_))
    }
}

/// Restricted chase: a fact triggers an ID only when no fact of the target
/// relation already carries the projected values. Each round fires every
/// active trigger; `max_rounds` caps the number of rounds.
pub fn chase_with_ids(
    facts: BTreeSet<Fact>,
    ids: &[InclusionDependency],
    max_rounds: usize,
) -> ChaseOutcome {
    let mut facts = facts;
    let mut next_null = facts
        .iter()
        .flat_map(|f| f.args.iter())
        .filter_map(|t| match t {
            ChaseTerm::Null(n) => Some(n + 1),
            ChaseTerm::Const(_) => None,
        })
        .max()
        .unwrap_or(0);
    for _ in 0..max_rounds {
        let mut added = Vec::new();
        for id in ids {
            let present: BTreeSet<Vec<&ChaseTerm>> = facts
                .iter()
                .filter(|f| f.relation == id.to)
                .map(|f| id.to_positions.iter().map(|&p| &f.args[p]).collect())
                .collect();
            let mut needed: BTreeSet<Vec<ChaseTerm>> = BTreeSet::new();
            for f in facts.iter().filter(|f| f.relation == id.from) {
                let key: Vec<&ChaseTerm> = id.from_positions.iter().map(|&p| &f.args[p]).collect();
                if !present.contains(&key) {
                    needed.insert(key.into_iter().cloned().collect());
                }
            }
            for key in needed {
                let mut args: Vec<Option<ChaseTerm>> = vec![None; id.to_arity];
                for (&p, value) in id.to_positions.iter().zip(key) {
                    args[p] = Some(value);
                }
                let args = args
                    .into_iter()
                    .map(|a| {
                        a.unwrap_or_else(|| {
                            next_null += 1;
                            ChaseTerm::Null(next_null - 1)
                        })
                    })
                    .collect();
                added.push(Fact::new(id.to.clone(), args));
            }
        }
        let before = facts.len();
        facts.extend(added);
        if facts.len() == before {
            return ChaseOutcome::Fixpoint(facts);
        }
    }
    if satisfies_all(&facts, ids) {
        ChaseOutcome::Fixpoint(facts)
    } else {
        ChaseOutcome::BoundExceeded(facts)
    }
}

/// Whether every ID holds on `facts`.
pub(crate) fn satisfies_all(facts: &BTreeSet<Fact>, ids: &[InclusionDependency]) -> bool {
    ids.iter().all(|id| {
        let present: BTreeSet<Vec<&ChaseTerm>> = facts
            .iter()
            .filter(|f| f.relation == id.to)
            .map(|f| id.to_positions.iter().map(|&p| &f.args[p]).collect())
            .collect();
        facts
            .iter()
            .filter(|f| f.relation == id.from)
            .all(|f| present.contains(&id.from_positions.iter().map(|&p| &f.args[p]).collect::<Vec<_>>()))
    })
}
