use std::collections::BTreeSet;

use log::warn;

use crate::error::{Error, Result};
use crate::query::{chase_with_ids, contains_ucq, unfold_views, ChaseOutcome, ChaseTerm, Fact};
use crate::relational::{Constraint, Schema};

use super::{concept_to_query, AtomicConcept, Concept};

/// `C1 ⊑_S C2`: on every instance of the schema, the extension of `c1` is
/// contained in that of `c2`.
///
/// Supported constraint sets: none, view definitions only, or inclusion
/// dependencies only with selection-free concepts. Anything else is
/// reported as [`Error::UnsupportedConstraintClass`].
pub fn subsumed_by_schema(c1: &Concept, c2: &Concept, schema: &Schema) -> Result<bool> {
    let bound = schema.relations().count() * schema.max_arity();
    subsumed_by_schema_with_bound(c1, c2, schema, bound.max(1))
}

/// [`subsumed_by_schema`] with an explicit cap on chase rounds.
pub fn subsumed_by_schema_with_bound(c1: &Concept, c2: &Concept, schema: &Schema, chase_rounds: usize) -> Result<bool> {
    let named = |keep: fn(&Constraint) -> bool| -> Vec<String> {
        schema.constraints().iter().filter(|c| keep(c)).map(|c| c.to_string()).collect()
    };
    let fds = named(|c| matches!(c, Constraint::Fd(_)));
    if !fds.is_empty() {
        return Err(Error::UnsupportedConstraintClass(fds));
    }
    let has_ids = schema.ids().next().is_some();
    if has_ids && schema.views().next().is_some() {
        return Err(Error::UnsupportedConstraintClass(named(|c| {
            matches!(c, Constraint::Id(_) | Constraint::View(_))
        })));
    }
    if has_ids && (c1.has_selection() || c2.has_selection()) {
        let mut offending = named(|c| matches!(c, Constraint::Id(_)));
        offending.push("selections are not supported together with inclusion dependencies".into());
        return Err(Error::UnsupportedConstraintClass(offending));
    }
    if c2.is_top() {
        return Ok(true);
    }
    if c1.is_top() {
        return Ok(false);
    }
    if !has_ids {
        let q1 = unfold_views(&concept_to_query(c1, schema)?, schema)?;
        let q2 = unfold_views(&concept_to_query(c2, schema)?, schema)?;
        return Ok(contains_ucq(&q1, &q2));
    }
    by_chase(c1, c2, schema, chase_rounds)
}

/// Freezes `c1` into a canonical database around one element, chases it
/// with the inclusion dependencies and checks whether the element belongs
/// to `c2` there.
fn by_chase(c1: &Concept, c2: &Concept, schema: &Schema, rounds: usize) -> Result<bool> {
    let nominals: BTreeSet<_> = c1.nominals().collect();
    if nominals.len() > 1 {
        return Ok(true);
    }
    let element = match nominals.first() {
        Some(c) => ChaseTerm::Const((*c).clone()),
        None => ChaseTerm::Null(0),
    };
    let mut next_null = 1;
    let mut facts = BTreeSet::new();
    for p in c1.projections() {
        let arity = schema.relation(&p.relation)?.arity();
        let args = (0..arity)
            .map(|i| {
                if i == p.attr {
                    element.clone()
                } else {
                    next_null += 1;
                    ChaseTerm::Null(next_null - 1)
                }
            })
            .collect();
        facts.insert(Fact::new(p.relation.clone(), args));
    }
    let ids: Vec<_> = schema.ids().cloned().collect();
    let outcome = chase_with_ids(facts, &ids, rounds);
    let chased = outcome.facts();
    let holds = c2.conjuncts().iter().all(|conjunct| match conjunct {
        AtomicConcept::Top => true,
        AtomicConcept::Nominal(d) => element == ChaseTerm::Const(d.clone()),
        AtomicConcept::Proj(p) => chased
            .iter()
            .any(|f| f.relation == p.relation && f.args[p.attr] == element),
    });
    if let ChaseOutcome::BoundExceeded(_) = outcome {
        if !holds {
            warn!("chase stopped after {rounds} rounds; reporting `{c1}` not subsumed by `{c2}`");
        }
    }
    Ok(holds)
}
