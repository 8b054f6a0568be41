use std::collections::BTreeSet;

use crate::concept::{
    conjunction_closure, enumerate_concepts, intersection_closure, lub, minimize_irredundant, AtomicConcept, Concept, EnumerateOptions,
    Extension, Fragment,
};
use crate::error::{Error, Result};
use crate::ontology::{Ontology, SchemaOntology};
use crate::relational::Instance;
use crate::value::Constant;

use super::exhaustive::exhaustive_over;
use super::{Explanation, WhyNotInstance};

fn lub_ext(
    w: &WhyNotInstance<'_>,
    fragment: Fragment,
    x: &BTreeSet<Constant>,
    budget: usize,
) -> Result<(Concept, Extension)> {
    let c = lub(fragment, w.instance.schema(), w.instance, x, budget)?;
    let e = c.extension(w.instance);
    Ok((c, e))
}

/// Incremental search over O_I for the selection-free or full fragment.
/// Each position starts from the least upper bound of its own constant and
/// absorbs the constants of the active domain, in sorted order, whenever
/// the least upper bound of the enlarged set still gives an explanation.
/// Finally `T` is tried, which covers constants outside the active domain.
pub fn incremental_mge(w: &WhyNotInstance<'_>, fragment: Fragment, budget: usize) -> Result<Explanation<Concept>> {
    if w.arity() == 0 {
        return Err(Error::NoExplanation);
    }
    let mut support: Vec<BTreeSet<Constant>> = w.tuple.iter().map(|a| BTreeSet::from([a.clone()])).collect();
    let mut concepts = Vec::new();
    let mut exts = Vec::new();
    for x in &support {
        let (c, e) = lub_ext(w, fragment, x, budget)?;
        concepts.push(c);
        exts.push(e);
    }
    for j in 0..w.arity() {
        for b in w.instance.adom() {
            if exts[j].contains(b) {
                continue;
            }
            let mut x = support[j].clone();
            x.insert(b.clone());
            let (c, e) = lub_ext(w, fragment, &x, budget)?;
            let mut trial = exts.clone();
            trial[j] = e;
            if w.explained_by(&trial) {
                support[j] = x;
                concepts[j] = c;
                exts = trial;
            }
        }
        if exts[j] != Extension::All {
            let mut trial = exts.clone();
            trial[j] = Extension::All;
            if w.explained_by(&trial) {
                concepts[j] = Concept::top();
                exts = trial;
            }
        }
    }
    Ok(Explanation(concepts))
}

/// Whether `e` is a most-general explanation w.r.t. O_I for the fragment.
/// Any strictly more general concept at position j either is `T` or
/// covers some active-domain constant b outside the current extension, and
/// then lies above the least upper bound of that extension plus b. So it
/// suffices to try those least upper bounds and `T`.
pub fn check_mge_oi(
    w: &WhyNotInstance<'_>,
    e: &Explanation<Concept>,
    fragment: Fragment,
    budget: usize,
) -> Result<bool> {
    w.check_arity(e)?;
    let exts: Vec<Extension> = e.0.iter().map(|c| c.extension(w.instance)).collect();
    if !w.explained_by(&exts) {
        return Ok(false);
    }
    for j in 0..w.arity() {
        let Extension::Finite(base) = &exts[j] else {
            continue;
        };
        let mut trial = exts.clone();
        trial[j] = Extension::All;
        if w.explained_by(&trial) {
            return Ok(false);
        }
        for b in w.instance.adom().difference(base) {
            let mut x = base.clone();
            x.insert(b.clone());
            trial[j] = lub_ext(w, fragment, &x, budget)?.1;
            if w.explained_by(&trial) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A finite stand-in for the fragment's concepts over the instance: the
/// atomic concepts over the constants of `w`, closed under intersection
/// (one concept per extension) when the fragment allows conjunction. Every
/// concept of the fragment over those constants is equivalent on the
/// instance to a member.
pub fn instance_universe(w: &WhyNotInstance<'_>, fragment: Fragment, budget: usize) -> Result<Vec<Concept>> {
    let options = EnumerateOptions {
        dedup_by_extension: false,
        budget,
    };
    let atoms = enumerate_concepts(fragment, w.instance.schema(), &w.pool(), w.instance, options)?;
    if fragment.allows_intersection() {
        intersection_closure(&atoms, w.instance, budget)
    } else {
        Ok(atoms)
    }
}

/// Candidate concepts per position for the O_S search: `T`, the nominal of
/// the component and the projections holding it, conjoined in every
/// combination for the selection-free fragment. Conjunctions with other
/// nominals are left out: they are either empty on the instance or
/// equivalent there to the bare nominal, which is more general on every
/// instance.
pub fn os_candidates(w: &WhyNotInstance<'_>, fragment: Fragment, budget: usize) -> Result<Vec<Vec<Concept>>> {
    if !matches!(fragment, Fragment::Min | Fragment::SelectionFree) {
        return Err(Error::UnsupportedFragment {
            fragment: fragment.to_string(),
            operation: "schema-level explanation search",
        });
    }
    let atoms = enumerate_concepts(
        Fragment::Min,
        w.instance.schema(),
        &BTreeSet::new(),
        w.instance,
        EnumerateOptions {
            dedup_by_extension: false,
            budget,
        },
    )?;
    let projections: Vec<Concept> = atoms
        .into_iter()
        .filter(|c| matches!(c.conjuncts(), [AtomicConcept::Proj(_)]))
        .collect();
    let mut out = Vec::new();
    for a in &w.tuple {
        let holding: Vec<&Concept> = projections.iter().filter(|c| c.extension(w.instance).contains(a)).collect();
        let mut list = vec![Concept::top(), Concept::nominal(a.clone())];
        if fragment == Fragment::Min {
            list.extend(holding.into_iter().cloned());
        } else {
            let n = holding.len();
            if n >= usize::BITS as usize - 1 || (1usize << n) > budget {
                return Err(Error::BudgetExceeded {
                    limit: budget,
                    during: "forming conjunctions of projections",
                });
            }
            for mask in 1usize..(1 << n) {
                let parts = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| holding[i].clone());
                list.push(parts.fold(Concept::top(), |acc, c| acc.and(&c)));
            }
        }
        out.push(list);
    }
    Ok(out)
}

/// Most-general explanations w.r.t. O_S over the constants of the instance
/// and the tuple, by exhaustive search with schema-level subsumption.
pub fn compute_mge_os(
    w: &WhyNotInstance<'_>,
    ontology: &SchemaOntology,
    budget: usize,
) -> Result<Vec<Explanation<Concept>>> {
    // surfaces an unsupported constraint class before any work
    ontology.subsumes(&Concept::top(), &Concept::top())?;
    let lists = os_candidates(w, ontology.fragment, budget)?;
    exhaustive_over(w, ontology, &lists, budget)
}

/// Shortens each concept while keeping its extension on `instance`: first
/// the irredundant form, then the shortest conjunction of enumerated
/// concepts with the same extension if one is shorter. The search is
/// bounded by `budget` and falls back to the irredundant form.
pub fn minimize_equivalent_length(e: &Explanation<Concept>, instance: &Instance, budget: usize) -> Explanation<Concept> {
    Explanation(e.0.iter().map(|c| shortest_equivalent(c, instance, budget)).collect())
}

fn shortest_equivalent(c: &Concept, instance: &Instance, budget: usize) -> Concept {
    let irredundant = minimize_irredundant(c, instance);
    if irredundant.symbol_length() <= 1 {
        return irredundant;
    }
    let target = c.extension(instance);
    let fragment = if c.has_selection() {
        Fragment::Full
    } else {
        Fragment::SelectionFree
    };
    let mut pool = instance.adom().clone();
    pool.extend(c.constants());
    let options = EnumerateOptions {
        dedup_by_extension: false,
        budget,
    };
    let Ok(atoms) = enumerate_concepts(fragment, instance.schema(), &pool, instance, options) else {
        return irredundant;
    };
    // every conjunct of an equivalent concept contains the target
    let atoms: Vec<Concept> = atoms
        .into_iter()
        .filter(|a| !a.is_top() && target.is_subset(&a.extension(instance)))
        .collect();
    let size = irredundant.conjuncts().len();
    let Ok(pool) = conjunction_closure(&atoms, size, instance, options) else {
        return irredundant;
    };
    pool.into_iter()
        .filter(|d| d.extension(instance) == target)
        .chain([irredundant])
        .min_by(|a, b| a.symbol_length().cmp(&b.symbol_length()).then_with(|| a.cmp(b)))
        .expect("the irredundant form is always a candidate")
}
