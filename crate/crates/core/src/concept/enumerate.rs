use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::query::CmpOp;
use crate::relational::{Facts, Relation, Schema};
use crate::value::{Constant, Tuple};

use super::{Concept, Condition, Extension, Fragment, Projection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Keep one concept (the first in canonical order) per extension on the
    /// instance instead of one per syntactic form.
    pub dedup_by_extension: bool,
    /// Upper bound on the number of concepts (and intermediate row sets).
    pub budget: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            dedup_by_extension: false,
            budget: 100_000,
        }
    }
}

fn over_budget(limit: usize, during: &'static str) -> Error {
    Error::BudgetExceeded { limit, during }
}

/// The atomic concepts of a fragment over the constant pool `pool`: `T`, a
/// nominal per pool constant and every projection of every relation. When
/// the fragment has selections, a projection is listed once per distinct
/// non-empty row set a selection can carve out of the relation, written as
/// its tightest box over the column values; one empty-extension concept
/// stands in for all unsatisfiable selections.
///
/// Intersections are not formed here, see [`conjunction_closure`].
pub fn enumerate_concepts(
    fragment: Fragment,
    schema: &Schema,
    pool: &BTreeSet<Constant>,
    data: &impl Facts,
    options: EnumerateOptions,
) -> Result<Vec<Concept>> {
    let mut out = vec![Concept::top()];
    out.extend(pool.iter().cloned().map(Concept::nominal));
    let empty = BTreeSet::new();
    for rel in schema.relations() {
        let rows = data.tuples(&rel.name).unwrap_or(&empty);
        let boxes = if fragment.allows_selection() {
            selections(rel, rows, options.budget)?
        } else {
            vec![Vec::new()]
        };
        for attr in 0..rel.arity() {
            for selection in &boxes {
                out.push(Concept::projection(Projection::new(
                    rel.name.clone(),
                    attr,
                    rel.attributes[attr].clone(),
                    selection.clone(),
                )));
                if out.len() > options.budget {
                    return Err(over_budget(options.budget, "enumerating concepts"));
                }
            }
        }
    }
    if fragment.allows_selection() {
        if let Some(c) = empty_concept(schema, data) {
            out.push(c);
        }
    }
    out.sort();
    out.dedup();
    if options.dedup_by_extension {
        out = dedup_by_extension(out, data);
    }
    Ok(out)
}

/// Keeps the first concept of each extension class, preserving order.
pub(crate) fn dedup_by_extension(concepts: Vec<Concept>, data: &impl Facts) -> Vec<Concept> {
    let mut seen = BTreeSet::new();
    concepts
        .into_iter()
        .filter(|c| seen.insert(c.extension(data)))
        .collect()
}

/// `R[A<m].A` with `m` the least value of the column: a selection no row
/// satisfies. Absent when every relation is empty, in which case plain
/// projections already have empty extensions.
fn empty_concept(schema: &Schema, data: &impl Facts) -> Option<Concept> {
    schema.relations().find_map(|rel| {
        let min = data.tuples(&rel.name)?.iter().map(|r| &r[0]).min()?;
        Some(Concept::projection(Projection::new(
            rel.name.clone(),
            0,
            rel.attributes[0].clone(),
            vec![Condition {
                attr: 0,
                attr_name: rel.attributes[0].clone(),
                op: CmpOp::Lt,
                value: min.clone(),
            }],
        )))
    })
}

/// One selection per distinct non-empty set of rows that a conjunction of
/// per-attribute interval conditions selects from `rows`. The empty
/// selection (all rows) comes first when `rows` is non-empty.
pub fn selections(rel: &Relation, rows: &BTreeSet<Tuple>, budget: usize) -> Result<Vec<Vec<Condition>>> {
    let rows: Vec<&Tuple> = rows.iter().collect();
    if rows.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let columns: Vec<Vec<&Constant>> = (0..rel.arity())
        .map(|a| {
            let vals: BTreeSet<&Constant> = rows.iter().map(|r| &r[a]).collect();
            vals.into_iter().collect()
        })
        .collect();
    let mut stage: BTreeSet<Vec<usize>> = BTreeSet::from([(0..rows.len()).collect()]);
    for (a, vals) in columns.iter().enumerate() {
        let mut next = BTreeSet::new();
        for set in &stage {
            for lo in 0..vals.len() {
                for hi in lo..vals.len() {
                    let kept: Vec<usize> = set
                        .iter()
                        .copied()
                        .filter(|&i| (vals[lo]..=vals[hi]).contains(&&rows[i][a]))
                        .collect();
                    if !kept.is_empty() {
                        next.insert(kept);
                    }
                }
            }
            if next.len() > budget {
                return Err(over_budget(budget, "enumerating selections"));
            }
        }
        stage = next;
    }
    let mut out: Vec<Vec<Condition>> = stage
        .iter()
        .map(|set| tight_box(rel, &columns, set.iter().map(|&i| rows[i])))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// The smallest per-attribute box around `chosen`, omitting attributes whose
/// box spans the whole column.
pub(crate) fn tight_box<'a>(
    rel: &Relation,
    columns: &[Vec<&Constant>],
    chosen: impl Iterator<Item = &'a Tuple> + Clone,
) -> Vec<Condition> {
    let mut out = Vec::new();
    for (a, vals) in columns.iter().enumerate() {
        let (Some(lo), Some(hi)) = (chosen.clone().map(|r| &r[a]).min(), chosen.clone().map(|r| &r[a]).max()) else {
            continue;
        };
        let (col_min, col_max) = (vals[0], vals[vals.len() - 1]);
        let cond = |op, value: &Constant| Condition {
            attr: a,
            attr_name: rel.attributes[a].clone(),
            op,
            value: value.clone(),
        };
        if lo == col_min && hi == col_max {
            continue;
        }
        if lo == hi {
            out.push(cond(CmpOp::Eq, lo));
        } else if lo == col_min {
            out.push(cond(CmpOp::Le, hi));
        } else if hi == col_max {
            out.push(cond(CmpOp::Ge, lo));
        } else {
            out.push(cond(CmpOp::Ge, lo));
            out.push(cond(CmpOp::Le, hi));
        }
    }
    out
}

/// Every conjunction of at most `max_size` concepts from `atoms` (the atoms
/// themselves included), canonical and without duplicates. With
/// `dedup_by_extension`, one conjunction per extension is kept, preferring
/// fewer conjuncts.
pub fn conjunction_closure(
    atoms: &[Concept],
    max_size: usize,
    data: &impl Facts,
    options: EnumerateOptions,
) -> Result<Vec<Concept>> {
    let atoms: Vec<&Concept> = {
        let set: BTreeSet<&Concept> = atoms.iter().collect();
        set.into_iter().collect()
    };
    let mut seen: BTreeSet<Concept> = BTreeSet::new();
    let mut by_ext: BTreeSet<Extension> = BTreeSet::new();
    let mut out = Vec::new();
    // layer k holds (index of last atom used, conjunction)
    let mut layer: Vec<(usize, Concept)> = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        layer.push((i, (*a).clone()));
    }
    for size in 1..=max_size {
        let mut next = Vec::new();
        for (last, c) in &layer {
            if seen.insert(c.clone()) {
                let keep = !options.dedup_by_extension || by_ext.insert(c.extension(data));
                if keep {
                    out.push(c.clone());
                    if out.len() > options.budget {
                        return Err(over_budget(options.budget, "forming conjunctions"));
                    }
                }
            }
            if size < max_size {
                for (j, a) in atoms.iter().enumerate().skip(last + 1) {
                    next.push((j, c.and(a)));
                }
                if next.len() > options.budget {
                    return Err(over_budget(options.budget, "forming conjunctions"));
                }
            }
        }
        layer = next;
    }
    Ok(out)
}

/// One concept per extension reachable by intersecting the atoms' extensions,
/// computed to a fixpoint. Each extension keeps the first representative
/// found, which has the fewest conjuncts. Fails once more than `budget`
/// extensions exist.
pub fn intersection_closure(atoms: &[Concept], data: &impl Facts, budget: usize) -> Result<Vec<Concept>> {
    let mut by_ext: BTreeMap<Extension, Concept> = BTreeMap::new();
    let mut frontier = Vec::new();
    let mut sorted: Vec<&Concept> = atoms.iter().collect();
    sorted.sort_by(|a, b| a.conjuncts().len().cmp(&b.conjuncts().len()).then_with(|| a.cmp(b)));
    for a in sorted {
        let e = a.extension(data);
        if !by_ext.contains_key(&e) {
            by_ext.insert(e.clone(), a.clone());
            frontier.push(e);
        }
    }
    let base: Vec<(Extension, Concept)> = by_ext.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            let c = by_ext[e].clone();
            for (be, bc) in &base {
                let meet = e.intersect(be);
                if !by_ext.contains_key(&meet) {
                    by_ext.insert(meet.clone(), c.and(bc));
                    if by_ext.len() > budget {
                        return Err(over_budget(budget, "closing extensions under intersection"));
                    }
                    next.push(meet);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Concept> = by_ext.into_values().collect();
    out.sort();
    Ok(out)
}
