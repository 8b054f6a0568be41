use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::relational::{Facts, Schema};
use crate::value::{Constant, Tuple};

use super::enumerate::tight_box;
use super::{AtomicConcept, Concept, Extension, Fragment, Projection};

/// The least concept of `fragment` whose extension contains `x`. Defined
/// for the selection-free and full fragments, where intersections make the
/// least upper bound unique up to equivalence.
pub fn lub(fragment: Fragment, schema: &Schema, data: &impl Facts, x: &BTreeSet<Constant>, budget: usize) -> Result<Concept> {
    match fragment {
        Fragment::SelectionFree => Ok(lub_selection_free(schema, data, x)),
        Fragment::Full => lub_with_selections(schema, data, x, budget),
        other => Err(Error::UnsupportedFragment {
            fragment: other.to_string(),
            operation: "least upper bound",
        }),
    }
}

fn nominal_for(x: &BTreeSet<Constant>) -> Option<AtomicConcept> {
    match x.iter().collect::<Vec<_>>().as_slice() {
        [c] => Some(AtomicConcept::Nominal((*c).clone())),
        _ => None,
    }
}

/// Conjunction of every `π_A(R)` containing `x`, plus `{c}` when `x = {c}`;
/// `T` when nothing qualifies.
pub fn lub_selection_free(schema: &Schema, data: &impl Facts, x: &BTreeSet<Constant>) -> Concept {
    let mut conjuncts: Vec<AtomicConcept> = nominal_for(x).into_iter().collect();
    for rel in schema.relations() {
        let Some(rows) = data.tuples(&rel.name) else {
            continue;
        };
        for attr in 0..rel.arity() {
            let column: BTreeSet<&Constant> = rows.iter().map(|r| &r[attr]).collect();
            if x.iter().all(|c| column.contains(c)) {
                conjuncts.push(AtomicConcept::Proj(Projection::new(
                    rel.name.clone(),
                    attr,
                    rel.attributes[attr].clone(),
                    Vec::new(),
                )));
            }
        }
    }
    Concept::new(conjuncts)
}

/// Like [`lub_selection_free`] but over projections of selections. For each
/// relation and attribute, every choice of one witness row per constant of
/// `x` gives a tightest selection box; the result conjoins the
/// extension-minimal ones across all relations and attributes, one per
/// relation, attribute and extension. Each box is
/// shortened by dropping conditions that do not change its extension.
///
/// The number of witness choices is exponential in `|x|`; `budget` caps it.
pub fn lub_with_selections(
    schema: &Schema,
    data: &impl Facts,
    x: &BTreeSet<Constant>,
    budget: usize,
) -> Result<Concept> {
    let mut candidates: Vec<(BTreeSet<Constant>, Projection)> = Vec::new();
    for rel in schema.relations() {
        let Some(rows) = data.tuples(&rel.name) else {
            continue;
        };
        if rows.is_empty() {
            continue;
        }
        let columns: Vec<Vec<&Constant>> = (0..rel.arity())
            .map(|a| {
                let vals: BTreeSet<&Constant> = rows.iter().map(|r| &r[a]).collect();
                vals.into_iter().collect()
            })
            .collect();
        for attr in 0..rel.arity() {
            let witnesses: Vec<Vec<&Tuple>> = x
                .iter()
                .map(|c| rows.iter().filter(|r| &r[attr] == c).collect())
                .collect();
            if witnesses.iter().any(Vec::is_empty) {
                continue;
            }
            let choices = witnesses.iter().try_fold(1usize, |acc, w| acc.checked_mul(w.len()).filter(|&n| n <= budget));
            if choices.is_none() {
                return Err(Error::BudgetExceeded {
                    limit: budget,
                    during: "choosing witness rows for a least upper bound",
                });
            }
            let mut boxes = BTreeSet::new();
            let mut pick = vec![0usize; witnesses.len()];
            loop {
                let chosen: Vec<&Tuple> = pick.iter().zip(&witnesses).map(|(&i, w)| w[i]).collect();
                boxes.insert(tight_box(rel, &columns, chosen.iter().copied()));
                // odometer over witness choices
                let mut k = 0;
                while k < pick.len() {
                    pick[k] += 1;
                    if pick[k] < witnesses[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
                if k == pick.len() {
                    break;
                }
            }
            for selection in boxes {
                let p = shorten(
                    Projection::new(rel.name.clone(), attr, rel.attributes[attr].clone(), selection),
                    data,
                );
                let ext = match Concept::projection(p.clone()).extension(data) {
                    Extension::Finite(s) => s,
                    Extension::All => unreachable!("projections have finite extensions"),
                };
                candidates.push((ext, p));
            }
        }
    }
    let mut conjuncts: Vec<AtomicConcept> = nominal_for(x).into_iter().collect();
    // one projection per relation, attribute and extension
    let mut kept = BTreeSet::new();
    candidates.sort_by(|a, b| a.1.selection.len().cmp(&b.1.selection.len()).then_with(|| a.1.cmp(&b.1)));
    for (ext, p) in &candidates {
        let minimal = candidates.iter().all(|(other, _)| !(other.is_subset(ext) && other != ext));
        if minimal && kept.insert((&p.relation, p.attr, ext)) {
            conjuncts.push(AtomicConcept::Proj(p.clone()));
        }
    }
    Ok(Concept::new(conjuncts))
}

/// Drops selection conditions, in order, while the extension stays the same.
fn shorten(p: Projection, data: &impl Facts) -> Projection {
    let target = Concept::projection(p.clone()).extension(data);
    let mut selection = p.selection.clone();
    let mut i = 0;
    while i < selection.len() {
        let mut fewer = selection.clone();
        fewer.remove(i);
        let q = Projection::new(p.relation.clone(), p.attr, p.attr_name.clone(), fewer.clone());
        if Concept::projection(q).extension(data) == target {
            selection = fewer;
        } else {
            i += 1;
        }
    }
    Projection::new(p.relation, p.attr, p.attr_name, selection)
}
