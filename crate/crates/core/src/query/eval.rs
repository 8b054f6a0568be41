use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::relational::Facts;
use crate::value::{Constant, Tuple};

use super::{Atom, CmpOp, Comparison, ConjunctiveQuery, Term, Ucq};

/// Answers of `q` over `data` under set semantics.
pub fn eval_cq(q: &ConjunctiveQuery, data: &impl Facts) -> Result<BTreeSet<Tuple>> {
    q.check_safe()?;
    let mut tables = Vec::with_capacity(q.atoms.len());
    for atom in &q.atoms {
        let rows = data
            .tuples(&atom.relation)
            .ok_or_else(|| Error::UnknownRelation(atom.relation.clone()))?;
        if let Some(row) = rows.iter().next() {
            if row.len() != atom.args.len() {
                return Err(Error::Arity {
                    relation: atom.relation.clone(),
                    expected: row.len(),
                    found: atom.args.len(),
                });
            }
        }
        tables.push(rows);
    }

    let mut binding: BTreeMap<&str, Constant> = BTreeMap::new();
    // Variables that occur only in equality comparisons are bound up front.
    let body = q.body_variables();
    for c in &q.comparisons {
        if c.op == CmpOp::Eq && !body.contains(c.var.as_str()) && !binding.contains_key(c.var.as_str()) {
            binding.insert(&c.var, c.value.clone());
        }
    }
    if !q.comparisons.iter().all(|c| binding.get(c.var.as_str()).is_none_or(|v| c.op.holds(v, &c.value))) {
        return Ok(BTreeSet::new());
    }

    let plan = plan(q, &tables, &binding);
    let mut out = BTreeSet::new();
    search(q, &plan, 0, &mut binding, &mut out);
    Ok(out)
}

pub fn eval_ucq(q: &Ucq, data: &impl Facts) -> Result<BTreeSet<Tuple>> {
    let mut out = BTreeSet::new();
    for d in &q.disjuncts {
        out.extend(eval_cq(d, data)?);
    }
    Ok(out)
}

struct Step<'q> {
    atom: &'q Atom,
    /// Argument positions whose value is known when this step runs.
    key: Vec<usize>,
    index: HashMap<Vec<Constant>, Vec<&'q Tuple>>,
    /// Comparisons whose variable first becomes bound at this step.
    checks: Vec<&'q Comparison>,
}

fn plan<'q>(
    q: &'q ConjunctiveQuery,
    tables: &[&'q BTreeSet<Tuple>],
    pinned: &BTreeMap<&str, Constant>,
) -> Vec<Step<'q>> {
    let mut bound: BTreeSet<&str> = pinned.keys().copied().collect();
    let mut remaining: Vec<usize> = (0..q.atoms.len()).collect();
    let mut steps = Vec::new();
    while !remaining.is_empty() {
        // Most bound arguments first; the first pick is the smallest relation.
        let pick = *remaining
            .iter()
            .min_by_key(|&&i| {
                let known = q.atoms[i]
                    .args
                    .iter()
                    .filter(|t| t.as_var().is_none_or(|v| bound.contains(v)))
                    .count();
                (usize::MAX - known, tables[i].len(), i)
            })
            .expect("non-empty");
        remaining.retain(|&i| i != pick);
        let atom = &q.atoms[pick];
        let key: Vec<usize> = atom
            .args
            .iter()
            .enumerate()
            .filter(|(_, t)| t.as_var().is_none_or(|v| bound.contains(v)))
            .map(|(i, _)| i)
            .collect();
        let mut index: HashMap<Vec<Constant>, Vec<&Tuple>> = HashMap::new();
        for row in tables[pick] {
            index.entry(key.iter().map(|&i| row[i].clone()).collect()).or_default().push(row);
        }
        let newly: BTreeSet<&str> = atom
            .args
            .iter()
            .filter_map(Term::as_var)
            .filter(|v| !bound.contains(v))
            .collect();
        let checks = q
            .comparisons
            .iter()
            .filter(|c| newly.contains(c.var.as_str()))
            .collect();
        bound.extend(newly);
        steps.push(Step {
            atom,
            key,
            index,
            checks,
        });
    }
    steps
}

fn search<'q>(
    q: &'q ConjunctiveQuery,
    plan: &[Step<'q>],
    depth: usize,
    binding: &mut BTreeMap<&'q str, Constant>,
    out: &mut BTreeSet<Tuple>,
) {
    let Some(step) = plan.get(depth) else {
        let row = q
            .head
            .iter()
            .map(|t| match t {
                Term::Const(c) => c.clone(),
                Term::Var(v) => binding[v.as_str()].clone(),
            })
            .collect();
        out.insert(row);
        return;
    };
    let rows = {
        let probe: Vec<Constant> = step
            .key
            .iter()
            .map(|&i| match &step.atom.args[i] {
                Term::Const(c) => c.clone(),
                Term::Var(v) => binding[v.as_str()].clone(),
            })
            .collect();
        match step.index.get(&probe) {
            Some(rows) => rows,
            None => return,
        }
    };
    for row in rows {
        let mut added = Vec::new();
        let mut ok = true;
        for (t, value) in step.atom.args.iter().zip(row.iter()) {
            let Term::Var(v) = t else { continue };
            match binding.get(v.as_str()) {
                Some(existing) => {
                    if existing != value {
                        ok = false;
                        break;
                    }
                }
                None => {
                    binding.insert(v, value.clone());
                    added.push(v.as_str());
                }
            }
        }
        ok = ok && step.checks.iter().all(|c| c.op.holds(&binding[c.var.as_str()], &c.value));
        if ok {
            search(q, plan, depth + 1, binding, out);
        }
        for v in added {
            binding.remove(v);
        }
    }
}
