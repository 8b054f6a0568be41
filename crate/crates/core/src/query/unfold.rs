use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::relational::Schema;

use super::{ConjunctiveQuery, Term, Ucq};

/// Replaces view atoms by their definitions until only base relations are
/// left. Disjuncts that become unsatisfiable along the way are dropped.
pub fn unfold_views(q: &Ucq, schema: &Schema) -> Result<Ucq> {
    let mut done = Vec::new();
    let mut work: Vec<ConjunctiveQuery> = q.disjuncts.iter().rev().cloned().collect();
    let mut fresh = Fresh::default();
    while let Some(d) = work.pop() {
        let Some(pos) = d.atoms.iter().position(|a| schema.view(&a.relation).is_some()) else {
            done.push(d);
            continue;
        };
        let atom = &d.atoms[pos];
        let def = schema.view(&atom.relation).expect("checked above");
        let mut expanded = Vec::new();
        for body in &def.body.disjuncts {
            if let Some(u) = expand(&d, pos, body, &mut fresh) {
                expanded.push(u);
            }
        }
        work.extend(expanded.into_iter().rev());
    }
    if done.is_empty() {
        done.push(ConjunctiveQuery::unsatisfiable(q.arity()));
    }
    Ucq::new(q.name.clone(), done)
}

#[derive(Default)]
struct Fresh(usize);

impl Fresh {
    fn next(&mut self, taken: &BTreeSet<String>) -> String {
        loop {
            self.0 += 1;
            let name = format!("_v{}", self.0);
            if !taken.contains(&name) {
                return name;
            }
        }
    }
}

/// Substitutes one disjunct of a view body for the atom at `pos`.
fn expand(
    outer: &ConjunctiveQuery,
    pos: usize,
    body: &ConjunctiveQuery,
    fresh: &mut Fresh,
) -> Option<ConjunctiveQuery> {
    let atom = &outer.atoms[pos];
    let mut taken = outer.variables();
    let mut rename = BTreeMap::new();
    for v in body.variables() {
        let name = fresh.next(&taken);
        taken.insert(name.clone());
        rename.insert(v, Term::Var(name));
    }
    let body = body.substitute(&rename)?;

    let mut combined = outer.clone();
    combined.atoms.remove(pos);
    combined.atoms.extend(body.atoms.iter().cloned());
    combined.comparisons.extend(body.comparisons.iter().cloned());

    // Unify the view head with the atom's arguments.
    let mut subst: BTreeMap<String, Term> = BTreeMap::new();
    for (h, a) in body.head.iter().zip(&atom.args) {
        let h = resolve(&subst, h);
        let a = resolve(&subst, a);
        if h == a {
            continue;
        }
        match (&h, &a) {
            (Term::Var(v), _) => {
                subst.insert(v.clone(), a.clone());
            }
            (_, Term::Var(v)) => {
                subst.insert(v.clone(), h.clone());
            }
            _ => return None,
        }
    }
    let full: BTreeMap<String, Term> = subst
        .keys()
        .map(|k| (k.clone(), resolve(&subst, &Term::Var(k.clone()))))
        .collect();
    combined.substitute(&full)
}

fn resolve(subst: &BTreeMap<String, Term>, t: &Term) -> Term {
    let mut cur = t.clone();
    while let Term::Var(v) = &cur {
        match subst.get(v) {
            Some(next) => cur = next.clone(),
            None => break,
        }
    }
    cur
}
