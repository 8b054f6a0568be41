//! Random small instances and brute-force oracles shared by the property
//! and acceptance tests.
#![allow(dead_code)]

pub mod suite;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use whynot_core::concept::{AtomicConcept, Concept, Condition, Extension, Fragment, Projection};
use whynot_core::explain::{Explanation, WhyNotInstance};
use whynot_core::ontology::{ExtDefinition, FiniteOntology, Ontology};
use whynot_core::query::{eval_ucq, CmpOp, Ucq};
use whynot_core::relational::{Instance, RawData, Relation, Schema};
use whynot_core::{Constant, Tuple};

pub const CONSTANTS: [&str; 6] = ["1", "2", "3", "a", "b", "c"];
const ATTRS: [&str; 3] = ["a", "b", "c"];

/// At most six constants and two relations of arity at most three, no
/// constraints.
pub fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let k = rng.gen_range(2..=6);
    let mut pool: Vec<Constant> = CONSTANTS.iter().map(|s| Constant::parse(s)).collect();
    pool.shuffle(rng);
    pool.truncate(k);
    let n_rel = rng.gen_range(1..=2);
    let mut relations = Vec::new();
    let mut data = RawData::new();
    for (r, name) in ["R", "S"].iter().take(n_rel).enumerate() {
        let arity = rng.gen_range(1..=3);
        let attrs = ATTRS[..arity].iter().map(|a| format!("{a}{r}")).collect();
        relations.push(Relation::new(*name, attrs).unwrap());
        let rows: BTreeSet<Tuple> = (0..rng.gen_range(0..=5))
            .map(|_| (0..arity).map(|_| pool.choose(rng).unwrap().clone()).collect())
            .collect();
        data.insert(name.to_string(), rows);
    }
    Instance::new(Schema::new(relations, Vec::new()).unwrap(), data).unwrap()
}

/// A conjunctive query of arity one or two over the instance's relations
/// and a tuple missing from its answers, when one is found quickly.
pub fn random_why_not<'a>(rng: &mut ChaCha8Rng, instance: &'a Instance) -> Option<WhyNotInstance<'a>> {
    let vars = ["x", "y", "z", "u"];
    let relations: Vec<&Relation> = instance.schema().relations().collect();
    let m = rng.gen_range(1..=2);
    let mut atoms = Vec::new();
    let mut used = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let r = relations.choose(rng).unwrap();
        let args: Vec<&str> = (0..r.arity()).map(|_| *vars.choose(rng).unwrap()).collect();
        for v in &args {
            if !used.contains(v) {
                used.push(*v);
            }
        }
        atoms.push(format!("{}({})", r.name, args.join(", ")));
    }
    if used.len() < m {
        return None;
    }
    used.shuffle(rng);
    let text = format!("q({}) :- {}", used[..m].join(", "), atoms.join(", "));
    let query = Ucq::parse(&text).unwrap();
    let answers = eval_ucq(&query, instance).unwrap();
    let mut choices: Vec<Constant> = instance.adom().iter().cloned().collect();
    choices.push(Constant::parse("zz"));
    for _ in 0..20 {
        let tuple: Tuple = (0..m).map(|_| choices.choose(rng).unwrap().clone()).collect();
        if !answers.contains(&tuple) {
            return Some(WhyNotInstance::with_answers(instance, query, answers, tuple, false).unwrap());
        }
    }
    None
}

/// Extensions of all atomic concepts of the fragment over `pool`,
/// enumerated independently of the library: every selection is a box of
/// per-attribute intervals whose endpoints are column values.
pub fn oracle_atomic_extensions(instance: &Instance, fragment: Fragment, pool: &BTreeSet<Constant>) -> BTreeSet<Extension> {
    let mut out = BTreeSet::from([Extension::All]);
    for c in pool {
        out.insert(Extension::Finite(BTreeSet::from([c.clone()])));
    }
    for rel in instance.schema().relations() {
        let rows: Vec<&Tuple> = instance.get(&rel.name).unwrap().iter().collect();
        let mut row_sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        if matches!(fragment, Fragment::Min | Fragment::SelectionFree) {
            row_sets.insert((0..rows.len()).collect());
        } else {
            // a strict bound below the least column value selects nothing
            row_sets.insert(Vec::new());
            // None means no restriction on the attribute
            let intervals: Vec<Vec<Option<(Constant, Constant)>>> = (0..rel.arity())
                .map(|a| {
                    let values: Vec<Constant> = rows.iter().map(|r| r[a].clone()).collect::<BTreeSet<_>>().into_iter().collect();
                    let mut iv = vec![None];
                    for i in 0..values.len() {
                        for j in i..values.len() {
                            iv.push(Some((values[i].clone(), values[j].clone())));
                        }
                    }
                    iv
                })
                .collect();
            let mut pick = vec![0usize; rel.arity()];
            loop {
                let chosen: Vec<usize> = (0..rows.len())
                    .filter(|&r| {
                        pick.iter().enumerate().all(|(a, &k)| match &intervals[a][k] {
                            None => true,
                            Some((lo, hi)) => lo <= &rows[r][a] && &rows[r][a] <= hi,
                        })
                    })
                    .collect();
                row_sets.insert(chosen);
                let mut a = 0;
                while a < pick.len() {
                    pick[a] += 1;
                    if pick[a] < intervals[a].len() {
                        break;
                    }
                    pick[a] = 0;
                    a += 1;
                }
                if a == pick.len() {
                    break;
                }
            }
        }
        for set in &row_sets {
            let selected: Vec<&Tuple> = set.iter().map(|&r| rows[r]).collect();
            for a in 0..rel.arity() {
                out.insert(Extension::Finite(selected.iter().map(|row| row[a].clone()).collect()));
            }
        }
    }
    out
}

/// Closes a set of extensions under pairwise intersection.
pub fn intersection_closed(atoms: &BTreeSet<Extension>) -> BTreeSet<Extension> {
    let mut all = atoms.clone();
    loop {
        let mut fresh = BTreeSet::new();
        for a in &all {
            for b in atoms {
                let meet = a.intersect(b);
                if !all.contains(&meet) {
                    fresh.insert(meet);
                }
            }
        }
        if fresh.is_empty() {
            return all;
        }
        all.extend(fresh);
    }
}

/// Extensions of every concept of the fragment over `pool`, up to
/// equivalence on the instance.
pub fn oracle_extensions(instance: &Instance, fragment: Fragment, pool: &BTreeSet<Constant>) -> BTreeSet<Extension> {
    let atoms = oracle_atomic_extensions(instance, fragment, pool);
    if matches!(fragment, Fragment::SelectionFree | Fragment::Full) {
        intersection_closed(&atoms)
    } else {
        atoms
    }
}

/// Whether extensions give an explanation, checked directly.
pub fn explains(w: &WhyNotInstance<'_>, exts: &[Extension]) -> bool {
    w.tuple.iter().zip(exts).all(|(a, e)| e.contains(a))
        && w.answers.iter().all(|t| !t.iter().zip(exts).all(|(b, e)| e.contains(b)))
}

/// A random concept over the instance with up to four conjuncts drawn
/// from `T`, nominals and projections with up to two conditions.
pub fn random_concept(rng: &mut ChaCha8Rng, instance: &Instance) -> Concept {
    let pool: Vec<Constant> = CONSTANTS.iter().map(|s| Constant::parse(s)).collect();
    let relations: Vec<&Relation> = instance.schema().relations().collect();
    let ops = [CmpOp::Eq, CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge];
    let n = rng.gen_range(1..=4);
    let atoms = (0..n).map(|_| match rng.gen_range(0..6) {
        0 => AtomicConcept::Top,
        1 => AtomicConcept::Nominal(pool.choose(rng).unwrap().clone()),
        _ => {
            let r = relations.choose(rng).unwrap();
            let attr = rng.gen_range(0..r.arity());
            let selection = (0..rng.gen_range(0..=2))
                .map(|_| {
                    let a = rng.gen_range(0..r.arity());
                    Condition {
                        attr: a,
                        attr_name: r.attributes[a].clone(),
                        op: *ops.choose(rng).unwrap(),
                        value: pool.choose(rng).unwrap().clone(),
                    }
                })
                .collect();
            AtomicConcept::Proj(Projection::new(r.name.clone(), attr, r.attributes[attr].clone(), selection))
        }
    });
    Concept::new(atoms)
}

/// Up to `max` named concepts with random member lists over `pool` and
/// subsumptions that hold between the lists.
pub fn random_finite_ontology(rng: &mut ChaCha8Rng, pool: &[Constant], max: usize) -> FiniteOntology {
    let n = rng.gen_range(1..=max);
    let names: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let lists: Vec<BTreeSet<Constant>> = (0..n)
        .map(|_| pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect())
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && lists[i].is_subset(&lists[j]) && rng.gen_bool(0.6) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let ext = lists.into_iter().map(ExtDefinition::List).collect();
    FiniteOntology::new(names, &edges, ext).unwrap()
}

/// Every explanation over the universe, by enumerating all tuples of
/// concepts.
pub fn brute_force_explanations<O: Ontology>(
    w: &WhyNotInstance<'_>,
    o: &O,
    universe: &[O::Concept],
) -> Vec<Explanation<O::Concept>> {
    let exts: BTreeMap<&O::Concept, Extension> = universe.iter().map(|c| (c, o.ext(c, w.instance).unwrap())).collect();
    let mut out = Vec::new();
    let m = w.tuple.len();
    let mut pick = vec![0usize; m];
    if universe.is_empty() || m == 0 {
        return out;
    }
    loop {
        let e: Vec<O::Concept> = pick.iter().map(|&i| universe[i].clone()).collect();
        let es: Vec<Extension> = e.iter().map(|c| exts[c].clone()).collect();
        if explains(w, &es) {
            out.push(Explanation(e));
        }
        let mut a = m;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            pick[a] += 1;
            if pick[a] < universe.len() {
                break;
            }
            pick[a] = 0;
        }
    }
}

pub fn le<O: Ontology>(o: &O, a: &Explanation<O::Concept>, b: &Explanation<O::Concept>) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| o.subsumes(x, y).unwrap())
}

/// Members of `all` with no strictly greater member.
pub fn brute_force_maximal<O: Ontology>(o: &O, all: &[Explanation<O::Concept>]) -> Vec<Explanation<O::Concept>> {
    all.iter()
        .filter(|e| !all.iter().any(|f| le(o, e, f) && !le(o, f, e)))
        .cloned()
        .collect()
}
