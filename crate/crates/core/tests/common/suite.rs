//! Randomized checks returning (cases checked, failures) so callers can
//! either assert or report.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use whynot_core::concept::{lub, minimize_irredundant, Concept, Extension, Fragment};
use whynot_core::explain::{
    card_maximal, check_mge, check_mge_oi, degree_of_generality, exhaustive_mge, incremental_mge, is_explanation,
    shortest_mge, Degree, Explanation, DEFAULT_BUDGET,
};
use whynot_core::ontology::{FiniteUniverse, InstanceOntology, Ontology};
use whynot_core::Constant;

use super::*;

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
}

impl Tally {
    pub fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }
}

/// The least upper bound of a random set of active-domain constants has
/// the least extension among the fragment's concepts holding the set.
pub fn lub_minimality(seed: u64, instances: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    let mut done = 0;
    while done < instances {
        let inst = random_instance(&mut rng);
        let adom: Vec<Constant> = inst.adom().iter().cloned().collect();
        if adom.is_empty() {
            continue;
        }
        done += 1;
        for fragment in [Fragment::SelectionFree, Fragment::Full] {
            let size = rng.gen_range(1..=adom.len().min(3));
            let x: BTreeSet<Constant> = adom.choose_multiple(&mut rng, size).cloned().collect();
            let c = lub(fragment, inst.schema(), &inst, &x, DEFAULT_BUDGET).unwrap();
            let ext = c.extension(&inst);
            let oracle = oracle_extensions(&inst, fragment, inst.adom());
            let holding = Extension::Finite(x.clone());
            let smaller = oracle
                .iter()
                .any(|e| holding.is_subset(e) && e.is_subset(&ext) && e != &ext);
            tally.record(c.in_fragment(fragment) && holding.is_subset(&ext) && !smaller);
        }
    }
    tally
}

/// The incremental search returns an explanation that passes the check
/// and that no single-position generalization (over all extensions of the
/// fragment) improves.
pub fn incremental_is_most_general(seed: u64, instances: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    let mut done = 0;
    while done < instances {
        let inst = random_instance(&mut rng);
        let Some(w) = random_why_not(&mut rng, &inst) else {
            continue;
        };
        done += 1;
        for fragment in [Fragment::SelectionFree, Fragment::Full] {
            let o = InstanceOntology::new(&inst, fragment);
            let e = incremental_mge(&w, fragment, DEFAULT_BUDGET).unwrap();
            let passes = is_explanation(&w, &o, &e).unwrap() && check_mge_oi(&w, &e, fragment, DEFAULT_BUDGET).unwrap();
            let exts: Vec<Extension> = e.0.iter().map(|c| c.extension(&inst)).collect();
            let oracle = oracle_extensions(&inst, fragment, &w.pool());
            let improvable = (0..exts.len()).any(|j| {
                oracle.iter().any(|wider| {
                    exts[j].is_subset(wider) && wider != &exts[j] && {
                        let mut trial = exts.clone();
                        trial[j] = wider.clone();
                        explains(&w, &trial)
                    }
                })
            });
            let k = w.pool();
            let confined = e.0.iter().flat_map(Concept::constants).all(|c| k.contains(&c));
            tally.record(passes && !improvable && confined);
        }
    }
    tally
}

/// Random finite ontologies with at most `max_concepts` concepts over the
/// constants of a random why-not instance.
fn finite_cases(seed: u64, cases: usize, max_concepts: usize, mut visit: impl FnMut(&WhyNotInstance<'_>, &FiniteOntology)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < cases {
        let inst = random_instance(&mut rng);
        let Some(w) = random_why_not(&mut rng, &inst) else {
            continue;
        };
        let pool: Vec<Constant> = w.pool().into_iter().collect();
        let o = random_finite_ontology(&mut rng, &pool, max_concepts);
        done += 1;
        visit(&w, &o);
    }
}

/// Exhaustive search against brute-force enumeration: every output is a
/// maximal explanation, outputs are pairwise inequivalent, every
/// explanation lies below some output, and the check agrees with the
/// maximal set.
pub fn exhaustive_completeness(seed: u64, cases: usize) -> Tally {
    let mut tally = Tally::default();
    finite_cases(seed, cases, 8, |w, o| {
        let universe = o.universe();
        let all = brute_force_explanations(w, o, &universe);
        let maximal = brute_force_maximal(o, &all);
        let out = exhaustive_mge(w, o, DEFAULT_BUDGET).unwrap();
        let sound = out.iter().all(|e| maximal.contains(e));
        let distinct = out
            .iter()
            .enumerate()
            .all(|(i, e)| out.iter().skip(i + 1).all(|f| !(le(o, e, f) && le(o, f, e))));
        let complete = all.iter().all(|e| out.iter().any(|f| le(o, e, f)));
        let classes = maximal.iter().all(|e| out.iter().any(|f| le(o, e, f) && le(o, f, e)));
        let agree = all.iter().all(|e| check_mge(w, o, e).unwrap() == maximal.contains(e));
        tally.record(sound && distinct && complete && classes && agree);
    });
    tally
}

/// Reflexivity and transitivity of instance subsumption on random
/// concepts, and agreement with extension inclusion.
pub fn preorder_laws(seed: u64, instances: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for _ in 0..instances {
        let inst = random_instance(&mut rng);
        let o = InstanceOntology::new(&inst, Fragment::Full);
        let cs: Vec<Concept> = (0..3).map(|_| random_concept(&mut rng, &inst)).collect();
        let s = |a: &Concept, b: &Concept| o.subsumes(a, b).unwrap();
        let reflexive = cs.iter().all(|c| s(c, c));
        let transitive = !(s(&cs[0], &cs[1]) && s(&cs[1], &cs[2])) || s(&cs[0], &cs[2]);
        let by_extension = s(&cs[0], &cs[1]) == cs[0].extension(&inst).is_subset(&cs[1].extension(&inst));
        tally.record(reflexive && transitive && by_extension);
    }
    tally
}

fn length<O: Ontology>(o: &O, e: &Explanation<O::Concept>) -> usize {
    e.0.iter().map(|c| o.symbol_length(c)).sum()
}

/// The shortest and the card-maximal variants against brute force over
/// finite ontologies with at most eight concepts.
pub fn variants_agree(seed: u64, cases: usize) -> Tally {
    let mut tally = Tally::default();
    finite_cases(seed, cases, 8, |w, o| {
        let universe = o.universe();
        let all = brute_force_explanations(w, o, &universe);
        let maximal = brute_force_maximal(o, &all);
        let shortest = maximal
            .iter()
            .min_by(|a, b| length(o, a).cmp(&length(o, b)).then_with(|| a.cmp(b)))
            .cloned();
        let degree = |e: &Explanation<String>| degree_of_generality(&o.extensions(&e.0, w.instance).unwrap());
        let mut sorted = all.clone();
        sorted.sort();
        let best: Option<Degree> = sorted.iter().map(degree).max();
        let card = best.and_then(|b| sorted.iter().find(|e| degree(e) == b).cloned());
        let got_short = shortest_mge(w, o, DEFAULT_BUDGET).ok();
        let got_card = card_maximal(w, o, DEFAULT_BUDGET).ok();
        tally.record(got_short == shortest && got_card.map(|(e, _)| e) == card);
    });
    tally
}

/// Irredundant minimization keeps the extension and no conjunct can be
/// dropped without changing it.
pub fn irredundancy(seed: u64, concepts: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for _ in 0..concepts {
        let inst = random_instance(&mut rng);
        let c = random_concept(&mut rng, &inst);
        let m = minimize_irredundant(&c, &inst);
        let ext = c.extension(&inst);
        let same = m.extension(&inst) == ext;
        let parts = m.conjuncts();
        let tight = m.is_top()
            || (0..parts.len()).all(|i| {
                let rest = Concept::new(parts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, a)| a.clone()));
                rest.extension(&inst) != ext
            });
        tally.record(same && tight);
    }
    tally
}
