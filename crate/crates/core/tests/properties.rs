//! Randomized properties of the explanation algorithms, checked against
//! brute-force oracles on small instances.

mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::suite::{self, Tally};
use common::*;
use whynot_core::concept::{enumerate_concepts, EnumerateOptions, Fragment};
use whynot_core::explain::{
    instance_universe, is_explanation, minimize_equivalent_length, Explanation, DEFAULT_BUDGET,
};
use whynot_core::ontology::{InstanceOntology, SchemaOntology};

fn all_pass(t: Tally) {
    assert!(t.checked > 0);
    assert_eq!(t.failed, 0, "{} of {} cases failed", t.failed, t.checked);
}

#[test]
fn lub_is_least() {
    all_pass(suite::lub_minimality(1, 200));
}

#[test]
fn incremental_search_is_most_general() {
    all_pass(suite::incremental_is_most_general(2, 200));
}

#[test]
fn exhaustive_search_is_complete() {
    all_pass(suite::exhaustive_completeness(3, 200));
}

#[test]
fn instance_subsumption_is_a_preorder() {
    all_pass(suite::preorder_laws(4, 200));
}

#[test]
fn shortest_and_card_maximal_match_brute_force() {
    all_pass(suite::variants_agree(5, 200));
}

#[test]
fn irredundant_forms() {
    all_pass(suite::irredundancy(6, 200));
}

#[test]
fn enumeration_covers_every_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let inst = random_instance(&mut rng);
        let Some(w) = random_why_not(&mut rng, &inst) else {
            continue;
        };
        for fragment in [Fragment::Min, Fragment::SelectionFree, Fragment::IntersectionFree, Fragment::Full] {
            let got: BTreeSet<_> = instance_universe(&w, fragment, DEFAULT_BUDGET)
                .unwrap()
                .iter()
                .map(|c| c.extension(&inst))
                .collect();
            assert_eq!(got, oracle_extensions(&inst, fragment, &w.pool()), "{fragment}");
        }
    }
}

#[test]
fn explanations_agree_across_derived_ontologies() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let inst = random_instance(&mut rng);
        let Some(w) = random_why_not(&mut rng, &inst) else {
            continue;
        };
        let oi = InstanceOntology::new(&inst, Fragment::Full);
        let os = SchemaOntology::new(inst.schema().clone(), Fragment::Full);
        let e = Explanation((0..w.tuple.len()).map(|_| random_concept(&mut rng, &inst)).collect());
        assert_eq!(is_explanation(&w, &oi, &e).unwrap(), is_explanation(&w, &os, &e).unwrap());
    }
}

#[test]
fn shortening_keeps_extensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let inst = random_instance(&mut rng);
        let c = random_concept(&mut rng, &inst);
        let e = Explanation(vec![c.clone()]);
        let m = minimize_equivalent_length(&e, &inst, 20_000);
        let irredundant = whynot_core::concept::minimize_irredundant(&c, &inst);
        assert_eq!(m.0[0].extension(&inst), c.extension(&inst), "{c}");
        assert!(m.0[0].symbol_length() <= irredundant.symbol_length(), "{c}");
    }
}

#[test]
fn enumeration_dedup_keeps_one_concept_per_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let inst = random_instance(&mut rng);
        let options = EnumerateOptions {
            dedup_by_extension: true,
            budget: DEFAULT_BUDGET,
        };
        let cs = enumerate_concepts(Fragment::IntersectionFree, inst.schema(), inst.adom(), &inst, options).unwrap();
        let exts: BTreeSet<_> = cs.iter().map(|c| c.extension(&inst)).collect();
        assert_eq!(exts.len(), cs.len());
    }
}
