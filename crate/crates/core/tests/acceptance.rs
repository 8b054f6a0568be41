//! Acceptance criteria on the train example and on random small instances.
//! Prints one PASS/FAIL line per criterion and fails if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::suite;
use whynot_core::concept::{parse_concept, subsumed_by_schema, Concept, Fragment};
use whynot_core::explain::{
    card_maximal, check_mge, check_mge_oi, compare_generality, exhaustive_mge, is_explanation, Degree, Explanation,
    Generality, WhyNotInstance, DEFAULT_BUDGET,
};
use whynot_core::obda::{load_obda, BasicConcept};
use whynot_core::ontology::{load_ontology, FiniteUniverse, InstanceOntology};
use whynot_core::query::Ucq;
use whynot_core::relational::{load_instance, load_schema, Constraint, Instance, Schema};
use whynot_core::{Constant, Tuple};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/trains").join(name)
}

fn schema() -> Schema {
    load_schema(fixture("schema.json")).unwrap()
}

fn instance() -> Instance {
    load_instance(schema(), fixture("data")).unwrap()
}

fn tuple(items: &[&str]) -> Tuple {
    items.iter().map(|s| Constant::parse(s)).collect()
}

fn why_not(i: &Instance) -> WhyNotInstance<'_> {
    let q = Ucq::parse(&std::fs::read_to_string(fixture("query.txt")).unwrap()).unwrap();
    WhyNotInstance::new(i, q, tuple(&["Amsterdam", "New York"])).unwrap()
}

fn names(items: &[&str]) -> Explanation<String> {
    Explanation(items.iter().map(|s| s.to_string()).collect())
}

fn ls(s: &Schema, items: &[&str]) -> Explanation<Concept> {
    Explanation(items.iter().map(|t| parse_concept(t, s).unwrap()).collect())
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn criterion_1() -> Verdict {
    let i = instance();
    let w = why_not(&i);
    let expected_ans: BTreeSet<Tuple> = [
        ["Amsterdam", "Rome"],
        ["Amsterdam", "Amsterdam"],
        ["Berlin", "Berlin"],
        ["New York", "Santa Cruz"],
    ]
    .iter()
    .map(|t| tuple(t))
    .collect();
    let o = load_ontology(fixture("ontology.json"), i.schema()).unwrap();
    let universe = o.universe();
    let mut found = BTreeSet::new();
    for a in &universe {
        for b in &universe {
            let e = names(&[a, b]);
            if is_explanation(&w, &o, &e).unwrap() {
                found.insert(e.to_string());
            }
        }
    }
    let expected: BTreeSet<String> = [
        ["Dutch-City", "East-Coast-City"],
        ["Dutch-City", "US-City"],
        ["European-City", "East-Coast-City"],
        ["European-City", "US-City"],
    ]
    .iter()
    .map(|e| names(e).to_string())
    .collect();
    let mges: Vec<String> = exhaustive_mge(&w, &o, DEFAULT_BUDGET)
        .unwrap()
        .iter()
        .map(|e| e.to_string())
        .collect();
    let pass = w.answers == expected_ans && found == expected && mges == [names(&["European-City", "US-City"]).to_string()];
    Verdict {
        pass,
        detail: format!(
            "answers match: {}; explanations: {}; most general: {}",
            w.answers == expected_ans,
            found.iter().cloned().collect::<Vec<_>>().join(" "),
            mges.join(" ")
        ),
    }
}

fn criterion_2() -> Verdict {
    let i = instance();
    let w = why_not(&i);
    let spec = load_obda(fixture("obda.json"), schema()).unwrap();
    let count = spec.universe().len();
    let set = |items: &[&str]| items.iter().map(|s| Constant::parse(s)).collect::<BTreeSet<_>>();
    let eu = spec.certain_extension(&i, &BasicConcept::atomic("EU-City")).unwrap();
    let countries = spec.certain_extension(&i, &BasicConcept::exists("hasCountry", true)).unwrap();
    let e = Explanation(vec![BasicConcept::atomic("EU-City"), BasicConcept::atomic("N.A.-City")]);
    let mge = check_mge(&w, &spec, &e).unwrap();
    let pass = count == 13
        && eu == set(&["Amsterdam", "Berlin", "Rome"])
        && countries == set(&["Netherlands", "Germany", "Italy", "USA", "Japan"])
        && mge;
    Verdict {
        pass,
        detail: format!(
            "{count} basic concepts; EU-City has {} members; exists hasCountry- has {}; {e} most general: {mge}",
            eu.len(),
            countries.len()
        ),
    }
}

fn criterion_3() -> Verdict {
    let i = instance();
    let w = why_not(&i);
    let s = i.schema();
    let o = InstanceOntology::new(&i, Fragment::Full);
    let continents = ls(s, &[r#"Cities[continent="Europe"].name"#, r#"Cities[continent="N.America"].name"#]);
    let reachable = ls(s, &[r#"Reachable[city_from="Berlin"].city_to"#, r#"Reachable[city_to="Santa Cruz"].city_from"#]);
    let dutch_big = ls(
        s,
        &[r#"Cities[country="Netherlands"].name"#, r#"BigCity.name & Cities[continent="N.America"].name"#],
    );
    let nominals = ls(s, &["{Amsterdam}", "{New York}"]);
    let continents_mge = check_mge_oi(&w, &continents, Fragment::Full, DEFAULT_BUDGET).unwrap();
    let nominals_mge = check_mge_oi(&w, &nominals, Fragment::Full, DEFAULT_BUDGET).unwrap();
    let vs_dutch_big = compare_generality(&o, &continents, &dutch_big).unwrap();
    let vs_reachable = compare_generality(&o, &continents, &reachable).unwrap();
    let pass = continents_mge && !nominals_mge && vs_dutch_big == Generality::Greater && matches!(vs_reachable, Generality::Greater | Generality::Equivalent);
    Verdict {
        pass,
        detail: format!(
            "continent pair most general: {continents_mge}; nominal pair most general: {nominals_mge}; \
             continent pair vs Dutch/big pair: {vs_dutch_big}; continent pair vs reachable pair: {vs_reachable}"
        ),
    }
}

fn criterion_4() -> Verdict {
    let views = schema().restricted(|c| matches!(c, Constraint::View(_)));
    let ids = schema().restricted(|c| matches!(c, Constraint::Id(_)));
    let c = |s: &Schema, t: &str| parse_concept(t, s).unwrap();
    let a = subsumed_by_schema(&c(&views, "Cities[population>7000000].name"), &c(&views, "BigCity.name"), &views);
    let b = subsumed_by_schema(&c(&ids, "Train-Connections.city_from"), &c(&ids, "Cities.name"), &ids);
    let d = subsumed_by_schema(&c(&views, "Cities.name"), &c(&views, r#"Cities[continent="Europe"].name"#), &views);
    let pass = matches!(a, Ok(true)) && matches!(b, Ok(true)) && matches!(d, Ok(false));
    Verdict {
        pass,
        detail: format!("{a:?} {b:?} {d:?}"),
    }
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let a = suite::lub_minimality(501, 200);
    let b = suite::incremental_is_most_general(502, 200);
    let c = suite::exhaustive_completeness(503, 200);
    let d = suite::preorder_laws(504, 200);
    let took = start.elapsed();
    let pass = [a, b, c, d].iter().all(|t| t.checked > 0 && t.failed == 0) && took < Duration::from_secs(60);
    Verdict {
        pass,
        detail: format!(
            "lub {}/{} failed, incremental {}/{}, exhaustive {}/{}, preorder {}/{}; {took:.2?}",
            a.failed, a.checked, b.failed, b.checked, c.failed, c.checked, d.failed, d.checked
        ),
    }
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let t = suite::variants_agree(601, 200);
    let i = instance();
    let w = why_not(&i);
    let o = load_ontology(fixture("ontology.json"), i.schema()).unwrap();
    let (e, d) = card_maximal(&w, &o, DEFAULT_BUDGET).unwrap();
    let took = start.elapsed();
    let pass = t.failed == 0 && d == Degree::Finite(6) && took < Duration::from_secs(5);
    Verdict {
        pass,
        detail: format!(
            "random ontologies {}/{} failed; train example {e} with degree {d}; {took:.2?}",
            t.failed, t.checked
        ),
    }
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let t = suite::irredundancy(701, 100);
    let took = start.elapsed();
    Verdict {
        pass: t.checked == 100 && t.failed == 0 && took < Duration::from_secs(10),
        detail: format!("{}/{} failed; {took:.2?}", t.failed, t.checked),
    }
}

#[test]
fn acceptance() {
    let limits = [1, 1, 1, u64::MAX, u64::MAX, u64::MAX, u64::MAX];
    let criteria: [fn() -> Verdict; 7] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
    ];
    let mut failed = Vec::new();
    for (k, run) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut v = run();
        let took = start.elapsed();
        if took > Duration::from_secs(limits[k]) {
            v.pass = false;
            v.detail.push_str(&format!("; too slow: {took:.2?}"));
        }
        println!("criterion {}: {} ({})", k + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
