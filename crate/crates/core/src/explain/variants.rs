use std::fmt;

use crate::concept::Extension;
use crate::error::{Error, Result};
use crate::ontology::FiniteUniverse;

use super::exhaustive::{maximal_explanations, Search};
use super::{Explanation, WhyNotInstance};

/// Sum of extension sizes. Any `T` component makes it infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(n) => write!(f, "{n}"),
            Degree::Infinite => f.write_str("infinite"),
        }
    }
}

pub fn degree_of_generality(exts: &[Extension]) -> Degree {
    exts.iter()
        .try_fold(0usize, |acc, e| e.len().map(|n| acc + n))
        .map_or(Degree::Infinite, Degree::Finite)
}

/// A most-general explanation of least total symbol length, ties broken by
/// canonical order. Brute force over all maximal explanations.
pub fn shortest_mge<O: FiniteUniverse>(
    w: &WhyNotInstance<'_>,
    o: &O,
    budget: usize,
) -> Result<Explanation<O::Concept>> {
    let lists = vec![o.universe(); w.arity()];
    maximal_explanations(w, o, &lists, budget)?
        .into_iter()
        .min_by(|a, b| {
            let len = |e: &Explanation<O::Concept>| e.0.iter().map(|c| o.symbol_length(c)).sum::<usize>();
            len(a).cmp(&len(b)).then_with(|| a.cmp(b))
        })
        .ok_or(Error::NoExplanation)
}

/// An explanation of greatest degree of generality, ties broken by
/// canonical order. Brute force over all explanations.
pub fn card_maximal<O: FiniteUniverse>(
    w: &WhyNotInstance<'_>,
    o: &O,
    budget: usize,
) -> Result<(Explanation<O::Concept>, Degree)> {
    if w.arity() == 0 {
        return Err(Error::NoExplanation);
    }
    let lists = vec![o.universe(); w.arity()];
    let search = Search::new(w, o, &lists)?;
    let mut best: Option<(Degree, Vec<usize>)> = None;
    for pick in search.explanations(w, budget)? {
        let d = degree_of_generality(&search.extensions(&pick));
        // explanations arrive in canonical order, so only a strict gain replaces
        if best.as_ref().is_none_or(|(b, _)| d > *b) {
            best = Some((d, pick));
        }
    }
    let (d, pick) = best.ok_or(Error::NoExplanation)?;
    Ok((search.explanation(&pick), d))
}
