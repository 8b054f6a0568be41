use crate::concept::Extension;
use crate::error::Result;
use crate::ontology::{FiniteUniverse, Ontology};

use super::{for_each_product, is_explanation, Explanation, WhyNotInstance};

/// Candidate concepts per position, restricted to those whose extension
/// holds the tuple's component, with extensions and the subsumption
/// relation among them.
pub(crate) struct Search<C> {
    pub concepts: Vec<Vec<C>>,
    pub exts: Vec<Vec<Extension>>,
    /// `leq[i][a][b]` iff candidate a at position i is subsumed by b.
    pub leq: Vec<Vec<Vec<bool>>>,
}

impl<C: Clone + Ord> Search<C> {
    pub fn new<O: Ontology<Concept = C>>(w: &WhyNotInstance<'_>, o: &O, lists: &[Vec<C>]) -> Result<Self> {
        let mut concepts = Vec::new();
        let mut exts = Vec::new();
        let mut leq = Vec::new();
        for (a, list) in w.tuple.iter().zip(lists) {
            let mut list = list.clone();
            list.sort();
            list.dedup();
            let all = o.extensions(&list, w.instance)?;
            let (keep, keep_ext): (Vec<C>, Vec<Extension>) =
                list.into_iter().zip(all).filter(|(_, e)| e.contains(a)).unzip();
            let mut matrix = vec![vec![false; keep.len()]; keep.len()];
            for (x, row) in matrix.iter_mut().enumerate() {
                for (y, cell) in row.iter_mut().enumerate() {
                    *cell = x == y || o.subsumes(&keep[x], &keep[y])?;
                }
            }
            concepts.push(keep);
            exts.push(keep_ext);
            leq.push(matrix);
        }
        Ok(Search { concepts, exts, leq })
    }

    pub fn explanation(&self, pick: &[usize]) -> Explanation<C> {
        Explanation(pick.iter().zip(&self.concepts).map(|(&i, c)| c[i].clone()).collect())
    }

    pub fn extensions(&self, pick: &[usize]) -> Vec<Extension> {
        pick.iter().zip(&self.exts).map(|(&i, e)| e[i].clone()).collect()
    }

    fn sizes(&self) -> Vec<usize> {
        self.concepts.iter().map(Vec::len).collect()
    }

    /// Index vectors of all explanations, in lexicographic order.
    pub fn explanations(&self, w: &WhyNotInstance<'_>, budget: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for_each_product(&self.sizes(), budget, |pick| {
            if w.explained_by(&self.extensions(pick)) {
                out.push(pick.to_vec());
            }
            Ok(true)
        })?;
        Ok(out)
    }

    pub fn exists(&self, w: &WhyNotInstance<'_>, budget: usize) -> Result<bool> {
        let mut found = false;
        for_each_product(&self.sizes(), budget, |pick| {
            found = w.explained_by(&self.extensions(pick));
            Ok(!found)
        })?;
        Ok(found)
    }

    pub fn le(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter().zip(b).enumerate().all(|(i, (&x, &y))| self.leq[i][x][y])
    }

    /// Explanations with no strictly more general explanation.
    pub fn maximal(&self, all: &[Vec<usize>]) -> Vec<Vec<usize>> {
        all.iter()
            .filter(|e| !all.iter().any(|f| self.le(e, f) && !self.le(f, e)))
            .cloned()
            .collect()
    }
}

/// All maximal explanations over the given candidates, including every
/// member of each equivalence class.
pub fn maximal_explanations<O: Ontology>(
    w: &WhyNotInstance<'_>,
    o: &O,
    lists: &[Vec<O::Concept>],
    budget: usize,
) -> Result<Vec<Explanation<O::Concept>>> {
    let search = Search::new(w, o, lists)?;
    let all = search.explanations(w, budget)?;
    Ok(search.maximal(&all).iter().map(|p| search.explanation(p)).collect())
}

/// Exhaustive search: collect the candidates holding each component of the
/// tuple, keep the explanations among their combinations, drop those that
/// are strictly less general than another, and keep the least member (in
/// canonical order) of each equivalence class.
pub fn exhaustive_over<O: Ontology>(
    w: &WhyNotInstance<'_>,
    o: &O,
    lists: &[Vec<O::Concept>],
    budget: usize,
) -> Result<Vec<Explanation<O::Concept>>> {
    let search = Search::new(w, o, lists)?;
    let all = search.explanations(w, budget)?;
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for e in search.maximal(&all) {
        if !kept.iter().any(|k| search.le(k, &e) && search.le(&e, k)) {
            kept.push(e);
        }
    }
    Ok(kept.iter().map(|p| search.explanation(p)).collect())
}

/// [`exhaustive_over`] with the whole universe at every position.
pub fn exhaustive_mge<O: FiniteUniverse>(
    w: &WhyNotInstance<'_>,
    o: &O,
    budget: usize,
) -> Result<Vec<Explanation<O::Concept>>> {
    let lists = vec![o.universe(); w.arity()];
    exhaustive_over(w, o, &lists, budget)
}

/// Whether any combination of universe concepts is an explanation. A
/// query without answer variables has none.
pub fn exists_explanation<O: FiniteUniverse>(w: &WhyNotInstance<'_>, o: &O, budget: usize) -> Result<bool> {
    if w.arity() == 0 {
        return Ok(false);
    }
    let lists = vec![o.universe(); w.arity()];
    Search::new(w, o, &lists)?.exists(w, budget)
}

/// Whether `e` is a most-general explanation: it is an explanation and
/// replacing any one concept by a strictly more general universe concept
/// never yields an explanation. On a consistent instance a more general
/// explanation can always be reached by one such replacement.
pub fn check_mge<O: FiniteUniverse>(w: &WhyNotInstance<'_>, o: &O, e: &Explanation<O::Concept>) -> Result<bool> {
    if !is_explanation(w, o, e)? {
        return Ok(false);
    }
    let universe = o.universe();
    for (j, c) in e.0.iter().enumerate() {
        for d in &universe {
            if o.subsumes(c, d)? && !o.subsumes(d, c)? && is_explanation(w, o, &e.with(j, d.clone()))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
