//! Why-not instances, explanations and the algorithms that find
//! most-general explanations.

mod derived;
mod exhaustive;
mod variants;

use std::collections::BTreeSet;
use std::fmt;

pub use derived::{
    check_mge_oi, compute_mge_os, incremental_mge, instance_universe, minimize_equivalent_length, os_candidates,
};
pub use exhaustive::{check_mge, exhaustive_mge, exhaustive_over, exists_explanation, maximal_explanations};
pub use variants::{card_maximal, degree_of_generality, shortest_mge, Degree};

use crate::concept::Extension;
use crate::error::{Error, Result};
use crate::ontology::Ontology;
use crate::query::{eval_ucq, Ucq};
use crate::relational::Instance;
use crate::value::{format_tuple, Constant, Tuple};

/// Default cap on enumerated candidates in the brute-force searches.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// A query, its answers on an instance and a tuple missing from them.
#[derive(Debug, Clone)]
pub struct WhyNotInstance<'a> {
    pub instance: &'a Instance,
    pub query: Ucq,
    pub answers: BTreeSet<Tuple>,
    pub tuple: Tuple,
}

impl<'a> WhyNotInstance<'a> {
    /// Evaluates the query to obtain the answers.
    pub fn new(instance: &'a Instance, query: Ucq, tuple: Tuple) -> Result<Self> {
        query.check(instance.schema())?;
        let answers = eval_ucq(&query, instance)?;
        Self::with_answers(instance, query, answers, tuple, false)
    }

    /// Takes precomputed answers, recomputing them first when `verify` is
    /// set.
    pub fn with_answers(
        instance: &'a Instance,
        query: Ucq,
        answers: BTreeSet<Tuple>,
        tuple: Tuple,
        verify: bool,
    ) -> Result<Self> {
        if tuple.len() != query.arity() {
            return Err(Error::ArityMismatch {
                expected: query.arity(),
                found: tuple.len(),
            });
        }
        if verify {
            query.check(instance.schema())?;
            if eval_ucq(&query, instance)? != answers {
                return Err(Error::AnswerMismatch);
            }
        }
        if answers.contains(&tuple) {
            return Err(Error::TuplePresent(format_tuple(&tuple)));
        }
        Ok(WhyNotInstance {
            instance,
            query,
            answers,
            tuple,
        })
    }

    pub fn arity(&self) -> usize {
        self.tuple.len()
    }

    /// The active domain together with the constants of the missing tuple.
    pub fn pool(&self) -> BTreeSet<Constant> {
        let mut k = self.instance.adom().clone();
        k.extend(self.tuple.iter().cloned());
        k
    }

    /// Whether concepts with these extensions form an explanation: each
    /// extension holds its component of the tuple and no answer lies in
    /// their product.
    pub fn explained_by(&self, exts: &[Extension]) -> bool {
        exts.len() == self.arity()
            && self.tuple.iter().zip(exts).all(|(a, e)| e.contains(a))
            && !self
                .answers
                .iter()
                .any(|t| t.iter().zip(exts).all(|(b, e)| e.contains(b)))
    }

    fn check_arity<C>(&self, e: &Explanation<C>) -> Result<()> {
        if e.len() == self.arity() {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                expected: self.arity(),
                found: e.len(),
            })
        }
    }
}

/// One concept per position of the missing tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Explanation<C>(pub Vec<C>);

impl<C> Explanation<C> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concepts(&self) -> &[C] {
        &self.0
    }

    /// The explanation with position `j` replaced.
    pub fn with(&self, j: usize, c: C) -> Explanation<C>
    where
        C: Clone,
    {
        let mut out = self.0.clone();
        out[j] = c;
        Explanation(out)
    }
}

impl<C: fmt::Display> fmt::Display for Explanation<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            c.fmt(f)?;
        }
        f.write_str("⟩")
    }
}

/// How the first explanation compares to the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generality {
    Less,
    Greater,
    Equivalent,
    Incomparable,
}

impl fmt::Display for Generality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generality::Less => "less general",
            Generality::Greater => "more general",
            Generality::Equivalent => "equivalent",
            Generality::Incomparable => "incomparable",
        })
    }
}

pub fn is_explanation<O: Ontology>(w: &WhyNotInstance<'_>, o: &O, e: &Explanation<O::Concept>) -> Result<bool> {
    w.check_arity(e)?;
    let exts = o.extensions(&e.0, w.instance)?;
    Ok(w.explained_by(&exts))
}

/// Componentwise `e1 ≤ e2`.
pub fn leq<O: Ontology>(o: &O, e1: &Explanation<O::Concept>, e2: &Explanation<O::Concept>) -> Result<bool> {
    for (a, b) in e1.0.iter().zip(&e2.0) {
        if !o.subsumes(a, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn compare_generality<O: Ontology>(
    o: &O,
    e1: &Explanation<O::Concept>,
    e2: &Explanation<O::Concept>,
) -> Result<Generality> {
    if e1.len() != e2.len() {
        return Err(Error::ArityMismatch {
            expected: e1.len(),
            found: e2.len(),
        });
    }
    Ok(match (leq(o, e1, e2)?, leq(o, e2, e1)?) {
        (true, true) => Generality::Equivalent,
        (true, false) => Generality::Less,
        (false, true) => Generality::Greater,
        (false, false) => Generality::Incomparable,
    })
}

/// Visits every index vector of the product of `sizes` in lexicographic
/// order until `visit` returns `false`. Fails when the product exceeds
/// `budget`.
pub(crate) fn for_each_product(
    sizes: &[usize],
    budget: usize,
    mut visit: impl FnMut(&[usize]) -> Result<bool>,
) -> Result<()> {
    let total = sizes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
    if total.is_none_or(|t| t > budget) {
        return Err(Error::BudgetExceeded {
            limit: budget,
            during: "enumerating candidate explanations",
        });
    }
    if sizes.contains(&0) {
        return Ok(());
    }
    let mut pick = vec![0usize; sizes.len()];
    loop {
        if !visit(&pick)? {
            return Ok(());
        }
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < sizes[k] {
                break;
            }
            pick[k] = 0;
        }
    }
}
