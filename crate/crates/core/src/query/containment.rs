use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::value::Constant;

use super::{Atom, CmpOp, ConjunctiveQuery, Term, Ucq};

/// Interval of values a variable may take, from its comparisons.
#[derive(Debug, Clone, Default)]
struct Interval {
    /// `(bound, strict)`.
    lower: Option<(Constant, bool)>,
    upper: Option<(Constant, bool)>,
}

impl Interval {
    fn tighten(&mut self, op: CmpOp, c: &Constant) {
        match op {
            CmpOp::Ge | CmpOp::Gt => {
                let strict = op == CmpOp::Gt;
                let replace = match &self.lower {
                    None => true,
                    Some((b, s)) => c > b || (c == b && strict && !s),
                };
                if replace {
                    self.lower = Some((c.clone(), strict));
                }
            }
            CmpOp::Le | CmpOp::Lt => {
                let strict = op == CmpOp::Lt;
                let replace = match &self.upper {
                    None => true,
                    Some((b, s)) => c < b || (c == b && strict && !s),
                };
                if replace {
                    self.upper = Some((c.clone(), strict));
                }
            }
            CmpOp::Eq => unreachable!("equalities are substituted away"),
        }
    }

    fn is_empty(&self) -> bool {
        match (&self.lower, &self.upper) {
            (Some((lo, ls)), Some((hi, hs))) => match lo.cmp(hi) {
                Ordering::Greater => true,
                Ordering::Equal => *ls || *hs,
                Ordering::Less => false,
            },
            _ => false,
        }
    }

    fn point(&self) -> Option<&Constant> {
        match (&self.lower, &self.upper) {
            (Some((lo, false)), Some((hi, false))) if lo == hi => Some(lo),
            _ => None,
        }
    }

    /// Whether every value in the interval satisfies `op c`.
    fn implies(&self, op: CmpOp, c: &Constant) -> bool {
        match op {
            CmpOp::Ge => self.lower.as_ref().is_some_and(|(lo, _)| lo >= c),
            CmpOp::Gt => self
                .lower
                .as_ref()
                .is_some_and(|(lo, strict)| lo > c || (lo == c && *strict)),
            CmpOp::Le => self.upper.as_ref().is_some_and(|(hi, _)| hi <= c),
            CmpOp::Lt => self
                .upper
                .as_ref()
                .is_some_and(|(hi, strict)| hi < c || (hi == c && *strict)),
            CmpOp::Eq => false,
        }
    }
}

/// A conjunctive query with equalities substituted and the remaining
/// comparisons folded into one interval per variable.
struct Normal {
    head: Vec<Term>,
    atoms: Vec<Atom>,
    intervals: BTreeMap<String, Interval>,
}

/// `None` when the query is unsatisfiable.
fn normalize(q: &ConjunctiveQuery) -> Option<Normal> {
    let mut pins: BTreeMap<String, Term> = BTreeMap::new();
    for c in q.comparisons.iter().filter(|c| c.op == CmpOp::Eq) {
        match pins.get(&c.var) {
            Some(Term::Const(k)) if k != &c.value => return None,
            _ => {
                pins.insert(c.var.clone(), Term::Const(c.value.clone()));
            }
        }
    }
    let q = q.substitute(&pins)?;
    let mut intervals: BTreeMap<String, Interval> = BTreeMap::new();
    for c in &q.comparisons {
        intervals.entry(c.var.clone()).or_default().tighten(c.op, &c.value);
    }
    if intervals.values().any(Interval::is_empty) {
        return None;
    }
    // `x >= c, x <= c` pins x to c.
    let points: BTreeMap<String, Term> = intervals
        .iter()
        .filter_map(|(v, i)| i.point().map(|p| (v.clone(), Term::Const(p.clone()))))
        .collect();
    if !points.is_empty() {
        return normalize(&q.substitute(&points)?);
    }
    Some(Normal {
        head: q.head,
        atoms: q.atoms,
        intervals,
    })
}

/// Whether `q1 ⊆ q2` on every instance, by a homomorphism from `q2` into the
/// canonical database of `q1` that respects comparisons.
pub fn contains_cq(q1: &ConjunctiveQuery, q2: &ConjunctiveQuery) -> bool {
    if q1.arity() != q2.arity() {
        return false;
    }
    let Some(n1) = normalize(q1) else {
        return true;
    };
    let Some(n2) = normalize(q2) else {
        return false;
    };
    let mut map: BTreeMap<&str, &Term> = BTreeMap::new();
    for (t2, t1) in n2.head.iter().zip(&n1.head) {
        if !bind(&mut map, t2, t1) {
            return false;
        }
    }
    homomorphism(&n1, &n2, 0, &mut map)
}

/// `q1 ⊆ q2` when each disjunct of `q1` is contained in some disjunct of `q2`.
pub fn contains_ucq(q1: &Ucq, q2: &Ucq) -> bool {
    q1.arity() == q2.arity()
        && q1
            .disjuncts
            .iter()
            .all(|d1| q2.disjuncts.iter().any(|d2| contains_cq(d1, d2)))
}

fn bind<'a>(map: &mut BTreeMap<&'a str, &'a Term>, from: &'a Term, to: &'a Term) -> bool {
    match from {
        Term::Const(c) => matches!(to, Term::Const(d) if c == d),
        Term::Var(v) => match map.get(v.as_str()) {
            Some(existing) => *existing == to,
            None => {
                map.insert(v, to);
                true
            }
        },
    }
}

fn homomorphism<'a>(
    n1: &'a Normal,
    n2: &'a Normal,
    i: usize,
    map: &mut BTreeMap<&'a str, &'a Term>,
) -> bool {
    let Some(atom) = n2.atoms.get(i) else {
        return comparisons_implied(n1, n2, map);
    };
    for target in n1.atoms.iter().filter(|a| a.relation == atom.relation && a.args.len() == atom.args.len()) {
        let saved = map.clone();
        if atom.args.iter().zip(&target.args).all(|(f, t)| bind(map, f, t))
            && homomorphism(n1, n2, i + 1, map)
        {
            return true;
        }
        *map = saved;
    }
    false
}

fn comparisons_implied(n1: &Normal, n2: &Normal, map: &BTreeMap<&str, &Term>) -> bool {
    n2.intervals.iter().all(|(v, interval)| {
        let Some(target) = map.get(v.as_str()) else {
            return false;
        };
        let needed = conditions(interval);
        match target {
            Term::Const(k) => needed.iter().all(|(op, c)| op.holds(k, c)),
            Term::Var(u) => {
                let have = n1.intervals.get(u).cloned().unwrap_or_default();
                needed.iter().all(|(op, c)| have.implies(*op, c))
            }
        }
    })
}

fn conditions(i: &Interval) -> Vec<(CmpOp, Constant)> {
    let mut out = Vec::new();
    if let Some((lo, strict)) = &i.lower {
        out.push((if *strict { CmpOp::Gt } else { CmpOp::Ge }, lo.clone()));
    }
    if let Some((hi, strict)) = &i.upper {
        out.push((if *strict { CmpOp::Lt } else { CmpOp::Le }, hi.clone()));
    }
    out
}
