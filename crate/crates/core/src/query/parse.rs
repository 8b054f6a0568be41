use crate::error::{Result, SyntaxError};
use crate::syntax::Cursor;
use crate::value::Constant;

use super::{Atom, CmpOp, Comparison, ConjunctiveQuery, Term, Ucq};

pub(crate) fn parse_ucq(text: &str) -> Result<Ucq> {
    let mut cur = Cursor::new("query", text);
    let (name, head) = parse_head(&mut cur)?;
    let mut disjuncts = Vec::new();
    let (atoms, comparisons) = parse_literals(&mut cur)?;
    disjuncts.push(ConjunctiveQuery::new(head.clone(), atoms, comparisons));
    while cur.eat(';') {
        if cur.at_end() {
            break;
        }
        // A later disjunct may restate the head, possibly with other variable names.
        let this_head = try_head(&mut cur, &name)?.unwrap_or_else(|| head.clone());
        let (atoms, comparisons) = parse_literals(&mut cur)?;
        disjuncts.push(ConjunctiveQuery::new(this_head, atoms, comparisons));
    }
    cur.eat('.');
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input").into());
    }
    for d in &disjuncts {
        d.check_safe()?;
    }
    Ucq::new(name, disjuncts)
}

/// Parses a rule body without a head: the atoms and comparisons of
/// `Cities(x,y,z,w), y >= 5000000`.
pub fn parse_body(text: &str) -> Result<(Vec<Atom>, Vec<Comparison>)> {
    let mut cur = Cursor::new("query body", text);
    let out = parse_literals(&mut cur)?;
    cur.eat('.');
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input").into());
    }
    Ok(out)
}

/// Parses `name(t1, ..., tn)` where the terms are variables or constants.
pub(crate) fn parse_atom_text(what: &'static str, text: &str) -> Result<Atom> {
    let mut cur = Cursor::new(what, text);
    let relation = cur.ident(true)?;
    let args = parse_args(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input").into());
    }
    Ok(Atom::new(relation, args))
}

fn parse_head(cur: &mut Cursor<'_>) -> Result<(String, Vec<Term>), SyntaxError> {
    let name = cur.ident(true)?;
    let head = parse_args(cur)?;
    if !cur.eat_str(":-") {
        return Err(cur.error("expected `:-` after the query head"));
    }
    Ok((name, head))
}

fn try_head(cur: &mut Cursor<'_>, name: &str) -> Result<Option<Vec<Term>>, SyntaxError> {
    let rest = cur.rest().trim_start();
    let Some(after) = rest.strip_prefix(name) else {
        return Ok(None);
    };
    // Only a head when the parenthesised list is followed by `:-`.
    let Some(close) = after.find(')') else {
        return Ok(None);
    };
    if !after.trim_start().starts_with('(') || !after[close + 1..].trim_start().starts_with(":-") {
        return Ok(None);
    }
    let (_, head) = parse_head(cur)?;
    Ok(Some(head))
}

fn parse_args(cur: &mut Cursor<'_>) -> Result<Vec<Term>, SyntaxError> {
    cur.expect('(')?;
    let mut args = Vec::new();
    if cur.eat(')') {
        return Ok(args);
    }
    loop {
        args.push(parse_term(cur)?);
        if cur.eat(')') {
            return Ok(args);
        }
        cur.expect(',')?;
    }
}

fn parse_literals(cur: &mut Cursor<'_>) -> Result<(Vec<Atom>, Vec<Comparison>), SyntaxError> {
    let mut atoms = Vec::new();
    let mut comparisons = Vec::new();
    if keyword_true(cur) {
        return Ok((atoms, comparisons));
    }
    loop {
        let name = cur.ident(true)?;
        if cur.peek() == Some('(') {
            let args = parse_args(cur)?;
            atoms.push(Atom::new(name, args));
        } else {
            if name.contains('.') {
                return Err(cur.error(format!("`{name}` is not a variable")));
            }
            let op = parse_op(cur)?;
            let value = parse_constant(cur)?;
            comparisons.push(Comparison {
                var: name,
                op,
                value,
            });
        }
        if !cur.eat(',') {
            return Ok((atoms, comparisons));
        }
    }
}

fn keyword_true(cur: &mut Cursor<'_>) -> bool {
    cur.skip_ws();
    let rest = cur.rest();
    if let Some(after) = rest.strip_prefix("true") {
        let next = after.trim_start().chars().next();
        if matches!(next, None | Some(';') | Some('.')) {
            return cur.eat_str("true");
        }
    }
    false
}

fn parse_op(cur: &mut Cursor<'_>) -> Result<CmpOp, SyntaxError> {
    for (text, op) in [
        ("<=", CmpOp::Le),
        (">=", CmpOp::Ge),
        ("=", CmpOp::Eq),
        ("<", CmpOp::Lt),
        (">", CmpOp::Gt),
    ] {
        if cur.eat_str(text) {
            return Ok(op);
        }
    }
    Err(cur.error("expected a comparison operator"))
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<Term, SyntaxError> {
    match cur.peek() {
        Some('"') => Ok(Term::Const(Constant::Text(cur.quoted()?))),
        Some(c) if starts_number(c, cur.peek_second()) => Ok(Term::Const(number(cur)?)),
        _ => Ok(Term::Var(cur.ident(false)?)),
    }
}

fn parse_constant(cur: &mut Cursor<'_>) -> Result<Constant, SyntaxError> {
    match cur.peek() {
        Some('"') => Ok(Constant::Text(cur.quoted()?)),
        Some(c) if starts_number(c, cur.peek_second()) => number(cur),
        _ => Err(cur.error("expected a number or a quoted string")),
    }
}

fn starts_number(c: char, next: Option<char>) -> bool {
    c.is_ascii_digit() || ((c == '-' || c == '+') && next.is_some_and(|n| n.is_ascii_digit()))
}

/// Digits, with a fractional part only when a digit follows the point, so
/// that a rule-terminating `.` is left alone.
fn number(cur: &mut Cursor<'_>) -> Result<Constant, SyntaxError> {
    cur.skip_ws();
    let rest = cur.rest();
    let bytes = rest.as_bytes();
    let mut end = 0;
    if matches!(bytes.first(), Some(b'-') | Some(b'+')) {
        end = 1;
    }
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end + 1 < bytes.len() && bytes[end] == b'.' && bytes[end + 1].is_ascii_digit() {
        end += 1;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
    }
    let text = &rest[..end];
    let value = Constant::parse(text);
    if !value.is_number() {
        return Err(cur.error(format!("malformed number `{text}`")));
    }
    cur.advance(end);
    Ok(value)
}
