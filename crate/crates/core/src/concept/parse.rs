use crate::error::{Error, Result, SyntaxError};
use crate::query::CmpOp;
use crate::relational::{Relation, Schema};
use crate::syntax::Cursor;
use crate::value::Constant;

use super::{AtomicConcept, Concept, Condition, Projection};

/// Parses `T`, `{c}`, `R[A op c, ...].B` and conjunctions joined by `&`.
/// Relation and attribute names are resolved against `schema`.
pub fn parse_concept(text: &str, schema: &Schema) -> Result<Concept> {
    let mut cur = Cursor::new("concept", text);
    let mut conjuncts = vec![parse_term(&mut cur, schema)?];
    while cur.eat('&') {
        conjuncts.push(parse_term(&mut cur, schema)?);
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input").into());
    }
    Ok(Concept::new(conjuncts))
}

fn parse_term(cur: &mut Cursor<'_>, schema: &Schema) -> Result<AtomicConcept> {
    if cur.eat('{') {
        let value = if cur.peek() == Some('"') {
            Constant::Text(cur.quoted()?)
        } else {
            let raw = bare_literal(cur, &['}'])?;
            Constant::parse(raw)
        };
        cur.expect('}')?;
        return Ok(AtomicConcept::Nominal(value));
    }
    let name = cur.ident(true)?;
    if cur.peek() == Some('[') {
        let rel = schema.relation(&name)?;
        cur.bump();
        let mut selection = Vec::new();
        if !cur.eat(']') {
            loop {
                selection.push(parse_condition(cur, rel)?);
                if cur.eat(']') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        cur.expect('.')?;
        let attr_name = cur.ident(false)?;
        let attr = rel.position(&attr_name)?;
        return Ok(AtomicConcept::Proj(Projection::new(
            rel.name.clone(),
            attr,
            rel.attributes[attr].clone(),
            selection,
        )));
    }
    if name == "T" {
        return Ok(AtomicConcept::Top);
    }
    // `Rel.attr` arrives as one dotted identifier; the relation name may
    // itself contain dots.
    for (i, _) in name.rmatch_indices('.') {
        let (rel_name, attr_name) = (&name[..i], &name[i + 1..]);
        if let Ok(rel) = schema.relation(rel_name) {
            let attr = rel.position(attr_name)?;
            return Ok(AtomicConcept::Proj(Projection::new(
                rel.name.clone(),
                attr,
                rel.attributes[attr].clone(),
                Vec::new(),
            )));
        }
    }
    if name.contains('.') {
        Err(Error::UnknownRelation(name.split('.').next().unwrap_or_default().to_string()))
    } else {
        Err(cur.error(format!("`{name}` is not a concept; expected T, {{c}} or R.A")).into())
    }
}

fn parse_condition(cur: &mut Cursor<'_>, rel: &Relation) -> Result<Condition> {
    let attr_name = cur.ident(false)?;
    let attr = rel.position(&attr_name)?;
    let op = parse_op(cur)?;
    let value = if cur.peek() == Some('"') {
        Constant::Text(cur.quoted()?)
    } else {
        Constant::parse(bare_literal(cur, &[',', ']'])?)
    };
    Ok(Condition {
        attr,
        attr_name: rel.attributes[attr].clone(),
        op,
        value,
    })
}

fn parse_op(cur: &mut Cursor<'_>) -> Result<CmpOp, SyntaxError> {
    for op in [CmpOp::Le, CmpOp::Ge, CmpOp::Eq, CmpOp::Lt, CmpOp::Gt] {
        if cur.eat_str(op.symbol()) {
            return Ok(op);
        }
    }
    Err(cur.error("expected a comparison operator"))
}

fn bare_literal<'a>(cur: &mut Cursor<'a>, stops: &[char]) -> Result<&'a str, SyntaxError> {
    let raw = cur.take_while(|c| !stops.contains(&c));
    let value = raw.trim_end();
    if value.is_empty() {
        return Err(cur.error("expected a constant"));
    }
    Ok(value)
}
