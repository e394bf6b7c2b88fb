//! Parser for basis-element literals, the textual form used by the CLI:
//!
//! ```text
//! d(1)#0@0 * K[1]@2
//! ```
//!
//! A literal is a `*`-separated product of tokens. Each token is either a
//! class token `d(d1,...,dn)#k` (dimension vector plus class index), a
//! K-token `K[a1,...,an]`, or the unit `1`. Both kinds accept an optional
//! `@deg` suffix placing them in a degree of `Z_m` (default 0). Errors carry
//! the byte position of the offending input.

use crate::periodic::{PeriodicAlgebra, PeriodicBasisElt};
use crate::repcat::{Category, DimVector, IsoClassId, KClass};
use crate::{HallError, Result};

/// One parsed token, before category-level resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemKind {
    Class { dim: DimVector, index: usize },
    K(KClass),
    Unit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub kind: ItemKind,
    pub deg: usize,
    pub pos: usize,
}

/// A parsed literal: the product of its items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub items: Vec<Item>,
}

fn err(pos: usize, msg: impl Into<String>) -> HallError {
    HallError::Parse { pos, msg: msg.into() }
}

fn parse_int_list(body: &str, base: usize) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    for part in body.split(',') {
        let trimmed = part.trim();
        if trimmed.is_empty() {
            return Err(err(base + offset, "empty entry in list"));
        }
        let n: i64 = trimmed
            .parse()
            .map_err(|_| err(base + offset, format!("expected an integer, found {trimmed:?}")))?;
        out.push(n);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn parse_token(token: &str, pos: usize) -> Result<Item> {
    let (head, deg) = match token.find('@') {
        Some(at) => {
            let deg_str = &token[at + 1..];
            let deg: usize = deg_str.parse().map_err(|_| {
                err(pos + at + 1, format!("expected a degree, found {deg_str:?}"))
            })?;
            (&token[..at], deg)
        }
        None => (token, 0usize),
    };
    if head == "1" {
        return Ok(Item { kind: ItemKind::Unit, deg, pos });
    }
    if let Some(rest) = head.strip_prefix("d(") {
        let close = rest
            .find(')')
            .ok_or_else(|| err(pos + head.len(), "missing ')' in class token"))?;
        let dims = parse_int_list(&rest[..close], pos + 2)?;
        if dims.iter().any(|&d| d < 0) {
            return Err(err(pos + 2, "dimensions must be nonnegative"));
        }
        let after = &rest[close + 1..];
        let idx_str = after.strip_prefix('#').ok_or_else(|| {
            err(pos + 2 + close + 1, "expected '#index' after the dimension vector")
        })?;
        let index: usize = idx_str.parse().map_err(|_| {
            err(pos + 2 + close + 2, format!("expected a class index, found {idx_str:?}"))
        })?;
        return Ok(Item {
            kind: ItemKind::Class {
                dim: DimVector(dims.into_iter().map(|d| d as usize).collect()),
                index,
            },
            deg,
            pos,
        });
    }
    if let Some(rest) = head.strip_prefix("K[") {
        let close = rest
            .find(']')
            .ok_or_else(|| err(pos + head.len(), "missing ']' in K token"))?;
        if !rest[close + 1..].is_empty() {
            return Err(err(pos + 2 + close + 1, "unexpected trailing characters in K token"));
        }
        let entries = parse_int_list(&rest[..close], pos + 2)?;
        return Ok(Item { kind: ItemKind::K(KClass(entries)), deg, pos });
    }
    Err(err(
        pos,
        format!("expected 'd(...)#k', 'K[...]', or '1', found {head:?}"),
    ))
}

/// Parse a literal without resolving class labels against a category.
pub fn parse_literal(input: &str) -> Result<Literal> {
    let mut items = Vec::new();
    let mut pos = 0usize;
    for (n, part) in input.split('*').enumerate() {
        if n > 0 {
            pos += 1; // the '*'
        }
        let leading = part.len() - part.trim_start().len();
        let token = part.trim();
        if token.is_empty() {
            return Err(err(pos + leading, "empty factor"));
        }
        items.push(parse_token(token, pos + leading)?);
        pos += part.len();
    }
    if items.is_empty() {
        return Err(err(0, "empty literal"));
    }
    Ok(Literal { items })
}

fn resolve_class(cat: &Category, dim: &DimVector, index: usize, pos: usize) -> Result<IsoClassId> {
    if dim.0.len() != cat.quiver().vertex_count() {
        return Err(err(
            pos,
            format!(
                "dimension vector has {} entries, quiver has {} vertices",
                dim.0.len(),
                cat.quiver().vertex_count()
            ),
        ));
    }
    cat.parse_class_label(dim.clone(), index)
        .map_err(|_| err(pos, format!("no class d{dim}#{index}")))
}

/// Resolve a literal into a periodic basis element: class tokens at the same
/// degree are direct-summed, K tokens at the same degree add.
pub fn to_periodic_basis(alg: &PeriodicAlgebra, lit: &Literal) -> Result<PeriodicBasisElt> {
    let cat = alg.cat();
    let m = alg.m();
    let mut out = alg.unit_elt();
    for item in &lit.items {
        if item.deg >= m {
            return Err(err(item.pos, format!("degree {} out of range for m = {m}", item.deg)));
        }
        match &item.kind {
            ItemKind::Unit => {}
            ItemKind::Class { dim, index } => {
                let cl = resolve_class(cat, dim, *index, item.pos)?;
                let slot = &mut out.classes[item.deg];
                if slot.is_zero() {
                    *slot = cl;
                } else {
                    let sum = cat
                        .class_rep(slot)?
                        .direct_sum(&cat.class_rep(&cl)?, cat.quiver());
                    *slot = cat.canonical_id(&sum)?;
                }
            }
            ItemKind::K(kc) => {
                if kc.0.len() != cat.quiver().vertex_count() {
                    return Err(err(
                        item.pos,
                        format!(
                            "K-class has {} entries, quiver has {} vertices",
                            kc.0.len(),
                            cat.quiver().vertex_count()
                        ),
                    ));
                }
                out.ks[item.deg] = out.ks[item.deg].add(kc);
            }
        }
    }
    Ok(out)
}

/// Resolve a literal into an abelian-category pair (class, K-class) for the
/// non-periodic algebras; all degrees must be 0.
pub fn to_hall_basis(cat: &Category, lit: &Literal) -> Result<(IsoClassId, KClass)> {
    let n = cat.quiver().vertex_count();
    let mut class = cat.zero_class();
    let mut k = KClass::zero(n);
    for item in &lit.items {
        if item.deg != 0 {
            return Err(err(item.pos, "nonzero degree in a non-periodic literal"));
        }
        match &item.kind {
            ItemKind::Unit => {}
            ItemKind::Class { dim, index } => {
                let cl = resolve_class(cat, dim, *index, item.pos)?;
                if class.is_zero() {
                    class = cl;
                } else {
                    let sum = cat
                        .class_rep(&class)?
                        .direct_sum(&cat.class_rep(&cl)?, cat.quiver());
                    class = cat.canonical_id(&sum)?;
                }
            }
            ItemKind::K(kc) => {
                if kc.0.len() != n {
                    return Err(err(item.pos, "K-class length mismatch"));
                }
                k = k.add(kc);
            }
        }
    }
    Ok((class, k))
}
