//! Restriction merging applied before verbalisation.
//!
//! Inside a conjunction, `∃r.X ⊓ ∃r.Y` becomes `∃r.(X ⊓ Y)`; inside a
//! disjunction the merged filler is a disjunction. `∀` restrictions merge the
//! same way with each other, never with `∃`. The rule is applied bottom-up and
//! re-applied inside every freshly built filler, so the result is a fixpoint.
//!
//! For `∃` under `⊓` the rewrite is not equivalence-preserving
//! (`∃r.A ⊓ ∃r.B` does not entail `∃r.(A ⊓ B)`); it exists for fluent text only
//! and must not feed the reasoner.

use crate::model::{ConceptExpr, Property, Quantifier};

pub fn merge_restrictions(expr: &ConceptExpr) -> ConceptExpr {
    match expr {
        ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => expr.clone(),
        ConceptExpr::Not(c) => ConceptExpr::not(merge_restrictions(c)),
        ConceptExpr::Exists(p, c) => ConceptExpr::Exists(p.clone(), Box::new(merge_restrictions(c))),
        ConceptExpr::Forall(p, c) => ConceptExpr::Forall(p.clone(), Box::new(merge_restrictions(c))),
        ConceptExpr::And(cs) => merge_nary(cs, true),
        ConceptExpr::Or(cs) => merge_nary(cs, false),
    }
}

enum Slot {
    Plain(ConceptExpr),
    Group(Quantifier, Property, Vec<ConceptExpr>),
}

fn merge_nary(operands: &[ConceptExpr], conjunction: bool) -> ConceptExpr {
    let mut slots: Vec<Slot> = Vec::with_capacity(operands.len());
    for operand in operands.iter().map(merge_restrictions) {
        let Some((q, p, filler)) = operand.as_restriction() else {
            slots.push(Slot::Plain(operand));
            continue;
        };
        let existing = slots.iter_mut().find_map(|s| match s {
            Slot::Group(sq, sp, fillers) if *sq == q && sp == p => Some(fillers),
            _ => None,
        });
        match existing {
            Some(fillers) => fillers.push(filler.clone()),
            None => slots.push(Slot::Group(q, p.clone(), vec![filler.clone()])),
        }
    }

    let mut merged: Vec<ConceptExpr> = slots
        .into_iter()
        .map(|slot| match slot {
            Slot::Plain(e) => e,
            Slot::Group(q, p, mut fillers) => {
                let filler = if fillers.len() == 1 {
                    fillers.pop().unwrap()
                } else if conjunction {
                    merge_restrictions(&ConceptExpr::And(fillers))
                } else {
                    merge_restrictions(&ConceptExpr::Or(fillers))
                };
                ConceptExpr::restriction(q, p, filler)
            }
        })
        .collect();

    if merged.len() == 1 {
        merged.pop().unwrap()
    } else if conjunction {
        ConceptExpr::And(merged)
    } else {
        ConceptExpr::Or(merged)
    }
}
