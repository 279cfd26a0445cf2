//! Canonical text form of concept expressions.
//!
//! Grammar (every non-atomic node parenthesised):
//!
//! ```text
//! expr  := atom | "(" "not" expr ")"
//!        | "(" atom ("some" | "only") expr ")"
//!        | "(" expr ("and" expr)+ ")" | "(" expr ("or" expr)+ ")"
//! atom  := "owl:Thing" | "owl:Nothing" | bare | "<" escaped ">"
//! ```
//!
//! A bare atom is any run of characters other than whitespace, parentheses
//! and angle brackets that is not a keyword. Anything else is written inside
//! angle brackets with `\` escaping `>` and `\`.

use crate::model::{ConceptExpr, Iri, LabelMap};

pub const KEYWORDS: [&str; 5] = ["and", "or", "not", "some", "only"];
pub const TOP: &str = "owl:Thing";
pub const BOTTOM: &str = "owl:Nothing";

/// Serialises `expr`. With `labels`, atoms render as their first label
/// (falling back to the IRI); without, as the IRI itself, which is the form
/// that round-trips through [`crate::parser::parse_concept`].
pub fn canonical_form(expr: &ConceptExpr, labels: Option<&LabelMap>) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr, labels);
    out
}

fn name<'a>(iri: &'a Iri, labels: Option<&'a LabelMap>) -> &'a str {
    labels.and_then(|l| l.get(iri)).and_then(|ls| ls.first()).map(String::as_str).unwrap_or(iri.as_str())
}

fn write_expr(out: &mut String, expr: &ConceptExpr, labels: Option<&LabelMap>) {
    match expr {
        ConceptExpr::Atomic(iri) => write_atom(out, name(iri, labels)),
        ConceptExpr::Top => out.push_str(TOP),
        ConceptExpr::Bottom => out.push_str(BOTTOM),
        ConceptExpr::Not(c) => {
            out.push_str("(not ");
            write_expr(out, c, labels);
            out.push(')');
        }
        ConceptExpr::And(cs) | ConceptExpr::Or(cs) => {
            let sep = if matches!(expr, ConceptExpr::And(_)) { " and " } else { " or " };
            out.push('(');
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_expr(out, c, labels);
            }
            out.push(')');
        }
        ConceptExpr::Exists(p, c) | ConceptExpr::Forall(p, c) => {
            let q = if matches!(expr, ConceptExpr::Exists(..)) { " some " } else { " only " };
            out.push('(');
            write_atom(out, name(&p.iri, labels));
            out.push_str(q);
            write_expr(out, c, labels);
            out.push(')');
        }
    }
}

pub(crate) fn is_bare_char(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '(' | ')' | '<' | '>'))
}

fn needs_brackets(text: &str) -> bool {
    text.is_empty() || KEYWORDS.contains(&text) || text == TOP || text == BOTTOM || !text.chars().all(is_bare_char)
}

fn write_atom(out: &mut String, text: &str) {
    if !needs_brackets(text) {
        out.push_str(text);
        return;
    }
    out.push('<');
    for c in text.chars() {
        if c == '>' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('>');
}
