//! Recursive verbalisation of concept expressions into English phrases.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ConceptExpr, Iri, LabelMap, Property, Quantifier};
use crate::rewrite::merge_restrictions;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerbaliseError {
    #[error("no label for {0}")]
    MissingLabel(Iri),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
}

/// Word lists driving the part-of-speech decisions. The decision only looks
/// at the first token of a property label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerbaliserLexicon {
    pub passive_verb_suffixes: Vec<String>,
    pub known_adjectives: BTreeSet<String>,
    pub known_nouns: BTreeSet<String>,
    pub is_prefix: String,
    /// A concept label ending in one of these gets "something" appended
    /// before a relative clause, so "concentration of" reads as
    /// "concentration of something that ...".
    pub dangling_prepositions: BTreeSet<String>,
}

fn words(list: &[&str]) -> BTreeSet<String> {
    list.iter().map(|w| w.to_string()).collect()
}

impl Default for VerbaliserLexicon {
    fn default() -> Self {
        VerbaliserLexicon {
            passive_verb_suffixes: vec!["ed".into(), "en".into()],
            known_adjectives: words(&[
                "adjacent",
                "capable",
                "characteristic",
                "dependent",
                "distinct",
                "identical",
                "independent",
                "inherent",
                "present",
                "proximal",
                "distal",
                "similar",
                "transitive",
                "active",
                "anterior",
                "posterior",
                "homologous",
                "equivalent",
            ]),
            known_nouns: words(&[
                "part",
                "member",
                "component",
                "participant",
                "input",
                "output",
                "agent",
                "bearer",
                "quality",
                "precursor",
                "product",
                "subclass",
                "instance",
                "function",
                "role",
                "ingredient",
                "source",
            ]),
            is_prefix: "is".into(),
            dangling_prepositions: words(&["of", "to", "in", "for", "with", "from", "by", "on", "at"]),
        }
    }
}

impl VerbaliserLexicon {
    fn needs_prefix(&self, head: &str) -> bool {
        let head = head.to_lowercase();
        if head == self.is_prefix {
            return false;
        }
        self.known_nouns.contains(&head)
            || self.known_adjectives.contains(&head)
            || self.passive_verb_suffixes.iter().any(|s| head.len() > s.len() + 1 && head.ends_with(s.as_str()))
    }
}

fn label<'a>(labels: &'a LabelMap, iri: &Iri) -> Result<&'a str, VerbaliseError> {
    labels
        .get(iri)
        .and_then(|ls| ls.first())
        .map(String::as_str)
        .ok_or_else(|| VerbaliseError::MissingLabel(iri.clone()))
}

/// Applies the "is" grammar fix to a property label.
pub fn property_phrase(label: &str, lex: &VerbaliserLexicon) -> String {
    match label.split_whitespace().next() {
        Some(head) if lex.needs_prefix(head) => format!("{} {label}", lex.is_prefix),
        _ => label.to_string(),
    }
}

pub fn verbalise_property(r: &Property, labels: &LabelMap, lex: &VerbaliserLexicon) -> Result<String, VerbaliseError> {
    Ok(property_phrase(label(labels, &r.iri)?, lex))
}

/// Indefinite article for the word that follows it.
pub fn article(next_word: &str) -> &'static str {
    if next_word == "something" {
        ""
    } else if next_word.chars().next().is_some_and(|c| matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u')) {
        "an"
    } else {
        "a"
    }
}

const SOMETHING_THAT: &str = "something that ";

fn quantifier_word(q: Quantifier) -> &'static str {
    match q {
        Quantifier::Some => "some",
        Quantifier::Only => "only",
    }
}

struct Ctx<'a> {
    labels: &'a LabelMap,
    lex: &'a VerbaliserLexicon,
}

impl Ctx<'_> {
    // "V(r) some V(D)", without the leading "something that".
    fn clause(&self, e: &ConceptExpr) -> Result<String, VerbaliseError> {
        let (q, r, filler) = e.as_restriction().expect("restriction");
        Ok(format!("{} {} {}", verbalise_property(r, self.labels, self.lex)?, quantifier_word(q), self.expr(filler)?))
    }

    fn clauses(&self, rs: &[&ConceptExpr], joiner: &str) -> Result<String, VerbaliseError> {
        Ok(rs.iter().map(|r| self.clause(r)).collect::<Result<Vec<_>, _>>()?.join(joiner))
    }

    fn join(&self, es: &[&ConceptExpr], joiner: &str) -> Result<String, VerbaliseError> {
        Ok(es.iter().map(|e| self.expr(e)).collect::<Result<Vec<_>, _>>()?.join(joiner))
    }

    fn expr(&self, e: &ConceptExpr) -> Result<String, VerbaliseError> {
        match e {
            ConceptExpr::Atomic(iri) => Ok(label(self.labels, iri)?.to_string()),
            ConceptExpr::Top => Ok("thing".into()),
            ConceptExpr::Bottom => Ok("nothing".into()),
            ConceptExpr::Not(inner) => Ok(format!("not {}", self.expr(inner)?)),
            ConceptExpr::Exists(..) | ConceptExpr::Forall(..) => Ok(format!("{SOMETHING_THAT}{}", self.clause(e)?)),
            ConceptExpr::And(cs) | ConceptExpr::Or(cs) if cs.len() < 2 => Err(VerbaliseError::Unsupported(format!(
                "{} with {} operand(s)",
                if matches!(e, ConceptExpr::And(_)) { "conjunction" } else { "disjunction" },
                cs.len()
            ))),
            ConceptExpr::And(cs) => {
                let (rs, others): (Vec<&ConceptExpr>, Vec<&ConceptExpr>) = cs.iter().partition(|c| c.is_restriction());
                if others.is_empty() {
                    Ok(format!("{SOMETHING_THAT}{}", self.clauses(&rs, " and ")?))
                } else if rs.is_empty() {
                    self.join(&others, " and ")
                } else {
                    let mut head = self.join(&others, " and ")?;
                    let dangling = head
                        .rsplit(' ')
                        .next()
                        .is_some_and(|w| self.lex.dangling_prepositions.contains(&w.to_lowercase()));
                    if dangling {
                        head.push_str(" something");
                    }
                    Ok(format!("{head} that {}", self.clauses(&rs, " and ")?))
                }
            }
            ConceptExpr::Or(cs) => {
                if cs.iter().all(ConceptExpr::is_restriction) {
                    let rs: Vec<&ConceptExpr> = cs.iter().collect();
                    Ok(format!("{SOMETHING_THAT}{}", self.clauses(&rs, " or ")?))
                } else {
                    self.join(&cs.iter().collect::<Vec<_>>(), " or ")
                }
            }
        }
    }
}

/// Verbalises `e` after merging restrictions that share a property.
pub fn verbalise(e: &ConceptExpr, labels: &LabelMap, lex: &VerbaliserLexicon) -> Result<String, VerbaliseError> {
    Ctx { labels, lex }.expr(&merge_restrictions(e))
}
