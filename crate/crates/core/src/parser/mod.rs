//! Parsers for OWL functional-style documents and canonical concept text.

mod concept;
mod functional;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Iri, Ontology};

pub use concept::parse_concept;
pub use functional::parse_ontology;

pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const OBO_IN_OWL: &str = "http://www.geneontology.org/formats/oboInOwl#";

pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const OWL_DEPRECATED: &str = "http://www.w3.org/2002/07/owl#deprecated";
pub const OWL_THING: &str = "http://www.w3.org/2002/07/owl#Thing";
pub const OWL_NOTHING: &str = "http://www.w3.org/2002/07/owl#Nothing";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OnUnsupported {
    #[default]
    SkipWithWarning,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParseOptions {
    pub on_unsupported: OnUnsupported,
    /// Extra prefixes, name without the trailing colon. Document `Prefix`
    /// declarations take precedence.
    pub curie_prefixes: BTreeMap<String, String>,
    /// Annotation properties read as labels, highest precedence first.
    pub label_properties: Vec<Iri>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            on_unsupported: OnUnsupported::SkipWithWarning,
            curie_prefixes: BTreeMap::new(),
            label_properties: vec![
                Iri::new(RDFS_LABEL),
                Iri::new(format!("{OBO_IN_OWL}hasSynonym")),
                Iri::new(format!("{OBO_IN_OWL}hasExactSynonym")),
            ],
        }
    }
}

/// A construct that was skipped under [`OnUnsupported::SkipWithWarning`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub line: usize,
    pub construct: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub ontology: Ontology,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported construct {construct} at line {line}")]
    Unsupported { line: usize, construct: String },
    #[error("unknown prefix '{prefix}:' at {line}:{column}")]
    UnknownPrefix { line: usize, column: usize, prefix: String },
    #[error("{iri} is used as more than one kind of entity")]
    Punning { iri: Iri },
    #[error("syntax error at position {position}: {message}")]
    Concept { position: usize, message: String },
}
