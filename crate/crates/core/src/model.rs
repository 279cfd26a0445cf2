//! Concept expressions, axioms and the in-memory ontology.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Globally unique identifier of a named entity, stored after curie expansion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Iri(String);

impl Iri {
    /// Panics on empty text; use [`Iri::try_new`] for untrusted input.
    pub fn new(value: impl Into<String>) -> Self {
        Self::try_new(value).expect("IRI must be non-empty")
    }

    pub fn try_new(value: impl Into<String>) -> Option<Self> {
        let value = value.into();
        if value.is_empty() {
            None
        } else {
            Some(Iri(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Fragment or last path segment, used as a fallback display name.
    pub fn short_name(&self) -> &str {
        let s = self.0.as_str();
        let cut = s.rfind(['#', '/']).map(|i| i + 1).or_else(|| s.find(':').map(|i| i + 1)).unwrap_or(0);
        if cut >= s.len() {
            s
        } else {
            &s[cut..]
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Iri {
    fn from(s: &str) -> Self {
        Iri::new(s)
    }
}

/// A named object property. Inverses and chains are not modelled.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Property {
    pub iri: Iri,
}

impl Property {
    pub fn new(iri: impl Into<Iri>) -> Self {
        Property { iri: iri.into() }
    }
}

/// Which restriction a node is, for the constructors that take a property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Some,
    Only,
}

/// Concept expression tree.
///
/// `And` and `Or` are n-ary and keep their operands in insertion order; the
/// verbaliser output follows that order. Both must hold at least two operands,
/// see [`ConceptExpr::is_well_formed`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptExpr {
    Atomic(Iri),
    Top,
    Bottom,
    Not(Box<ConceptExpr>),
    And(Vec<ConceptExpr>),
    Or(Vec<ConceptExpr>),
    Exists(Property, Box<ConceptExpr>),
    Forall(Property, Box<ConceptExpr>),
}

impl ConceptExpr {
    pub fn atomic(iri: impl Into<Iri>) -> Self {
        ConceptExpr::Atomic(iri.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: ConceptExpr) -> Self {
        ConceptExpr::Not(Box::new(inner))
    }

    pub fn exists(property: impl Into<Iri>, filler: ConceptExpr) -> Self {
        ConceptExpr::Exists(Property::new(property), Box::new(filler))
    }

    pub fn forall(property: impl Into<Iri>, filler: ConceptExpr) -> Self {
        ConceptExpr::Forall(Property::new(property), Box::new(filler))
    }

    pub fn restriction(q: Quantifier, property: Property, filler: ConceptExpr) -> Self {
        match q {
            Quantifier::Some => ConceptExpr::Exists(property, Box::new(filler)),
            Quantifier::Only => ConceptExpr::Forall(property, Box::new(filler)),
        }
    }

    /// Named concept, top or bottom.
    pub fn is_atomic(&self) -> bool {
        matches!(self, ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom)
    }

    pub fn as_named(&self) -> Option<&Iri> {
        match self {
            ConceptExpr::Atomic(iri) => Some(iri),
            _ => None,
        }
    }

    /// Quantifier, property and filler if this node is `Exists` or `Forall`.
    pub fn as_restriction(&self) -> Option<(Quantifier, &Property, &ConceptExpr)> {
        match self {
            ConceptExpr::Exists(p, c) => Some((Quantifier::Some, p, c)),
            ConceptExpr::Forall(p, c) => Some((Quantifier::Only, p, c)),
            _ => None,
        }
    }

    pub fn is_restriction(&self) -> bool {
        self.as_restriction().is_some()
    }

    /// Every n-ary node has at least two operands.
    pub fn is_well_formed(&self) -> bool {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => true,
            ConceptExpr::Not(c) => c.is_well_formed(),
            ConceptExpr::And(cs) | ConceptExpr::Or(cs) => cs.len() >= 2 && cs.iter().all(ConceptExpr::is_well_formed),
            ConceptExpr::Exists(_, c) | ConceptExpr::Forall(_, c) => c.is_well_formed(),
        }
    }

    /// Named concept occurrences in pre-order.
    pub fn named_concepts(&self) -> Vec<&Iri> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let ConceptExpr::Atomic(iri) = e {
                out.push(iri);
            }
        });
        out
    }

    /// Property occurrences in pre-order.
    pub fn properties(&self) -> Vec<&Property> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Some((_, p, _)) = e.as_restriction() {
                out.push(p);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ConceptExpr)) {
        f(self);
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => {}
            ConceptExpr::Not(c) | ConceptExpr::Exists(_, c) | ConceptExpr::Forall(_, c) => c.walk(f),
            ConceptExpr::And(cs) | ConceptExpr::Or(cs) => {
                for c in cs {
                    c.walk(f);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::canonical::canonical_form(self, None))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Axiom {
    SubClassOf(ConceptExpr, ConceptExpr),
    /// Ordered pair; when exactly one side is a named concept it comes first.
    EquivalentClasses(ConceptExpr, ConceptExpr),
    ClassAssertion(ConceptExpr, Iri),
}

impl Axiom {
    /// Builds an equivalence with the named side first when exactly one side is named.
    pub fn equivalent(a: ConceptExpr, b: ConceptExpr) -> Self {
        match (a.as_named(), b.as_named()) {
            (None, Some(_)) => Axiom::EquivalentClasses(b, a),
            _ => Axiom::EquivalentClasses(a, b),
        }
    }

    pub fn expressions(&self) -> Vec<&ConceptExpr> {
        match self {
            Axiom::SubClassOf(a, b) | Axiom::EquivalentClasses(a, b) => vec![a, b],
            Axiom::ClassAssertion(c, _) => vec![c],
        }
    }

    pub fn mentions_concept(&self, iri: &Iri) -> bool {
        self.expressions().into_iter().any(|e| e.named_concepts().into_iter().any(|n| n == iri))
    }

    /// `A ≡ C` with `A` named and `C` complex.
    pub fn as_definition(&self) -> Option<(&Iri, &ConceptExpr)> {
        match self {
            Axiom::EquivalentClasses(ConceptExpr::Atomic(a), c) if !c.is_atomic() => Some((a, c)),
            _ => None,
        }
    }
}

/// Labels per IRI, ordered by annotation-property precedence.
pub type LabelMap = BTreeMap<Iri, Vec<String>>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    pub concepts: BTreeSet<Iri>,
    pub properties: BTreeSet<Iri>,
    pub individuals: BTreeSet<Iri>,
    pub axioms: Vec<Axiom>,
    pub labels: LabelMap,
    /// Concepts annotated `owl:deprecated true`.
    pub deprecated: BTreeSet<Iri>,
    /// Prefix declarations of the source document, name without the colon.
    pub prefixes: BTreeMap<String, String>,
}

impl Ontology {
    /// First label under the configured precedence.
    pub fn label(&self, iri: &Iri) -> Option<&str> {
        self.labels.get(iri).and_then(|ls| ls.first()).map(String::as_str)
    }

    pub fn definitions(&self) -> impl Iterator<Item = (&Iri, &ConceptExpr)> {
        self.axioms.iter().filter_map(Axiom::as_definition)
    }

    /// Resolves `prefix:local` against the document prefixes; other text is
    /// returned unchanged.
    pub fn expand(&self, text: &str) -> Iri {
        if let Some((prefix, local)) = text.split_once(':') {
            if !local.starts_with("//") {
                if let Some(base) = self.prefixes.get(prefix) {
                    return Iri::new(format!("{base}{local}"));
                }
            }
        }
        Iri::new(text)
    }

    /// Rewrites every atom and property of `expr` with [`Ontology::expand`].
    pub fn expand_expr(&self, expr: &ConceptExpr) -> ConceptExpr {
        match expr {
            ConceptExpr::Atomic(i) => ConceptExpr::Atomic(self.expand(i.as_str())),
            ConceptExpr::Top => ConceptExpr::Top,
            ConceptExpr::Bottom => ConceptExpr::Bottom,
            ConceptExpr::Not(c) => ConceptExpr::not(self.expand_expr(c)),
            ConceptExpr::And(cs) => ConceptExpr::And(cs.iter().map(|c| self.expand_expr(c)).collect()),
            ConceptExpr::Or(cs) => ConceptExpr::Or(cs.iter().map(|c| self.expand_expr(c)).collect()),
            ConceptExpr::Exists(p, c) => {
                ConceptExpr::Exists(Property { iri: self.expand(p.iri.as_str()) }, Box::new(self.expand_expr(c)))
            }
            ConceptExpr::Forall(p, c) => {
                ConceptExpr::Forall(Property { iri: self.expand(p.iri.as_str()) }, Box::new(self.expand_expr(c)))
            }
        }
    }
}
