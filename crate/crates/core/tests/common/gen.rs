//! Random expressions and ontologies.

use std::collections::BTreeSet;

use ontoforge::model::{Axiom, ConceptExpr, Iri, Ontology, Property, Quantifier};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn names(prefix: &str, n: usize) -> Vec<Iri> {
    (0..n).map(|i| Iri::new(format!("{prefix}{i}"))).collect()
}

/// Random expression over the given vocabulary; `depth` bounds nesting.
pub fn expr(rng: &mut Rng8, depth: usize, concepts: &[Iri], props: &[Iri]) -> ConceptExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..20) {
            0 => ConceptExpr::Top,
            1 => ConceptExpr::Bottom,
            _ => ConceptExpr::Atomic(concepts.choose(rng).unwrap().clone()),
        };
    }
    let sub = |rng: &mut Rng8| expr(rng, depth - 1, concepts, props);
    match rng.gen_range(0..5) {
        0 => ConceptExpr::not(sub(rng)),
        1 | 2 => {
            let n = rng.gen_range(2..=3);
            let ops = (0..n).map(|_| sub(rng)).collect();
            if rng.gen_bool(0.5) {
                ConceptExpr::And(ops)
            } else {
                ConceptExpr::Or(ops)
            }
        }
        _ => {
            let q = if rng.gen_bool(0.7) { Quantifier::Some } else { Quantifier::Only };
            let p = Property { iri: props.choose(rng).unwrap().clone() };
            ConceptExpr::restriction(q, p, sub(rng))
        }
    }
}

/// Expression that is not atomic, ⊤ or ⊥.
pub fn complex_expr(rng: &mut Rng8, depth: usize, concepts: &[Iri], props: &[Iri]) -> ConceptExpr {
    loop {
        let e = expr(rng, depth.max(1), concepts, props);
        if !matches!(e, ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom) {
            return e;
        }
    }
}

/// Definition-like expression: a named concept and a restriction.
pub fn definition_body(rng: &mut Rng8, concepts: &[Iri], props: &[Iri]) -> ConceptExpr {
    let named = ConceptExpr::Atomic(concepts.choose(rng).unwrap().clone());
    let filler = expr(rng, 1, concepts, props);
    let p = props.choose(rng).unwrap().clone();
    ConceptExpr::And(vec![named, ConceptExpr::exists(p, filler)])
}

/// Random ontology with at most `max_concepts` concepts and `max_axioms`
/// axioms. Every entity gets a label equal to its lowercased name.
pub fn ontology(rng: &mut Rng8, max_concepts: usize, max_axioms: usize) -> Ontology {
    let n = rng.gen_range(2..=max_concepts);
    let concepts = names("C", n);
    let props = names("r", rng.gen_range(1..=3));
    let inds = names("i", rng.gen_range(0..=3));
    let m = rng.gen_range(0..=max_axioms);
    let pick = |rng: &mut Rng8| ConceptExpr::Atomic(concepts.choose(rng).unwrap().clone());
    let mut axioms = Vec::with_capacity(m);
    for _ in 0..m {
        let ax = match rng.gen_range(0..20) {
            0..=8 => Axiom::SubClassOf(pick(rng), pick(rng)),
            9 | 10 => Axiom::EquivalentClasses(pick(rng), pick(rng)),
            11..=13 => Axiom::EquivalentClasses(pick(rng), definition_body(rng, &concepts, &props)),
            14 => Axiom::EquivalentClasses(pick(rng), complex_expr(rng, 2, &concepts, &props)),
            15 | 16 => Axiom::SubClassOf(pick(rng), complex_expr(rng, 2, &concepts, &props)),
            17 => Axiom::SubClassOf(complex_expr(rng, 2, &concepts, &props), pick(rng)),
            _ if !inds.is_empty() => {
                let c = if rng.gen_bool(0.7) { pick(rng) } else { complex_expr(rng, 1, &concepts, &props) };
                Axiom::ClassAssertion(c, inds.choose(rng).unwrap().clone())
            }
            _ => Axiom::SubClassOf(pick(rng), pick(rng)),
        };
        axioms.push(ax);
    }
    let mut o = Ontology { axioms, ..Default::default() };
    o.concepts.extend(concepts.iter().cloned());
    o.properties.extend(props.iter().cloned());
    o.individuals.extend(inds.iter().cloned());
    for iri in concepts.iter().chain(&props) {
        o.labels.insert(iri.clone(), vec![iri.as_str().to_lowercase()]);
    }
    o
}

/// Random ontology whose told hierarchy is a forest, which gives plenty of
/// assumed-disjoint pairs for negative sampling.
pub fn taxonomy(rng: &mut Rng8, n: usize, definitions: usize) -> Ontology {
    let concepts = names("T", n);
    let props = names("p", 3);
    let mut axioms = Vec::new();
    for i in 1..n {
        if rng.gen_bool(0.85) {
            let parent = rng.gen_range(0..i);
            axioms.push(Axiom::SubClassOf(
                ConceptExpr::Atomic(concepts[i].clone()),
                ConceptExpr::Atomic(concepts[parent].clone()),
            ));
        }
    }
    let mut defined = BTreeSet::new();
    for _ in 0..definitions {
        let a = rng.gen_range(0..n);
        if defined.insert(a) {
            let body = definition_body(rng, &concepts, &props);
            axioms.push(Axiom::EquivalentClasses(ConceptExpr::Atomic(concepts[a].clone()), body));
        }
    }
    if n > 3 {
        axioms.push(Axiom::ClassAssertion(ConceptExpr::Atomic(concepts[n - 1].clone()), Iri::new("x0")));
    }
    let mut o = Ontology { axioms, ..Default::default() };
    o.concepts.extend(concepts.iter().cloned());
    o.properties.extend(props.iter().cloned());
    o.individuals.insert(Iri::new("x0"));
    for iri in concepts.iter().chain(&props) {
        o.labels.insert(iri.clone(), vec![iri.as_str().to_lowercase()]);
    }
    o
}

/// Names that stress the canonical text writer.
pub fn awkward_name() -> BoxedStrategy<Iri> {
    prop_oneof![
        "[A-Za-z][A-Za-z0-9_:/#.-]{0,8}",
        Just("and".to_string()),
        Just("some".to_string()),
        Just("owl:Thing".to_string()),
        Just("a b".to_string()),
        Just("x(y)".to_string()),
        Just("<odd>".to_string()),
        Just("back\\slash".to_string()),
        Just("http://example.org/onto#Thing_1".to_string()),
    ]
    .prop_map(Iri::new)
    .boxed()
}

pub fn simple_name() -> BoxedStrategy<Iri> {
    prop_oneof![Just("A"), Just("B"), Just("C"), Just("D")].prop_map(Iri::new).boxed()
}

pub fn simple_property() -> BoxedStrategy<Iri> {
    prop_oneof![Just("r"), Just("s")].prop_map(Iri::new).boxed()
}

/// Arbitrary well-formed expression over the given name strategies.
pub fn arb_expr(concept: BoxedStrategy<Iri>, property: BoxedStrategy<Iri>) -> BoxedStrategy<ConceptExpr> {
    let leaf = prop_oneof![
        8 => concept.prop_map(ConceptExpr::Atomic),
        1 => Just(ConceptExpr::Top),
        1 => Just(ConceptExpr::Bottom),
    ];
    leaf.prop_recursive(4, 40, 3, move |inner| {
        prop_oneof![
            inner.clone().prop_map(ConceptExpr::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(ConceptExpr::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(ConceptExpr::Or),
            (property.clone(), inner.clone()).prop_map(|(p, f)| ConceptExpr::Exists(Property { iri: p }, Box::new(f))),
            (property.clone(), inner).prop_map(|(p, f)| ConceptExpr::Forall(Property { iri: p }, Box::new(f))),
        ]
    })
    .boxed()
}
