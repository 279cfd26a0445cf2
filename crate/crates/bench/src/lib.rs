//! Synthetic inputs for the benchmarks.

use ontoforge::model::{Axiom, ConceptExpr, Iri, LabelMap, Ontology};
use ontoforge::sampler::rng;
use rand::Rng;

/// Random forest-shaped hierarchy of `n` labelled concepts in which every
/// tenth concept is defined as its parent plus an existential restriction.
pub fn taxonomy(n: usize, seed: u64) -> Ontology {
    let mut r = rng(seed);
    let concepts: Vec<Iri> = (0..n).map(|i| Iri::new(format!("http://bench.example/C{i}"))).collect();
    let props: Vec<Iri> = (0..4).map(|i| Iri::new(format!("http://bench.example/p{i}"))).collect();
    let mut o = Ontology::default();
    for i in 1..n {
        let parent = ConceptExpr::Atomic(concepts[r.gen_range(0..i)].clone());
        let me = ConceptExpr::Atomic(concepts[i].clone());
        if i % 10 == 0 {
            let filler = ConceptExpr::Atomic(concepts[r.gen_range(0..n)].clone());
            let p = props[r.gen_range(0..props.len())].clone();
            o.axioms.push(Axiom::EquivalentClasses(me, ConceptExpr::And(vec![parent, ConceptExpr::exists(p, filler)])));
        } else {
            o.axioms.push(Axiom::SubClassOf(me, parent));
        }
    }
    o.concepts.extend(concepts.iter().cloned());
    o.properties.extend(props.iter().cloned());
    o.labels = labels(&concepts, &props);
    o
}

fn labels(concepts: &[Iri], props: &[Iri]) -> LabelMap {
    let mut m = LabelMap::new();
    for (i, c) in concepts.iter().enumerate() {
        m.insert(c.clone(), vec![format!("concept number {i}")]);
    }
    for (i, p) in props.iter().enumerate() {
        m.insert(p.clone(), vec![format!("relates to {i}")]);
    }
    m
}

/// Nested expression with `width` conjuncts per level over the taxonomy.
pub fn wide_expression(onto: &Ontology, width: usize, depth: usize) -> ConceptExpr {
    let c: Vec<&Iri> = onto.concepts.iter().collect();
    let p: Vec<&Iri> = onto.properties.iter().collect();
    let mut e = ConceptExpr::Atomic(c[0].clone());
    for level in 0..depth {
        let mut parts = vec![ConceptExpr::Atomic(c[(level + 1) % c.len()].clone())];
        for k in 0..width {
            parts.push(ConceptExpr::exists(p[k % p.len()].clone(), e.clone()));
        }
        e = ConceptExpr::And(parts);
    }
    e
}
