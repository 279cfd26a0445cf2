mod common;

use std::collections::BTreeMap;

use common::gen::{self, arb_expr, awkward_name, simple_name, simple_property, Rng8};
use common::oracle::Closure;
use ontoforge::canonical::canonical_form;
use ontoforge::model::{ConceptExpr, Iri, LabelMap};
use ontoforge::parser::parse_concept;
use ontoforge::preprocess::{LabelNormaliser, PreprocessConfig};
use ontoforge::prompt::{render, Template, TemplateId, DEFAULT_MASK};
use ontoforge::reasoner::ToldGraph;
use ontoforge::rewrite::merge_restrictions;
use ontoforge::sampler::{rng, split, Label, Provenance, Ratios, SubsumptionSample};
use ontoforge::verbaliser::{verbalise, VerbaliserLexicon};
use proptest::prelude::*;
use rand::SeedableRng;

fn labels() -> LabelMap {
    [("A", "apple"), ("B", "beef"), ("C", "cattle"), ("D", "dairy product"), ("r", "derives from"), ("s", "has part")]
        .into_iter()
        .map(|(k, v)| (Iri::new(k), vec![v.to_string()]))
        .collect()
}

fn atom_counts(e: &ConceptExpr) -> BTreeMap<Iri, usize> {
    let mut m = BTreeMap::new();
    for i in e.named_concepts() {
        *m.entry(i.clone()).or_insert(0) += 1;
    }
    m
}

proptest! {
    #[test]
    fn canonical_text_round_trips(e in arb_expr(awkward_name(), awkward_name())) {
        let text = canonical_form(&e, None);
        prop_assert_eq!(parse_concept(&text).unwrap(), e);
    }

    #[test]
    fn merge_is_idempotent_and_keeps_atoms(e in arb_expr(simple_name(), simple_property())) {
        let once = merge_restrictions(&e);
        prop_assert_eq!(&merge_restrictions(&once), &once);
        prop_assert_eq!(atom_counts(&once), atom_counts(&e));
    }

    #[test]
    fn verbalisation_is_plain_text(e in arb_expr(simple_name(), simple_property())) {
        let lex = VerbaliserLexicon::default();
        let text = verbalise(&e, &labels(), &lex).unwrap();
        prop_assert_eq!(&text, &verbalise(&e, &labels(), &lex).unwrap());
        for c in ['(', ')', '<', '>', '⊓', '⊔', '∃', '∀', '¬', ':'] {
            prop_assert!(!text.contains(c), "{text:?} contains {c:?}");
        }
        let labels = labels();
        for atom in e.named_concepts() {
            prop_assert!(text.contains(&labels[atom][0]), "{text:?} lacks {atom}");
        }
        match merge_restrictions(&e) {
            ConceptExpr::Atomic(a) => prop_assert_eq!(&text, &labels[&a][0]),
            m if m.is_restriction() => prop_assert!(text.starts_with("something that "), "{text:?}"),
            _ => {}
        }
    }

    #[test]
    fn prompts_carry_one_mask_and_are_injective(
        a in "[a-z]{1,8}( [a-z]{1,8}){0,2}",
        b in "[a-z]{1,8}( [a-z]{1,8}){0,2}",
        c in "[a-z]{1,8}( [a-z]{1,8}){0,2}",
        t2 in any::<bool>(),
    ) {
        let t = Template::new(if t2 { TemplateId::T2 } else { TemplateId::T1 });
        let p = render(&a, &b, &t).unwrap();
        prop_assert_eq!(p.matches(DEFAULT_MASK).count(), 1);
        prop_assert!(p.contains(&a) && p.contains(&b));
        if b != c {
            prop_assert_ne!(p, render(&a, &c, &t).unwrap());
        }
    }

    #[test]
    fn label_normalisation_is_idempotent(raw in "[A-Za-z_ ]{0,12}[A-Za-z][A-Za-z_ ]{0,12}") {
        for name in PreprocessConfig::preset_names() {
            let norm = LabelNormaliser::new(&PreprocessConfig::preset(name).unwrap()).unwrap();
            let once = norm.normalise(&raw).unwrap();
            prop_assert_eq!(norm.normalise(&once).unwrap(), once, "preset {}", name);
        }
    }

    #[test]
    fn split_sizes_follow_the_weights(pos in 1usize..60, neg in 1usize..60, w in prop::array::uniform3(0u32..10), seed in any::<u64>()) {
        prop_assume!(w.iter().sum::<u32>() > 0);
        let ratios = Ratios(w);
        let mk = |i: usize, label: Label| {
            let p = if label == Label::Positive { Provenance::Entailed } else { Provenance::Soft };
            SubsumptionSample::new(ConceptExpr::atomic(format!("x{i}").as_str()), ConceptExpr::atomic("y"), p, None)
        };
        let samples: Vec<_> = (0..pos).map(|i| mk(i, Label::Positive)).chain((pos..pos + neg).map(|i| mk(i, Label::Negative))).collect();
        let s = split(samples, ratios, seed, &mut rng(seed), true).unwrap();
        let m = pos.min(neg);
        let total: u32 = w.iter().sum();
        let mut sum = 0;
        for ((_, part), wi) in s.partitions().into_iter().zip(w) {
            let p = part.iter().filter(|x| x.label() == Label::Positive).count();
            prop_assert_eq!(p, part.len() - p);
            prop_assert!((p as f64 - m as f64 * wi as f64 / total as f64).abs() < 1.0);
            sum += p;
        }
        prop_assert_eq!(sum, m);
    }
}

#[test]
fn named_entailment_matches_warshall_closure() {
    let mut r = Rng8::seed_from_u64(1);
    for _ in 0..30 {
        let onto = gen::ontology(&mut r, 15, 25);
        assert_eq!(common::oracle::closure_mismatches(&onto), 0, "{onto:?}");
    }
}

#[test]
fn named_entailment_is_a_preorder() {
    let mut r = Rng8::seed_from_u64(2);
    for _ in 0..20 {
        let onto = gen::ontology(&mut r, 12, 20);
        let g = ToldGraph::build(&onto);
        let names = g.concepts();
        for a in names {
            assert!(g.entails_named(a, a).unwrap());
            for b in names {
                for c in names {
                    if g.entails_named(a, b).unwrap() && g.entails_named(b, c).unwrap() {
                        assert!(g.entails_named(a, c).unwrap());
                    }
                }
            }
        }
        assert_eq!(Closure::new(&onto).pairs().len(), g.dump_closure().lines().count());
    }
}

#[test]
fn assumed_disjointness_is_symmetric_and_irreflexive() {
    let mut r = Rng8::seed_from_u64(3);
    for _ in 0..20 {
        let onto = gen::ontology(&mut r, 12, 20);
        let g = ToldGraph::build(&onto);
        let concepts: Vec<Iri> = onto.concepts.iter().cloned().collect();
        let props: Vec<Iri> = onto.properties.iter().cloned().collect();
        for _ in 0..30 {
            let c = gen::expr(&mut r, 2, &concepts, &props);
            let d = gen::expr(&mut r, 2, &concepts, &props);
            assert_eq!(g.assumed_disjoint(&c, &d), g.assumed_disjoint(&d, &c), "{c:?} / {d:?}");
            assert!(!g.assumed_disjoint(&c, &c));
        }
    }
}

#[test]
fn structural_entailment_is_reflexive_and_respects_top_and_bottom() {
    let mut r = Rng8::seed_from_u64(4);
    for _ in 0..10 {
        let onto = gen::ontology(&mut r, 10, 15);
        let g = ToldGraph::build(&onto);
        let concepts: Vec<Iri> = onto.concepts.iter().cloned().collect();
        let props: Vec<Iri> = onto.properties.iter().cloned().collect();
        for _ in 0..30 {
            let e = gen::expr(&mut r, 3, &concepts, &props);
            assert!(g.entails_structural(&e, &e));
            assert!(g.entails_structural(&e, &ConceptExpr::Top));
            assert!(g.entails_structural(&ConceptExpr::Bottom, &e));
        }
    }
}

// Regression: a cyclic hierarchy with many complex told superclasses once
// made a single query take close to a minute.
#[test]
fn dense_cyclic_hierarchies_answer_promptly() {
    let mut r = Rng8::seed_from_u64(11);
    for _ in 0..40 {
        let onto = gen::ontology(&mut r, 20, 30);
        let g = ToldGraph::build(&onto);
        let mut pool: Vec<ConceptExpr> = onto.concepts.iter().cloned().map(ConceptExpr::Atomic).collect();
        for ax in &onto.axioms {
            pool.extend(ax.expressions().into_iter().cloned());
        }
        let start = std::time::Instant::now();
        for c in &pool {
            for d in &pool {
                g.entails_structural(c, d);
            }
        }
        assert!(start.elapsed().as_secs() < 20);
    }
}
