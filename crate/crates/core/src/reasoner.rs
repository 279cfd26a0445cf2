//! Structural subsumption over the told hierarchy.
//!
//! This is a sound but deliberately incomplete reasoner. Named subsumption is
//! reachability over told edges (`SubClassOf(A, B)`, both directions of a named
//! equivalence, and the named conjuncts of told superclass expressions).
//! Complex expressions are handled by recursive structural rules on top of
//! that. Whenever it answers `true`, the subsumption holds in every model; a
//! `false` only means the rules could not prove it.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use thiserror::Error;

use crate::model::{Axiom, ConceptExpr, Iri, Ontology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("unknown concept {0}")]
    UnknownConcept(Iri),
}

/// Why a pair is or is not assumed disjoint. The pair is assumed disjoint
/// when all three fields are empty/false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disjointness {
    /// Either direction is entailed.
    pub subsumption: bool,
    pub common_instance: Option<Iri>,
    pub common_descendant: Option<Iri>,
}

impl Disjointness {
    pub fn holds(&self) -> bool {
        !self.subsumption && self.common_instance.is_none() && self.common_descendant.is_none()
    }
}

#[derive(Debug)]
pub struct ToldGraph {
    nodes: Vec<Iri>,
    index: HashMap<Iri, usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    /// Told superclass expressions per concept, with conjunctions unfolded.
    conjunct_index: Vec<Vec<ConceptExpr>>,
    /// Told `D ⊑ A` with `D` complex.
    told_subclasses: Vec<(ConceptExpr, usize)>,
    /// Conjunction of the asserted types of each individual.
    individual_types: BTreeMap<Iri, ConceptExpr>,
    instance_index: BTreeMap<Iri, BTreeSet<Iri>>,
    ancestors: Vec<OnceLock<Vec<usize>>>,
    descendants: Vec<OnceLock<Vec<usize>>>,
    /// Concepts below some holder of a complex told superclass; only these
    /// can be shown to entail a restriction or negation.
    complex_reach: OnceLock<BTreeSet<usize>>,
}

fn conjuncts(e: &ConceptExpr, out: &mut Vec<ConceptExpr>) {
    match e {
        ConceptExpr::And(cs) => cs.iter().for_each(|c| conjuncts(c, out)),
        ConceptExpr::Top => {}
        other => out.push(other.clone()),
    }
}

fn closure(start: usize, edges: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = vec![false; edges.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    let mut out = Vec::new();
    while let Some(n) = queue.pop_front() {
        out.push(n);
        for &m in &edges[n] {
            if !seen[m] {
                seen[m] = true;
                queue.push_back(m);
            }
        }
    }
    out.sort_unstable();
    out
}

// Goals are keyed by address: every expression a query visits lives either
// in the graph or in the query itself, so addresses are stable for its
// duration and the goal space stays finite.
type Goal = (*const ConceptExpr, *const ConceptExpr);

// State of one structural query. Within a pass every goal is decided once:
// goals on the stack count as unproved and failures are cached until the
// pass ends. Proofs persist, and while a pass both cuts a cycle and proves
// something new another pass runs; this reaches the least fixpoint of the
// (monotone) rules.
#[derive(Default)]
struct Search {
    stack: HashSet<Goal>,
    proved: HashSet<Goal>,
    failed: HashSet<Goal>,
    progress: bool,
    cut: bool,
}

impl ToldGraph {
    pub fn build(onto: &Ontology) -> Self {
        let mut names: BTreeSet<Iri> = onto.concepts.clone();
        for ax in &onto.axioms {
            for e in ax.expressions() {
                names.extend(e.named_concepts().into_iter().cloned());
            }
        }
        let nodes: Vec<Iri> = names.into_iter().collect();
        let index: HashMap<Iri, usize> = nodes.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let n = nodes.len();

        let mut g = ToldGraph {
            nodes,
            index,
            parents: vec![Vec::new(); n],
            children: vec![Vec::new(); n],
            conjunct_index: vec![Vec::new(); n],
            told_subclasses: Vec::new(),
            individual_types: BTreeMap::new(),
            instance_index: BTreeMap::new(),
            ancestors: (0..n).map(|_| OnceLock::new()).collect(),
            descendants: (0..n).map(|_| OnceLock::new()).collect(),
            complex_reach: OnceLock::new(),
        };

        let mut asserted: BTreeMap<Iri, Vec<ConceptExpr>> = BTreeMap::new();
        for ax in &onto.axioms {
            match ax {
                Axiom::SubClassOf(sub, sup) => g.add_told(sub, sup),
                Axiom::EquivalentClasses(a, b) => {
                    g.add_told(a, b);
                    g.add_told(b, a);
                }
                Axiom::ClassAssertion(c, ind) => asserted.entry(ind.clone()).or_default().push(c.clone()),
            }
        }
        for i in 0..n {
            g.parents[i].sort_unstable();
            g.parents[i].dedup();
            g.children[i].sort_unstable();
            g.children[i].dedup();
        }

        for (ind, types) in asserted {
            let mut named = Vec::new();
            for t in &types {
                conjuncts(t, &mut named);
            }
            for t in named.iter().filter_map(ConceptExpr::as_named) {
                if let Some(&i) = g.index.get(t) {
                    let ancestors = g.ancestor_ids(i).to_vec();
                    for a in ancestors {
                        g.instance_index.entry(g.nodes[a].clone()).or_default().insert(ind.clone());
                    }
                }
            }
            let ty = if types.len() == 1 { types.into_iter().next().unwrap() } else { ConceptExpr::And(types) };
            g.individual_types.insert(ind, ty);
        }
        g
    }

    fn add_told(&mut self, sub: &ConceptExpr, sup: &ConceptExpr) {
        let mut parts = Vec::new();
        conjuncts(sup, &mut parts);
        match sub {
            ConceptExpr::Atomic(a) => {
                let a = self.index[a];
                for part in parts {
                    if let ConceptExpr::Atomic(b) = &part {
                        let b = self.index[b];
                        if a != b {
                            self.parents[a].push(b);
                            self.children[b].push(a);
                        }
                    }
                    self.conjunct_index[a].push(part);
                }
            }
            ConceptExpr::Bottom => {}
            complex => {
                for part in parts {
                    if let ConceptExpr::Atomic(b) = &part {
                        self.told_subclasses.push((complex.clone(), self.index[b]));
                    }
                }
            }
        }
    }

    fn ancestor_ids(&self, i: usize) -> &[usize] {
        self.ancestors[i].get_or_init(|| closure(i, &self.parents))
    }

    fn descendant_ids(&self, i: usize) -> &[usize] {
        self.descendants[i].get_or_init(|| closure(i, &self.children))
    }

    fn id(&self, iri: &Iri) -> Result<usize, ReasonerError> {
        self.index.get(iri).copied().ok_or_else(|| ReasonerError::UnknownConcept(iri.clone()))
    }

    fn reaches(&self, a: usize, b: usize) -> bool {
        self.ancestor_ids(a).binary_search(&b).is_ok()
    }

    /// Named concepts in IRI order.
    pub fn concepts(&self) -> &[Iri] {
        &self.nodes
    }

    pub fn contains(&self, iri: &Iri) -> bool {
        self.index.contains_key(iri)
    }

    /// Told direct parents.
    pub fn parents(&self, iri: &Iri) -> Result<Vec<&Iri>, ReasonerError> {
        Ok(self.parents[self.id(iri)?].iter().map(|&p| &self.nodes[p]).collect())
    }

    /// Told direct children.
    pub fn children(&self, iri: &Iri) -> Result<Vec<&Iri>, ReasonerError> {
        Ok(self.children[self.id(iri)?].iter().map(|&c| &self.nodes[c]).collect())
    }

    /// Told superclass expressions, conjunctions unfolded.
    pub fn told_superclasses(&self, iri: &Iri) -> Result<&[ConceptExpr], ReasonerError> {
        Ok(&self.conjunct_index[self.id(iri)?])
    }

    /// Reflexive-transitive told superclasses.
    pub fn ancestors(&self, iri: &Iri) -> Result<Vec<&Iri>, ReasonerError> {
        Ok(self.ancestor_ids(self.id(iri)?).iter().map(|&a| &self.nodes[a]).collect())
    }

    /// Reflexive-transitive told subclasses.
    pub fn descendants(&self, iri: &Iri) -> Result<Vec<&Iri>, ReasonerError> {
        Ok(self.descendant_ids(self.id(iri)?).iter().map(|&d| &self.nodes[d]).collect())
    }

    /// Individuals told to be instances of `iri`, propagated upwards.
    pub fn instances(&self, iri: &Iri) -> Option<&BTreeSet<Iri>> {
        self.instance_index.get(iri)
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Iri> {
        self.individual_types.keys()
    }

    pub fn entails_named(&self, a: &Iri, b: &Iri) -> Result<bool, ReasonerError> {
        Ok(self.reaches(self.id(a)?, self.id(b)?))
    }

    pub fn entails_structural(&self, sub: &ConceptExpr, sup: &ConceptExpr) -> bool {
        let mut search = Search::default();
        loop {
            if self.entails(sub, sup, &mut search) {
                return true;
            }
            if !(search.progress && search.cut) {
                return false;
            }
            search.progress = false;
            search.cut = false;
            search.failed.clear();
        }
    }

    fn entails(&self, sub: &ConceptExpr, sup: &ConceptExpr, search: &mut Search) -> bool {
        if sub == sup || matches!(sub, ConceptExpr::Bottom) || matches!(sup, ConceptExpr::Top) {
            return true;
        }
        let key: Goal = (sub, sup);
        if search.proved.contains(&key) {
            return true;
        }
        if search.failed.contains(&key) {
            return false;
        }
        if !search.stack.insert(key) {
            search.cut = true;
            return false;
        }
        let result = self.entails_step(sub, sup, search);
        search.stack.remove(&key);
        if result {
            search.proved.insert(key);
            search.progress = true;
        } else {
            search.failed.insert(key);
        }
        result
    }

    fn entails_step(&self, sub: &ConceptExpr, sup: &ConceptExpr, search: &mut Search) -> bool {
        use ConceptExpr::*;

        if let And(cs) = sup {
            return cs.iter().all(|c| self.entails(sub, c, search));
        }
        if let Or(ds) = sub {
            return ds.iter().all(|d| self.entails(d, sup, search));
        }
        if let Atomic(a) = sub {
            let Some(&a) = self.index.get(a) else {
                return false;
            };
            if let Atomic(b) = sup {
                return self.index.get(b).is_some_and(|&b| self.reaches(a, b));
            }
            if let Or(ds) = sup {
                if ds.iter().any(|d| self.entails(sub, d, search)) {
                    return true;
                }
            }
            return self.ancestor_ids(a).iter().any(|&anc| {
                self.conjunct_index[anc].iter().filter(|e| e.as_named().is_none()).any(|e| self.entails(e, sup, search))
            });
        }

        if let Or(ds) = sup {
            if ds.iter().any(|d| self.entails(sub, d, search)) {
                return true;
            }
        }
        if let And(cs) = sub {
            if cs.iter().any(|c| self.entails(c, sup, search)) {
                return true;
            }
        }
        let by_structure = match (sub, sup) {
            (Exists(p, x), Exists(q, y)) | (Forall(p, x), Forall(q, y)) if p == q => self.entails(x, y, search),
            (Not(x), Not(y)) => self.entails(y, x, search),
            _ => false,
        };
        if by_structure {
            return true;
        }
        if let Atomic(b) = sup {
            if let Some(&b) = self.index.get(b) {
                return self
                    .told_subclasses
                    .iter()
                    .any(|(d, target)| self.reaches(*target, b) && self.entails(sub, d, search));
            }
        }
        false
    }

    fn complex_reach(&self) -> &BTreeSet<usize> {
        self.complex_reach.get_or_init(|| {
            let mut out = BTreeSet::new();
            for (i, sups) in self.conjunct_index.iter().enumerate() {
                if sups.iter().any(|e| e.as_named().is_none()) && !out.contains(&i) {
                    out.extend(self.descendant_ids(i).iter().copied());
                }
            }
            out
        })
    }

    // Superset of the named descendants of `e`, or None for "every concept".
    fn descendant_candidates(&self, e: &ConceptExpr) -> Option<BTreeSet<usize>> {
        match e {
            ConceptExpr::Atomic(b) => Some(match self.index.get(b) {
                Some(&b) => self.descendant_ids(b).iter().copied().collect(),
                None => BTreeSet::new(),
            }),
            ConceptExpr::And(cs) => {
                let mut acc: Option<BTreeSet<usize>> = None;
                for c in cs {
                    if let Some(s) = self.descendant_candidates(c) {
                        acc = Some(match acc {
                            None => s,
                            Some(a) => a.intersection(&s).copied().collect(),
                        });
                    }
                }
                acc
            }
            ConceptExpr::Or(cs) => {
                // a told disjunction can be entailed without any disjunct
                let mut acc = self.complex_reach().clone();
                for c in cs {
                    acc.extend(self.descendant_candidates(c)?);
                }
                Some(acc)
            }
            ConceptExpr::Top => None,
            ConceptExpr::Bottom | ConceptExpr::Not(_) | ConceptExpr::Exists(..) | ConceptExpr::Forall(..) => {
                Some(self.complex_reach().clone())
            }
        }
    }

    /// Every named `A` with `entails_structural(A, e)`.
    pub fn named_descendants(&self, e: &ConceptExpr) -> BTreeSet<Iri> {
        let candidates: Vec<usize> = match self.descendant_candidates(e) {
            Some(s) => s.into_iter().collect(),
            None => (0..self.nodes.len()).collect(),
        };
        candidates
            .into_iter()
            .map(|i| &self.nodes[i])
            .filter(|a| self.entails_structural(&ConceptExpr::Atomic((*a).clone()), e))
            .cloned()
            .collect()
    }

    /// First named individual (IRI order) that is an instance of both.
    pub fn common_instance(&self, c: &ConceptExpr, d: &ConceptExpr) -> Option<&Iri> {
        self.individual_types
            .iter()
            .find(|(_, ty)| self.entails_structural(ty, c) && self.entails_structural(ty, d))
            .map(|(ind, _)| ind)
    }

    pub fn common_instance_exists(&self, c: &ConceptExpr, d: &ConceptExpr) -> bool {
        self.common_instance(c, d).is_some()
    }

    pub fn disjointness(&self, c: &ConceptExpr, d: &ConceptExpr) -> Disjointness {
        let subsumption = self.entails_structural(c, d) || self.entails_structural(d, c);
        if subsumption {
            return Disjointness { subsumption, common_instance: None, common_descendant: None };
        }
        let common_instance = self.common_instance(c, d).cloned();
        let common_descendant = if common_instance.is_some() {
            None
        } else {
            let dc = self.named_descendants(c);
            if dc.is_empty() {
                None
            } else {
                self.named_descendants(d).intersection(&dc).next().cloned()
            }
        };
        Disjointness { subsumption, common_instance, common_descendant }
    }

    /// No subsumption either way, no common named instance and no common
    /// named descendant.
    pub fn assumed_disjoint(&self, c: &ConceptExpr, d: &ConceptExpr) -> bool {
        self.disjointness(c, d).holds()
    }

    /// Concepts sharing a told direct parent with `a`, excluding `a`.
    pub fn siblings(&self, a: &Iri) -> Result<BTreeSet<Iri>, ReasonerError> {
        let i = self.id(a)?;
        Ok(self.parents[i]
            .iter()
            .flat_map(|&p| self.children[p].iter())
            .filter(|&&c| c != i)
            .map(|&c| self.nodes[c].clone())
            .collect())
    }

    pub(crate) fn child_ids(&self) -> &[Vec<usize>] {
        &self.children
    }

    pub(crate) fn node(&self, i: usize) -> &Iri {
        &self.nodes[i]
    }

    /// Non-reflexive closure as `sub<TAB>super` lines, sorted.
    pub fn dump_closure(&self) -> String {
        let mut out = String::new();
        for i in 0..self.nodes.len() {
            for &j in self.ancestor_ids(i) {
                if i != j {
                    let _ = writeln!(out, "{}\t{}", self.nodes[i], self.nodes[j]);
                }
            }
        }
        out
    }
}
