//! Reference implementations used to check the reasoner.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use ontoforge::model::{Axiom, ConceptExpr, Iri, Ontology};
use ontoforge::reasoner::ToldGraph;
use varisat::{ExtendFormula, Lit, Solver};

/// Reflexive-transitive closure of the told named hierarchy, by Warshall.
pub struct Closure {
    pub index: BTreeMap<Iri, usize>,
    pub reach: Vec<Vec<bool>>,
}

fn named_conjuncts<'a>(e: &'a ConceptExpr, out: &mut Vec<&'a Iri>) {
    match e {
        ConceptExpr::Atomic(i) => out.push(i),
        ConceptExpr::And(cs) => cs.iter().for_each(|c| named_conjuncts(c, out)),
        _ => {}
    }
}

impl Closure {
    pub fn new(onto: &Ontology) -> Self {
        let mut all: BTreeSet<Iri> = onto.concepts.clone();
        for ax in &onto.axioms {
            for e in ax.expressions() {
                all.extend(e.named_concepts().into_iter().cloned());
            }
        }
        let index: BTreeMap<Iri, usize> = all.into_iter().enumerate().map(|(i, n)| (n, i)).collect();
        let n = index.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut told = |sub: &ConceptExpr, sup: &ConceptExpr| {
            if let ConceptExpr::Atomic(a) = sub {
                let mut sups = Vec::new();
                named_conjuncts(sup, &mut sups);
                for b in sups {
                    reach[index[a]][index[b]] = true;
                }
            }
        };
        for ax in &onto.axioms {
            match ax {
                Axiom::SubClassOf(x, y) => told(x, y),
                Axiom::EquivalentClasses(x, y) => {
                    told(x, y);
                    told(y, x);
                }
                Axiom::ClassAssertion(..) => {}
            }
        }
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut() {
                if row[k] {
                    for (cell, &step) in row.iter_mut().zip(&via) {
                        *cell |= step;
                    }
                }
            }
        }
        Closure { index, reach }
    }

    pub fn holds(&self, a: &Iri, b: &Iri) -> bool {
        self.reach[self.index[a]][self.index[b]]
    }

    /// Non-reflexive pairs.
    pub fn pairs(&self) -> BTreeSet<(Iri, Iri)> {
        let names: Vec<&Iri> = self.index.keys().collect();
        let mut out = BTreeSet::new();
        for (i, a) in names.iter().enumerate() {
            for (j, b) in names.iter().enumerate() {
                if i != j && self.reach[i][j] {
                    out.insert(((*a).clone(), (*b).clone()));
                }
            }
        }
        out
    }
}

/// Number of mismatches between `entails_named` and the closure oracle over
/// every ordered pair.
pub fn closure_mismatches(onto: &Ontology) -> usize {
    let g = ToldGraph::build(onto);
    let c = Closure::new(onto);
    let mut bad = 0;
    for a in c.index.keys() {
        for b in c.index.keys() {
            if g.entails_named(a, b).unwrap() != c.holds(a, b) {
                bad += 1;
            }
        }
    }
    bad
}

/// Finite-model search: encodes the ontology over a domain of `n` elements
/// as CNF and asks for an element in `C` but not in `D`.
pub struct ModelSearch {
    solver: Solver<'static>,
    n: usize,
    truth: Lit,
    concepts: HashMap<(Iri, usize), Lit>,
    roles: HashMap<(Iri, usize, usize), Lit>,
    memo: HashMap<(ConceptExpr, usize), Lit>,
}

impl ModelSearch {
    pub fn new(onto: &Ontology, n: usize) -> Self {
        let mut solver = Solver::new();
        let truth = solver.new_lit();
        solver.add_clause(&[truth]);
        let mut m =
            ModelSearch { solver, n, truth, concepts: HashMap::new(), roles: HashMap::new(), memo: HashMap::new() };

        let mut placed: BTreeMap<&Iri, Vec<Lit>> = BTreeMap::new();
        for ax in &onto.axioms {
            match ax {
                Axiom::SubClassOf(c, d) => m.include(c, d),
                Axiom::EquivalentClasses(c, d) => {
                    m.include(c, d);
                    m.include(d, c);
                }
                Axiom::ClassAssertion(c, ind) => {
                    let at = placed.entry(ind).or_insert_with(|| {
                        let lits: Vec<Lit> = (0..n).map(|_| m.solver.new_lit()).collect();
                        m.solver.add_clause(&lits);
                        for i in 0..n {
                            for j in i + 1..n {
                                m.solver.add_clause(&[!lits[i], !lits[j]]);
                            }
                        }
                        lits
                    });
                    let at = at.clone();
                    for (x, &here) in at.iter().enumerate() {
                        let cx = m.lit(c, x);
                        m.solver.add_clause(&[!here, cx]);
                    }
                }
            }
        }
        m
    }

    fn include(&mut self, c: &ConceptExpr, d: &ConceptExpr) {
        for x in 0..self.n {
            let (cx, dx) = (self.lit(c, x), self.lit(d, x));
            self.solver.add_clause(&[!cx, dx]);
        }
    }

    fn and_of(&mut self, lits: &[Lit]) -> Lit {
        let v = self.solver.new_lit();
        let mut long = vec![v];
        for &l in lits {
            self.solver.add_clause(&[!v, l]);
            long.push(!l);
        }
        self.solver.add_clause(&long);
        v
    }

    fn or_of(&mut self, lits: &[Lit]) -> Lit {
        let negated: Vec<Lit> = lits.iter().map(|&l| !l).collect();
        !self.and_of(&negated)
    }

    fn lit(&mut self, e: &ConceptExpr, x: usize) -> Lit {
        if let Some(&l) = self.memo.get(&(e.clone(), x)) {
            return l;
        }
        let l = match e {
            ConceptExpr::Top => self.truth,
            ConceptExpr::Bottom => !self.truth,
            ConceptExpr::Atomic(a) => {
                let key = (a.clone(), x);
                match self.concepts.get(&key) {
                    Some(&l) => l,
                    None => {
                        let l = self.solver.new_lit();
                        self.concepts.insert(key, l);
                        l
                    }
                }
            }
            ConceptExpr::Not(c) => !self.lit(c, x),
            ConceptExpr::And(cs) => {
                let ls: Vec<Lit> = cs.iter().map(|c| self.lit(c, x)).collect();
                self.and_of(&ls)
            }
            ConceptExpr::Or(cs) => {
                let ls: Vec<Lit> = cs.iter().map(|c| self.lit(c, x)).collect();
                self.or_of(&ls)
            }
            ConceptExpr::Exists(p, f) | ConceptExpr::Forall(p, f) => {
                let exists = matches!(e, ConceptExpr::Exists(..));
                let mut per_y = Vec::with_capacity(self.n);
                for y in 0..self.n {
                    let r = self.role(&p.iri, x, y);
                    let fy = self.lit(f, y);
                    per_y.push(if exists { self.and_of(&[r, fy]) } else { self.or_of(&[!r, fy]) });
                }
                if exists {
                    self.or_of(&per_y)
                } else {
                    self.and_of(&per_y)
                }
            }
        };
        self.memo.insert((e.clone(), x), l);
        l
    }

    fn role(&mut self, p: &Iri, x: usize, y: usize) -> Lit {
        let key = (p.clone(), x, y);
        if let Some(&l) = self.roles.get(&key) {
            return l;
        }
        let l = self.solver.new_lit();
        self.roles.insert(key, l);
        l
    }

    /// True when some model of this size has an instance of `c` outside `d`.
    pub fn countermodel(&mut self, c: &ConceptExpr, d: &ConceptExpr) -> bool {
        let (c0, d0) = (self.lit(c, 0), self.lit(d, 0));
        self.solver.assume(&[c0, !d0]);
        let sat = self.solver.solve().expect("solver runs");
        self.solver.assume(&[]);
        sat
    }
}

/// Re-checks the three assumed-disjointness conditions by brute force over
/// every named concept and individual.
pub fn verify_disjoint(g: &ToldGraph, onto: &Ontology, c: &ConceptExpr, d: &ConceptExpr) -> Result<(), String> {
    if g.entails_structural(c, d) || g.entails_structural(d, c) {
        return Err("subsumption holds".into());
    }
    if let (Some(a), Some(b)) = (c.as_named(), d.as_named()) {
        let closure = Closure::new(onto);
        if closure.holds(a, b) || closure.holds(b, a) {
            return Err("subsumption holds in the closure oracle".into());
        }
    }
    let mut types: BTreeMap<&Iri, Vec<ConceptExpr>> = BTreeMap::new();
    for ax in &onto.axioms {
        if let Axiom::ClassAssertion(t, ind) = ax {
            types.entry(ind).or_default().push(t.clone());
        }
    }
    for (ind, ts) in types {
        let t = if ts.len() == 1 { ts[0].clone() } else { ConceptExpr::And(ts) };
        if g.entails_structural(&t, c) && g.entails_structural(&t, d) {
            return Err(format!("common instance {ind}"));
        }
    }
    for x in g.concepts() {
        let xe = ConceptExpr::Atomic(x.clone());
        if g.entails_structural(&xe, c) && g.entails_structural(&xe, d) {
            return Err(format!("common descendant {x}"));
        }
    }
    Ok(())
}
