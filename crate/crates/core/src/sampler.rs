//! Positive and negative subsumption sampling, splits and K-shot subsets.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::canonical_form;
use crate::model::{Axiom, ConceptExpr, Iri, Ontology, Property};
use crate::parser::{OWL_NOTHING, OWL_THING};
use crate::reasoner::{ReasonerError, ToldGraph};

/// The generator behind every random choice. ChaCha8 output is specified
/// independently of platform and word size.
pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("found {soft} soft and {hard} hard negatives, {wanted} needed")]
    InsufficientNegatives { wanted: usize, soft: usize, hard: usize },
    #[error("no samples to split")]
    EmptyInput,
    #[error("cannot balance {positives} positives against {negatives} negatives")]
    Unbalanceable { positives: usize, negatives: usize },
    #[error("k = {k} but the {partition} partition has only {available} samples per label")]
    KTooLarge { k: usize, partition: &'static str, available: usize },
    #[error("invalid ratios '{0}': expected three non-negative integers such as 8:1:1, not all zero")]
    InvalidRatios(String),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "entailment")]
    Positive,
    #[serde(rename = "non-entailment")]
    Negative,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "entailment",
            Label::Negative => "non-entailment",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Entailed,
    Soft,
    Hard,
    CorruptNamed,
    CorruptProperty,
}

impl Provenance {
    pub const ALL: [Provenance; 5] = [
        Provenance::Entailed,
        Provenance::Soft,
        Provenance::Hard,
        Provenance::CorruptNamed,
        Provenance::CorruptProperty,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Entailed => "entailed",
            Provenance::Soft => "soft",
            Provenance::Hard => "hard",
            Provenance::CorruptNamed => "corrupt_named",
            Provenance::CorruptProperty => "corrupt_property",
        }
    }

    pub fn label(self) -> Label {
        match self {
            Provenance::Entailed => Label::Positive,
            _ => Label::Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsumptionSample {
    pub sub: ConceptExpr,
    pub sup: ConceptExpr,
    pub provenance: Provenance,
    pub anchor: Option<Iri>,
}

impl SubsumptionSample {
    pub fn new(sub: ConceptExpr, sup: ConceptExpr, provenance: Provenance, anchor: Option<Iri>) -> Self {
        SubsumptionSample { sub, sup, provenance, anchor }
    }

    pub fn label(&self) -> Label {
        self.provenance.label()
    }

    /// Canonical forms of both sides; partitions never share a key.
    pub fn key(&self) -> (String, String) {
        (canonical_form(&self.sub, None), canonical_form(&self.sup, None))
    }
}

fn is_top_or_bottom(iri: &Iri) -> bool {
    iri.as_str() == OWL_THING || iri.as_str() == OWL_NOTHING
}

/// Every entailed named pair, or only told direct edges with `direct_only`.
pub fn positive_atomic(g: &ToldGraph, rng: &mut SampleRng, direct_only: bool) -> Vec<SubsumptionSample> {
    positive_atomic_among(g, rng, direct_only, &|_| true)
}

/// [`positive_atomic`] restricted to pairs whose endpoints are `usable`.
/// Reasoning still goes through unusable concepts.
pub fn positive_atomic_among(
    g: &ToldGraph,
    rng: &mut SampleRng,
    direct_only: bool,
    usable: &dyn Fn(&Iri) -> bool,
) -> Vec<SubsumptionSample> {
    let ok = |c: &Iri| !is_top_or_bottom(c) && usable(c);
    let mut out = Vec::new();
    for a in g.concepts().iter().filter(|a| ok(a)) {
        let supers = if direct_only { g.parents(a) } else { g.ancestors(a) }.expect("own node");
        for b in supers.into_iter().filter(|b| *b != a && ok(b)) {
            out.push(SubsumptionSample::new(
                ConceptExpr::Atomic(a.clone()),
                ConceptExpr::Atomic(b.clone()),
                Provenance::Entailed,
                None,
            ));
        }
    }
    out.shuffle(rng);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NegativeConfig {
    /// Random draws allowed per wanted negative of each kind. When the whole
    /// candidate pool fits in the budget it is enumerated instead.
    pub attempts_per_sample: usize,
}

impl Default for NegativeConfig {
    fn default() -> Self {
        NegativeConfig { attempts_per_sample: 50 }
    }
}

struct PairCollector<'g> {
    g: &'g ToldGraph,
    seen: HashSet<(usize, usize)>,
    out: Vec<SubsumptionSample>,
}

impl PairCollector<'_> {
    fn offer(&mut self, a: usize, b: usize, provenance: Provenance) -> bool {
        if a == b || self.seen.contains(&(a, b)) {
            return false;
        }
        let (ea, eb) = (ConceptExpr::Atomic(self.g.node(a).clone()), ConceptExpr::Atomic(self.g.node(b).clone()));
        if !self.g.assumed_disjoint(&ea, &eb) {
            return false;
        }
        self.seen.insert((a, b));
        self.out.push(SubsumptionSample::new(ea, eb, provenance, None));
        true
    }
}

/// Soft (random pair) and hard (sibling pair) negatives, `n_pos` in total.
pub fn negative_atomic(
    g: &ToldGraph,
    rng: &mut SampleRng,
    n_pos: usize,
    cfg: &NegativeConfig,
) -> Result<Vec<SubsumptionSample>, SamplerError> {
    negative_atomic_among(g, rng, n_pos, cfg, &|_| true)
}

/// [`negative_atomic`] drawing only `usable` concepts.
pub fn negative_atomic_among(
    g: &ToldGraph,
    rng: &mut SampleRng,
    n_pos: usize,
    cfg: &NegativeConfig,
    usable: &dyn Fn(&Iri) -> bool,
) -> Result<Vec<SubsumptionSample>, SamplerError> {
    let ok = |i: usize| !is_top_or_bottom(g.node(i)) && usable(g.node(i));
    if n_pos == 0 {
        return Ok(Vec::new());
    }
    let budget = n_pos.saturating_mul(cfg.attempts_per_sample.max(1));
    let eligible: Vec<usize> = (0..g.concepts().len()).filter(|&i| ok(i)).collect();
    let mut col = PairCollector { g, seen: HashSet::new(), out: Vec::new() };

    let n = eligible.len();
    if n >= 2 {
        if n * (n - 1) <= budget {
            let mut pool: Vec<(usize, usize)> =
                eligible.iter().flat_map(|&a| eligible.iter().map(move |&b| (a, b))).filter(|(a, b)| a != b).collect();
            pool.shuffle(rng);
            let mut got = 0;
            for (a, b) in pool {
                if got == n_pos {
                    break;
                }
                got += usize::from(col.offer(a, b, Provenance::Soft));
            }
        } else {
            let (mut got, mut tries) = (0, 0);
            while got < n_pos && tries < budget {
                tries += 1;
                let a = eligible[rng.gen_range(0..n)];
                let b = eligible[rng.gen_range(0..n)];
                got += usize::from(col.offer(a, b, Provenance::Soft));
            }
        }
    }
    let soft = col.out.len();

    // Hard pairs: a parent weighted by its ordered child pairs, then two of
    // its children.
    let families: Vec<Vec<usize>> = g
        .child_ids()
        .iter()
        .map(|cs| cs.iter().copied().filter(|&c| ok(c)).collect::<Vec<_>>())
        .filter(|cs| cs.len() >= 2)
        .collect();
    let weights: Vec<usize> = families.iter().map(|cs| cs.len() * (cs.len() - 1)).collect();
    let total: usize = weights.iter().sum();
    if total > 0 {
        let mut got = 0;
        if total <= budget {
            let mut pool: Vec<(usize, usize)> = families
                .iter()
                .flat_map(|cs| cs.iter().flat_map(move |&a| cs.iter().map(move |&b| (a, b))))
                .filter(|(a, b)| a != b)
                .collect();
            pool.shuffle(rng);
            for (a, b) in pool {
                if got == n_pos {
                    break;
                }
                got += usize::from(col.offer(a, b, Provenance::Hard));
            }
        } else {
            let dist = rand::distributions::WeightedIndex::new(&weights).expect("positive weights");
            let mut tries = 0;
            while got < n_pos && tries < budget {
                tries += 1;
                let cs = &families[rng.sample(&dist)];
                let pair: Vec<&usize> = cs.iter().choose_multiple(rng, 2);
                let (a, b) = if rng.gen_bool(0.5) { (*pair[0], *pair[1]) } else { (*pair[1], *pair[0]) };
                got += usize::from(col.offer(a, b, Provenance::Hard));
            }
        }
    }
    let hard = col.out.len() - soft;

    if col.out.len() < n_pos {
        return Err(SamplerError::InsufficientNegatives { wanted: n_pos, soft, hard });
    }
    let mut out = col.out;
    out.shuffle(rng);
    out.truncate(n_pos);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComplexConfig {
    /// Maximum positives, and separately negatives, per anchor.
    pub cap: usize,
    /// Prefer siblings of a replaced concept over uniform replacements.
    pub sibling_replacement: bool,
    /// Corruption draws per wanted negative.
    pub attempts_per_sample: usize,
}

impl Default for ComplexConfig {
    fn default() -> Self {
        ComplexConfig { cap: 4, sibling_replacement: true, attempts_per_sample: 25 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerWarning {
    pub anchor: Iri,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Concept(usize),
    Property(usize),
}

fn slots(e: &ConceptExpr) -> (usize, usize) {
    let (mut concepts, mut properties) = (0, 0);
    e.walk(&mut |n| match n {
        ConceptExpr::Atomic(_) => concepts += 1,
        ConceptExpr::Exists(..) | ConceptExpr::Forall(..) => properties += 1,
        _ => {}
    });
    (concepts, properties)
}

// Replaces the `slot`-th concept or property occurrence in pre-order.
fn replace(e: &ConceptExpr, slot: Slot, with: &Iri) -> ConceptExpr {
    fn go(e: &ConceptExpr, slot: Slot, with: &Iri, seen: &mut (usize, usize)) -> ConceptExpr {
        match e {
            ConceptExpr::Atomic(iri) => {
                let hit = slot == Slot::Concept(seen.0);
                seen.0 += 1;
                ConceptExpr::Atomic(if hit { with.clone() } else { iri.clone() })
            }
            ConceptExpr::Top | ConceptExpr::Bottom => e.clone(),
            ConceptExpr::Not(x) => ConceptExpr::not(go(x, slot, with, seen)),
            ConceptExpr::And(cs) => ConceptExpr::And(cs.iter().map(|c| go(c, slot, with, seen)).collect()),
            ConceptExpr::Or(cs) => ConceptExpr::Or(cs.iter().map(|c| go(c, slot, with, seen)).collect()),
            ConceptExpr::Exists(p, x) | ConceptExpr::Forall(p, x) => {
                let hit = slot == Slot::Property(seen.1);
                seen.1 += 1;
                let p = if hit { Property { iri: with.clone() } } else { p.clone() };
                let (q, _, _) = e.as_restriction().expect("restriction");
                ConceptExpr::restriction(q, p, go(x, slot, with, seen))
            }
        }
    }
    go(e, slot, with, &mut (0, 0))
}

fn nth_concept(e: &ConceptExpr, n: usize) -> Iri {
    let mut i = 0;
    let mut found = None;
    e.walk(&mut |node| {
        if let ConceptExpr::Atomic(iri) = node {
            if i == n {
                found = Some(iri.clone());
            }
            i += 1;
        }
    });
    found.expect("slot in range")
}

fn nth_property(e: &ConceptExpr, n: usize) -> Iri {
    let mut i = 0;
    let mut found = None;
    e.walk(&mut |node| {
        if let Some((_, p, _)) = node.as_restriction() {
            if i == n {
                found = Some(p.iri.clone());
            }
            i += 1;
        }
    });
    found.expect("slot in range")
}

struct Corrupter<'a> {
    g: &'a ToldGraph,
    concepts: Vec<&'a Iri>,
    properties: Vec<&'a Iri>,
    usable: &'a dyn Fn(&Iri) -> bool,
    cfg: &'a ComplexConfig,
}

impl Corrupter<'_> {
    fn concept_for(&self, old: &Iri, rng: &mut SampleRng) -> Option<Iri> {
        if self.cfg.sibling_replacement {
            if let Ok(sibs) = self.g.siblings(old) {
                if let Some(s) = sibs.iter().filter(|s| !is_top_or_bottom(s) && (self.usable)(s)).choose(rng) {
                    return Some(s.clone());
                }
            }
        }
        self.concepts.iter().filter(|c| **c != old).choose(rng).map(|c| (*c).clone())
    }

    fn property_for(&self, old: &Iri, rng: &mut SampleRng) -> Option<Iri> {
        self.properties.iter().filter(|p| **p != old).choose(rng).map(|p| (*p).clone())
    }

    // One corruption of `A ≡ C`, in a random orientation.
    fn corrupt(&self, a: &Iri, c: &ConceptExpr, rng: &mut SampleRng) -> Option<(ConceptExpr, ConceptExpr, Provenance)> {
        let anchor = ConceptExpr::Atomic(a.clone());
        let (nc, np) = slots(c);
        let pick = rng.gen_range(0..1 + nc + np);
        let (corrupted, kept, provenance) = if pick == 0 {
            (ConceptExpr::Atomic(self.concept_for(a, rng)?), c.clone(), Provenance::CorruptNamed)
        } else if pick <= nc {
            let slot = pick - 1;
            let with = self.concept_for(&nth_concept(c, slot), rng)?;
            (replace(c, Slot::Concept(slot), &with), anchor, Provenance::CorruptNamed)
        } else {
            let slot = pick - 1 - nc;
            let with = self.property_for(&nth_property(c, slot), rng)?;
            (replace(c, Slot::Property(slot), &with), anchor, Provenance::CorruptProperty)
        };
        let (sub, sup) = if rng.gen_bool(0.5) { (kept, corrupted) } else { (corrupted, kept) };
        if sub == sup || !self.g.assumed_disjoint(&sub, &sup) {
            return None;
        }
        Some((sub, sup, provenance))
    }
}

/// Samples anchored on definitions `A ≡ C`: positives `(A_sub, C)` and
/// `(C, A_super)`, negatives by corrupting one occurrence in `A` or `C`.
pub fn complex_samples(
    g: &ToldGraph,
    onto: &Ontology,
    rng: &mut SampleRng,
    cfg: &ComplexConfig,
) -> (Vec<SubsumptionSample>, Vec<SamplerWarning>) {
    complex_samples_among(g, onto, rng, cfg, &|_| true)
}

/// [`complex_samples`] using only `usable` concepts and properties; anchors
/// mentioning anything else are skipped with a warning.
pub fn complex_samples_among(
    g: &ToldGraph,
    onto: &Ontology,
    rng: &mut SampleRng,
    cfg: &ComplexConfig,
    usable: &dyn Fn(&Iri) -> bool,
) -> (Vec<SubsumptionSample>, Vec<SamplerWarning>) {
    let ok = |c: &Iri| !is_top_or_bottom(c) && usable(c);
    let corrupter = Corrupter {
        g,
        concepts: g.concepts().iter().filter(|c| ok(c)).collect(),
        properties: onto.properties.iter().filter(|p| usable(p)).collect(),
        usable,
        cfg,
    };
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    let mut keys: HashSet<(String, String)> = HashSet::new();

    let anchors = onto.axioms.iter().filter_map(Axiom::as_definition);
    for (a, c) in anchors {
        let unusable = std::iter::once(a)
            .chain(c.named_concepts())
            .chain(c.properties().into_iter().map(|p| &p.iri))
            .find(|x| !usable(x));
        if let Some(x) = unusable {
            warnings.push(SamplerWarning { anchor: a.clone(), message: format!("skipped: {x} has no usable label") });
            continue;
        }
        let mut candidates: Vec<(ConceptExpr, ConceptExpr)> = Vec::new();
        for s in g.descendants(a).unwrap_or_default().into_iter().filter(|s| *s != a && ok(s)) {
            candidates.push((ConceptExpr::Atomic(s.clone()), c.clone()));
        }
        for s in g.ancestors(a).unwrap_or_default().into_iter().filter(|s| *s != a && ok(s)) {
            candidates.push((c.clone(), ConceptExpr::Atomic(s.clone())));
        }
        candidates.retain(|(x, y)| x != y && g.entails_structural(x, y));

        let mut positives = 0;
        for (sub, sup) in candidates.into_iter().choose_multiple(rng, cfg.cap) {
            let sample = SubsumptionSample::new(sub, sup, Provenance::Entailed, Some(a.clone()));
            if keys.insert(sample.key()) {
                out.push(sample);
                positives += 1;
            }
        }

        let mut negatives = 0;
        let budget = cfg.cap * cfg.attempts_per_sample.max(1);
        for _ in 0..budget {
            if negatives == cfg.cap {
                break;
            }
            if let Some((sub, sup, provenance)) = corrupter.corrupt(a, c, rng) {
                let sample = SubsumptionSample::new(sub, sup, provenance, Some(a.clone()));
                if keys.insert(sample.key()) {
                    out.push(sample);
                    negatives += 1;
                }
            }
        }

        if positives == 0 && negatives == 0 {
            warnings.push(SamplerWarning {
                anchor: a.clone(),
                message: "anchor yields no positive or negative samples".into(),
            });
        }
    }
    (out, warnings)
}

/// Integer partition weights for train, dev and test, written `8:1:1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratios(pub [u32; 3]);

impl Ratios {
    pub const DEFAULT: Ratios = Ratios([8, 1, 1]);
    pub const SMALL: Ratios = Ratios([2, 1, 7]);

    /// Largest-remainder apportionment of `n` items.
    pub fn apportion(&self, n: usize) -> [usize; 3] {
        let total: u64 = self.0.iter().map(|&w| w as u64).sum();
        let mut sizes = [0usize; 3];
        let mut rems = [(0u64, 0usize); 3];
        for (i, &w) in self.0.iter().enumerate() {
            let exact = n as u64 * w as u64;
            sizes[i] = (exact / total) as usize;
            rems[i] = (exact % total, i);
        }
        let left = n - sizes.iter().sum::<usize>();
        rems.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        for &(_, i) in rems.iter().take(left) {
            sizes[i] += 1;
        }
        sizes
    }
}

impl Default for Ratios {
    fn default() -> Self {
        Ratios::DEFAULT
    }
}

impl fmt::Display for Ratios {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for Ratios {
    type Err = SamplerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SamplerError::InvalidRatios(s.to_string());
        let parts: Vec<u32> = s.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        match parts.as_slice() {
            &[a, b, c] if a as u64 + b as u64 + c as u64 > 0 => Ok(Ratios([a, b, c])),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Ratios {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratios {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train: Vec<SubsumptionSample>,
    pub dev: Vec<SubsumptionSample>,
    pub test: Vec<SubsumptionSample>,
    pub seed: u64,
    pub ratios: Ratios,
}

impl DatasetSplit {
    pub fn partitions(&self) -> [(&'static str, &[SubsumptionSample]); 3] {
        [("train", &self.train), ("dev", &self.dev), ("test", &self.test)]
    }
}

/// Deduplicates by key, balances labels by discarding surplus, then cuts
/// each label by `ratios` so every partition is exactly balanced. With
/// `balance` off the labels are apportioned independently.
pub fn split(
    samples: Vec<SubsumptionSample>,
    ratios: Ratios,
    seed: u64,
    rng: &mut SampleRng,
    balance: bool,
) -> Result<DatasetSplit, SamplerError> {
    if samples.is_empty() {
        return Err(SamplerError::EmptyInput);
    }
    let mut keys = HashSet::new();
    let (mut pos, mut neg): (Vec<_>, Vec<_>) =
        samples.into_iter().filter(|s| keys.insert(s.key())).partition(|s| s.label() == Label::Positive);
    pos.shuffle(rng);
    neg.shuffle(rng);
    if balance {
        let m = pos.len().min(neg.len());
        if m == 0 {
            return Err(SamplerError::Unbalanceable { positives: pos.len(), negatives: neg.len() });
        }
        pos.truncate(m);
        neg.truncate(m);
    }

    let mut parts: [Vec<SubsumptionSample>; 3] = Default::default();
    for group in [pos, neg] {
        let sizes = ratios.apportion(group.len());
        let mut it = group.into_iter();
        for (part, n) in parts.iter_mut().zip(sizes) {
            part.extend(it.by_ref().take(n));
        }
    }
    for part in parts.iter_mut() {
        part.shuffle(rng);
    }
    let [train, dev, test] = parts;
    Ok(DatasetSplit { train, dev, test, seed, ratios })
}

fn draw_k(
    part: &[SubsumptionSample],
    name: &'static str,
    k: usize,
    rng: &mut SampleRng,
) -> Result<Vec<SubsumptionSample>, SamplerError> {
    let mut out = Vec::with_capacity(2 * k);
    for label in [Label::Positive, Label::Negative] {
        let pool: Vec<&SubsumptionSample> = part.iter().filter(|s| s.label() == label).collect();
        if pool.len() < k {
            return Err(SamplerError::KTooLarge { k, partition: name, available: pool.len() });
        }
        out.extend(pool.choose_multiple(rng, k).map(|s| (*s).clone()));
    }
    out.shuffle(rng);
    Ok(out)
}

/// `k` positives and `k` negatives from train, and likewise from dev.
pub fn k_shot(
    split: &DatasetSplit,
    k: usize,
    seed: u64,
) -> Result<(Vec<SubsumptionSample>, Vec<SubsumptionSample>), SamplerError> {
    let mut r = rng(seed);
    let train = draw_k(&split.train, "train", k, &mut r)?;
    let dev = draw_k(&split.dev, "dev", k, &mut r)?;
    Ok((train, dev))
}

/// Named concepts and properties mentioned by a sample list.
pub fn mentioned_concepts(samples: &[SubsumptionSample]) -> BTreeSet<&Iri> {
    samples.iter().flat_map(|s| s.sub.named_concepts().into_iter().chain(s.sup.named_concepts())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> ConceptExpr {
        ConceptExpr::atomic(s)
    }

    fn sub(x: &str, y: &str) -> Axiom {
        Axiom::SubClassOf(a(x), a(y))
    }

    fn onto(axioms: Vec<Axiom>) -> Ontology {
        let mut o = Ontology { axioms, ..Default::default() };
        for ax in &o.axioms.clone() {
            for e in ax.expressions() {
                o.concepts.extend(e.named_concepts().into_iter().cloned());
                o.properties.extend(e.properties().into_iter().map(|p| p.iri.clone()));
            }
        }
        o
    }

    fn pairs(samples: &[SubsumptionSample]) -> BTreeSet<(String, String)> {
        samples.iter().map(|s| s.key()).collect()
    }

    #[test]
    fn chain_positives() {
        let g = ToldGraph::build(&onto(vec![sub("A", "B"), sub("B", "C")]));
        let got = pairs(&positive_atomic(&g, &mut rng(1), false));
        let want: BTreeSet<_> =
            [("A", "B"), ("B", "C"), ("A", "C")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
        assert_eq!(got, want);
        assert_eq!(positive_atomic(&g, &mut rng(1), true).len(), 2);
    }

    #[test]
    fn equivalence_positives() {
        let g = ToldGraph::build(&onto(vec![Axiom::EquivalentClasses(a("A"), a("B"))]));
        assert_eq!(positive_atomic(&g, &mut rng(0), false).len(), 2);
    }

    #[test]
    fn negatives_are_disjoint_and_balanced() {
        let g = ToldGraph::build(&onto(vec![sub("A", "B"), sub("C", "D")]));
        let negs = negative_atomic(&g, &mut rng(3), 2, &NegativeConfig::default()).unwrap();
        assert_eq!(negs.len(), 2);
        for n in &negs {
            assert_eq!(n.label(), Label::Negative);
            assert!(g.assumed_disjoint(&n.sub, &n.sup));
        }
    }

    #[test]
    fn star_hard_negatives_share_a_parent() {
        let g = ToldGraph::build(&onto(["A", "B", "C", "D", "E"].iter().map(|c| sub(c, "P")).collect()));
        let negs = negative_atomic(&g, &mut rng(9), 5, &NegativeConfig::default()).unwrap();
        for n in negs.iter().filter(|n| n.provenance == Provenance::Hard) {
            let (x, y) = (n.sub.as_named().unwrap(), n.sup.as_named().unwrap());
            assert!(g.siblings(x).unwrap().contains(y));
        }
        assert!(negs.iter().any(|n| n.provenance == Provenance::Hard));
    }

    #[test]
    fn negatives_report_shortfall() {
        let g = ToldGraph::build(&onto(vec![sub("A", "B")]));
        assert_eq!(
            negative_atomic(&g, &mut rng(0), 1, &NegativeConfig::default()),
            Err(SamplerError::InsufficientNegatives { wanted: 1, soft: 0, hard: 0 })
        );
    }

    #[test]
    fn negatives_are_reproducible() {
        let axioms = (0..12).map(|i| sub(&format!("C{i}"), &format!("P{}", i % 3))).collect();
        let g = ToldGraph::build(&onto(axioms));
        let run = || negative_atomic(&g, &mut rng(42), 8, &NegativeConfig::default()).unwrap();
        assert_eq!(run(), run());
    }

    fn sunflower() -> Ontology {
        onto(vec![
            Axiom::EquivalentClasses(
                a("SunflowerSeed"),
                ConceptExpr::And(vec![a("Seed"), ConceptExpr::exists("derivesFrom", a("HelianthusAnnuus"))]),
            ),
            sub("Seed", "PlantPart"),
            sub("Fruit", "PlantPart"),
            sub("SunflowerSeed", "Food"),
            sub("RoastedSunflowerSeed", "SunflowerSeed"),
            sub("HelianthusAnnuus", "Plant"),
            sub("Malus", "Plant"),
            Axiom::SubClassOf(a("Milk"), ConceptExpr::exists("producedBy", a("Cow"))),
        ])
    }

    #[test]
    fn complex_positives_and_corruptions() {
        let o = sunflower();
        let g = ToldGraph::build(&o);
        let (samples, warnings) = complex_samples(&g, &o, &mut rng(5), &ComplexConfig::default());
        assert!(warnings.is_empty());
        let positives: Vec<_> = samples.iter().filter(|s| s.label() == Label::Positive).collect();
        let negatives: Vec<_> = samples.iter().filter(|s| s.label() == Label::Negative).collect();
        assert!(!positives.is_empty() && positives.len() <= 4);
        assert!(!negatives.is_empty() && negatives.len() <= 4);
        for p in &positives {
            assert!(g.entails_structural(&p.sub, &p.sup));
        }
        for n in &negatives {
            assert!(g.assumed_disjoint(&n.sub, &n.sup));
            assert_eq!(n.anchor.as_ref().unwrap().as_str(), "SunflowerSeed");
        }
        assert!(positives.iter().any(|p| p.sub == a("RoastedSunflowerSeed")));
    }

    #[test]
    fn seed_to_fruit_corruption_is_reachable() {
        let o = sunflower();
        let g = ToldGraph::build(&o);
        let wanted = ConceptExpr::And(vec![a("Fruit"), ConceptExpr::exists("derivesFrom", a("HelianthusAnnuus"))]);
        let cfg = ComplexConfig { cap: 4, ..Default::default() };
        let found = (0..50).any(|seed| {
            complex_samples(&g, &o, &mut rng(seed), &cfg).0.iter().any(|s| {
                (s.sub == a("SunflowerSeed") && s.sup == wanted) || (s.sup == a("SunflowerSeed") && s.sub == wanted)
            })
        });
        assert!(found);
    }

    #[test]
    fn barren_anchor_warns() {
        let o = onto(vec![Axiom::EquivalentClasses(a("A"), ConceptExpr::exists("r", a("A")))]);
        let g = ToldGraph::build(&o);
        let (samples, warnings) = complex_samples(&g, &o, &mut rng(0), &ComplexConfig::default());
        assert!(samples.is_empty());
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn replacement_positions() {
        let e = ConceptExpr::And(vec![a("X"), ConceptExpr::exists("r", ConceptExpr::Or(vec![a("Y"), a("Z")]))]);
        assert_eq!(slots(&e), (3, 1));
        assert_eq!(
            replace(&e, Slot::Concept(2), &Iri::new("W")),
            ConceptExpr::And(vec![a("X"), ConceptExpr::exists("r", ConceptExpr::Or(vec![a("Y"), a("W")]))])
        );
        assert_eq!(
            replace(&e, Slot::Property(0), &Iri::new("s")),
            ConceptExpr::And(vec![a("X"), ConceptExpr::exists("s", ConceptExpr::Or(vec![a("Y"), a("Z")]))])
        );
        assert_eq!(nth_concept(&e, 1).as_str(), "Y");
        assert_eq!(nth_property(&e, 0).as_str(), "r");
    }

    fn fake(n_pos: usize, n_neg: usize) -> Vec<SubsumptionSample> {
        let mk = |i: usize, p| SubsumptionSample::new(a(&format!("S{i}")), a(&format!("T{i}")), p, None);
        (0..n_pos)
            .map(|i| mk(i, Provenance::Entailed))
            .chain((n_pos..n_pos + n_neg).map(|i| mk(i, Provenance::Soft)))
            .collect()
    }

    #[test]
    fn split_sizes() {
        let s = split(fake(100, 100), Ratios::DEFAULT, 0, &mut rng(0), true).unwrap();
        assert_eq!([s.train.len(), s.dev.len(), s.test.len()], [160, 20, 20]);
        for (_, part) in s.partitions() {
            let pos = part.iter().filter(|x| x.label() == Label::Positive).count();
            assert_eq!(2 * pos, part.len());
        }
        let s = split(fake(100, 60), Ratios::DEFAULT, 0, &mut rng(0), true).unwrap();
        assert_eq!(s.train.len() + s.dev.len() + s.test.len(), 120);
        let s = split(fake(50, 50), Ratios::SMALL, 0, &mut rng(0), true).unwrap();
        assert!(s.test.len() > s.train.len() && s.train.len() > s.dev.len());
        assert_eq!(split(vec![], Ratios::DEFAULT, 0, &mut rng(0), true), Err(SamplerError::EmptyInput));
    }

    #[test]
    fn apportionment() {
        assert_eq!(Ratios([8, 1, 1]).apportion(10), [8, 1, 1]);
        assert_eq!(Ratios([8, 1, 1]).apportion(7), [5, 1, 1]);
        assert_eq!(Ratios([2, 1, 7]).apportion(3), [1, 0, 2]);
        assert_eq!(Ratios([1, 1, 1]).apportion(2), [1, 1, 0]);
        assert_eq!("2:1:7".parse::<Ratios>().unwrap(), Ratios::SMALL);
        assert!("0:0:0".parse::<Ratios>().is_err());
        assert!("8:1".parse::<Ratios>().is_err());
    }

    #[test]
    fn k_shot_draws() {
        let s = split(fake(100, 100), Ratios::DEFAULT, 0, &mut rng(0), true).unwrap();
        let (train, dev) = k_shot(&s, 4, 7).unwrap();
        assert_eq!((train.len(), dev.len()), (8, 8));
        assert_eq!(train.iter().filter(|x| x.label() == Label::Positive).count(), 4);
        assert_eq!(k_shot(&s, 4, 7).unwrap(), (train, dev));
        assert_eq!(k_shot(&s, 0, 7).unwrap(), (vec![], vec![]));
        assert!(matches!(k_shot(&s, 11, 7), Err(SamplerError::KTooLarge { partition: "dev", available: 10, .. })));
    }
}
