//! Dataset jobs: parse, preprocess, sample, verbalise, render and write.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{Iri, LabelMap};
use crate::parser::{parse_concept, parse_ontology, OnUnsupported, ParseError, ParseOptions};
use crate::preprocess::{preprocess, PreprocessConfig, PreprocessError};
use crate::prompt::{render, LabelSetId, PromptError, Template, TemplateId};
use crate::reasoner::ToldGraph;
use crate::sampler::{
    complex_samples_among, k_shot, negative_atomic_among, positive_atomic_among, rng, split, ComplexConfig, Label,
    NegativeConfig, Provenance, Ratios, SamplerError, SubsumptionSample,
};
use crate::verbaliser::{verbalise, VerbaliseError, VerbaliserLexicon};

/// Overrides the seed of a job config when set.
pub const SEED_ENV: &str = "ONTOFORGE_SEED";

pub const PARTITIONS: [&str; 3] = ["train", "dev", "test"];

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("preprocess: {0}")]
    Preprocess(#[from] PreprocessError),
    #[error("sample: {0}")]
    Sample(#[from] SamplerError),
    #[error("verbalise: {0}")]
    Verbalise(#[from] VerbaliseError),
    #[error("render: {0}")]
    Prompt(#[from] PromptError),
    #[error("{}:{line}: {message}", path.display())]
    Malformed { path: PathBuf, line: usize, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    #[default]
    Atomic,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Preset name or path to a preprocessing JSON file.
    pub preprocess: String,
    pub task: Task,
    pub ratios: Ratios,
    pub seed: u64,
    pub cap: usize,
    pub k_list: Vec<usize>,
    /// When set, records carry a rendered prompt and the label-set id.
    pub template: Option<TemplateId>,
    pub labels: Option<LabelSetId>,
    pub direct_only: bool,
    pub sibling_replacement: bool,
    pub balance: bool,
    pub on_unsupported: OnUnsupported,
    pub negatives: NegativeConfig,
    pub lexicon: VerbaliserLexicon,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            input: PathBuf::new(),
            output: PathBuf::from("out"),
            preprocess: "general".into(),
            task: Task::Atomic,
            ratios: Ratios::DEFAULT,
            seed: 0,
            cap: ComplexConfig::default().cap,
            k_list: Vec::new(),
            template: None,
            labels: None,
            direct_only: false,
            sibling_replacement: true,
            balance: true,
            on_unsupported: OnUnsupported::SkipWithWarning,
            negatives: NegativeConfig::default(),
            lexicon: VerbaliserLexicon::default(),
        }
    }
}

impl JobConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))
    }

    /// Applies [`SEED_ENV`] if present.
    pub fn apply_env(&mut self) -> Result<(), PipelineError> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| PipelineError::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?;
        }
        Ok(())
    }

    pub fn sha256(&self) -> String {
        hex(&Sha256::digest(serde_json::to_vec(self).expect("config serialises")))
    }

    fn template(&self) -> Option<(Template, LabelSetId)> {
        self.template.map(|t| (Template::new(t), self.labels.unwrap_or_default()))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// One JSONL line. Field order is part of the format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub sub: String,
    #[serde(rename = "super")]
    pub sup: String,
    pub v_sub: String,
    pub v_super: String,
    pub label: Label,
    pub provenance: Provenance,
    pub anchor: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<LabelSetId>,
}

impl Record {
    pub fn from_sample(
        s: &SubsumptionSample,
        labels: &LabelMap,
        lex: &VerbaliserLexicon,
        template: Option<&(Template, LabelSetId)>,
    ) -> Result<Self, PipelineError> {
        let (sub, sup) = s.key();
        let v_sub = verbalise(&s.sub, labels, lex)?;
        let v_super = verbalise(&s.sup, labels, lex)?;
        let mut r = Record {
            sub,
            sup,
            v_sub,
            v_super,
            label: s.label(),
            provenance: s.provenance,
            anchor: s.anchor.clone(),
            prompt: None,
            labels: None,
        };
        if let Some((t, l)) = template {
            r.prompt = Some(render(&r.v_sub, &r.v_super, t)?);
            r.labels = Some(*l);
        }
        Ok(r)
    }
}

pub fn to_jsonl(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serialises"));
        out.push('\n');
    }
    out
}

/// Parses JSONL, reporting the first malformed line.
pub fn read_jsonl(path: &Path, text: &str) -> Result<Vec<Record>, PipelineError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r: Record = serde_json::from_str(line).map_err(|e| PipelineError::Malformed {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        if r.label != r.provenance.label() {
            return Err(PipelineError::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("label {} contradicts provenance {}", r.label.as_str(), r.provenance.as_str()),
            });
        }
        out.push(r);
    }
    Ok(out)
}

/// Adds `prompt` and `labels` to every record of a JSONL document.
pub fn render_jsonl(path: &Path, text: &str, template: &Template, labels: LabelSetId) -> Result<String, PipelineError> {
    let mut records = read_jsonl(path, text)?;
    for r in records.iter_mut() {
        r.prompt = Some(render(&r.v_sub, &r.v_super, template)?);
        r.labels = Some(labels);
    }
    Ok(to_jsonl(&records))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCounts {
    pub total: usize,
    pub labels: BTreeMap<String, usize>,
    pub provenance: BTreeMap<String, usize>,
    /// Distinct named concepts mentioned on either side.
    pub concepts: usize,
}

fn named_in(text: &str) -> Result<Vec<Iri>, ParseError> {
    Ok(parse_concept(text)?.named_concepts().into_iter().cloned().collect())
}

fn tally(records: &[Record], concepts: &mut BTreeSet<Iri>) -> Result<PartitionCounts, (usize, ParseError)> {
    let mut c = PartitionCounts::default();
    for l in [Label::Positive, Label::Negative] {
        c.labels.insert(l.as_str().into(), 0);
    }
    let mut own = BTreeSet::new();
    for (i, r) in records.iter().enumerate() {
        c.total += 1;
        *c.labels.entry(r.label.as_str().into()).or_default() += 1;
        *c.provenance.entry(r.provenance.as_str().into()).or_default() += 1;
        for text in [&r.sub, &r.sup] {
            own.extend(named_in(text).map_err(|e| (i, e))?);
        }
    }
    c.concepts = own.len();
    concepts.extend(own);
    Ok(c)
}

fn positive_fraction(c: &PartitionCounts) -> Option<f64> {
    (c.total > 0).then(|| c.labels[Label::Positive.as_str()] as f64 / c.total as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub config_sha256: String,
    pub input_sha256: String,
    pub task: Task,
    pub ratios: Ratios,
    pub counts: BTreeMap<String, PartitionCounts>,
    /// Fraction of positives per partition; null when empty.
    pub balance: BTreeMap<String, Option<f64>>,
    pub unique_concepts: usize,
    pub k_shot: BTreeMap<String, PartitionCounts>,
    pub warnings: usize,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarningRecord {
    pub stage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub message: String,
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), PipelineError> {
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(&target))?;
    tmp.as_file().sync_all().map_err(io_err(&target))?;
    tmp.persist(&target).map_err(|e| PipelineError::Io { path: target.clone(), source: e.error })?;
    Ok(())
}

/// Everything a job produces, before it is written.
#[derive(Debug, Clone)]
pub struct JobOutput {
    pub partitions: Vec<(String, Vec<Record>)>,
    pub k_shots: Vec<(String, Vec<Record>)>,
    pub warnings: Vec<WarningRecord>,
    pub manifest: Manifest,
}

/// Runs a job in memory.
pub fn build(cfg: &JobConfig) -> Result<JobOutput, PipelineError> {
    let input = fs::read(&cfg.input).map_err(io_err(&cfg.input))?;
    let text = String::from_utf8(input.clone())
        .map_err(|e| PipelineError::Config(format!("{}: not UTF-8: {e}", cfg.input.display())))?;
    let mut warnings = Vec::new();

    let parse_opts = ParseOptions { on_unsupported: cfg.on_unsupported, ..Default::default() };
    let parsed = parse_ontology(&text, &parse_opts)?;
    warnings.extend(parsed.warnings.iter().map(|w| WarningRecord {
        stage: "parse".into(),
        line: Some(w.line),
        subject: Some(w.construct.clone()),
        message: "unsupported construct skipped".into(),
    }));

    let pcfg = PreprocessConfig::load(&cfg.preprocess)?;
    let (onto, pwarn) = preprocess(&parsed.ontology, &pcfg)?;
    warnings.extend(pwarn.iter().map(|w| WarningRecord {
        stage: "preprocess".into(),
        line: None,
        subject: Some(w.iri.to_string()),
        message: serde_json::to_value(&w.reason).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
    }));

    let g = ToldGraph::build(&onto);
    let usable = |iri: &Iri| onto.labels.contains_key(iri);
    let mut r = rng(cfg.seed);
    let samples = match cfg.task {
        Task::Atomic => {
            let mut pos = positive_atomic_among(&g, &mut r, cfg.direct_only, &usable);
            let neg = negative_atomic_among(&g, &mut r, pos.len(), &cfg.negatives, &usable)?;
            pos.extend(neg);
            pos
        }
        Task::Complex => {
            let ccfg =
                ComplexConfig { cap: cfg.cap, sibling_replacement: cfg.sibling_replacement, ..Default::default() };
            let (samples, swarn) = complex_samples_among(&g, &onto, &mut r, &ccfg, &usable);
            warnings.extend(swarn.into_iter().map(|w| WarningRecord {
                stage: "sample".into(),
                line: None,
                subject: Some(w.anchor.to_string()),
                message: w.message,
            }));
            samples
        }
    };
    let ds = split(samples, cfg.ratios, cfg.seed, &mut r, cfg.balance)?;

    let template = cfg.template();
    let to_records = |samples: &[SubsumptionSample]| -> Result<Vec<Record>, PipelineError> {
        samples.iter().map(|s| Record::from_sample(s, &onto.labels, &cfg.lexicon, template.as_ref())).collect()
    };
    let mut partitions = Vec::new();
    for (name, part) in ds.partitions() {
        partitions.push((name.to_string(), to_records(part)?));
    }
    let mut k_shots = Vec::new();
    for &k in &cfg.k_list {
        let (train, dev) = k_shot(&ds, k, cfg.seed)?;
        k_shots.push((format!("train_k{k}"), to_records(&train)?));
        k_shots.push((format!("dev_k{k}"), to_records(&dev)?));
    }

    let internal = |(_, e): (usize, ParseError)| PipelineError::Parse(e);
    let mut all_concepts = BTreeSet::new();
    let mut counts = BTreeMap::new();
    let mut balance = BTreeMap::new();
    for (name, recs) in &partitions {
        let c = tally(recs, &mut all_concepts).map_err(internal)?;
        balance.insert(name.clone(), positive_fraction(&c));
        counts.insert(name.clone(), c);
    }
    let mut k_counts = BTreeMap::new();
    for (name, recs) in &k_shots {
        k_counts.insert(name.clone(), tally(recs, &mut BTreeSet::new()).map_err(internal)?);
    }
    let files = partitions
        .iter()
        .chain(&k_shots)
        .map(|(n, _)| format!("{n}.jsonl"))
        .chain(["warnings.jsonl".to_string(), "manifest.json".to_string()])
        .collect();
    let manifest = Manifest {
        seed: cfg.seed,
        config_sha256: cfg.sha256(),
        input_sha256: hex(&Sha256::digest(&input)),
        task: cfg.task,
        ratios: cfg.ratios,
        counts,
        balance,
        unique_concepts: all_concepts.len(),
        k_shot: k_counts,
        warnings: warnings.len(),
        files,
    };
    Ok(JobOutput { partitions, k_shots, warnings, manifest })
}

/// Runs a job and writes its files into `cfg.output`.
pub fn run(cfg: &JobConfig) -> Result<Manifest, PipelineError> {
    let out = build(cfg)?;
    let dir = &cfg.output;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (name, recs) in out.partitions.iter().chain(&out.k_shots) {
        write_atomic(dir, &format!("{name}.jsonl"), to_jsonl(recs).as_bytes())?;
    }
    let mut w = String::new();
    for rec in &out.warnings {
        w.push_str(&serde_json::to_string(rec).expect("warning serialises"));
        w.push('\n');
    }
    write_atomic(dir, "warnings.jsonl", w.as_bytes())?;
    let mut m = serde_json::to_string_pretty(&out.manifest).expect("manifest serialises");
    m.push('\n');
    write_atomic(dir, "manifest.json", m.as_bytes())?;
    Ok(out.manifest)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub sub: String,
    #[serde(rename = "super")]
    pub sup: String,
    pub partitions: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub partitions: BTreeMap<String, PartitionCounts>,
    pub unique_concepts: usize,
    /// Keys found in more than one partition.
    pub violations: Vec<Violation>,
}

/// Recounts a dataset from disk. `path` is either a single JSONL file or a
/// directory holding `train.jsonl`, `dev.jsonl` and `test.jsonl`.
pub fn stats(path: &Path) -> Result<StatsReport, PipelineError> {
    let mut files = Vec::new();
    if path.is_dir() {
        for name in PARTITIONS {
            let f = path.join(format!("{name}.jsonl"));
            if f.exists() {
                files.push((name.to_string(), f));
            }
        }
        if files.is_empty() {
            return Err(PipelineError::Config(format!("{}: no partition files found", path.display())));
        }
    } else {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        files.push((name, path.to_path_buf()));
    }

    let mut report = StatsReport::default();
    let mut concepts = BTreeSet::new();
    let mut seen: BTreeMap<(String, String), BTreeSet<String>> = BTreeMap::new();
    for (name, f) in files {
        let text = fs::read_to_string(&f).map_err(io_err(&f))?;
        let records = read_jsonl(&f, &text)?;
        let counts = tally(&records, &mut concepts).map_err(|(i, e)| {
            // tally indexes records; recover the physical line
            let line = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).nth(i).map_or(0, |(n, _)| n + 1);
            PipelineError::Malformed { path: f.clone(), line, message: e.to_string() }
        })?;
        for r in &records {
            seen.entry((r.sub.clone(), r.sup.clone())).or_default().insert(name.clone());
        }
        report.partitions.insert(name, counts);
    }
    report.unique_concepts = concepts.len();
    report.violations = seen
        .into_iter()
        .filter(|(_, parts)| parts.len() > 1)
        .map(|((sub, sup), parts)| Violation { sub, sup, partitions: parts.into_iter().collect() })
        .collect();
    Ok(report)
}
