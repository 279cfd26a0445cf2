//! Ontology cleanup before sampling: pruning and label normalisation.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Iri, Ontology};

/// Replace a whole label by one capture group of `pattern` when it matches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegexRewrite {
    pub pattern: String,
    #[serde(default = "default_group")]
    pub keep: usize,
}

fn default_group() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    pub remove_deprecated: bool,
    pub lowercase_labels: bool,
    pub strip_underscores: bool,
    pub camel_case_split: bool,
    /// Tried in order; the first matching rule rewrites the label.
    pub regex_rewrites: Vec<RegexRewrite>,
    pub concept_blocklist: BTreeSet<Iri>,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            remove_deprecated: true,
            lowercase_labels: true,
            strip_underscores: true,
            camel_case_split: false,
            regex_rewrites: Vec::new(),
            concept_blocklist: BTreeSet::new(),
        }
    }
}

const PRESETS: [(&str, &str); 4] = [
    ("general", include_str!("../presets/general.json")),
    ("foodon", include_str!("../presets/foodon.json")),
    ("schema_org", include_str!("../presets/schema_org.json")),
    ("doid", include_str!("../presets/doid.json")),
];

impl PreprocessConfig {
    pub fn preset_names() -> impl Iterator<Item = &'static str> {
        PRESETS.iter().map(|(n, _)| *n)
    }

    pub fn preset(name: &str) -> Result<Self, PreprocessError> {
        let (_, json) =
            PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| PreprocessError::UnknownPreset(name.to_string()))?;
        Ok(serde_json::from_str(json)?)
    }

    pub fn from_json_file(path: &Path) -> Result<Self, PreprocessError> {
        let text = fs::read_to_string(path).map_err(|e| PreprocessError::Io(path.display().to_string(), e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// A preset name or a path to a JSON config.
    pub fn load(name_or_path: &str) -> Result<Self, PreprocessError> {
        if PRESETS.iter().any(|(n, _)| *n == name_or_path) {
            Self::preset(name_or_path)
        } else {
            Self::from_json_file(Path::new(name_or_path))
        }
    }
}

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("label is empty after normalisation")]
    EmptyLabel,
    #[error("invalid rewrite pattern {pattern:?}: {source}")]
    Pattern { pattern: String, source: regex::Error },
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("malformed preprocessing config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    Deprecated,
    Blocklisted,
    NoUsableLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessWarning {
    pub iri: Iri,
    pub reason: RemovalReason,
}

/// Compiled form of the label part of a [`PreprocessConfig`].
#[derive(Debug, Clone)]
pub struct LabelNormaliser {
    rewrites: Vec<(Regex, usize)>,
    lowercase: bool,
    underscores: bool,
    camel: bool,
}

impl LabelNormaliser {
    pub fn new(cfg: &PreprocessConfig) -> Result<Self, PreprocessError> {
        let rewrites = cfg
            .regex_rewrites
            .iter()
            .map(|r| {
                Regex::new(&r.pattern)
                    .map(|re| (re, r.keep))
                    .map_err(|source| PreprocessError::Pattern { pattern: r.pattern.clone(), source })
            })
            .collect::<Result<_, _>>()?;
        Ok(LabelNormaliser {
            rewrites,
            lowercase: cfg.lowercase_labels,
            underscores: cfg.strip_underscores,
            camel: cfg.camel_case_split,
        })
    }

    /// Rewrites, camel-case split, lowercasing, underscore removal and
    /// whitespace cleanup, in that order. Idempotent for the built-in
    /// presets; a custom rewrite whose output matches its own pattern
    /// differently can break that.
    pub fn normalise(&self, raw: &str) -> Result<String, PreprocessError> {
        let mut label = raw.to_string();
        for (re, group) in &self.rewrites {
            if let Some(caps) = re.captures(&label) {
                label = caps.get(*group).map(|m| m.as_str().to_string()).unwrap_or_default();
                break;
            }
        }
        if self.camel {
            label = split_camel_case(&label);
        }
        if self.lowercase {
            label = label.to_lowercase();
        }
        if self.underscores {
            label = label.replace('_', " ");
        }
        let label = label.split_whitespace().collect::<Vec<_>>().join(" ");
        if label.is_empty() {
            Err(PreprocessError::EmptyLabel)
        } else {
            Ok(label)
        }
    }
}

/// `"APIReference"` → `"API Reference"`, `"hasPart"` → `"has Part"`.
pub fn split_camel_case(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len() + 4);
    for (i, &c) in chars.iter().enumerate() {
        if i > 0 && c.is_uppercase() {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || (prev.is_uppercase() && next_lower) {
                out.push(' ');
            }
        }
        out.push(c);
    }
    out
}

pub fn normalise_label(raw: &str, cfg: &PreprocessConfig) -> Result<String, PreprocessError> {
    LabelNormaliser::new(cfg)?.normalise(raw)
}

/// Drops deprecated (when enabled) and blocklisted concepts together with
/// every axiom that mentions them.
pub fn prune(onto: &Ontology, cfg: &PreprocessConfig) -> (Ontology, Vec<PreprocessWarning>) {
    let mut warnings = Vec::new();
    let mut removed = BTreeSet::new();
    for iri in &onto.concepts {
        let reason = if cfg.concept_blocklist.contains(iri) {
            RemovalReason::Blocklisted
        } else if cfg.remove_deprecated && onto.deprecated.contains(iri) {
            RemovalReason::Deprecated
        } else {
            continue;
        };
        removed.insert(iri.clone());
        warnings.push(PreprocessWarning { iri: iri.clone(), reason });
    }
    if removed.is_empty() {
        return (onto.clone(), warnings);
    }

    let mut out = onto.clone();
    out.concepts.retain(|c| !removed.contains(c));
    out.labels.retain(|k, _| !removed.contains(k));
    out.deprecated.retain(|k| !removed.contains(k));
    out.axioms.retain(|ax| !removed.iter().any(|r| ax.mentions_concept(r)));
    (out, warnings)
}

/// Normalises every label. Entities left without a usable label lose their
/// label entry and are reported; they stay in the ontology but cannot be
/// sampled.
pub fn normalise_labels(
    onto: &Ontology,
    cfg: &PreprocessConfig,
) -> Result<(Ontology, Vec<PreprocessWarning>), PreprocessError> {
    let normaliser = LabelNormaliser::new(cfg)?;
    let mut out = onto.clone();
    let mut warnings = Vec::new();
    for (iri, labels) in out.labels.iter_mut() {
        let mut clean: Vec<String> = Vec::with_capacity(labels.len());
        for raw in labels.iter() {
            if let Ok(l) = normaliser.normalise(raw) {
                if !clean.contains(&l) {
                    clean.push(l);
                }
            }
        }
        if clean.is_empty() {
            warnings.push(PreprocessWarning { iri: iri.clone(), reason: RemovalReason::NoUsableLabel });
        }
        *labels = clean;
    }
    out.labels.retain(|_, ls| !ls.is_empty());
    Ok((out, warnings))
}

/// [`prune`] followed by [`normalise_labels`].
pub fn preprocess(
    onto: &Ontology,
    cfg: &PreprocessConfig,
) -> Result<(Ontology, Vec<PreprocessWarning>), PreprocessError> {
    let (pruned, mut warnings) = prune(onto, cfg);
    let (out, more) = normalise_labels(&pruned, cfg)?;
    warnings.extend(more);
    Ok((out, warnings))
}
