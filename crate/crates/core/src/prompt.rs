//! Cloze prompt templates and label-word sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::verbaliser::article;

pub const DEFAULT_MASK: &str = "<MASK>";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("unknown template '{0}' (expected T1 or T2)")]
    UnknownTemplate(String),
    #[error("unknown label set '{0}' (expected L1, L2 or L3)")]
    UnknownLabels(String),
    #[error("text is empty after stripping punctuation")]
    EmptyText,
    #[error("text already contains the mask token {0}")]
    MaskInInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum TemplateId {
    #[default]
    T1,
    T2,
}

impl FromStr for TemplateId {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T1" | "t1" => Ok(TemplateId::T1),
            "T2" | "t2" => Ok(TemplateId::T2),
            _ => Err(PromptError::UnknownTemplate(s.to_string())),
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TemplateId::T1 => "T1",
            TemplateId::T2 => "T2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub id: TemplateId,
    pub mask_token: String,
}

impl Template {
    pub fn new(id: TemplateId) -> Self {
        Template { id, mask_token: DEFAULT_MASK.into() }
    }
}

impl Default for Template {
    fn default() -> Self {
        Template::new(TemplateId::T1)
    }
}

fn strip_trailing_punctuation(s: &str) -> &str {
    s.trim().trim_end_matches(|c: char| matches!(c, '.' | ',' | ';' | ':' | '!' | '?') || c.is_whitespace())
}

// "a meat", "an apple", "something that ..." with the blank article collapsed.
fn with_article(text: &str) -> String {
    let first = text.split_whitespace().next().unwrap_or(text);
    match article(first) {
        "" => text.to_string(),
        art => format!("{art} {text}"),
    }
}

pub fn render(v_sub: &str, v_super: &str, t: &Template) -> Result<String, PromptError> {
    let mut parts = Vec::with_capacity(2);
    for text in [v_sub, v_super] {
        if text.contains(&t.mask_token) {
            return Err(PromptError::MaskInInput(t.mask_token.clone()));
        }
        let text = strip_trailing_punctuation(text);
        if text.is_empty() {
            return Err(PromptError::EmptyText);
        }
        parts.push(with_article(text));
    }
    let (premise, hypothesis) = (&parts[0], &parts[1]);
    let mask = &t.mask_token;
    Ok(match t.id {
        TemplateId::T1 => format!("It is {premise}? {mask}, it is {hypothesis}."),
        TemplateId::T2 => format!("\"It is {premise}\"? {mask}, \"it is {hypothesis}\"."),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LabelSetId {
    #[default]
    L1,
    L2,
    L3,
}

impl FromStr for LabelSetId {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L1" | "l1" => Ok(LabelSetId::L1),
            "L2" | "l2" => Ok(LabelSetId::L2),
            "L3" | "l3" => Ok(LabelSetId::L3),
            _ => Err(PromptError::UnknownLabels(s.to_string())),
        }
    }
}

impl fmt::Display for LabelSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelSetId::L1 => "L1",
            LabelSetId::L2 => "L2",
            LabelSetId::L3 => "L3",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelWordSet {
    pub id: LabelSetId,
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

pub fn label_words(id: LabelSetId) -> LabelWordSet {
    let (positive, negative): (&[&str], &[&str]) = match id {
        LabelSetId::L1 => (&["Yes"], &["No"]),
        LabelSetId::L2 => (&["Right"], &["Wrong"]),
        LabelSetId::L3 => (&["Yes", "Right"], &["No", "Wrong"]),
    };
    let own = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect();
    LabelWordSet { id, positive: own(positive), negative: own(negative) }
}
