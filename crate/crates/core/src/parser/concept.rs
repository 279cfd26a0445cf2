use crate::canonical::{is_bare_char, BOTTOM, KEYWORDS, TOP};
use crate::model::{ConceptExpr, Iri, Property, Quantifier};

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    Bracketed(String),
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Concept { position, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push((pos, Tok::Open));
            }
            ')' => {
                chars.next();
                out.push((pos, Tok::Close));
            }
            '<' => {
                chars.next();
                let mut buf = String::new();
                loop {
                    match chars.next() {
                        Some((_, '\\')) => match chars.next() {
                            Some((_, e)) => buf.push(e),
                            None => return Err(err(pos, "unterminated escape")),
                        },
                        Some((_, '>')) => break,
                        Some((_, c)) => buf.push(c),
                        None => return Err(err(pos, "unterminated '<'")),
                    }
                }
                out.push((pos, Tok::Bracketed(buf)));
            }
            '>' => return Err(err(pos, "unexpected '>'")),
            _ => {
                let mut buf = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_bare_char(c) {
                        break;
                    }
                    buf.push(c);
                    chars.next();
                }
                out.push((pos, Tok::Word(buf)));
            }
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Close) => Ok(()),
            _ => Err(err(pos, "expected ')'")),
        }
    }
}

fn is_keyword(w: &str) -> bool {
    KEYWORDS.contains(&w)
}

fn is_name(t: Option<&Tok>) -> bool {
    match t {
        Some(Tok::Word(w)) => !is_keyword(w),
        Some(Tok::Bracketed(_)) => true,
        _ => false,
    }
}

fn quantifier(t: Option<&Tok>) -> Option<Quantifier> {
    match t {
        Some(Tok::Word(w)) if w == "some" => Some(Quantifier::Some),
        Some(Tok::Word(w)) if w == "only" => Some(Quantifier::Only),
        _ => None,
    }
}

fn iri(pos: usize, text: String) -> Result<Iri, ParseError> {
    Iri::try_new(text).ok_or_else(|| err(pos, "empty name"))
}

fn expr(cur: &mut Cursor) -> Result<ConceptExpr, ParseError> {
    let pos = cur.pos();
    match cur.next() {
        Some(Tok::Word(w)) if is_keyword(&w) => Err(err(pos, format!("unexpected keyword '{w}'"))),
        Some(Tok::Word(w)) if w == TOP => Ok(ConceptExpr::Top),
        Some(Tok::Word(w)) if w == BOTTOM => Ok(ConceptExpr::Bottom),
        Some(Tok::Word(w)) | Some(Tok::Bracketed(w)) => Ok(ConceptExpr::Atomic(iri(pos, w)?)),
        Some(Tok::Close) => Err(err(pos, "unexpected ')'")),
        None => Err(err(pos, "unexpected end of input")),
        Some(Tok::Open) => group(cur),
    }
}

// Called after an opening parenthesis.
fn group(cur: &mut Cursor) -> Result<ConceptExpr, ParseError> {
    if matches!(cur.peek(), Some(Tok::Word(w)) if w == "not") {
        cur.next();
        let inner = expr(cur)?;
        cur.expect_close()?;
        return Ok(ConceptExpr::not(inner));
    }
    if is_name(cur.peek()) {
        if let Some(q) = quantifier(cur.peek2()) {
            let pos = cur.pos();
            let name = match cur.next() {
                Some(Tok::Word(w)) | Some(Tok::Bracketed(w)) => w,
                _ => unreachable!(),
            };
            cur.next();
            let filler = expr(cur)?;
            cur.expect_close()?;
            return Ok(ConceptExpr::restriction(q, Property { iri: iri(pos, name)? }, filler));
        }
    }

    let mut operands = vec![expr(cur)?];
    let mut connective: Option<String> = None;
    let close_pos = loop {
        let pos = cur.pos();
        match cur.next() {
            Some(Tok::Close) => break pos,
            Some(Tok::Word(w)) if w == "and" || w == "or" => {
                match &connective {
                    Some(c) if *c != w => return Err(err(pos, "mixed 'and'/'or' without parentheses")),
                    _ => connective = Some(w),
                }
                operands.push(expr(cur)?);
            }
            _ => return Err(err(pos, "expected 'and', 'or' or ')'")),
        }
    };
    match connective.as_deref() {
        Some("and") => Ok(ConceptExpr::And(operands)),
        Some(_) => Ok(ConceptExpr::Or(operands)),
        None => Err(err(close_pos, "parenthesised single expression")),
    }
}

/// Parses the canonical text produced by [`crate::canonical::canonical_form`].
pub fn parse_concept(text: &str) -> Result<ConceptExpr, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor { toks, at: 0, end: text.len() };
    let e = expr(&mut cur)?;
    if cur.peek().is_some() {
        return Err(err(cur.pos(), "trailing input"));
    }
    Ok(e)
}
