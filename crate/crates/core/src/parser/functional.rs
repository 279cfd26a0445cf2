//! Restricted OWL 2 functional-style syntax reader.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{Axiom, ConceptExpr, Iri, Ontology, Property};

use super::{
    OnUnsupported, ParseError, ParseOptions, Parsed, Warning, OWL, OWL_DEPRECATED, OWL_NOTHING, OWL_THING, RDF, RDFS,
    XSD,
};

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Open,
    Close,
    Equals,
    FullIri(String),
    Name(String),
    Literal { value: String, lang: Option<String> },
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

fn is_name_char(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '(' | ')' | '<' | '>' | '"' | '='))
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn tokens(mut self) -> Result<Vec<Tok>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let (line, column) = (self.line, self.column);
            let kind = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '#' => {
                    self.take_while(|c| c != '\n');
                    continue;
                }
                '(' => {
                    self.bump();
                    TokKind::Open
                }
                ')' => {
                    self.bump();
                    TokKind::Close
                }
                '=' => {
                    self.bump();
                    TokKind::Equals
                }
                '<' => {
                    self.bump();
                    let iri = self.take_while(|c| c != '>' && c != '\n');
                    if self.bump() != Some('>') {
                        return Err(syntax(line, column, "unterminated IRI"));
                    }
                    TokKind::FullIri(iri)
                }
                '"' => {
                    self.bump();
                    let mut value = String::new();
                    loop {
                        match self.bump() {
                            Some('\\') => match self.bump() {
                                Some(e) => value.push(e),
                                None => return Err(syntax(line, column, "unterminated literal")),
                            },
                            Some('"') => break,
                            Some(c) => value.push(c),
                            None => return Err(syntax(line, column, "unterminated literal")),
                        }
                    }
                    let mut lang = None;
                    if self.peek() == Some('@') {
                        self.bump();
                        lang = Some(self.take_while(|c| c.is_ascii_alphanumeric() || c == '-'));
                    } else if self.peek() == Some('^') {
                        self.bump();
                        if self.bump() != Some('^') {
                            return Err(syntax(self.line, self.column, "expected '^^'"));
                        }
                        // datatype is not needed downstream
                        if self.peek() == Some('<') {
                            self.bump();
                            self.take_while(|c| c != '>');
                            self.bump();
                        } else {
                            self.take_while(is_name_char);
                        }
                    }
                    TokKind::Literal { value, lang }
                }
                '>' => return Err(syntax(line, column, "unexpected '>'")),
                _ => TokKind::Name(self.take_while(is_name_char)),
            };
            out.push(Tok { kind, line, column });
        }
        Ok(out)
    }
}

/// Generic `Name(args...)` tree.
#[derive(Debug, Clone)]
enum Term {
    App { name: String, args: Vec<Term>, line: usize, column: usize },
    Name { text: String, line: usize, column: usize },
    Iri { text: String, line: usize, column: usize },
    Literal { value: String, lang: Option<String>, line: usize, column: usize },
    Equals,
}

impl Term {
    fn position(&self) -> (usize, usize) {
        match self {
            Term::App { line, column, .. }
            | Term::Name { line, column, .. }
            | Term::Iri { line, column, .. }
            | Term::Literal { line, column, .. } => (*line, *column),
            Term::Equals => (0, 0),
        }
    }
}

fn read_terms(toks: &[Tok], at: &mut usize, nested: Option<&Tok>) -> Result<Vec<Term>, ParseError> {
    let mut out = Vec::new();
    loop {
        let Some(tok) = toks.get(*at) else {
            return match nested {
                Some(open) => Err(syntax(open.line, open.column, "unclosed '('")),
                None => Ok(out),
            };
        };
        *at += 1;
        match &tok.kind {
            TokKind::Close => {
                return match nested {
                    Some(_) => Ok(out),
                    None => Err(syntax(tok.line, tok.column, "unbalanced ')'")),
                };
            }
            TokKind::Open => return Err(syntax(tok.line, tok.column, "'(' must follow a constructor name")),
            TokKind::Equals => out.push(Term::Equals),
            TokKind::FullIri(text) => out.push(Term::Iri { text: text.clone(), line: tok.line, column: tok.column }),
            TokKind::Literal { value, lang } => {
                out.push(Term::Literal { value: value.clone(), lang: lang.clone(), line: tok.line, column: tok.column })
            }
            TokKind::Name(name) => {
                if matches!(toks.get(*at).map(|t| &t.kind), Some(TokKind::Open)) {
                    let open = &toks[*at];
                    *at += 1;
                    let args = read_terms(toks, at, Some(open))?;
                    out.push(Term::App { name: name.clone(), args, line: tok.line, column: tok.column });
                } else {
                    out.push(Term::Name { text: name.clone(), line: tok.line, column: tok.column });
                }
            }
        }
    }
}

/// Why an axiom could not be converted.
enum Reject {
    Unsupported { line: usize, construct: String },
    Fatal(ParseError),
}

impl From<ParseError> for Reject {
    fn from(e: ParseError) -> Self {
        Reject::Fatal(e)
    }
}

#[derive(Default)]
struct Signature {
    concepts: BTreeSet<Iri>,
    properties: BTreeSet<Iri>,
    individuals: BTreeSet<Iri>,
}

impl Signature {
    fn add_expr(&mut self, e: &ConceptExpr) {
        for c in e.named_concepts() {
            self.concepts.insert(c.clone());
        }
        for p in e.properties() {
            self.properties.insert(p.iri.clone());
        }
    }
}

struct Reader<'o> {
    opts: &'o ParseOptions,
    prefixes: BTreeMap<String, String>,
    document_prefixes: BTreeMap<String, String>,
    sig: Signature,
    axioms: Vec<Axiom>,
    // (subject, precedence, order, text)
    labels: Vec<(Iri, usize, usize, String)>,
    deprecated: BTreeSet<Iri>,
    warnings: Vec<Warning>,
}

impl<'o> Reader<'o> {
    fn new(opts: &'o ParseOptions) -> Self {
        let mut prefixes = BTreeMap::new();
        for (p, base) in [("owl", OWL), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD)] {
            prefixes.insert(p.to_string(), base.to_string());
        }
        prefixes.extend(opts.curie_prefixes.clone());
        Reader {
            opts,
            prefixes,
            document_prefixes: BTreeMap::new(),
            sig: Signature::default(),
            axioms: Vec::new(),
            labels: Vec::new(),
            deprecated: BTreeSet::new(),
            warnings: Vec::new(),
        }
    }

    fn resolve(&self, term: &Term) -> Result<Iri, Reject> {
        match term {
            Term::Iri { text, line, column } => {
                Iri::try_new(text.clone()).ok_or_else(|| syntax(*line, *column, "empty IRI").into())
            }
            Term::Name { text, line, column } => {
                let Some((prefix, local)) = text.split_once(':') else {
                    return Err(syntax(*line, *column, format!("expected an IRI, found '{text}'")).into());
                };
                match self.prefixes.get(prefix) {
                    Some(base) => Ok(Iri::new(format!("{base}{local}"))),
                    None => {
                        Err(ParseError::UnknownPrefix { line: *line, column: *column, prefix: prefix.to_string() }
                            .into())
                    }
                }
            }
            Term::App { name, line, .. } => Err(Reject::Unsupported { line: *line, construct: name.clone() }),
            other => {
                let (line, column) = other.position();
                Err(syntax(line, column, "expected an IRI").into())
            }
        }
    }

    fn class_expr(&self, term: &Term) -> Result<ConceptExpr, Reject> {
        let Term::App { name, args, line, column } = term else {
            let iri = self.resolve(term)?;
            return Ok(match iri.as_str() {
                OWL_THING => ConceptExpr::Top,
                OWL_NOTHING => ConceptExpr::Bottom,
                _ => ConceptExpr::Atomic(iri),
            });
        };
        let arity = |n: usize| -> Result<(), Reject> {
            if args.len() == n {
                Ok(())
            } else {
                Err(syntax(*line, *column, format!("{name} expects {n} arguments")).into())
            }
        };
        match name.as_str() {
            "ObjectIntersectionOf" | "ObjectUnionOf" => {
                if args.len() < 2 {
                    return Err(syntax(*line, *column, format!("{name} needs at least two operands")).into());
                }
                let ops = args.iter().map(|a| self.class_expr(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(if name == "ObjectIntersectionOf" { ConceptExpr::And(ops) } else { ConceptExpr::Or(ops) })
            }
            "ObjectComplementOf" => {
                arity(1)?;
                Ok(ConceptExpr::not(self.class_expr(&args[0])?))
            }
            "ObjectSomeValuesFrom" | "ObjectAllValuesFrom" => {
                arity(2)?;
                let property = Property { iri: self.resolve(&args[0])? };
                let filler = Box::new(self.class_expr(&args[1])?);
                Ok(if name == "ObjectSomeValuesFrom" {
                    ConceptExpr::Exists(property, filler)
                } else {
                    ConceptExpr::Forall(property, filler)
                })
            }
            _ => Err(Reject::Unsupported { line: *line, construct: name.clone() }),
        }
    }

    fn reject(&mut self, r: Reject) -> Result<(), ParseError> {
        match r {
            Reject::Fatal(e) => Err(e),
            Reject::Unsupported { line, construct } => match self.opts.on_unsupported {
                OnUnsupported::Fail => Err(ParseError::Unsupported { line, construct }),
                OnUnsupported::SkipWithWarning => {
                    self.warnings.push(Warning { line, construct });
                    Ok(())
                }
            },
        }
    }

    fn top_level(&mut self, terms: &[Term]) -> Result<(), ParseError> {
        for term in terms {
            match term {
                Term::App { name, args, .. } if name == "Prefix" => self.prefix(args, term)?,
                Term::App { name, args, .. } if name == "Ontology" => {
                    for t in args {
                        match t {
                            Term::Iri { .. } | Term::Name { .. } => {}
                            Term::App { name, args, .. } if name == "Prefix" => self.prefix(args, t)?,
                            _ => self.axiom(t)?,
                        }
                    }
                }
                _ => self.axiom(term)?,
            }
        }
        Ok(())
    }

    fn prefix(&mut self, args: &[Term], at: &Term) -> Result<(), ParseError> {
        let (line, column) = at.position();
        let (name, iri) = match args {
            [Term::Name { text, .. }, Term::Equals, Term::Iri { text: iri, .. }] => (text.as_str(), iri),
            _ => return Err(syntax(line, column, "malformed Prefix declaration")),
        };
        let Some(name) = name.strip_suffix(':') else {
            return Err(syntax(line, column, "prefix name must end with ':'"));
        };
        self.prefixes.insert(name.to_string(), iri.clone());
        self.document_prefixes.insert(name.to_string(), iri.clone());
        Ok(())
    }

    fn axiom(&mut self, term: &Term) -> Result<(), ParseError> {
        match self.try_axiom(term) {
            Ok(()) => Ok(()),
            Err(r) => self.reject(r),
        }
    }

    fn try_axiom(&mut self, term: &Term) -> Result<(), Reject> {
        let Term::App { name, args, line, column } = term else {
            let (line, column) = term.position();
            return Err(syntax(line, column, "expected an axiom").into());
        };
        let (line, column) = (*line, *column);
        // axiom annotations are not used
        let args: Vec<&Term> =
            args.iter().filter(|a| !matches!(a, Term::App { name, .. } if name == "Annotation")).collect();
        let wrong_arity = || -> Reject { syntax(line, column, format!("wrong number of arguments to {name}")).into() };

        match name.as_str() {
            "Declaration" => {
                let [Term::App { name: kind, args: inner, line, .. }] = args.as_slice() else {
                    return Err(wrong_arity());
                };
                let [entity] = inner.as_slice() else {
                    return Err(wrong_arity());
                };
                match kind.as_str() {
                    "Class" => {
                        if let ConceptExpr::Atomic(iri) = self.class_expr(entity)? {
                            self.sig.concepts.insert(iri);
                        }
                    }
                    "ObjectProperty" => {
                        let iri = self.resolve(entity)?;
                        self.sig.properties.insert(iri);
                    }
                    "NamedIndividual" => {
                        let iri = self.resolve(entity)?;
                        self.sig.individuals.insert(iri);
                    }
                    "AnnotationProperty" => {}
                    _ => return Err(Reject::Unsupported { line: *line, construct: kind.clone() }),
                }
            }
            "SubClassOf" => {
                let [sub, sup] = args.as_slice() else {
                    return Err(wrong_arity());
                };
                let sub = self.class_expr(sub)?;
                let sup = self.class_expr(sup)?;
                self.sig.add_expr(&sub);
                self.sig.add_expr(&sup);
                self.axioms.push(Axiom::SubClassOf(sub, sup));
            }
            "EquivalentClasses" => {
                if args.len() < 2 {
                    return Err(wrong_arity());
                }
                let ops = args.iter().map(|a| self.class_expr(a)).collect::<Result<Vec<_>, _>>()?;
                let pivot = ops.iter().position(|e| e.as_named().is_some()).unwrap_or(0);
                for e in &ops {
                    self.sig.add_expr(e);
                }
                for (i, e) in ops.iter().enumerate() {
                    if i != pivot {
                        self.axioms.push(Axiom::equivalent(ops[pivot].clone(), e.clone()));
                    }
                }
            }
            "ClassAssertion" => {
                let [class, individual] = args.as_slice() else {
                    return Err(wrong_arity());
                };
                let class = self.class_expr(class)?;
                let individual = self.resolve(individual)?;
                self.sig.add_expr(&class);
                self.sig.individuals.insert(individual.clone());
                self.axioms.push(Axiom::ClassAssertion(class, individual));
            }
            "AnnotationAssertion" => {
                let [property, subject, value] = args.as_slice() else {
                    return Err(wrong_arity());
                };
                if matches!(subject, Term::Name { text, .. } if text.starts_with("_:")) {
                    return Ok(());
                }
                let property = self.resolve(property)?;
                let subject = self.resolve(subject)?;
                let Term::Literal { value, lang, .. } = value else {
                    return Ok(());
                };
                if property.as_str() == OWL_DEPRECATED {
                    if value.trim() == "true" {
                        self.deprecated.insert(subject);
                    }
                    return Ok(());
                }
                let english = lang.as_deref().is_none_or(|l| l.is_empty() || l.to_ascii_lowercase().starts_with("en"));
                if let Some(rank) = self.opts.label_properties.iter().position(|p| *p == property) {
                    if english && !value.trim().is_empty() {
                        let order = self.labels.len();
                        self.labels.push((subject, rank, order, value.clone()));
                    }
                }
            }
            _ => return Err(Reject::Unsupported { line, construct: name.clone() }),
        }
        Ok(())
    }

    fn finish(self) -> Result<Parsed, ParseError> {
        let Reader { sig, axioms, mut labels, deprecated, warnings, document_prefixes, .. } = self;
        for iri in sig.concepts.iter() {
            if sig.properties.contains(iri) || sig.individuals.contains(iri) {
                return Err(ParseError::Punning { iri: iri.clone() });
            }
        }
        if let Some(iri) = sig.properties.intersection(&sig.individuals).next() {
            return Err(ParseError::Punning { iri: iri.clone() });
        }

        labels.sort_by(|a, b| (&a.0, a.1, a.2).cmp(&(&b.0, b.1, b.2)));
        let mut label_map: BTreeMap<Iri, Vec<String>> = BTreeMap::new();
        for (iri, _, _, text) in labels {
            let entry = label_map.entry(iri).or_default();
            if !entry.contains(&text) {
                entry.push(text);
            }
        }

        Ok(Parsed {
            ontology: Ontology {
                concepts: sig.concepts,
                properties: sig.properties,
                individuals: sig.individuals,
                axioms,
                labels: label_map,
                deprecated,
                prefixes: document_prefixes,
            },
            warnings,
        })
    }
}

/// Reads a functional-syntax document.
///
/// Accepted axioms: `Declaration`, `SubClassOf`, `EquivalentClasses`,
/// `ClassAssertion` and `AnnotationAssertion` (labels, synonyms and
/// `owl:deprecated`). Class expressions may use the object intersection,
/// union, complement, some- and all-values-from constructors plus
/// `owl:Thing` / `owl:Nothing`. Anything else is handled per
/// [`ParseOptions::on_unsupported`]; a skipped construct drops its whole axiom.
/// `Prefix` and `Ontology` wrappers are optional.
pub fn parse_ontology(text: &str, opts: &ParseOptions) -> Result<Parsed, ParseError> {
    let toks = Lexer { chars: text.chars().peekable(), line: 1, column: 1 }.tokens()?;
    let mut at = 0;
    let terms = read_terms(&toks, &mut at, None)?;
    let mut reader = Reader::new(opts);
    reader.top_level(&terms)?;
    reader.finish()
}
