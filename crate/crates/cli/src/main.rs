use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ontoforge::model::{ConceptExpr, LabelMap};
use ontoforge::parser::{parse_concept, parse_ontology, OnUnsupported, ParseOptions};
use ontoforge::pipeline::{self, JobConfig, Task};
use ontoforge::preprocess::{preprocess, LabelNormaliser, PreprocessConfig};
use ontoforge::prompt::{render, LabelSetId, Template, TemplateId};
use ontoforge::reasoner::ToldGraph;
use ontoforge::sampler::Ratios;
use ontoforge::verbaliser::{verbalise, VerbaliserLexicon};

/// Build subsumption-inference probing datasets from OWL ontologies.
#[derive(Parser)]
#[command(name = "ontoforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an ontology and print a summary or the told closure.
    Parse {
        input: PathBuf,
        /// Print `sub<TAB>super` closure pairs instead of the summary.
        #[arg(long)]
        closure: bool,
        #[arg(long)]
        fail_on_unsupported: bool,
    },
    /// Verbalise canonical concept text, one expression per line on stdin
    /// when none is given.
    Verbalise {
        expr: Option<String>,
        /// Take labels and prefixes from this ontology.
        #[arg(long)]
        ontology: Option<PathBuf>,
        /// Preprocessing preset or config file applied to the ontology labels.
        #[arg(long, default_value = "general")]
        preprocess: String,
    },
    /// Sample an atomic dataset.
    SampleAtomic(JobArgs),
    /// Sample a complex dataset anchored on definitions.
    SampleComplex(JobArgs),
    /// Render a prompt, or add prompts to every record of a JSONL file.
    Render {
        #[arg(long, default_value = "T1")]
        template: TemplateId,
        #[arg(long, default_value = "L1")]
        labels: LabelSetId,
        #[arg(long, default_value = ontoforge::prompt::DEFAULT_MASK)]
        mask: String,
        #[arg(long = "sub", requires = "sup", conflicts_with = "input")]
        sub: Option<String>,
        #[arg(long = "super")]
        sup: Option<String>,
        /// JSONL dataset to render; the result goes to stdout.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Recount a dataset directory or JSONL file.
    Stats { path: PathBuf },
    /// Run a full job from a config file and/or flags.
    Run {
        /// JSON job config; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_parser = parse_task)]
        task: Option<Task>,
        #[command(flatten)]
        job: JobArgs,
    },
}

fn parse_task(s: &str) -> Result<Task, String> {
    match s {
        "atomic" => Ok(Task::Atomic),
        "complex" => Ok(Task::Complex),
        _ => Err(format!("unknown task '{s}' (expected atomic or complex)")),
    }
}

#[derive(Args, Default)]
struct JobArgs {
    /// Ontology in functional-style syntax.
    input: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    preprocess: Option<String>,
    /// Partition weights such as 8:1:1 or 2:1:7.
    #[arg(long)]
    ratios: Option<Ratios>,
    #[arg(long)]
    seed: Option<u64>,
    /// Per-anchor cap for complex samples.
    #[arg(long)]
    cap: Option<usize>,
    /// K-shot sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    #[arg(long)]
    template: Option<TemplateId>,
    #[arg(long)]
    labels: Option<LabelSetId>,
    /// Use told direct edges only for atomic positives.
    #[arg(long)]
    direct_only: bool,
    /// Keep surplus samples of the dominant label.
    #[arg(long)]
    no_balance: bool,
    /// Draw corrupted concepts uniformly instead of from siblings.
    #[arg(long)]
    uniform_replacement: bool,
    #[arg(long)]
    fail_on_unsupported: bool,
}

impl JobArgs {
    fn apply(self, cfg: &mut JobConfig) {
        if let Some(v) = self.input {
            cfg.input = v;
        }
        if let Some(v) = self.output {
            cfg.output = v;
        }
        if let Some(v) = self.preprocess {
            cfg.preprocess = v;
        }
        if let Some(v) = self.ratios {
            cfg.ratios = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.cap {
            cfg.cap = v;
        }
        if let Some(v) = self.k {
            cfg.k_list = v;
        }
        if self.template.is_some() {
            cfg.template = self.template;
        }
        if self.labels.is_some() {
            cfg.labels = self.labels;
        }
        cfg.direct_only |= self.direct_only;
        if self.no_balance {
            cfg.balance = false;
        }
        if self.uniform_replacement {
            cfg.sibling_replacement = false;
        }
        if self.fail_on_unsupported {
            cfg.on_unsupported = OnUnsupported::Fail;
        }
    }
}

fn run_job(base: Option<&Path>, task: Option<Task>, args: JobArgs) -> Result<()> {
    let mut cfg = match base {
        Some(p) => JobConfig::from_json_file(p)?,
        None => JobConfig::default(),
    };
    cfg.apply_env()?;
    if let Some(t) = task {
        cfg.task = t;
    }
    args.apply(&mut cfg);
    if cfg.input.as_os_str().is_empty() {
        bail!("no input ontology given");
    }
    let manifest = pipeline::run(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&manifest)?);
    Ok(())
}

fn read_ontology(path: &Path, on_unsupported: OnUnsupported) -> Result<ontoforge::parser::Parsed> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let opts = ParseOptions { on_unsupported, ..Default::default() };
    Ok(parse_ontology(&text, &opts)?)
}

fn parse_cmd(input: &Path, closure: bool, fail: bool) -> Result<()> {
    let on_unsupported = if fail { OnUnsupported::Fail } else { OnUnsupported::SkipWithWarning };
    let parsed = read_ontology(input, on_unsupported)?;
    let onto = &parsed.ontology;
    let g = ToldGraph::build(onto);
    let mut out = io::stdout().lock();
    if closure {
        out.write_all(g.dump_closure().as_bytes())?;
        return Ok(());
    }
    let summary = serde_json::json!({
        "concepts": onto.concepts.len(),
        "properties": onto.properties.len(),
        "individuals": onto.individuals.len(),
        "axioms": onto.axioms.len(),
        "definitions": onto.definitions().count(),
        "labelled": onto.labels.len(),
        "deprecated": onto.deprecated.len(),
        "warnings": parsed.warnings,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

// Labels for every atom and property of `e`, read off their local names.
fn labels_from_names(e: &ConceptExpr) -> Result<LabelMap> {
    let cfg = PreprocessConfig::preset("schema_org")?;
    let norm = LabelNormaliser::new(&cfg)?;
    let mut labels = LabelMap::new();
    let names = e.named_concepts().into_iter().chain(e.properties().into_iter().map(|p| &p.iri));
    for iri in names {
        labels.insert(iri.clone(), vec![norm.normalise(iri.short_name())?]);
    }
    Ok(labels)
}

fn verbalise_cmd(expr: Option<String>, ontology: Option<PathBuf>, preset: &str) -> Result<()> {
    let onto = match &ontology {
        Some(p) => {
            let parsed = read_ontology(p, OnUnsupported::SkipWithWarning)?;
            Some(preprocess(&parsed.ontology, &PreprocessConfig::load(preset)?)?.0)
        }
        None => None,
    };
    let lex = VerbaliserLexicon::default();
    let one = |text: &str| -> Result<String> {
        let mut e = parse_concept(text)?;
        let labels = match &onto {
            Some(o) => {
                e = o.expand_expr(&e);
                o.labels.clone()
            }
            None => labels_from_names(&e)?,
        };
        Ok(verbalise(&e, &labels, &lex)?)
    };
    let mut out = io::stdout().lock();
    match expr {
        Some(text) => writeln!(out, "{}", one(&text)?)?,
        None => {
            for line in io::stdin().lock().lines() {
                let line = line?;
                if !line.trim().is_empty() {
                    writeln!(out, "{}", one(&line)?)?;
                }
            }
        }
    }
    Ok(())
}

fn render_cmd(
    template: TemplateId,
    labels: LabelSetId,
    mask: String,
    pair: Option<(String, String)>,
    input: Option<PathBuf>,
) -> Result<()> {
    let t = Template { id: template, mask_token: mask };
    let mut out = io::stdout().lock();
    match (pair, input) {
        (Some((sub, sup)), _) => writeln!(out, "{}", render(&sub, &sup, &t)?)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            out.write_all(pipeline::render_jsonl(&path, &text, &t, labels)?.as_bytes())?;
        }
        (None, None) => bail!("give --sub and --super, or --input"),
    }
    Ok(())
}

fn stats_cmd(path: &Path) -> Result<()> {
    let report = pipeline::stats(path)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Parse { input, closure, fail_on_unsupported } => parse_cmd(&input, closure, fail_on_unsupported),
        Command::Verbalise { expr, ontology, preprocess } => verbalise_cmd(expr, ontology, &preprocess),
        Command::SampleAtomic(args) => run_job(None, Some(Task::Atomic), args),
        Command::SampleComplex(args) => run_job(None, Some(Task::Complex), args),
        Command::Render { template, labels, mask, sub, sup, input } => {
            render_cmd(template, labels, mask, sub.zip(sup), input)
        }
        Command::Stats { path } => stats_cmd(&path),
        Command::Run { config, task, job } => run_job(config.as_deref(), task, job),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
