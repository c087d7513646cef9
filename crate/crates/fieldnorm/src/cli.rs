//! Command line definitions and their implementations.
//!
//! Exit codes: 0 success, 1 validation findings, 2 unusable input or
//! configuration.

use std::fs;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fieldnorm_core::corpus::{parse_document, validate, write_document, CorpusDocument, ParseOptions};
use fieldnorm_core::evaluation::evaluate;
use fieldnorm_core::normalizer::DEFAULT_THRESHOLD;
use fieldnorm_core::pipeline::{pre_annotate, retag, Annotation};
use fieldnorm_core::{compute_stats, Normalizer};

use crate::config::{normalizer_config, RegexForeign, Resources};
use crate::output::{append_json_lines, emit, read_input};
use crate::review::{ReviewDocument, Session};
use crate::service;

#[derive(Debug, Parser)]
#[command(name = "fieldnorm", version, about = "Normalize, tag, check and score field transcription corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pre-annotate a raw transcription into a corpus file.
    Normalize(NormalizeArgs),
    /// Re-derive POS tags of a corpus file from the lexicon.
    Tag(TagArgs),
    /// Check corpus files against the format rules.
    Validate(ValidateArgs),
    /// Character, word, sentence and tag counts.
    Stats(StatsArgs),
    /// Score hypothesis corpora against gold corpora.
    Eval(EvalArgs),
    /// Serve a review session over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct LexiconArgs {
    /// Lexicon file.
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Symbol class table; the bundled starter table when omitted.
    #[arg(long)]
    pub symbols: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Suffixes stripped for the fallback search, e.g. `*` or `n,in,*@2`.
    #[arg(long)]
    pub suffix_policy: Option<String>,
    /// Scores at or under this trigger the fallback search.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Tokens fully matching this regex are tagged foreign.
    #[arg(long)]
    pub foreign_pattern: Option<String>,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    /// Raw transcription, `-` for stdin.
    pub input: PathBuf,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub matching: MatchArgs,
    /// Output corpus file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Append tagging conflicts here as JSON lines; stderr when omitted.
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TagArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    /// Accept four-field lines without a POS column.
    #[arg(long)]
    pub legacy: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long)]
    pub legacy: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Corpus files or directories of them.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub legacy: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Hypothesis corpus file, or directory paired by file name.
    pub hypothesis: PathBuf,
    /// Gold corpus file or directory.
    pub gold: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Transcriptions (`.txt`) or corpus files to add to the session.
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub matching: MatchArgs,
    /// Ranked alternatives kept per word.
    #[arg(long, default_value_t = 5)]
    pub topk: usize,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    /// Session log; created if missing, replayed if present.
    #[arg(long)]
    pub session: Option<PathBuf>,
    #[arg(long)]
    pub legacy: bool,
}

fn doc_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty() && s != "-")
        .unwrap_or_else(|| "stdin".to_string())
}

fn read(path: &Path) -> Result<String> {
    read_input(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_corpus(path: &Path, legacy: bool) -> Result<CorpusDocument> {
    let text = read(path)?;
    parse_document(&text, &doc_id(path), ParseOptions { legacy })
        .with_context(|| format!("{}", path.display()))
}

/// Files directly inside a directory, sorted, or the path itself.
fn expand(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .with_context(|| format!("cannot list {}", path.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        Ok(files)
    } else {
        Ok(vec![path.to_path_buf()])
    }
}

pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Normalize(a) => normalize(a),
        Command::Tag(a) => tag(a),
        Command::Validate(a) => validate_files(a),
        Command::Stats(a) => stats(a),
        Command::Eval(a) => eval(a),
        Command::Serve(a) => serve(a),
    }
}

fn normalize(args: NormalizeArgs) -> Result<u8> {
    let resources = Resources::load(&args.lexicon.lexicon, args.lexicon.symbols.as_deref())?;
    let config = normalizer_config(args.matching.threshold, args.matching.suffix_policy.as_deref())?;
    let foreign = args.matching.foreign_pattern.as_deref().map(RegexForeign::new).transpose()?;
    let text = read(&args.input)?;

    let mut normalizer = Normalizer::new(&resources.table, &resources.lexicon, config);
    if let Some(f) = &foreign {
        normalizer = normalizer.with_foreign_matcher(f);
    }
    let Annotation { document, diagnostics } =
        pre_annotate(&doc_id(&args.input), &text, &normalizer).with_context(|| args.input.display().to_string())?;
    let out = write_document(&document)?;
    emit(args.output.as_deref(), out.as_bytes()).context("writing output")?;
    append_json_lines(args.diagnostics.as_deref(), &diagnostics).context("writing diagnostics")?;
    Ok(0)
}

fn tag(args: TagArgs) -> Result<u8> {
    let resources = Resources::load(&args.lexicon.lexicon, args.lexicon.symbols.as_deref())?;
    let mut doc = load_corpus(&args.input, args.legacy)?;
    let diagnostics = retag(&mut doc, &resources.lexicon);
    let out = write_document(&doc)?;
    emit(args.output.as_deref(), out.as_bytes()).context("writing output")?;
    append_json_lines(args.diagnostics.as_deref(), &diagnostics).context("writing diagnostics")?;
    Ok(0)
}

fn validate_files(args: ValidateArgs) -> Result<u8> {
    let mut failed = false;
    for path in &args.files {
        let text = read(path)?;
        let errors = validate(&text, ParseOptions { legacy: args.legacy });
        if errors.is_empty() {
            println!("{}: ok", path.display());
        }
        for e in &errors {
            failed = true;
            println!("{}: {e}", path.display());
        }
    }
    Ok(u8::from(failed))
}

fn stats(args: StatsArgs) -> Result<u8> {
    let mut docs = Vec::new();
    for input in &args.inputs {
        for path in expand(input)? {
            docs.push(load_corpus(&path, args.legacy)?);
        }
    }
    let stats = compute_stats(&docs);
    let out = if args.json {
        serde_json::to_string_pretty(&stats)? + "\n"
    } else {
        stats.to_report()
    };
    emit(None, out.as_bytes())?;
    Ok(0)
}

fn eval(args: EvalArgs) -> Result<u8> {
    let hyp_files = expand(&args.hypothesis)?;
    let gold_files = expand(&args.gold)?;
    if args.hypothesis.is_dir() != args.gold.is_dir() {
        bail!("hypothesis and gold must both be files or both be directories");
    }
    let names = |files: &[PathBuf]| files.iter().map(|p| p.file_name().map(|n| n.to_owned())).collect::<Vec<_>>();
    if args.hypothesis.is_dir() && names(&hyp_files) != names(&gold_files) {
        bail!("hypothesis and gold directories do not hold the same file names");
    }
    let hyp = hyp_files.iter().map(|p| load_corpus(p, false)).collect::<Result<Vec<_>>>()?;
    let gold = gold_files.iter().map(|p| load_corpus(p, false)).collect::<Result<Vec<_>>>()?;
    let report = evaluate(&hyp, &gold)?;
    let out = if args.json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        format!("{}\n{}", report.to_report(), report.document_mean_report())
    };
    emit(None, out.as_bytes())?;
    Ok(0)
}

fn serve(args: ServeArgs) -> Result<u8> {
    let resources = Resources::load(&args.lexicon.lexicon, args.lexicon.symbols.as_deref())?;
    let config = normalizer_config(args.matching.threshold, args.matching.suffix_policy.as_deref())?;
    let foreign = args.matching.foreign_pattern.as_deref().map(RegexForeign::new).transpose()?;
    let mut normalizer = Normalizer::new(&resources.table, &resources.lexicon, config);
    if let Some(f) = &foreign {
        normalizer = normalizer.with_foreign_matcher(f);
    }

    let mut session = match &args.session {
        Some(path) => Session::open(path).with_context(|| format!("session {}", path.display()))?,
        None => Session::in_memory(),
    };
    for path in &args.inputs {
        let id = doc_id(path);
        if session.contains(&id) {
            eprintln!("{id}: already in session, skipped");
            continue;
        }
        let annotation = if path.extension().is_some_and(|e| e == "txt") {
            pre_annotate(&id, &read(path)?, &normalizer).with_context(|| path.display().to_string())?
        } else {
            let mut document = load_corpus(path, args.legacy)?;
            let diagnostics = retag(&mut document, &resources.lexicon);
            Annotation { document, diagnostics }
        };
        session.add_document(ReviewDocument::from_annotation(annotation, &normalizer, args.topk))?;
    }

    let addr = SocketAddr::new(args.host, args.port);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(service::serve(Arc::new(session), addr))?;
    Ok(0)
}
