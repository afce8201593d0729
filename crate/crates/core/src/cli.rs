//! Command-line front end: `analyze`, `stem`, `validate` and `export`.
//!
//! Everything here takes explicit readers and writers so the commands can be
//! driven in-process; the `uzstem` binary only parses arguments and exits with
//! the returned code.

use std::borrow::Cow;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analyzer::{normalize, Analysis, Analyzer, AnalyzerConfig};
use crate::inventory::{Inventory, InventoryError, EXPECTED_TOTALS};
use crate::morphotactics::{
    Direction, ExportTarget, GrammarError, MorphotacticGraph, AFFIX_FILE, MORPHOTACTICS_FILE, SHIPPED_MORPHOTACTICS,
};

/// Environment variable naming the default grammar location.
pub const GRAMMAR_ENV: &str = "UZSTEM_GRAMMAR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_SETUP: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "uzstem", version, about = "Lexicon-free Uzbek morphological analyzer and stemmer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment every token into prefix, stem and labeled suffixes.
    Analyze(AnalyzeArgs),
    /// Print the stem of every token, one per line.
    Stem(StemArgs),
    /// Check an affix table against the expected per-class counts.
    Validate(ValidateArgs),
    /// Dump a class machine (1..7) or the main machine as an edge list.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Debug, Args)]
pub struct GrammarArgs {
    /// Grammar directory (affixes.tsv + morphotactics.tsv) or affix table file.
    /// Defaults to $UZSTEM_GRAMMAR, then the built-in grammar.
    #[arg(long, value_name = "PATH")]
    pub grammar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Input files; standard input when none are given.
    pub paths: Vec<PathBuf>,
    /// Emit every legal analysis, one record each, instead of only the best.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_name = "N", default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_stem_len: u64,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    #[command(flatten)]
    pub grammar: GrammarArgs,
}

#[derive(Debug, Args)]
pub struct StemArgs {
    /// Input files; standard input when none are given.
    pub paths: Vec<PathBuf>,
    #[arg(long, value_name = "N", default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_stem_len: u64,
    #[command(flatten)]
    pub grammar: GrammarArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Grammar directory or affix table; same default as --grammar.
    pub path: Option<PathBuf>,
    #[command(flatten)]
    pub grammar: GrammarArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Class id 1..7 or `main`.
    pub target: String,
    /// Dump the left-to-right machine instead of the right-to-left DFA.
    #[arg(long)]
    pub ltr: bool,
    #[command(flatten)]
    pub grammar: GrammarArgs,
}

/// A failed command: message plus exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn setup(message: impl fmt::Display) -> CliError {
        CliError { code: EXIT_SETUP, message: message.to_string() }
    }

    fn io(message: impl fmt::Display) -> CliError {
        CliError { code: EXIT_IO, message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<GrammarError> for CliError {
    fn from(e: GrammarError) -> Self {
        match e {
            GrammarError::Io { .. } | GrammarError::Inventory(InventoryError::Io { .. }) => CliError::io(e),
            other => CliError::setup(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMorpheme {
    pub surface: String,
    pub class: String,
    pub gloss: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RecordFlags {
    /// Nothing was stripped; the token is its own stem.
    pub unanalyzed: bool,
    /// The input line held malformed UTF-8 that was replaced.
    pub lossy_utf8: bool,
}

/// One output row. Field order is fixed: token, normalized, rank, stem,
/// flags, morphemes (prefix first, then suffixes in word order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub token: String,
    pub normalized: String,
    /// 1 for the best analysis; higher only with `--all`.
    pub rank: usize,
    pub stem: String,
    pub flags: RecordFlags,
    pub morphemes: Vec<RecordMorpheme>,
}

impl OutputRecord {
    pub fn new(token: &str, normalized: &str, rank: usize, a: &Analysis, lossy_utf8: bool) -> OutputRecord {
        OutputRecord {
            token: token.to_string(),
            normalized: normalized.to_string(),
            rank,
            stem: a.stem.clone(),
            flags: RecordFlags { unanalyzed: a.is_bare(), lossy_utf8 },
            morphemes: a
                .morphemes()
                .map(|m| RecordMorpheme {
                    surface: m.surface.clone(),
                    class: m.class.name().to_string(),
                    gloss: m.gloss.clone(),
                })
                .collect(),
        }
    }

    /// Tab-separated: token, normalized, rank, stem, flags (`-` or a comma
    /// list), then one `surface:Class:gloss` column per morpheme.
    pub fn to_tsv(&self) -> String {
        let mut flags = Vec::new();
        if self.flags.unanalyzed {
            flags.push("unanalyzed");
        }
        if self.flags.lossy_utf8 {
            flags.push("lossy_utf8");
        }
        let flags = if flags.is_empty() { "-".to_string() } else { flags.join(",") };
        let mut cols =
            vec![self.token.clone(), self.normalized.clone(), self.rank.to_string(), self.stem.clone(), flags];
        cols.extend(self.morphemes.iter().map(|m| format!("{}:{}:{}", m.surface, m.class, m.gloss)));
        cols.join("\t")
    }

    /// Inverse of [`OutputRecord::to_tsv`].
    pub fn from_tsv(line: &str) -> Option<OutputRecord> {
        let mut cols = line.split('\t');
        let token = cols.next()?.to_string();
        let normalized = cols.next()?.to_string();
        let rank = cols.next()?.parse().ok()?;
        let stem = cols.next()?.to_string();
        let mut flags = RecordFlags::default();
        for f in cols.next()?.split(',') {
            match f {
                "-" => {}
                "unanalyzed" => flags.unanalyzed = true,
                "lossy_utf8" => flags.lossy_utf8 = true,
                _ => return None,
            }
        }
        let morphemes = cols
            .map(|c| {
                let mut parts = c.splitn(3, ':');
                Some(RecordMorpheme {
                    surface: parts.next()?.to_string(),
                    class: parts.next()?.to_string(),
                    gloss: parts.next()?.to_string(),
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(OutputRecord { token, normalized, rank, stem, flags, morphemes })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

fn is_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2011}')
}

/// Split a line on whitespace and hyphens and trim punctuation around each
/// piece. Apostrophes inside a token are kept; pieces with nothing left are
/// dropped.
pub fn tokenize(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || is_hyphen(c))
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric() && !is_apostrophe(c)))
        .filter(|t| !normalize(t).is_empty())
}

fn is_apostrophe(c: char) -> bool {
    crate::inventory::fold_apostrophe(c) == '\''
}

/// Where grammar files come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarSource {
    Shipped,
    Path(PathBuf),
}

impl GrammarSource {
    /// `--grammar` wins over the environment, which wins over the built-in.
    pub fn resolve(flag: Option<&Path>) -> GrammarSource {
        match flag {
            Some(p) => GrammarSource::Path(p.to_path_buf()),
            None => match std::env::var_os(GRAMMAR_ENV) {
                Some(v) if !v.is_empty() => GrammarSource::Path(PathBuf::from(v)),
                _ => GrammarSource::Shipped,
            },
        }
    }

    /// Contents of the affix table and the morphotactics table. A path may be
    /// a directory holding both files or the affix table itself; a missing
    /// morphotactics file falls back to the built-in one.
    pub fn read(&self) -> Result<(String, String), CliError> {
        let path = match self {
            GrammarSource::Shipped => {
                return Ok((crate::inventory::SHIPPED_AFFIXES.to_string(), SHIPPED_MORPHOTACTICS.to_string()))
            }
            GrammarSource::Path(p) => p,
        };
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| CliError::io(format!("{}: {e}", p.display())));
        let (affix_path, dir) = if path.is_dir() {
            (path.join(AFFIX_FILE), path.clone())
        } else {
            (path.clone(), path.parent().map(Path::to_path_buf).unwrap_or_default())
        };
        let affixes = read(&affix_path)?;
        let tactics_path = dir.join(MORPHOTACTICS_FILE);
        let tactics = if tactics_path.is_file() { read(&tactics_path)? } else { SHIPPED_MORPHOTACTICS.to_string() };
        Ok((affixes, tactics))
    }

    pub fn load(&self) -> Result<MorphotacticGraph, CliError> {
        if *self == GrammarSource::Shipped {
            return Ok(MorphotacticGraph::shipped());
        }
        let (affixes, tactics) = self.read()?;
        Ok(MorphotacticGraph::from_sources(&affixes, &tactics)?)
    }
}

/// Parse arguments from `args` and run with the process's standard streams.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_SETUP } else { EXIT_OK };
        }
    };
    let stdin = io::stdin();
    let stdout = io::stdout();
    run(cli, stdin.lock(), stdout.lock(), &mut io::stderr())
}

/// Run a parsed command. Errors go to `err`; the return value is the exit code.
pub fn run<R: BufRead, W: Write>(cli: Cli, stdin: R, out: W, err: &mut dyn Write) -> i32 {
    let mut out = BufWriter::new(out);
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, stdin, &mut out),
        Command::Stem(a) => cmd_stem(&a, stdin, &mut out),
        Command::Validate(a) => {
            let source = GrammarSource::resolve(a.path.as_deref().or(a.grammar.grammar.as_deref()));
            cmd_validate(&source, &mut out)
        }
        Command::Export(a) => cmd_export(&a, &mut out),
    };
    let flushed = out.flush().map_err(|e| CliError::io(format!("write failed: {e}")));
    match flushed.and(result) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "uzstem: {e}");
            e.code
        }
    }
}

/// Feed every line of every input to `each`, decoding malformed UTF-8 with
/// replacement characters. Memory use is bounded by the longest line.
fn for_each_line<R: BufRead>(
    paths: &[PathBuf],
    stdin: R,
    mut each: impl FnMut(&str, bool) -> io::Result<()>,
) -> Result<(), CliError> {
    let mut drive = |mut reader: Box<dyn BufRead + '_>, name: &str| -> Result<(), CliError> {
        let mut buf = Vec::new();
        loop {
            buf.clear();
            let n = reader.read_until(b'\n', &mut buf).map_err(|e| CliError::io(format!("{name}: {e}")))?;
            if n == 0 {
                return Ok(());
            }
            let text = String::from_utf8_lossy(&buf);
            let lossy = matches!(text, Cow::Owned(_));
            each(&text, lossy).map_err(|e| CliError::io(format!("write failed: {e}")))?;
        }
    };
    if paths.is_empty() {
        return drive(Box::new(stdin), "<stdin>");
    }
    for p in paths {
        let f = File::open(p).map_err(|e| CliError::io(format!("{}: {e}", p.display())))?;
        drive(Box::new(BufReader::new(f)), &p.display().to_string())?;
    }
    Ok(())
}

fn analyzer_for(grammar: &GrammarArgs, min_stem_len: u64, emit_all: bool) -> Result<Analyzer, CliError> {
    let graph = GrammarSource::resolve(grammar.grammar.as_deref()).load()?;
    let config =
        AnalyzerConfig { min_stem_len: min_stem_len as usize, emit_all, max_analyses: 0, ..Default::default() };
    Ok(Analyzer::new(graph, config))
}

/// Records for one line of input, in token order.
pub fn analyze_line(analyzer: &Analyzer, line: &str, lossy: bool) -> Vec<OutputRecord> {
    let mut out = Vec::new();
    for token in tokenize(line) {
        let normalized = normalize(token);
        for (i, a) in analyzer.analyze(&normalized).iter().enumerate() {
            out.push(OutputRecord::new(token, &normalized, i + 1, a, lossy));
        }
    }
    out
}

pub fn cmd_analyze<R: BufRead, W: Write>(args: &AnalyzeArgs, stdin: R, out: &mut W) -> Result<i32, CliError> {
    let analyzer = analyzer_for(&args.grammar, args.min_stem_len, args.all)?;
    for_each_line(&args.paths, stdin, |line, lossy| {
        for r in analyze_line(&analyzer, line, lossy) {
            match args.format {
                Format::Tsv => writeln!(out, "{}", r.to_tsv())?,
                Format::Json => writeln!(out, "{}", r.to_json())?,
            }
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}

pub fn cmd_stem<R: BufRead, W: Write>(args: &StemArgs, stdin: R, out: &mut W) -> Result<i32, CliError> {
    let analyzer = analyzer_for(&args.grammar, args.min_stem_len, false)?;
    for_each_line(&args.paths, stdin, |line, _| {
        for token in tokenize(line) {
            writeln!(out, "{}", analyzer.stem(&normalize(token)))?;
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}

/// Per-class count table, then a summary line. Exit 1 on any mismatch, on a
/// malformed or duplicated row, or when the morphotactics table does not fit
/// the inventory.
pub fn cmd_validate<W: Write>(source: &GrammarSource, out: &mut W) -> Result<i32, CliError> {
    let (affixes, tactics) = source.read()?;
    let wr = |e: io::Error| CliError::io(format!("write failed: {e}"));
    let inv = match Inventory::parse_unchecked(&affixes) {
        Ok(inv) => inv,
        Err(e @ InventoryError::Duplicate { .. }) => {
            writeln!(out, "duplicate row: {e}").map_err(wr)?;
            return Ok(EXIT_SETUP);
        }
        Err(e) => {
            writeln!(out, "invalid affix table: {e}").map_err(wr)?;
            return Ok(EXIT_SETUP);
        }
    };
    let report = inv.count_report();
    writeln!(out, "class\tname\taffixes\tallomorphs\tstatus").map_err(wr)?;
    for r in &report.rows {
        writeln!(
            out,
            "{}\t{}\t{}/{}\t{}/{}\t{}",
            r.class.id(),
            r.class,
            r.entries,
            r.expected_entries,
            r.allomorphs,
            r.expected_allomorphs,
            if r.ok() { "OK" } else { "MISMATCH" }
        )
        .map_err(wr)?;
    }
    let summary = format!(
        "{}/7 classes OK, {} affixes, {} allomorphs",
        report.classes_ok(),
        report.total_entries,
        report.total_allomorphs
    );
    if !report.ok() {
        writeln!(out, "{summary} (expected {}, {})", EXPECTED_TOTALS.0, EXPECTED_TOTALS.1).map_err(wr)?;
        return Ok(EXIT_SETUP);
    }
    if let Err(e) = MorphotacticGraph::build(inv, &tactics) {
        writeln!(out, "{summary}\nmorphotactics: {e}").map_err(wr)?;
        return Ok(EXIT_SETUP);
    }
    writeln!(out, "{summary}").map_err(wr)?;
    Ok(EXIT_OK)
}

pub fn cmd_export<W: Write>(args: &ExportArgs, out: &mut W) -> Result<i32, CliError> {
    let target: ExportTarget = args.target.parse().map_err(CliError::setup)?;
    let graph = GrammarSource::resolve(args.grammar.grammar.as_deref()).load()?;
    let direction = if args.ltr { Direction::LeftToRight } else { Direction::RightToLeft };
    out.write_all(graph.export(target, direction).as_bytes())
        .map_err(|e| CliError::io(format!("write failed: {e}")))?;
    Ok(EXIT_OK)
}
