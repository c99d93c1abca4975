//! Command-line front end.
//!
//! Every setting can come from a flag or from a TOML file given with
//! `--config`; flags win. Relative paths inside the config file resolve
//! against the file's directory.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::corpus::{build_pair, load_corpus, CorpusLabel, CorpusPair};
use crate::error::{Error, Result};
use crate::export::{self, emit_report, OutputFormat};
use crate::lexicon::load_lexicon;
use crate::normalize::{normalize_token, NormalizationConfig};
use crate::report::{
    filter_candidates, summarize_scores, DeterminantReport, FilterConfig, ScoreDistribution,
    DEFAULT_BINS, DEFAULT_B_MIN, DEFAULT_PERCENTILE, SUMMARY_PERCENTILES,
};
use crate::scoring::score_all;
use crate::tfidf::{compare_mean_ranks, RankComparison};

#[derive(Debug, Parser)]
#[command(
    name = "determinant",
    version,
    about = "Score terms that are disproportionately and consistently tied to a positive-outcome corpus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every positive-corpus term, filter, and write the report.
    Analyze(CommonArgs),
    /// Mean TF-IDF rank of selected terms in each corpus.
    TfidfBaseline {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated terms; defaults to the rows of the determinant report.
        /// An empty string selects no terms.
        #[arg(long)]
        terms: Option<String>,
    },
    /// Print the normalized term counts of one document.
    DumpNormalized {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        id: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Both,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Both => OutputFormat::Both,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with any of the settings below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Manifest of the positive-findings corpus (`id<TAB>path` per line).
    #[arg(long)]
    pub positive: Option<PathBuf>,
    /// Manifest of the negative-findings corpus.
    #[arg(long)]
    pub negative: Option<PathBuf>,
    /// Candidate lexicon, one entry per line.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Stopword list replacing the bundled English list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Lemma table (`surface<TAB>lemma`) replacing the bundled one.
    #[arg(long)]
    pub lemmas: Option<PathBuf>,
    /// Score percentile a term must exceed [default: 75].
    #[arg(long)]
    pub percentile: Option<f64>,
    /// Minimum proportional occurrence, exclusive [default: 0.5].
    #[arg(long = "b-min")]
    pub b_min: Option<f64>,
    /// Output directory [default: out].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report format [default: csv].
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Worker threads; 0 picks automatically [default: 0].
    #[arg(long)]
    pub threads: Option<usize>,
    /// Histogram bins over [0, 1] [default: 20].
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub positive: Option<PathBuf>,
    pub negative: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub percentile: Option<f64>,
    pub b_min: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub threads: Option<usize>,
    pub bins: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ConfigFile = toml::from_str(&text)
            .map_err(|e| Error::validation(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.positive,
            &mut cfg.negative,
            &mut cfg.lexicon,
            &mut cfg.stopwords,
            &mut cfg.lemmas,
            &mut cfg.out,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub positive: PathBuf,
    pub negative: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub filter: FilterConfig,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub threads: usize,
    pub bins: usize,
}

impl RunConfig {
    /// Merges flags over the optional config file and fills defaults.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let pick =
            |flag: &Option<PathBuf>, file: &Option<PathBuf>| flag.clone().or_else(|| file.clone());
        let positive = pick(&args.positive, &file.positive)
            .ok_or_else(|| Error::validation("missing --positive manifest"))?;
        let negative = pick(&args.negative, &file.negative)
            .ok_or_else(|| Error::validation("missing --negative manifest"))?;
        let cfg = RunConfig {
            positive,
            negative,
            lexicon: pick(&args.lexicon, &file.lexicon),
            stopwords: pick(&args.stopwords, &file.stopwords),
            lemmas: pick(&args.lemmas, &file.lemmas),
            filter: FilterConfig {
                percentile: args
                    .percentile
                    .or(file.percentile)
                    .unwrap_or(DEFAULT_PERCENTILE),
                b_min: args.b_min.or(file.b_min).unwrap_or(DEFAULT_B_MIN),
            },
            out: pick(&args.out, &file.out).unwrap_or_else(|| PathBuf::from("out")),
            format: args
                .format
                .map(Into::into)
                .or(file.format)
                .unwrap_or_default(),
            threads: args.threads.or(file.threads).unwrap_or(0),
            bins: args.bins.or(file.bins).unwrap_or(DEFAULT_BINS),
        };
        cfg.filter.validate()?;
        if cfg.bins == 0 {
            return Err(Error::validation("--bins must be at least 1"));
        }
        Ok(cfg)
    }

    /// Checks that every input file exists before any work starts.
    pub fn check_inputs(&self, need_lexicon: bool) -> Result<()> {
        if need_lexicon && self.lexicon.is_none() {
            return Err(Error::validation("missing --lexicon"));
        }
        let inputs = [
            Some(&self.positive),
            Some(&self.negative),
            self.lexicon.as_ref().filter(|_| need_lexicon),
            self.stopwords.as_ref(),
            self.lemmas.as_ref(),
        ];
        for path in inputs.into_iter().flatten() {
            std::fs::metadata(path).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }

    pub fn normalization(&self) -> Result<NormalizationConfig> {
        NormalizationConfig::from_files(self.stopwords.as_deref(), self.lemmas.as_deref())
    }

    pub fn load_pair(&self, norm: &NormalizationConfig) -> Result<CorpusPair> {
        let pos = load_corpus(&self.positive, CorpusLabel::Positive, norm)?;
        let neg = load_corpus(&self.negative, CorpusLabel::Negative, norm)?;
        build_pair(pos, neg)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::validation(format!("cannot start thread pool: {e}")))
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: DeterminantReport,
    pub distribution: ScoreDistribution,
    pub comparison: Vec<RankComparison>,
}

/// Loads, scores, filters and summarizes. Writes nothing.
pub fn analyze(cfg: &RunConfig) -> Result<Analysis> {
    cfg.check_inputs(true)?;
    let norm = cfg.normalization()?;
    let lexicon_path = cfg.lexicon.as_ref().expect("checked above");
    let lexicon = load_lexicon(lexicon_path, &norm)?;
    let pair = cfg.load_pair(&norm)?;
    let table = score_all(&pair)?;
    let report = filter_candidates(&table, &lexicon, &cfg.filter)?;
    let mut wanted = SUMMARY_PERCENTILES.to_vec();
    wanted.push(cfg.filter.percentile);
    let distribution = summarize_scores(&table.a_scores(), cfg.bins, &wanted)?;
    let comparison = compare_mean_ranks(
        report.rows.iter().map(|r| r.term.as_str()),
        pair.positive(),
        pair.negative(),
    );
    Ok(Analysis {
        report,
        distribution,
        comparison,
    })
}

pub fn cmd_analyze(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let analysis = cfg.pool()?.install(|| analyze(cfg))?;
    emit_report(
        &analysis.report,
        &analysis.distribution,
        Some(&analysis.comparison),
        cfg.format,
        &cfg.out,
    )?;
    let out = |e| Error::io("<stdout>", e);
    writeln!(stdout, "terms scored: {}", analysis.report.universe_size).map_err(out)?;
    writeln!(
        stdout,
        "threshold (p{}): {:.6}",
        cfg.filter.percentile, analysis.report.threshold_value
    )
    .map_err(out)?;
    writeln!(stdout, "rows: {}", analysis.report.rows.len()).map_err(out)?;
    Ok(())
}

fn parse_terms(list: &str, norm: &NormalizationConfig) -> Vec<String> {
    let mut terms = Vec::new();
    for raw in list.split(',') {
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        match normalize_token(raw, norm) {
            Some(t) if !terms.contains(&t) => terms.push(t),
            Some(_) => {}
            None => log::warn!("term `{raw}` is removed by normalization; skipped"),
        }
    }
    terms
}

pub fn cmd_tfidf_baseline(
    cfg: &RunConfig,
    terms: Option<&str>,
    stdout: &mut dyn Write,
) -> Result<()> {
    let rows = cfg.pool()?.install(|| -> Result<Vec<RankComparison>> {
        match terms {
            Some(list) => {
                cfg.check_inputs(false)?;
                let norm = cfg.normalization()?;
                let terms = parse_terms(list, &norm);
                let pair = cfg.load_pair(&norm)?;
                Ok(compare_mean_ranks(
                    terms.iter().map(String::as_str),
                    pair.positive(),
                    pair.negative(),
                ))
            }
            None => Ok(analyze(cfg)?.comparison),
        }
    })?;
    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    let path = cfg.out.join(export::TFIDF_CSV);
    export::write_file(&path, &export::tfidf_csv(&rows))?;
    writeln!(stdout, "terms: {}", rows.len()).map_err(|e| Error::io("<stdout>", e))?;
    Ok(())
}

pub fn cmd_dump_normalized(cfg: &RunConfig, id: &str, stdout: &mut dyn Write) -> Result<()> {
    cfg.check_inputs(false)?;
    let norm = cfg.normalization()?;
    let (pos, neg) = cfg.pool()?.install(|| -> Result<_> {
        Ok((
            load_corpus(&cfg.positive, CorpusLabel::Positive, &norm)?,
            load_corpus(&cfg.negative, CorpusLabel::Negative, &norm)?,
        ))
    })?;
    let doc = pos
        .document(id)
        .or_else(|| neg.document(id))
        .ok_or_else(|| Error::validation(format!("unknown document id `{id}`")))?;
    for (term, count) in doc.term_counts() {
        writeln!(stdout, "{term}:{count}").map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(&RunConfig::resolve(args)?, stdout),
        Command::TfidfBaseline { common, terms } => {
            cmd_tfidf_baseline(&RunConfig::resolve(common)?, terms.as_deref(), stdout)
        }
        Command::DumpNormalized { common, id } => {
            cmd_dump_normalized(&RunConfig::resolve(common)?, id, stdout)
        }
    }
}
