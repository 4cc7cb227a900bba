//! Command-line front end shared by the `adoptscope` binary.
//!
//! Exit codes: 0 ok, 1 other failure, 2 schema or input error, 3 degenerate
//! statistics, 4 embedding provider failure.

use std::fs::File;
use std::io::{BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analyzer::Analyzer;
use crate::embedding::{CachedProvider, EmbeddingProvider, FallbackChain, HashEmbedder, RemoteConfig, RemoteEmbedder};
use crate::harness::{self, AnalysisOptions, CorpusFormat, HarnessError, ReportFormat, SynthConfig};
use crate::session::{http, SessionStore, StoreConfig};
use crate::stats::Variance;

pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_DEGENERATE: u8 = 3;
pub const EXIT_PROVIDER: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "adoptscope", version, about = "Score and compare how much writing adopts AI suggestions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a trial corpus against its task suggestions and write the report.
    Score(ScoreArgs),
    /// Render comparison tables from a scored JSONL file.
    Tables(TablesArgs),
    /// Generate a synthetic corpus with a planted adoption rate.
    Synth(SynthArgs),
    /// Run the built-in numerical and fixture checks.
    Selftest,
    /// Run the live session HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for CorpusFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => CorpusFormat::Csv,
            FormatArg::Jsonl => CorpusFormat::Jsonl,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReportArg {
    Md,
    Csv,
}

impl From<ReportArg> for ReportFormat {
    fn from(f: ReportArg) -> Self {
        match f {
            ReportArg::Md => ReportFormat::Markdown,
            ReportArg::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProviderArg {
    Remote,
    Fallback,
}

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    /// Embedding service URL (POST {"text"} → {"vector"}).
    #[arg(long = "embedding-endpoint", env = "ADOPTSCOPE_EMBEDDING_ENDPOINT")]
    pub endpoint: Option<String>,
    #[arg(long = "embedding-dimension", env = "ADOPTSCOPE_EMBEDDING_DIMENSION", default_value_t = 384)]
    pub dimension: usize,
    #[arg(long = "embedding-timeout-ms", env = "ADOPTSCOPE_EMBEDDING_TIMEOUT_MS", default_value_t = 10_000)]
    pub timeout_ms: u64,
}

impl EmbeddingArgs {
    fn remote(&self) -> Option<RemoteEmbedder> {
        self.endpoint.as_ref().map(|url| {
            let mut config = RemoteConfig::new(url.clone(), self.dimension);
            config.timeout = Duration::from_millis(self.timeout_ms);
            RemoteEmbedder::new(config)
        })
    }
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Drop participants without exactly one AI and one NO_AI trial.
    #[arg(long)]
    pub allow_unpaired: bool,
    /// Use Welch's test for independent comparisons instead of pooled variance.
    #[arg(long)]
    pub welch: bool,
    /// Report output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "md")]
    pub report_format: ReportArg,
}

impl AnalysisArgs {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            allow_unpaired: self.allow_unpaired,
            variance: if self.welch { Variance::Welch } else { Variance::Pooled },
        }
    }
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    pub corpus: PathBuf,
    /// Corpus format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, value_enum, default_value = "fallback")]
    pub provider: ProviderArg,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
    /// Also write per-trial scores as JSONL (input for `tables`).
    #[arg(long)]
    pub scored_out: Option<PathBuf>,
    #[command(flatten)]
    pub analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    pub scored: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of participants; each contributes one AI and one NO_AI trial.
    #[arg(long = "n", default_value_t = 40)]
    pub participants: usize,
    /// Fraction of AI response tokens copied from the suggestion.
    #[arg(long, default_value_t = 0.3)]
    pub adoption: f64,
    #[arg(long, default_value_t = 0.0)]
    pub no_ai_adoption: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Added to the Effort rating of AI trials.
    #[arg(long, default_value_t = 0.0)]
    pub effort_shift: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "ADOPTSCOPE_LISTEN", default_value = "127.0.0.1:8080")]
    pub listen: SocketAddr,
    #[arg(long, env = "ADOPTSCOPE_DATA_DIR", default_value = "sessions")]
    pub data_dir: PathBuf,
    #[arg(long, env = "ADOPTSCOPE_DEBOUNCE_MS", default_value_t = 500)]
    pub debounce_ms: u64,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("{0}")]
    Provider(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Harness(HarnessError::Stats(_)) => EXIT_DEGENERATE,
            CliError::Harness(HarnessError::Io { .. } | HarnessError::Output(_)) => 1,
            CliError::Harness(_) | CliError::Usage(_) => EXIT_SCHEMA,
            CliError::Provider(_) => EXIT_PROVIDER,
            CliError::Other(_) => 1,
        }
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Other(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Other(e.to_string())),
    }
}

fn score(args: ScoreArgs) -> Result<(), CliError> {
    let format = args.format.map(Into::into).unwrap_or_else(|| CorpusFormat::from_path(&args.corpus));
    let records = harness::ingest(&args.corpus, format)?;
    let provider: Box<dyn EmbeddingProvider> = match args.provider {
        ProviderArg::Fallback => match args.embedding.remote() {
            Some(remote) => Box::new(FallbackChain::new(Box::new(remote))),
            None => Box::new(HashEmbedder),
        },
        ProviderArg::Remote => {
            let remote = args.embedding.remote().ok_or_else(|| {
                CliError::Usage("--provider remote needs --embedding-endpoint or ADOPTSCOPE_EMBEDDING_ENDPOINT".into())
            })?;
            Box::new(remote)
        }
    };
    let run = harness::score_corpus(&records, &Analyzer::shared(), provider.as_ref());
    if let Some(path) = &args.scored_out {
        let file = File::create(path).map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display())))?;
        harness::write_scored_jsonl(&run.scored, std::io::BufWriter::new(file))?;
    }
    let provider_error = (!run.failures.is_empty()).then(|| {
        CliError::Provider(format!(
            "{} of {} trials could not be scored",
            run.failures.len(),
            records.len()
        ))
    });
    let report = match harness::analyze(&run.scored, run.failures.len(), args.analysis.options()) {
        Ok(report) => report,
        Err(e) => {
            return Err(match provider_error {
                Some(p) => {
                    eprintln!("error: {e}");
                    p
                }
                None => e.into(),
            })
        }
    };
    let text = harness::render_report(&report, args.analysis.report_format.into());
    write_output(args.analysis.out.as_deref(), text.as_bytes())?;
    if let Some(p) = provider_error {
        return Err(p);
    }
    Ok(())
}

fn tables(args: TablesArgs) -> Result<(), CliError> {
    let file = File::open(&args.scored).map_err(|e| HarnessError::Io {
        path: args.scored.clone(),
        source: e,
    })?;
    let scored = harness::read_scored_jsonl(BufReader::new(file))?;
    let report = harness::analyze(&scored, 0, args.analysis.options())?;
    let text = harness::render_report(&report, args.analysis.report_format.into());
    write_output(args.analysis.out.as_deref(), text.as_bytes())
}

fn synth(args: SynthArgs) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.adoption) || !(0.0..=1.0).contains(&args.no_ai_adoption) {
        return Err(CliError::Usage("adoption rates must lie in [0, 1]".into()));
    }
    let config = SynthConfig {
        participants: args.participants,
        adoption: args.adoption,
        no_ai_adoption: args.no_ai_adoption,
        seed: args.seed,
        effort_shift: args.effort_shift,
        ..SynthConfig::default()
    };
    let records = harness::synth_corpus(&config);
    let mut buf = Vec::new();
    match args.format {
        FormatArg::Csv => harness::write_csv(&records, &mut buf)?,
        FormatArg::Jsonl => harness::write_jsonl(&records, &mut buf)?,
    }
    write_output(args.out.as_deref(), &buf)
}

fn selftest() -> Result<(), CliError> {
    let checks = crate::selftest::run();
    let mut failed = 0;
    for c in &checks {
        println!("{} {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(CliError::Other(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<(), CliError> {
    // The service reports outages as partial points rather than mixing in
    // fallback vectors, so the remote provider is used without a chain.
    let provider: Arc<dyn EmbeddingProvider> = match args.embedding.remote() {
        Some(remote) => Arc::new(CachedProvider::new(remote, std::num::NonZeroUsize::new(1024).expect("nonzero"))),
        None => Arc::new(HashEmbedder),
    };
    let config = StoreConfig::new(&args.data_dir).with_debounce(Duration::from_millis(args.debounce_ms));
    let store = SessionStore::open(config, Analyzer::shared(), provider).map_err(|e| CliError::Other(e.to_string()))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Other(e.to_string()))?;
    runtime
        .block_on(async {
            let listener = tokio::net::TcpListener::bind(args.listen).await?;
            println!("listening on {}", listener.local_addr()?);
            http::serve_on(Arc::new(store), listener, async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
        })
        .map_err(|e| CliError::Other(format!("server error: {e}")))
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Score(a) => score(a),
        Command::Tables(a) => tables(a),
        Command::Synth(a) => synth(a),
        Command::Selftest => selftest(),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn init_tracing() {
    let filter = tracing_subscriber::EnvFilter::try_from_env("ADOPTSCOPE_LOG")
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("warn"));
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .try_init();
}
