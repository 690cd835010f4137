use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lndlab_cli::pipeline::{Pipeline, Stage};
use lndlab_cli::report::AnalysisReport;
use lndlab_cli::specfile::{parse_spec, DerivationSpec};
use lndlab_core::Limits;

/// Exact analysis of additive group actions: locally nilpotent derivations,
/// contraction chains, reduction ladders and quotient-fiber geometry.
#[derive(Parser)]
#[command(name = "lndlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every sampled choice (hyperplanes, generic points).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Override the intermediate total-degree guardrail.
    #[arg(long, global = true)]
    max_degree: Option<u32>,

    /// Override the iteration bound for nilpotency checking.
    #[arg(long, global = true)]
    nilpotency_bound: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the spec and run the derivation-level checks.
    Check { spec: PathBuf },
    /// Build the contraction chains (one per plinth prime).
    Chain {
        spec: PathBuf,
        /// Restrict the report to one prime (kernel tag name).
        #[arg(long)]
        prime: Option<String>,
    },
    /// Compute the reduction ladder of each chain.
    Ladder { spec: PathBuf },
    /// Analyze the declared fiber points and sample generic fibers.
    Fiber { spec: PathBuf },
    /// Full pipeline ending in the bundle-triviality verdict.
    Verdict { spec: PathBuf },
    /// Run every spec in the corpus directory and diff against the golden
    /// reports.
    Corpus {
        /// Corpus directory (defaults to the installed corpus).
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Rewrite the golden files from the current outputs.
        #[arg(long)]
        bless: bool,
    },
}

fn limits_from(cli: &Cli) -> Limits {
    let mut limits = Limits::default();
    if let Some(d) = cli.max_degree {
        limits = limits.with_max_degree(d);
    }
    limits
}

fn load_spec(path: &Path, limits: &Limits) -> Result<DerivationSpec, ExitCode> {
    match parse_spec(path, limits) {
        Ok(spec) => Ok(spec),
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            Err(ExitCode::from(3))
        }
    }
}

fn emit(report: &AnalysisReport, json: bool) -> ExitCode {
    if json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    match report.exit_code() {
        0 => ExitCode::SUCCESS,
        n => ExitCode::from(n as u8),
    }
}

fn run_stages(cli: &Cli, spec_path: &Path, stages: &[Stage], prime: Option<&str>) -> ExitCode {
    let limits = limits_from(cli);
    let spec = match load_spec(spec_path, &limits) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let pipeline = Pipeline {
        spec: &spec,
        seed: cli.seed,
        limits,
        nilpotency_bound: cli.nilpotency_bound,
    };
    let mut report = pipeline.run(stages);
    if let Some(tag) = prime {
        if let Some(chains) = &mut report.chain {
            chains.retain(|t, _| t == tag);
        }
        if let Some(ladders) = &mut report.ladder {
            ladders.retain(|t, _| t == tag);
        }
    }
    emit(&report, cli.json)
}

fn default_corpus_dir() -> PathBuf {
    let candidates = [
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus"),
        PathBuf::from("corpus"),
    ];
    for c in &candidates {
        if c.is_dir() {
            return c.clone();
        }
    }
    PathBuf::from("corpus")
}

fn run_corpus(cli: &Cli, dir: Option<PathBuf>, bless: bool) -> ExitCode {
    let dir = dir.unwrap_or_else(default_corpus_dir);
    let golden_dir = dir.join("golden");
    let mut entries: Vec<PathBuf> = match std::fs::read_dir(&dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "lnd").unwrap_or(false))
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read corpus directory {}: {e}", dir.display());
            return ExitCode::from(3);
        }
    };
    entries.sort();
    if entries.is_empty() {
        eprintln!("error: no .lnd specs in {}", dir.display());
        return ExitCode::from(3);
    }
    let limits = limits_from(cli);
    let mut worst = 0i32;
    let mut drift = false;
    for path in &entries {
        let spec = match parse_spec(path, &limits) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(3);
            }
        };
        let pipeline = Pipeline {
            spec: &spec,
            seed: cli.seed,
            limits: limits.clone(),
            nilpotency_bound: cli.nilpotency_bound,
        };
        let report = pipeline.run(&[Stage::Verdict]);
        worst = worst.max(report.exit_code());
        let json = report.to_json();
        let golden_path = golden_dir.join(format!(
            "{}.json",
            path.file_stem().unwrap().to_string_lossy()
        ));
        if bless {
            if let Err(e) = std::fs::create_dir_all(&golden_dir) {
                eprintln!("error: cannot create {}: {e}", golden_dir.display());
                return ExitCode::from(3);
            }
            if let Err(e) = std::fs::write(&golden_path, &json) {
                eprintln!("error: cannot write {}: {e}", golden_path.display());
                return ExitCode::from(3);
            }
            println!("blessed {}", golden_path.display());
            continue;
        }
        match std::fs::read_to_string(&golden_path) {
            Ok(expected) if expected == json => {
                println!("ok      {} (exit {})", path.display(), report.exit_code());
            }
            Ok(_) => {
                println!("DRIFT   {}", path.display());
                drift = true;
            }
            Err(_) => {
                println!("MISSING {}", golden_path.display());
                drift = true;
            }
        }
    }
    if drift {
        return ExitCode::from(1);
    }
    match worst {
        0 => ExitCode::SUCCESS,
        n => ExitCode::from(n as u8),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Check { spec } => run_stages(&cli, &spec.clone(), &[Stage::Check], None),
        Command::Chain { spec, prime } => {
            run_stages(&cli, &spec.clone(), &[Stage::Chain], prime.as_deref())
        }
        Command::Ladder { spec } => run_stages(&cli, &spec.clone(), &[Stage::Ladder], None),
        Command::Fiber { spec } => run_stages(&cli, &spec.clone(), &[Stage::Fiber], None),
        Command::Verdict { spec } => run_stages(&cli, &spec.clone(), &[Stage::Verdict], None),
        Command::Corpus { dir, bless } => run_corpus(&cli, dir.clone(), *bless),
    }
}
