use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sensconn::bench::{self, BenchConfig};
use sensconn::format::{load_graph, parse_queries, parse_updates};
use sensconn::incremental::InjectedFault;
use sensconn::run::{execute, is_illegal_update, Algorithm};
use sensconn::verify::{self, VerifyConfig, VerifyMode};
use sensconn::{OracleKind, UpdateBatch};

const EXIT_INTERNAL: u8 = 1;
const EXIT_ILLEGAL_UPDATE: u8 = 2;
const EXIT_ILLEGAL_QUERY: u8 = 3;

#[derive(Parser)]
#[command(name = "sensconn", version, about = "Subgraph connectivity with sensitivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Inc,
    Fd,
    Bf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Rebuild,
    Bruteforce,
}

impl From<OracleArg> for OracleKind {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Rebuild => OracleKind::Rebuild,
            OracleArg::Bruteforce => OracleKind::BruteForce,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    None,
    Or,
    Direct,
}

#[derive(Subcommand)]
enum Command {
    /// Preprocess a graph, apply one update batch and answer queries.
    Run {
        #[arg(long)]
        graph: PathBuf,
        /// Update file ("+v" / "-v" per line); omitted means an empty batch.
        #[arg(long)]
        update: Option<PathBuf>,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, value_enum, default_value = "fd")]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "rebuild")]
        oracle: OracleArg,
        /// Write the key=value report here instead of stderr.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Check every algorithm against brute force.
    Verify {
        #[arg(long, value_enum, default_value = "random")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Defaults to 5 for exhaustive and 40 for random mode.
        #[arg(long)]
        n_max: Option<usize>,
        /// Defaults to 3 for exhaustive and 6 for random mode.
        #[arg(long)]
        batch_max: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.6")]
        edge_probs: Vec<f64>,
        /// Oracle factories to check; defaults to both in exhaustive mode
        /// and rebuild in random mode.
        #[arg(long, value_enum, value_delimiter = ',')]
        oracle: Vec<OracleArg>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "none", hide = true)]
        inject_fault: FaultArg,
    },
    /// Report update and query counters for several batch sizes.
    Bench {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        batch_sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 100)]
        queries: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Defaults to every factory.
        #[arg(long, value_enum, value_delimiter = ',')]
        oracle: Vec<OracleArg>,
        /// Write the table as tab-separated values here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn oracles_or(list: Vec<OracleArg>, default: &[OracleKind]) -> Vec<OracleKind> {
    if list.is_empty() {
        default.to_vec()
    } else {
        list.into_iter().map(OracleKind::from).collect()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INTERNAL)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, (u8, String)> {
    let internal = |m: String| (EXIT_INTERNAL, m);
    match command {
        Command::Run {
            graph,
            update,
            query,
            algo,
            oracle,
            report,
            timings,
        } => {
            let (g, p) = load_graph(&read(&graph).map_err(internal)?)
                .map_err(|e| internal(format!("{}: {e}", graph.display())))?;
            let batch = match update {
                Some(path) => parse_updates(&read(&path).map_err(internal)?).map_err(|e| {
                    let code = if is_illegal_update(&e) { EXIT_ILLEGAL_UPDATE } else { EXIT_INTERNAL };
                    (code, format!("{}: {e}", path.display()))
                })?,
                None => UpdateBatch::default(),
            };
            let queries = parse_queries(&read(&query).map_err(internal)?)
                .map_err(|e| internal(format!("{}: {e}", query.display())))?;
            let algorithm = match algo {
                AlgoArg::Inc => Algorithm::Incremental,
                AlgoArg::Fd => Algorithm::FullyDynamic,
                AlgoArg::Bf => Algorithm::BruteForce,
            };
            let r = execute(&g, &p, &batch, &queries, algorithm, oracle.into(), timings).map_err(|e| {
                let code = if is_illegal_update(&e) { EXIT_ILLEGAL_UPDATE } else { EXIT_INTERNAL };
                (code, e.to_string())
            })?;
            print!("{}", r.answers());
            match report {
                Some(path) => write(&path, &r.to_key_values()).map_err(internal)?,
                None => eprint!("{}", r.to_key_values()),
            }
            if r.query_errors() > 0 {
                eprintln!("error: {} illegal query endpoint(s)", r.query_errors());
                return Ok(ExitCode::from(EXIT_ILLEGAL_QUERY));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            mode,
            trials,
            n_max,
            batch_max,
            seed,
            edge_probs,
            oracle,
            report,
            inject_fault,
        } => {
            let base = match mode {
                ModeArg::Exhaustive => VerifyConfig::exhaustive(n_max.unwrap_or(5)),
                ModeArg::Random => VerifyConfig {
                    mode: VerifyMode::Random,
                    n_max: n_max.unwrap_or(40),
                    ..VerifyConfig::default()
                },
            };
            let cfg = VerifyConfig {
                trials,
                seed,
                edge_probs,
                batch_max: batch_max.unwrap_or(base.batch_max),
                oracles: oracles_or(oracle, &base.oracles),
                fault: match inject_fault {
                    FaultArg::None => InjectedFault::None,
                    FaultArg::Or => InjectedFault::SkipComponentOr,
                    FaultArg::Direct => InjectedFault::SkipDirectOffEdges,
                },
                ..base
            };
            let summary = verify::run(&cfg).map_err(|e| internal(e.to_string()))?;
            print!("{summary}");
            if let Some(path) = report {
                write(&path, &summary.to_string()).map_err(internal)?;
            }
            Ok(if summary.passed() {
                println!("PASS");
                ExitCode::SUCCESS
            } else {
                println!("FAIL");
                ExitCode::from(EXIT_INTERNAL)
            })
        }
        Command::Bench {
            graph,
            batch_sizes,
            repeats,
            queries,
            seed,
            oracle,
            report,
        } => {
            let (g, p) = load_graph(&read(&graph).map_err(internal)?)
                .map_err(|e| internal(format!("{}: {e}", graph.display())))?;
            let cfg = BenchConfig {
                batch_sizes,
                repeats,
                queries_per_repeat: queries,
                seed,
                oracles: oracles_or(oracle, &OracleKind::ALL),
            };
            let out = bench::run(&g, &p, &cfg);
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", bench::format_table(&out.rows));
            if let Some(path) = report {
                write(&path, &bench::to_tsv(&out.rows)).map_err(internal)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
