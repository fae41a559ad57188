use clap::Parser;
use heightbound::harness::{constants_table, emit, emit_to_path, ingest, parse_checks, run_corpus, Config, Format};
use std::path::PathBuf;
use std::process::ExitCode;

/// Certified Faltings heights, regulators and height-conductor checks for
/// a corpus of elliptic curves over the rationals.
#[derive(Parser, Debug)]
#[command(name = "heightbound", version)]
struct Cli {
    /// Corpus file, one curve per line (jsonl) or row (csv).
    #[arg(long, required_unless_present = "constants")]
    corpus: Option<PathBuf>,
    /// Report file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "jsonl")]
    format: Format,
    /// Format of the corpus file, defaulting to --format.
    #[arg(long)]
    corpus_format: Option<Format>,
    /// Largest admissible radius of reported values.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 4096)]
    max_bits: u32,
    /// Comma separated subset of height_conductor, matrix_lemma,
    /// rank_bound, lattice, minkowski, hadamard, ls_scan.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Half-width of the Lang-Silverman scan box.
    #[arg(long, default_value_t = 10)]
    ls_box: u32,
    #[arg(long, default_value_t = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))]
    jobs: usize,
    /// Print the explicit constants for dimension G and exit, e.g. g=2.
    #[arg(long, value_parser = parse_dimension)]
    constants: Option<u32>,
}

fn parse_dimension(s: &str) -> Result<u32, String> {
    let v = s.strip_prefix("g=").unwrap_or(s);
    match v.parse::<u32>() {
        Ok(g) if g >= 1 => Ok(g),
        _ => Err(format!("expected g=G with G a positive integer, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(g) = cli.constants {
        for (name, v) in constants_table(g) {
            println!("{name:<14} {v}");
        }
        return ExitCode::SUCCESS;
    }
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        eprintln!("error: --tol must lie in (0, 1)");
        return ExitCode::from(2);
    }
    let checks = match parse_checks(&cli.checks) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: --checks: {e}");
            return ExitCode::from(2);
        }
    };
    let corpus = cli.corpus.expect("required by clap");
    let entries = match ingest(&corpus, cli.corpus_format.unwrap_or(cli.format)) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {}: {e}", corpus.display());
            return ExitCode::FAILURE;
        }
    };
    let cfg = Config {
        tol: cli.tol,
        max_bits: cli.max_bits,
        checks,
        ls_box: cli.ls_box,
        ..Config::default()
    };
    let result = run_corpus(&entries, &cfg, cli.jobs).and_then(|reports| match &cli.out {
        Some(path) => emit_to_path(&reports, path, cli.format),
        None => emit(&reports, &mut std::io::stdout().lock(), cli.format),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
