//! `wpvol`: exact computation of psi-class correlators, psi-kappa
//! brackets, Weil-Petersson volume polynomials, large-genus diagnostics,
//! and the batch verification suites, from the command line.
//!
//! Exact values print in canonical `Q[pi^2]` or rational form; decimals
//! appear only on an explicit `--digits`. Exit codes: 0 on success, 1 when
//! a verification suite or cross-check fails, 2 on malformed input or
//! configuration. Output is a pure function of the arguments and resolved
//! settings: the cache only warms memo tables and the worker-thread count
//! only affects timing.

mod config;

use clap::{Parser, Subcommand, ValueEnum};
use config::{
    EnvInputs, FlagInputs, PreferredFormat, Settings, ThreadsArg, MAX_PRECISION_DIGITS,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use wpvol_arith::{pi_eval, PiValue, Rational};
use wpvol_asymptotics::{p_poly, q_table, ratio_fn};
use wpvol_correlator::{cache, Engine, TauVector};
use wpvol_verifier::{
    with_thread_pool, CheckReport, Verifier, DEFAULT_IDENTITY_COMPLEXITY,
    DEFAULT_INEQUALITY_COMPLEXITY, DEFAULT_SEQUENCE_LENGTH, DEFAULT_TREND_BOUNDARIES,
    DEFAULT_TREND_GENUS,
};
use wpvol_volume::{BracketError, VolumeEngine};

/// Exact Weil-Petersson volumes, intersection numbers, large-genus
/// diagnostics, and verification suites.
#[derive(Parser)]
#[command(name = "wpvol", version)]
struct Cli {
    /// TOML configuration file
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Correlator cache file, loaded before and saved after computations
    #[arg(long, global = true, value_name = "FILE")]
    cache: Option<PathBuf>,

    /// Verification worker threads: a positive count or `auto`
    #[arg(long, global = true, value_name = "N", value_parser = config::parse_threads)]
    threads: Option<ThreadsArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact psi-class correlator <tau_{d_1} ... tau_{d_n}>_g
    Correlator {
        /// Genus
        #[arg(long)]
        g: u32,
        /// Comma-separated psi exponents d_1,...,d_n
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u32>>,
    },
    /// Rescaled psi-kappa_1 bracket [tau_{d_1} ... tau_{d_n}]_{g,n}
    Bracket {
        /// Genus
        #[arg(long)]
        g: u32,
        /// Comma-separated indices d_1,...,d_n
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u32>>,
        /// Boundary count; missing trailing indices are zero
        #[arg(long)]
        n: Option<usize>,
        /// Evaluation route: the correlator definition, the boundary
        /// recursion, or both with a cross-check
        #[arg(long, value_enum, default_value = "def")]
        route: Route,
    },
    /// Weil-Petersson volume polynomial, exported one coefficient per line
    VolumePoly {
        /// Genus
        #[arg(long)]
        g: u32,
        /// Boundary count
        #[arg(long)]
        n: usize,
        /// Write the export here instead of standard output
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Volume polynomial value at given boundary lengths
    Eval {
        /// Genus
        #[arg(long)]
        g: u32,
        /// Boundary count
        #[arg(long)]
        n: usize,
        /// Comma-separated boundary lengths, integers or fractions `p/q`
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        lengths: Option<Vec<Rational>>,
        /// Round to this many decimal digits (half-up); a bare `--digits`
        /// uses the configured budget
        #[arg(long, num_args = 0..=1)]
        digits: Option<Option<u32>>,
    },
    /// Convergence diagnostic table: columns k, g, Q
    QTable {
        /// Largest k row block
        #[arg(long)]
        k_max: u32,
        /// Comma-separated genus column list
        #[arg(long, value_delimiter = ',', required = true)]
        g_list: Vec<u32>,
        /// Column separator family
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
    },
    /// Closed-form rational function behind the k-step coefficient ratio
    RatioFn {
        /// Ratio step, at least 1
        #[arg(long)]
        k: u32,
    },
    /// Integer polynomial P_d with P_d(g) = (6g)^{|d|} C(d;g)
    PPoly {
        /// Comma-separated indices of d
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u32>>,
    },
    /// Run verification suites; exit 1 if any check fails
    Verify {
        /// Suite to run
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Complexity bound 2g-2+n for inequality and identity suites
        #[arg(long)]
        max_complexity: Option<u32>,
        /// Largest coefficient index for the a-sequence suite
        #[arg(long)]
        l_max: Option<u32>,
        /// Largest genus for the ratio-trends suite
        #[arg(long)]
        g_max: Option<u32>,
        /// Largest boundary count for the ratio-trends suite
        #[arg(long)]
        n_max: Option<usize>,
        /// Report rendering
        #[arg(long, value_enum)]
        format: Option<ReportFormat>,
    },
    /// Inspect, clear, or canonically export the correlator cache file
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Def,
    Rec,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Tsv,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Monotonicity,
    Domination,
    Tau1Bound,
    Sandwich,
    Identities,
    Kdv,
    ASequence,
    RatioTrends,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum CacheAction {
    Stats,
    Clear,
    Export,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    use std::str::FromStr;
    Rational::from_str(s.trim()).map_err(|e| format!("bad rational {s:?}: {e}"))
}

fn main() -> ExitCode {
    ExitCode::from(run())
}

fn run() -> u8 {
    let cli = Cli::parse();
    let env = EnvInputs::capture();
    let file_text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => return fail(&format!("cannot read config file {}: {e}", path.display())),
        },
        None => None,
    };
    let flags = FlagInputs { cache: cli.cache.clone(), threads: cli.threads };
    match config::resolve(&flags, &env, file_text.as_deref()) {
        Ok(settings) => dispatch(&cli.command, &settings),
        Err(e) => fail(&e),
    }
}

fn fail(message: &str) -> u8 {
    eprintln!("error: {message}");
    2
}

fn dispatch(command: &Command, settings: &Settings) -> u8 {
    match command {
        Command::Correlator { g, d } => with_engine(settings, |corr| {
            cmd_correlator(corr, *g, d.as_deref().unwrap_or(&[]))
        }),
        Command::Bracket { g, d, n, route } => with_engine(settings, |corr| {
            let engine = VolumeEngine::with_correlator(corr.clone());
            cmd_bracket(&engine, *g, d.as_deref().unwrap_or(&[]), *n, *route)
        }),
        Command::VolumePoly { g, n, out } => with_engine(settings, |corr| {
            let engine = VolumeEngine::with_correlator(corr.clone());
            cmd_volume_poly(&engine, *g, *n, out.as_deref())
        }),
        Command::Eval { g, n, lengths, digits } => with_engine(settings, |corr| {
            let engine = VolumeEngine::with_correlator(corr.clone());
            cmd_eval(&engine, *g, *n, lengths.as_deref().unwrap_or(&[]), *digits, settings)
        }),
        Command::QTable { k_max, g_list, format } => {
            cmd_q_table(*k_max, g_list, *format, settings)
        }
        Command::RatioFn { k } => cmd_ratio_fn(*k),
        Command::PPoly { d } => cmd_p_poly(d.as_deref().unwrap_or(&[])),
        Command::Verify { suite, max_complexity, l_max, g_max, n_max, format } => {
            with_engine(settings, |corr| {
                cmd_verify(
                    corr,
                    settings,
                    *suite,
                    *max_complexity,
                    *l_max,
                    *g_max,
                    *n_max,
                    *format,
                )
            })
        }
        Command::Cache { action } => cmd_cache(settings, *action),
    }
}

/// Runs `f` against a correlator engine warmed from the configured cache
/// file, writing the (grown) memo table back afterwards unless the command
/// rejected its input.
fn with_engine(settings: &Settings, f: impl FnOnce(&Arc<Engine>) -> u8) -> u8 {
    let corr = Arc::new(Engine::new());
    if let Some(path) = &settings.cache_path {
        if path.exists() {
            if let Err(e) = cache::load(&corr, path) {
                return fail(&format!("cache {}: {e}", path.display()));
            }
        }
    }
    let code = f(&corr);
    if code != 2 {
        if let Some(path) = &settings.cache_path {
            if let Err(e) = cache::save(&corr, path) {
                return fail(&format!("cache {}: {e}", path.display()));
            }
        }
    }
    code
}

fn cmd_correlator(corr: &Arc<Engine>, g: u32, d: &[u32]) -> u8 {
    let n = d.len();
    let value = corr.correlator(g, d);
    if 2 * i64::from(g) - 2 + n as i64 <= 0 {
        eprintln!("note: unstable surface type (g={g}, n={n}); the correlator is 0 by convention");
    } else {
        let dim = 3 * i64::from(g) - 3 + n as i64;
        let total: u64 = d.iter().map(|&x| u64::from(x)).sum();
        if i128::from(total) != i128::from(dim) {
            eprintln!(
                "note: dimension mismatch: indices sum to {total} but 3g-3+n = {dim}; the correlator is 0"
            );
        }
    }
    println!("{value}");
    0
}

fn cmd_bracket(engine: &VolumeEngine, g: u32, d: &[u32], pad: Option<usize>, route: Route) -> u8 {
    let mut indices = d.to_vec();
    if let Some(n) = pad {
        if n < indices.len() {
            return fail(&format!(
                "--n {n} is smaller than the {} supplied indices",
                indices.len()
            ));
        }
        indices.resize(n, 0);
    }
    match route {
        Route::Def => print_bracket(engine.bracket(g, &indices)),
        Route::Rec => print_bracket(engine.bracket_by_recursion(g, &indices)),
        Route::Both => {
            let by_def = match engine.bracket(g, &indices) {
                Ok(v) => v,
                Err(e) => return fail(&e.to_string()),
            };
            let by_rec = match engine.bracket_by_recursion(g, &indices) {
                Ok(v) => v,
                Err(e) => return fail(&e.to_string()),
            };
            println!("{by_def}");
            if by_def == by_rec {
                println!("match");
                0
            } else {
                println!("MISMATCH: recursion route yields {by_rec}");
                1
            }
        }
    }
}

fn print_bracket(result: Result<PiValue, BracketError>) -> u8 {
    match result {
        Ok(v) => {
            println!("{v}");
            0
        }
        Err(e) => fail(&e.to_string()),
    }
}

fn cmd_volume_poly(engine: &VolumeEngine, g: u32, n: usize, out: Option<&Path>) -> u8 {
    let poly = match engine.volume_polynomial(g, n) {
        Ok(p) => p,
        Err(e) => return fail(&e.to_string()),
    };
    let text = poly.export();
    match out {
        None => {
            print!("{text}");
            0
        }
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => 0,
            Err(e) => fail(&format!("cannot write {}: {e}", path.display())),
        },
    }
}

fn cmd_eval(
    engine: &VolumeEngine,
    g: u32,
    n: usize,
    lengths: &[Rational],
    digits: Option<Option<u32>>,
    settings: &Settings,
) -> u8 {
    if lengths.len() != n {
        return fail(&format!("expected {n} boundary lengths, found {}", lengths.len()));
    }
    let poly = match engine.volume_polynomial(g, n) {
        Ok(p) => p,
        Err(e) => return fail(&e.to_string()),
    };
    let value = match poly.evaluate(lengths) {
        Ok(v) => v,
        Err(e) => return fail(&e.to_string()),
    };
    match digits {
        None => {
            println!("{value}");
            0
        }
        Some(explicit) => {
            let count = explicit.unwrap_or(settings.precision_digits);
            if count == 0 || count > MAX_PRECISION_DIGITS {
                return fail(&format!(
                    "--digits must lie in 1..={MAX_PRECISION_DIGITS}, found {count}"
                ));
            }
            match pi_eval(&value, count) {
                Ok(text) => {
                    println!("{text}");
                    0
                }
                Err(e) => fail(&e.to_string()),
            }
        }
    }
}

fn cmd_q_table(
    k_max: u32,
    g_list: &[u32],
    format: Option<TableFormat>,
    settings: &Settings,
) -> u8 {
    let format = format.unwrap_or(match settings.output_format {
        PreferredFormat::Csv => TableFormat::Csv,
        _ => TableFormat::Tsv,
    });
    match q_table(k_max, g_list) {
        Ok(text) => {
            match format {
                TableFormat::Tsv => print!("{text}"),
                TableFormat::Csv => print!("{}", text.replace('\t', ",")),
            }
            0
        }
        Err(e) => fail(&e.to_string()),
    }
}

fn cmd_ratio_fn(k: u32) -> u8 {
    if k < 1 {
        return fail("--k must be at least 1; the k = 0 ratio is identically one");
    }
    println!("{}", ratio_fn(k).func);
    0
}

fn cmd_p_poly(d: &[u32]) -> u8 {
    let p = p_poly(&TauVector::new(d.to_vec()));
    println!("{}", p.poly);
    0
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    corr: &Arc<Engine>,
    settings: &Settings,
    suite: SuiteArg,
    max_complexity: Option<u32>,
    l_max: Option<u32>,
    g_max: Option<u32>,
    n_max: Option<usize>,
    format: Option<ReportFormat>,
) -> u8 {
    let format = format.unwrap_or(match settings.output_format {
        PreferredFormat::Json => ReportFormat::Json,
        _ => ReportFormat::Text,
    });
    let verifier = Verifier::with_engine(Arc::new(VolumeEngine::with_correlator(corr.clone())));
    let reports = with_thread_pool(settings.threads, || {
        run_suites(&verifier, suite, max_complexity, l_max, g_max, n_max)
    });
    match format {
        ReportFormat::Text => {
            for report in &reports {
                print!("{}", report.render_text());
            }
        }
        ReportFormat::Json => {
            if reports.len() == 1 {
                println!("{}", reports[0].render_json());
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&reports).expect("reports serialize")
                );
            }
        }
    }
    if reports.iter().all(CheckReport::passes) {
        0
    } else {
        1
    }
}

fn run_suites(
    verifier: &Verifier,
    suite: SuiteArg,
    max_complexity: Option<u32>,
    l_max: Option<u32>,
    g_max: Option<u32>,
    n_max: Option<usize>,
) -> Vec<CheckReport> {
    let inequality = max_complexity.unwrap_or(DEFAULT_INEQUALITY_COMPLEXITY);
    let identity = max_complexity.unwrap_or(DEFAULT_IDENTITY_COMPLEXITY);
    let length = l_max.unwrap_or(DEFAULT_SEQUENCE_LENGTH);
    let genus = g_max.unwrap_or(DEFAULT_TREND_GENUS);
    let boundaries = n_max.unwrap_or(DEFAULT_TREND_BOUNDARIES);
    match suite {
        SuiteArg::Monotonicity => vec![verifier.suite_monotonicity(inequality)],
        SuiteArg::Domination => vec![verifier.suite_domination(inequality)],
        SuiteArg::Tau1Bound => vec![verifier.suite_tau1_bound(inequality)],
        SuiteArg::Sandwich => vec![verifier.suite_sandwich(inequality)],
        SuiteArg::Identities => vec![verifier.suite_identities(identity)],
        SuiteArg::Kdv => vec![verifier.suite_kdv(identity)],
        SuiteArg::ASequence => vec![verifier.suite_a_sequence(length)],
        SuiteArg::RatioTrends => vec![verifier.suite_ratio_trends(genus, boundaries)],
        SuiteArg::All => vec![
            verifier.suite_monotonicity(inequality),
            verifier.suite_domination(inequality),
            verifier.suite_tau1_bound(inequality),
            verifier.suite_sandwich(inequality),
            verifier.suite_identities(identity),
            verifier.suite_kdv(identity),
            verifier.suite_a_sequence(length),
            verifier.suite_ratio_trends(genus, boundaries),
        ],
    }
}

fn cmd_cache(settings: &Settings, action: CacheAction) -> u8 {
    let Some(path) = &settings.cache_path else {
        return fail(
            "no cache path configured; pass --cache, set WPVOL_CACHE, or set cache_path in the config file",
        );
    };
    match action {
        CacheAction::Stats => {
            if path.exists() {
                let engine = Engine::new();
                match cache::load(&engine, path) {
                    Ok(read) => {
                        println!("file: {}", path.display());
                        println!("present: yes");
                        println!("entries: {read}");
                        0
                    }
                    Err(e) => fail(&format!("cache {}: {e}", path.display())),
                }
            } else {
                println!("file: {}", path.display());
                println!("present: no");
                println!("entries: 0");
                0
            }
        }
        CacheAction::Clear => {
            if path.exists() {
                match std::fs::remove_file(path) {
                    Ok(()) => {
                        println!("cleared: {}", path.display());
                        0
                    }
                    Err(e) => fail(&format!("cannot remove {}: {e}", path.display())),
                }
            } else {
                println!("nothing to clear: {}", path.display());
                0
            }
        }
        CacheAction::Export => {
            if !path.exists() {
                return fail(&format!("cache file {} does not exist", path.display()));
            }
            let engine = Engine::new();
            if let Err(e) = cache::load(&engine, path) {
                return fail(&format!("cache {}: {e}", path.display()));
            }
            let tmp = std::env::temp_dir()
                .join(format!("wpvol-cache-export-{}.tmp", std::process::id()));
            let result = cache::save(&engine, &tmp)
                .map_err(|e| e.to_string())
                .and_then(|()| std::fs::read_to_string(&tmp).map_err(|e| e.to_string()));
            let _ = std::fs::remove_file(&tmp);
            match result {
                Ok(text) => {
                    print!("{text}");
                    0
                }
                Err(e) => fail(&format!("cache export: {e}")),
            }
        }
    }
}
