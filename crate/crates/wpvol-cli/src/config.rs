//! Layered runtime settings.
//!
//! Precedence, highest first: command-line flags, environment variables
//! (`WPVOL_CACHE`, `WPVOL_THREADS`, `WPVOL_DIGITS`), an optional TOML
//! configuration file, built-in defaults. The resolved [`Settings`] value
//! never changes command output semantics beyond what each field controls:
//! the cache path only warms memo tables, the thread count only sizes the
//! verification worker pool, and the digit budget only applies where a
//! command explicitly asks for decimals.

use serde::Deserialize;
use std::path::PathBuf;

/// Digit budget used by a bare `--digits` when nothing else configures one.
pub const DEFAULT_PRECISION_DIGITS: u32 = 100;

/// Hard ceiling on the decimal digit budget.
pub const MAX_PRECISION_DIGITS: u32 = 1000;

/// Output format preference for commands that support more than one.
///
/// A command consults this only when its own `--format` flag is absent,
/// and falls back to its natural default when the preference names a
/// format the command cannot produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreferredFormat {
    Text,
    Json,
    Csv,
    Tsv,
}

impl PreferredFormat {
    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "tsv" => Ok(Self::Tsv),
            other => Err(format!(
                "unknown output format {other:?} (expected text, json, csv, or tsv)"
            )),
        }
    }
}

/// A `--threads` or `WPVOL_THREADS` value: explicit count or automatic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreadsArg {
    Auto,
    Count(usize),
}

/// Parses a worker-count argument: a positive integer or the word `auto`.
pub fn parse_threads(s: &str) -> Result<ThreadsArg, String> {
    if s == "auto" {
        return Ok(ThreadsArg::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(ThreadsArg::Count(n)),
        _ => Err(format!("expected a positive integer or `auto`, found {s:?}")),
    }
}

/// TOML file schema; unknown keys are rejected.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    cache_path: Option<PathBuf>,
    precision_digits: Option<u32>,
    threads: Option<TomlThreads>,
    output_format: Option<String>,
}

/// The `threads` key accepts an integer or the string `"auto"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum TomlThreads {
    Count(i64),
    Word(String),
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    /// Correlator memo persistence; `None` disables caching entirely.
    pub cache_path: Option<PathBuf>,
    /// Decimal digits for a bare `--digits`; always in `1..=1000`.
    pub precision_digits: u32,
    /// Verification worker count; `None` sizes the pool automatically.
    pub threads: Option<usize>,
    /// Format preference for multi-format commands.
    pub output_format: PreferredFormat,
}

/// Settings-relevant global flags, extracted from the parsed command line.
pub struct FlagInputs {
    pub cache: Option<PathBuf>,
    pub threads: Option<ThreadsArg>,
}

/// Environment snapshot, captured once at startup.
pub struct EnvInputs {
    pub cache: Option<String>,
    pub threads: Option<String>,
    pub digits: Option<String>,
}

impl EnvInputs {
    pub fn capture() -> Self {
        EnvInputs {
            cache: std::env::var("WPVOL_CACHE").ok(),
            threads: std::env::var("WPVOL_THREADS").ok(),
            digits: std::env::var("WPVOL_DIGITS").ok(),
        }
    }
}

/// Resolves the effective settings.
///
/// # Invariants
///
/// The result satisfies `1 <= precision_digits <= 1000` and
/// `threads != Some(0)`; any input violating those bounds, naming an
/// unknown configuration key, or failing to parse is reported as an error
/// rather than silently defaulted.
pub fn resolve(
    flags: &FlagInputs,
    env: &EnvInputs,
    file_text: Option<&str>,
) -> Result<Settings, String> {
    let mut out = Settings {
        cache_path: None,
        precision_digits: DEFAULT_PRECISION_DIGITS,
        threads: None,
        output_format: PreferredFormat::Text,
    };
    let mut threads = ThreadsArg::Auto;

    if let Some(text) = file_text {
        let parsed: FileConfig =
            toml::from_str(text).map_err(|e| format!("config file: {e}"))?;
        if let Some(p) = parsed.cache_path {
            out.cache_path = Some(p);
        }
        if let Some(d) = parsed.precision_digits {
            out.precision_digits = d;
        }
        if let Some(t) = parsed.threads {
            threads = match t {
                TomlThreads::Count(n) if n >= 1 => ThreadsArg::Count(n as usize),
                TomlThreads::Count(n) => {
                    return Err(format!(
                        "config file: threads must be a positive integer or \"auto\", found {n}"
                    ))
                }
                TomlThreads::Word(w) if w == "auto" => ThreadsArg::Auto,
                TomlThreads::Word(w) => {
                    return Err(format!(
                        "config file: threads must be a positive integer or \"auto\", found {w:?}"
                    ))
                }
            };
        }
        if let Some(f) = parsed.output_format {
            out.output_format =
                PreferredFormat::parse(&f).map_err(|e| format!("config file: {e}"))?;
        }
    }

    if let Some(c) = &env.cache {
        out.cache_path = Some(PathBuf::from(c));
    }
    if let Some(t) = &env.threads {
        threads = parse_threads(t).map_err(|e| format!("WPVOL_THREADS: {e}"))?;
    }
    if let Some(d) = &env.digits {
        out.precision_digits = d
            .parse::<u32>()
            .map_err(|_| format!("WPVOL_DIGITS: expected a positive integer, found {d:?}"))?;
    }

    if let Some(c) = &flags.cache {
        out.cache_path = Some(c.clone());
    }
    if let Some(t) = flags.threads {
        threads = t;
    }

    if out.precision_digits == 0 || out.precision_digits > MAX_PRECISION_DIGITS {
        return Err(format!(
            "precision_digits must lie in 1..={MAX_PRECISION_DIGITS}, found {}",
            out.precision_digits
        ));
    }
    out.threads = match threads {
        ThreadsArg::Auto => None,
        ThreadsArg::Count(n) => Some(n),
    };
    Ok(out)
}
