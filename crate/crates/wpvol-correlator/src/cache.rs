//! Line-oriented persistence for the correlator memo table.
//!
//! Format (versioned, sorted by key):
//!
//! ```text
//! # wpvol correlator cache v1
//! 0;0,0,0;1
//! 1;1;1/24
//! 2;2,2,2;7/240
//! ```
//!
//! Each line is `genus;indices;value` with comma-separated descending
//! indices (empty for an empty index list) and the value as an exact
//! rational. A zero-length file loads as an empty store.

use crate::{CorrelatorKey, Engine, TauVector};
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;
use wpvol_arith::Rational;

const HEADER: &str = "# wpvol correlator cache v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unrecognized cache header {found:?} (expected {HEADER:?})")]
    Version { found: String },
    #[error("malformed cache line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("cache value for genus {g}, indices [{taus}] is {loaded}, but the store already holds {existing}")]
    Conflict { g: u32, taus: String, loaded: Rational, existing: Rational },
}

/// Writes the engine's memo table to `path`, sorted, with a version header.
pub fn save(engine: &Engine, path: &Path) -> Result<(), CacheError> {
    let mut out = String::from(HEADER);
    out.push('\n');
    for (key, value) in engine.entries_sorted() {
        out.push_str(&format!("{};{};{}\n", key.g, key.taus, value));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Merges the entries stored at `path` into the engine, returning how many
/// lines were read. A key already present must carry the same value;
/// otherwise the merge fails without modifying that entry.
pub fn load(engine: &Engine, path: &Path) -> Result<usize, CacheError> {
    let text = std::fs::read_to_string(path)?;
    if text.trim().is_empty() {
        return Ok(0);
    }
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == HEADER => {}
        Some((_, first)) => {
            return Err(CacheError::Version { found: first.to_string() });
        }
        None => return Ok(0),
    }
    let mut merged = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(';').collect();
        if fields.len() != 3 {
            return Err(CacheError::Format {
                line: lineno,
                message: format!("expected 3 `;`-separated fields, found {}", fields.len()),
            });
        }
        let g: u32 = fields[0].trim().parse().map_err(|e| CacheError::Format {
            line: lineno,
            message: format!("bad genus: {e}"),
        })?;
        let taus = if fields[1].trim().is_empty() {
            TauVector::empty()
        } else {
            let mut entries = Vec::new();
            for part in fields[1].split(',') {
                entries.push(part.trim().parse::<u32>().map_err(|e| CacheError::Format {
                    line: lineno,
                    message: format!("bad index {part:?}: {e}"),
                })?);
            }
            TauVector::new(entries)
        };
        let value = Rational::from_str(fields[2].trim()).map_err(|e| CacheError::Format {
            line: lineno,
            message: format!("bad value: {e}"),
        })?;
        let key = CorrelatorKey { g, taus };
        if let Some(existing) = engine.memo().get(&key) {
            if *existing != value {
                return Err(CacheError::Conflict {
                    g: key.g,
                    taus: key.taus.to_string(),
                    loaded: value,
                    existing: existing.clone(),
                });
            }
        } else {
            engine.memo().insert(key, value);
        }
        merged += 1;
    }
    Ok(merged)
}
