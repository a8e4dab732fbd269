//! On-disk cache of class tables, one JSON document per discriminant.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::{enumerate_discriminant, ClassTable};

pub const TOOL_VERSION: &str = concat!("ternary-", env!("CARGO_PKG_VERSION"), "-c1");

pub const CACHE_ENV: &str = "TERNARY_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CacheFile {
    delta: u64,
    classes: Vec<[i64; 6]>,
    aut_counts: Vec<u64>,
    genera: Vec<Vec<usize>>,
    tool_version: String,
}

/// Explicit directory, else `$TERNARY_CACHE_DIR`, else `./cache`.
pub fn cache_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("cache"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheOutcome {
    Hit,
    Computed,
    /// A file existed but came from another tool version.
    Recomputed,
}

fn path_for(dir: &Path, delta: u64) -> PathBuf {
    dir.join(format!("{delta}.json"))
}

fn read(path: &Path) -> Result<Option<ClassTable>> {
    let text = fs::read_to_string(path)?;
    let file: CacheFile = serde_json::from_str(&text)?;
    if file.tool_version != TOOL_VERSION {
        return Ok(None);
    }
    let classes = file.classes.into_iter().map(TernaryForm::from_array).collect::<Result<Vec<_>>>()?;
    Ok(Some(ClassTable {
        delta: file.delta,
        classes,
        aut_counts: file.aut_counts,
        genera: file.genera,
        provenance: format!("cache {}", path.display()),
    }))
}

pub fn write(dir: &Path, table: &ClassTable) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let file = CacheFile {
        delta: table.delta,
        classes: table.classes.iter().map(TernaryForm::to_array).collect(),
        aut_counts: table.aut_counts.clone(),
        genera: table.genera.clone(),
        tool_version: TOOL_VERSION.to_string(),
    };
    let path = path_for(dir, table.delta);
    fs::write(&path, serde_json::to_string_pretty(&file)?)?;
    Ok(path)
}

/// The class table of `delta`, from the cache when it holds a current one.
pub fn load_or_compute(dir: &Path, delta: u64) -> Result<(ClassTable, CacheOutcome)> {
    let path = path_for(dir, delta);
    let mut outcome = CacheOutcome::Computed;
    if path.exists() {
        match read(&path) {
            Ok(Some(table)) if table.delta == delta => return Ok((table, CacheOutcome::Hit)),
            Ok(_) => outcome = CacheOutcome::Recomputed,
            Err(Error::Json(e)) => {
                log::warn!("ignoring unreadable cache file {}: {e}", path.display());
                outcome = CacheOutcome::Recomputed;
            }
            Err(e) => return Err(e),
        }
    }
    let table = enumerate_discriminant(delta)?;
    write(dir, &table)?;
    Ok((table, outcome))
}
