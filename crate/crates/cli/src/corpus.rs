//! Golden-file regression: each fixture stores the argument list, the expected exit status and the
//! expected report. Relative paths in the arguments are resolved against the fixture directory.

use std::path::{Path, PathBuf};

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{Cli, Command};
use crate::report::canonical_json;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub args: Vec<String>,
    pub exit: u8,
    pub report: Value,
}

/// Fixtures bundled with the crate.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Top-level `*.json` files, sorted by name.
pub fn fixture_paths(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    Ok(paths)
}

fn read_fixture(path: &Path) -> CliResult<Fixture> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        source: qmalg_core::Error::Parse { input: "fixture".into(), pos: e.column(), msg: e.to_string() },
    })
}

/// Run one fixture; `Err` carries the reason it could not be run at all.
pub fn run_fixture(fx: &Fixture, base: &Path) -> Result<crate::Outcome, String> {
    let cli = Cli::try_parse_from(std::iter::once("qmalg".to_string()).chain(fx.args.iter().cloned()))
        .map_err(|e| e.to_string())?;
    if matches!(cli.command, Command::Corpus { .. }) {
        return Err("fixtures cannot run the corpus".into());
    }
    Ok(crate::run(&cli, base))
}

pub fn run_corpus(dir: Option<&Path>, bless: bool) -> CliResult<(bool, Value)> {
    let dir = dir.map(Path::to_path_buf).unwrap_or_else(bundled_dir);
    let paths = fixture_paths(&dir)?;
    if paths.is_empty() {
        return Err(CliError::Usage(format!("no fixtures in {}", dir.display())));
    }
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for path in &paths {
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let mut fx = read_fixture(path)?;
        let (pass, note) = match run_fixture(&fx, &dir) {
            Err(msg) => (false, Some(msg)),
            Ok(out) if bless => {
                fx.exit = out.exit;
                fx.report = out.report;
                let text = canonical_json(&serde_json::to_value(&fx).expect("fixture serializes"));
                std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
                (true, None)
            }
            Ok(out) => {
                let same = out.exit == fx.exit && canonical_json(&out.report) == canonical_json(&fx.report);
                (same, (!same).then(|| format!("exit {} (expected {})", out.exit, fx.exit)))
            }
        };
        if !pass {
            failed.push(id.clone());
        }
        rows.push(json!({ "id": id, "pass": pass, "note": note }));
    }
    Ok((
        failed.is_empty(),
        json!({ "fixtures": rows, "failed": failed, "total": paths.len(), "blessed": bless }),
    ))
}
