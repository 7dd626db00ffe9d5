use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::commands::Series;
use crate::config::{RunConfig, SeriesFormat};
use crate::error::{CliError, Result};

/// Crates whose code a run exercises; they share the workspace version.
const CRATES: [&str; 7] =
    ["radial-core", "solitons", "halfline-spectral", "nls-linearized", "resolvent-expansion", "wave-dynamics", "cli"];

#[derive(Debug, Serialize)]
struct GridProvenance {
    r_max: f64,
    n: usize,
    h: f64,
    nodes: &'static str,
}

#[derive(Debug, Serialize)]
struct Versions {
    workspace: &'static str,
    crates: [&'static str; 7],
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'static str,
    status: &'a str,
    config: &'a RunConfig,
    versions: Versions,
    grid: Option<GridProvenance>,
    files: Vec<String>,
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output(format!("{}: {e}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io(path, e))
}

fn write_series(path: &Path, s: &Series, format: SeriesFormat) -> Result<()> {
    match format {
        SeriesFormat::Json => write_json(path, s),
        SeriesFormat::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| io(path, e))?;
            w.write_record(&s.columns).map_err(|e| io(path, e))?;
            for row in &s.rows {
                w.write_record(row.iter().map(|x| x.to_string())).map_err(|e| io(path, e))?;
            }
            w.flush().map_err(|e| io(path, e))
        }
    }
}

/// Writes `<command>.json`, one file per series and `manifest.json` into the
/// configured directory; returns the paths written.
pub fn write_results(
    cfg: &RunConfig,
    report: &serde_json::Value,
    series: &[Series],
    status: &str,
) -> Result<Vec<PathBuf>> {
    let dir = &cfg.output.directory;
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let name = cfg.command.name();
    let mut files = vec![dir.join(format!("{name}.json"))];
    write_json(&files[0], report)?;
    let ext = match cfg.output.format {
        SeriesFormat::Csv => "csv",
        SeriesFormat::Json => "json",
    };
    for s in series {
        let path = dir.join(format!("{name}_{}.{ext}", s.name));
        write_series(&path, s, cfg.output.format)?;
        files.push(path);
    }
    let grid = cfg.grid.r_max.zip(cfg.grid.n).map(|(r_max, n)| GridProvenance {
        r_max,
        n,
        h: r_max / n as f64,
        nodes: "r_i = i*h, i = 1..n; Dirichlet at r = 0 and r = r_max",
    });
    let manifest = Manifest {
        command: name,
        status,
        config: cfg,
        versions: Versions { workspace: env!("CARGO_PKG_VERSION"), crates: CRATES },
        grid,
        files: files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect(),
    };
    let path = dir.join("manifest.json");
    write_json(&path, &manifest)?;
    files.push(path);
    Ok(files)
}
