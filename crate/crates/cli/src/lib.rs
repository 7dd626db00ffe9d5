//! Command-line driver: one subcommand per experiment, a flat
//! `section.field = value` config file overridden by flags, JSON reports,
//! CSV series and a manifest per run.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

pub use commands::{execute, Output, Series};
pub use config::{Command, Potential, RunConfig, SeriesFormat, OUT_DIR_ENV};
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "radial", about = "Spectral and dynamical experiments around the Aubin soliton and NLS ground states")]
pub struct Cli {
    /// Subcommand; may instead come from `command = ...` in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Flat `section.field = value` file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Generic `section.field=value` override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,

    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub d: Option<usize>,
    #[arg(long, global = true)]
    pub ell: Option<usize>,
    #[arg(long, global = true)]
    pub ell_max: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub potential: Option<Potential>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true)]
    pub t_final: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub amplitude: Option<f64>,
    #[arg(long, global = true)]
    pub lo: Option<f64>,
    #[arg(long, global = true)]
    pub hi: Option<f64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub instances: Option<usize>,
    /// Output directory (default: `$RADIAL_OUT_DIR`, else `./out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub stride: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<SeriesFormat>,
}

impl Cli {
    /// Defaults, then the config file, then flags.
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(self.command.unwrap_or(Command::Spectrum));
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        match self.command {
            Some(c) => cfg.command = c,
            None if self.config.is_none() => {
                return Err(CliError::Config("no subcommand given (argument or `command = ...`)".into()))
            }
            None => {}
        }
        for kv in &self.set {
            let (k, v) =
                kv.split_once('=').ok_or_else(|| CliError::Config(format!("--set {kv:?}: expected KEY=VALUE")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        let f = |x: f64| x.to_string();
        let flags: [(&str, Option<String>); 22] = [
            ("grid.r_max", self.r_max.map(f)),
            ("grid.n", self.n.map(|x| x.to_string())),
            ("physics.a", self.a.map(f)),
            ("physics.sigma", self.sigma.map(f)),
            ("physics.alpha", self.alpha.map(f)),
            ("physics.d", self.d.map(|x| x.to_string())),
            ("physics.ell", self.ell.map(|x| x.to_string())),
            ("physics.ell_max", self.ell_max.map(|x| x.to_string())),
            ("physics.potential", self.potential.map(|p| format!("{p:?}"))),
            ("dynamics.dt", self.dt.map(f)),
            ("dynamics.t_final", self.t_final.map(f)),
            ("dynamics.amplitude", self.amplitude.map(f)),
            ("search.lo", self.lo.map(f)),
            ("search.hi", self.hi.map(f)),
            ("search.tol", self.tol.map(f)),
            ("search.mu", self.mu.map(f)),
            ("search.threshold", self.threshold.map(f)),
            ("search.seed", self.seed.map(|x| x.to_string())),
            ("search.instances", self.instances.map(|x| x.to_string())),
            ("output.directory", self.out.map(|p| p.to_string_lossy().into_owned())),
            ("output.stride", self.stride.map(|x| x.to_string())),
            ("output.format", self.format.map(|p| format!("{p:?}"))),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        cfg.resolve()
    }
}

/// Result of a completed run.
#[derive(Debug)]
pub struct RunSummary {
    pub output: Output,
    pub files: Vec<PathBuf>,
    pub exit_code: i32,
}

/// Executes one resolved configuration and writes its results. Undecided
/// runs still write their files and report exit code 4.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    let out = execute(cfg)?;
    let status = if out.undecided.is_some() { "undecided" } else { "ok" };
    let files = output::write_results(cfg, &out.report, &out.series, status)?;
    let exit_code = if out.undecided.is_some() { 4 } else { 0 };
    Ok(RunSummary { output: out, files, exit_code })
}

/// Parses `args`, runs, prints the report to stdout and diagnostics to
/// stderr; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = cli.into_config().and_then(|cfg| run(&cfg));
    match result {
        Ok(s) => {
            println!("{}", serde_json::to_string_pretty(&s.output.report).unwrap_or_default());
            if let Some(why) = &s.output.undecided {
                eprintln!("undecided: {why}");
            }
            s.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
