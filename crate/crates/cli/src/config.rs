use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RADIAL_OUT_DIR";
const FALLBACK_OUT_DIR: &str = "out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    BsCount,
    GapScan,
    SigmaStar,
    NlsGround,
    Weinstein,
    JnDemo,
    Laurent,
    ClassifyMode,
    Evolve,
    StableH,
    SineSplit,
    ModeOde,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::BsCount => "bs-count",
            Command::GapScan => "gap-scan",
            Command::SigmaStar => "sigma-star",
            Command::NlsGround => "nls-ground",
            Command::Weinstein => "weinstein",
            Command::JnDemo => "jn-demo",
            Command::Laurent => "laurent",
            Command::ClassifyMode => "classify-mode",
            Command::Evolve => "evolve",
            Command::StableH => "stable-h",
            Command::SineSplit => "sine-split",
            Command::ModeOde => "mode-ode",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        <Command as ValueEnum>::from_str(s, false).ok()
    }
}

/// Which potential the Laurent fit is run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Potential {
    /// Closed-form free kernel (`d = 1` line or `d = 3` radial).
    Free,
    /// Discretized `ℓ = 0` operator `-Δ - 5φ⁴(·,a)`.
    Aubin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SeriesFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub r_max: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicsConfig {
    /// Soliton scale `a` of `φ(·,a)`.
    pub a: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub d: usize,
    /// Channel for single-channel commands.
    pub ell: usize,
    pub ell_max: Option<usize>,
    pub potential: Potential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    /// Time step (mode ODE: sample spacing).
    pub dt: Option<f64>,
    /// Final time (stable-h: horizon of each decision run).
    pub t_final: Option<f64>,
    /// Initial data `scale·φ + amplitude·exp(-(r/width)²)`, `ψ_t = velocity·exp(-(r/width)²)`.
    pub scale: f64,
    pub amplitude: Option<f64>,
    pub width: f64,
    pub velocity: f64,
    pub blowup_factor: f64,
    pub dispersal_fraction: f64,
    pub stationary_fraction: f64,
    pub n_plus_threshold: f64,
    pub settle_window: f64,
    pub core_radius: f64,
    /// End of the stabilized near-manifold run (0 skips it).
    pub decay_t_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub tol: Option<f64>,
    pub mu: f64,
    /// Birman–Schwinger counting threshold: eigenvalues `≥ 1 - threshold` count.
    pub threshold: f64,
    pub bracket_width: f64,
    pub seed: u64,
    pub instances: usize,
    /// Radius of the region near the origin used by sine-split.
    pub window: f64,
    /// Offset of the perturbed initial values in mode-ode.
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub directory: PathBuf,
    /// Series rows are recorded every `stride` steps.
    pub stride: usize,
    /// Snapshot dumps every `snapshots` steps (0: none).
    pub snapshots: usize,
    pub format: SeriesFormat,
}

/// Everything a run needs. Unset grid and search fields take per-command
/// defaults in [`RunConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub grid: GridConfig,
    pub physics: PhysicsConfig,
    pub dynamics: DynamicsConfig,
    pub search: SearchConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let directory = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| FALLBACK_OUT_DIR.into());
        RunConfig {
            command,
            grid: GridConfig { r_max: None, n: None },
            physics: PhysicsConfig {
                a: 1.0,
                sigma: 1.0,
                alpha: 1.0,
                d: 3,
                ell: 0,
                ell_max: None,
                potential: Potential::Free,
            },
            dynamics: DynamicsConfig {
                dt: None,
                t_final: None,
                scale: 1.0,
                amplitude: None,
                width: 1.0,
                velocity: 0.0,
                blowup_factor: 1e3,
                dispersal_fraction: 0.1,
                stationary_fraction: 0.1,
                n_plus_threshold: 0.1,
                settle_window: 5.0,
                core_radius: 1.0,
                decay_t_final: 25.0,
            },
            search: SearchConfig {
                lo: None,
                hi: None,
                tol: None,
                mu: 0.0,
                threshold: 1e-3,
                bracket_width: 0.05,
                seed: 2024,
                instances: 200,
                window: 3.0,
                offset: 1e-6,
            },
            output: OutputConfig { directory, stride: 10, snapshots: 0, format: SeriesFormat::Csv },
        }
    }

    /// Sets one `section.field` key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| CliError::Config(format!("{key} = {value:?}: {what}"));
        let f = || value.parse::<f64>().map_err(|_| bad("expected a number"));
        let u = || value.parse::<usize>().map_err(|_| bad("expected a non-negative integer"));
        match key {
            "command" => self.command = Command::parse(value).ok_or_else(|| bad("unknown command"))?,
            "grid.r_max" => self.grid.r_max = Some(f()?),
            "grid.n" => self.grid.n = Some(u()?),
            "physics.a" => self.physics.a = f()?,
            "physics.sigma" => self.physics.sigma = f()?,
            "physics.alpha" => self.physics.alpha = f()?,
            "physics.d" => self.physics.d = u()?,
            "physics.ell" => self.physics.ell = u()?,
            "physics.ell_max" => self.physics.ell_max = Some(u()?),
            "physics.potential" => {
                self.physics.potential = Potential::from_str(value, true).map_err(|_| bad("expected free or aubin"))?
            }
            "dynamics.dt" => self.dynamics.dt = Some(f()?),
            "dynamics.t_final" => self.dynamics.t_final = Some(f()?),
            "dynamics.scale" => self.dynamics.scale = f()?,
            "dynamics.amplitude" => self.dynamics.amplitude = Some(f()?),
            "dynamics.width" => self.dynamics.width = f()?,
            "dynamics.velocity" => self.dynamics.velocity = f()?,
            "dynamics.blowup_factor" => self.dynamics.blowup_factor = f()?,
            "dynamics.dispersal_fraction" => self.dynamics.dispersal_fraction = f()?,
            "dynamics.stationary_fraction" => self.dynamics.stationary_fraction = f()?,
            "dynamics.n_plus_threshold" => self.dynamics.n_plus_threshold = f()?,
            "dynamics.settle_window" => self.dynamics.settle_window = f()?,
            "dynamics.core_radius" => self.dynamics.core_radius = f()?,
            "dynamics.decay_t_final" => self.dynamics.decay_t_final = f()?,
            "search.lo" => self.search.lo = Some(f()?),
            "search.hi" => self.search.hi = Some(f()?),
            "search.tol" => self.search.tol = Some(f()?),
            "search.mu" => self.search.mu = f()?,
            "search.threshold" => self.search.threshold = f()?,
            "search.bracket_width" => self.search.bracket_width = f()?,
            "search.seed" => self.search.seed = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
            "search.instances" => self.search.instances = u()?,
            "search.window" => self.search.window = f()?,
            "search.offset" => self.search.offset = f()?,
            "output.directory" => self.output.directory = PathBuf::from(value),
            "output.stride" => self.output.stride = u()?,
            "output.snapshots" => self.output.snapshots = u()?,
            "output.format" => {
                self.output.format = SeriesFormat::from_str(value, true).map_err(|_| bad("expected csv or json"))?
            }
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `section.field = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got {raw:?}", i + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    /// Fills unset fields with the defaults of the selected command and
    /// checks every field the command consumes.
    pub fn resolve(mut self) -> Result<Self> {
        use Command::*;
        let alpha = self.physics.alpha;
        let (r_max, n) = match self.command {
            Spectrum | ClassifyMode => (50.0, 4000),
            BsCount => (30.0, 1500),
            GapScan | SigmaStar | NlsGround | Weinstein => (40.0 / alpha, 3000),
            Laurent => (400.0, 8000),
            Evolve | ModeOde => (30.0, 1500),
            StableH => (50.0, 2500),
            SineSplit => (40.0, 2000),
            JnDemo => (0.0, 0),
        };
        let g = &mut self.grid;
        if self.command != JnDemo {
            g.r_max.get_or_insert(r_max);
            g.n.get_or_insert(n);
        }
        let ell_max = match self.command {
            BsCount => 3,
            _ => 1,
        };
        self.physics.ell_max.get_or_insert(ell_max);
        let s = &mut self.search;
        match self.command {
            SigmaStar => {
                s.lo.get_or_insert(0.8);
                s.hi.get_or_insert(1.0);
                s.tol.get_or_insert(1e-3);
            }
            StableH => {
                s.tol.get_or_insert(1e-9);
            }
            _ => {}
        }
        let d = &mut self.dynamics;
        match self.command {
            Evolve => {
                d.t_final.get_or_insert(20.0);
                d.amplitude.get_or_insert(0.0);
            }
            StableH => {
                d.t_final.get_or_insert(40.0);
                d.amplitude.get_or_insert(0.01);
            }
            SineSplit => {
                d.t_final.get_or_insert(20.0);
                d.amplitude.get_or_insert(1.0);
                if d.width == 1.0 {
                    d.width = 2.0;
                }
            }
            ModeOde => {
                d.dt.get_or_insert(1e-3);
            }
            _ => {}
        }
        if let (Some(h), Evolve | StableH) = (self.h(), self.command) {
            self.dynamics.dt.get_or_insert(0.9 * h);
        }
        self.validate()?;
        Ok(self)
    }

    /// Grid spacing, once resolved.
    pub fn h(&self) -> Option<f64> {
        Some(self.grid.r_max? / self.grid.n? as f64)
    }

    fn validate(&self) -> Result<()> {
        use Command::*;
        let err = |m: String| Err(CliError::Config(m));
        let pos = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        if let (Some(r), Some(n)) = (self.grid.r_max, self.grid.n) {
            pos("grid.r_max", r)?;
            if n < 16 {
                return err(format!("grid.n must be at least 16, got {n}"));
            }
        }
        let p = &self.physics;
        match self.command {
            Spectrum | ClassifyMode | BsCount => pos("physics.a", p.a)?,
            GapScan | SigmaStar | NlsGround | Weinstein => {
                pos("physics.alpha", p.alpha)?;
                pos("physics.sigma", p.sigma)?;
            }
            Laurent if p.potential == Potential::Aubin => pos("physics.a", p.a)?,
            _ => {}
        }
        match self.command {
            GapScan | SigmaStar | Weinstein if p.d != 3 => {
                return err(format!("{} runs in d = 3 only, got d = {}", self.command.name(), p.d))
            }
            NlsGround if p.d != 1 && p.d != 3 => return err(format!("physics.d must be 1 or 3, got {}", p.d)),
            Laurent if p.d != 1 && p.d != 3 => return err(format!("physics.d must be 1 or 3, got {}", p.d)),
            Laurent if p.potential == Potential::Aubin && p.d != 3 => {
                return err("the Aubin resolvent is three-dimensional: set physics.d = 3".into())
            }
            ClassifyMode if p.ell > 1 => {
                return err(format!("classify-mode knows zero modes for ℓ ≤ 1, got {}", p.ell))
            }
            _ => {}
        }
        if self.command == SigmaStar {
            let (lo, hi) = (self.search.lo.unwrap(), self.search.hi.unwrap());
            if !(lo > 0.0 && lo < hi) {
                return err(format!("need 0 < search.lo < search.hi, got {lo}, {hi}"));
            }
            pos("search.tol", self.search.tol.unwrap())?;
        }
        if self.command == BsCount && !(self.search.threshold >= 0.0 && self.search.threshold < 1.0) {
            return err(format!("search.threshold must lie in [0, 1), got {}", self.search.threshold));
        }
        if self.command == JnDemo && self.search.instances == 0 {
            return err("search.instances must be positive".into());
        }
        let d = &self.dynamics;
        if matches!(self.command, Evolve | StableH) {
            let (dt, h) = (d.dt.unwrap(), self.h().unwrap());
            pos("dynamics.dt", dt)?;
            if dt > 0.9 * h * (1.0 + 1e-12) {
                return err(format!("dynamics.dt = {dt} violates dt ≤ 0.9·h = {}", 0.9 * h));
            }
            pos("dynamics.t_final", d.t_final.unwrap())?;
            pos("dynamics.width", d.width)?;
            pos("dynamics.blowup_factor", d.blowup_factor)?;
            pos("dynamics.settle_window", d.settle_window)?;
            pos("dynamics.core_radius", d.core_radius)?;
            if self.output.stride == 0 {
                return err("output.stride must be positive".into());
            }
        }
        if self.command == StableH {
            pos("search.bracket_width", self.search.bracket_width)?;
            pos("search.tol", self.search.tol.unwrap())?;
        }
        if self.command == SineSplit {
            pos("dynamics.t_final", d.t_final.unwrap())?;
            pos("dynamics.width", d.width)?;
            let r_max = self.grid.r_max.unwrap();
            if !(self.search.window > 0.0 && self.search.window <= r_max) {
                return err(format!("search.window must lie in (0, r_max], got {}", self.search.window));
            }
            if d.t_final.unwrap() <= 5.0 {
                return err("sine-split samples t ∈ [5, t_final]: need t_final > 5".into());
            }
        }
        if self.command == ModeOde {
            pos("dynamics.dt", d.dt.unwrap())?;
            if self.output.stride == 0 {
                return err("output.stride must be positive".into());
            }
        }
        Ok(())
    }
}
