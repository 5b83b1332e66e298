//! Command-line front end: run configuration, subcommands and the run
//! manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::criticality::{self, CgrGrid, ChainCoefficient, ModelForm};
use crate::error::{LabError, Result};
use crate::fg;
use crate::functional::{self, find_critical_points, CriticalKind, GammaFamily, GeneralizedProfile, RadialWeight, WeightLaw};
use crate::geometry::{BulkModel, Family};
use crate::io::{num, write_json, Table};
use crate::jumps::{self, PlantedBarrier, SensitivityOptions};
use crate::surfaces::{SurfaceConfig, SurfaceSolver, VolumeOracle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GammaRange {
    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.min, self.max, self.count),
            Spacing::Log => functional::log_grid(self.min, self.max, self.count),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl TauGrid {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub quad_rel: f64,
    pub quad_abs: f64,
    pub root: f64,
    /// offsets above the barrier radius, in units of `r_h`, for exponent fits
    pub fit_window: (f64, f64),
}

impl Default for Tolerances {
    fn default() -> Self {
        let s = SurfaceConfig::default();
        Self { quad_rel: s.quad_rel, quad_abs: s.quad_abs, root: s.root_tol, fit_window: (1e-4, 1e-1) }
    }
}

/// Gaussian bump multiplying the weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub family: Family,
    pub d: u32,
    #[serde(rename = "L")]
    pub l: f64,
    pub r_h: f64,
    pub law: WeightLaw,
    pub gamma: f64,
    pub gamma_range: Option<GammaRange>,
    pub tau: TauGrid,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub prefactor: f64,
    pub oracle_nodes: usize,
    /// worker threads; `None` uses the available parallelism
    pub workers: Option<usize>,
    pub bump: Option<Bump>,
    pub gnuplot_stub: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: Family::PlanarSads,
            d: 4,
            l: 1.0,
            r_h: 1.0,
            law: WeightLaw::Linear,
            gamma: 0.0,
            gamma_range: None,
            tau: TauGrid { min: 0.0, max: 20.0, count: 200 },
            tolerances: Tolerances::default(),
            out: PathBuf::from("out"),
            prefactor: 1.0,
            oracle_nodes: 128,
            workers: None,
            bump: None,
            gnuplot_stub: false,
        }
    }
}

impl RunConfig {
    pub fn render(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn model(&self) -> Result<BulkModel> {
        BulkModel::new(self.family, self.d, self.l, self.r_h)
    }

    pub fn weight(&self) -> Result<LabWeight> {
        let profile = GeneralizedProfile { gamma: self.gamma, model: self.model()?, law: self.law };
        Ok(match self.bump {
            None => LabWeight::Profile(profile),
            Some(b) => LabWeight::Planted(PlantedBarrier::new(profile, b.amplitude, b.center, b.width)),
        })
    }

    pub fn surface_config(&self) -> SurfaceConfig {
        SurfaceConfig {
            quad_rel: self.tolerances.quad_rel,
            quad_abs: self.tolerances.quad_abs,
            root_tol: self.tolerances.root,
            prefactor: self.prefactor,
            ..SurfaceConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model()?;
        let t = &self.tolerances;
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !(positive(t.quad_rel) && positive(t.quad_abs) && positive(t.root)) {
            return Err(LabError::Config("tolerances must be positive".into()));
        }
        if !(positive(t.fit_window.0) && t.fit_window.1 > t.fit_window.0) {
            return Err(LabError::Config("fit window must be positive and increasing".into()));
        }
        if !(self.gamma.is_finite() && positive(self.prefactor)) {
            return Err(LabError::Config("gamma must be finite and the prefactor positive".into()));
        }
        let tau = &self.tau;
        if tau.count == 0 || !(tau.min >= 0.0 && tau.max >= tau.min && tau.max.is_finite()) {
            return Err(LabError::Config("tau grid needs 0 <= min <= max and count >= 1".into()));
        }
        if let Some(g) = &self.gamma_range {
            if g.count < 2 || !(g.max > g.min) || (g.spacing == Spacing::Log && g.min <= 0.0) {
                return Err(LabError::Config("gamma range needs min < max, count >= 2, and min > 0 when log-spaced".into()));
            }
        }
        if let Some(b) = &self.bump {
            if !(b.amplitude.is_finite() && positive(b.width) && positive(b.center)) {
                return Err(LabError::Config("bump needs a finite amplitude and positive center and width".into()));
            }
        }
        if self.workers == Some(0) {
            return Err(LabError::Config("workers must be at least 1".into()));
        }
        if self.oracle_nodes < 64 {
            return Err(LabError::Config("oracle needs at least 64 nodes".into()));
        }
        Ok(())
    }
}

/// The weights reachable from the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LabWeight {
    Profile(GeneralizedProfile),
    Planted(PlantedBarrier),
}

impl RadialWeight for LabWeight {
    fn model(&self) -> &BulkModel {
        match self {
            LabWeight::Profile(p) => p.model(),
            LabWeight::Planted(p) => p.model(),
        }
    }

    fn weight(&self, r: f64) -> f64 {
        match self {
            LabWeight::Profile(p) => p.weight(r),
            LabWeight::Planted(p) => p.weight(r),
        }
    }

    fn weight_derivative(&self, r: f64) -> f64 {
        match self {
            LabWeight::Profile(p) => p.weight_derivative(r),
            LabWeight::Planted(p) => p.weight_derivative(r),
        }
    }
}

impl GammaFamily for LabWeight {
    fn gamma(&self) -> f64 {
        match self {
            LabWeight::Profile(p) => p.gamma(),
            LabWeight::Planted(p) => p.gamma(),
        }
    }

    fn with_gamma(&self, gamma: f64) -> Self {
        match self {
            LabWeight::Profile(p) => LabWeight::Profile(p.with_gamma(gamma)),
            LabWeight::Planted(p) => LabWeight::Planted(p.with_gamma(gamma)),
        }
    }

    fn weight_gamma_derivative(&self, r: f64) -> f64 {
        match self {
            LabWeight::Profile(p) => p.weight_gamma_derivative(r),
            LabWeight::Planted(p) => p.weight_gamma_derivative(r),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cgr-lab", version, about = "Generalized complexity growth rates for AdS black holes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effective potential table and critical points
    Potential(Flags),
    /// Growth rate against boundary time
    CgrCurve(Flags),
    /// Jumps, barrier sensitivities and jump-distance flow
    Jumps(Flags),
    /// Barrier catalog across a coupling range
    SweepGamma(Flags),
    /// Exponent fit, scaling collapse and scaling-operator residual
    CritFit(Flags),
    /// Near-boundary expansion and Weyl-squared decomposition
    FgCheck(Flags),
    /// Direct extremization against the momentum method
    OracleCheck(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Potential(_) => "potential",
            Command::CgrCurve(_) => "cgr-curve",
            Command::Jumps(_) => "jumps",
            Command::SweepGamma(_) => "sweep-gamma",
            Command::CritFit(_) => "crit-fit",
            Command::FgCheck(_) => "fg-check",
            Command::OracleCheck(_) => "oracle-check",
        }
    }

    fn flags(&self) -> &Flags {
        match self {
            Command::Potential(f)
            | Command::CgrCurve(f)
            | Command::Jumps(f)
            | Command::SweepGamma(f)
            | Command::CritFit(f)
            | Command::FgCheck(f)
            | Command::OracleCheck(f) => f,
        }
    }
}

/// Flags shared by every subcommand. Without `--config`, the model flags and
/// `--out` are required.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON run configuration; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long)]
    pub rh: Option<f64>,
    #[arg(long)]
    pub law: Option<WeightLaw>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_max: Option<f64>,
    #[arg(long)]
    pub gamma_count: Option<usize>,
    #[arg(long)]
    pub gamma_log: bool,
    #[arg(long)]
    pub tau_min: Option<f64>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub tau_count: Option<usize>,
    #[arg(long)]
    pub quad_rel: Option<f64>,
    #[arg(long)]
    pub quad_abs: Option<f64>,
    #[arg(long)]
    pub root_tol: Option<f64>,
    #[arg(long)]
    pub fit_lo: Option<f64>,
    #[arg(long)]
    pub fit_hi: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub prefactor: Option<f64>,
    #[arg(long)]
    pub oracle_nodes: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub bump_amplitude: Option<f64>,
    #[arg(long)]
    pub bump_center: Option<f64>,
    #[arg(long)]
    pub bump_width: Option<f64>,
    /// also write a gnuplot script for the CSV artifacts
    #[arg(long)]
    pub gnuplot_stub: bool,
}

impl Flags {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
                RunConfig::parse(&text)?
            }
            None => {
                let missing: Vec<&str> = [
                    ("--family", self.family.is_none()),
                    ("--d", self.d.is_none()),
                    ("--L", self.l.is_none()),
                    ("--rh", self.rh.is_none()),
                    ("--out", self.out.is_none()),
                ]
                .iter()
                .filter(|(_, m)| *m)
                .map(|(n, _)| *n)
                .collect();
                if !missing.is_empty() {
                    return Err(LabError::Config(format!("missing required flags: {}", missing.join(", "))));
                }
                RunConfig::default()
            }
        };
        macro_rules! set {
            ($field:expr, $flag:expr) => {
                if let Some(v) = $flag.clone() {
                    $field = v;
                }
            };
        }
        set!(cfg.family, self.family);
        set!(cfg.d, self.d);
        set!(cfg.l, self.l);
        set!(cfg.r_h, self.rh);
        set!(cfg.law, self.law);
        set!(cfg.gamma, self.gamma);
        set!(cfg.tau.min, self.tau_min);
        set!(cfg.tau.max, self.tau_max);
        set!(cfg.tau.count, self.tau_count);
        set!(cfg.tolerances.quad_rel, self.quad_rel);
        set!(cfg.tolerances.quad_abs, self.quad_abs);
        set!(cfg.tolerances.root, self.root_tol);
        set!(cfg.tolerances.fit_window.0, self.fit_lo);
        set!(cfg.tolerances.fit_window.1, self.fit_hi);
        set!(cfg.out, self.out);
        set!(cfg.prefactor, self.prefactor);
        set!(cfg.oracle_nodes, self.oracle_nodes);
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        if self.gamma_min.is_some() || self.gamma_max.is_some() || self.gamma_count.is_some() || self.gamma_log {
            let base = cfg.gamma_range.unwrap_or(GammaRange { min: 0.0, max: 0.0, count: 0, spacing: Spacing::Linear });
            cfg.gamma_range = Some(GammaRange {
                min: self.gamma_min.unwrap_or(base.min),
                max: self.gamma_max.unwrap_or(base.max),
                count: self.gamma_count.unwrap_or(if base.count == 0 { 11 } else { base.count }),
                spacing: if self.gamma_log { Spacing::Log } else { base.spacing },
            });
        }
        if self.bump_amplitude.is_some() || self.bump_center.is_some() || self.bump_width.is_some() {
            let base = cfg.bump.unwrap_or(Bump { amplitude: 1.0, center: 0.5 * cfg.r_h, width: 0.05 * cfg.r_h });
            cfg.bump = Some(Bump {
                amplitude: self.bump_amplitude.unwrap_or(base.amplitude),
                center: self.bump_center.unwrap_or(base.center),
                width: self.bump_width.unwrap_or(base.width),
            });
        }
        cfg.gnuplot_stub |= self.gnuplot_stub;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub status: String,
    pub failure: Option<String>,
    pub config: RunConfig,
    pub wall_time_s: f64,
    pub achieved: Value,
    pub artifacts: Vec<ArtifactEntry>,
}

/// Collects artifacts written into the output directory.
struct Outputs {
    dir: PathBuf,
    written: Vec<ArtifactEntry>,
    achieved: serde_json::Map<String, Value>,
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Self { dir: dir.to_path_buf(), written: Vec::new(), achieved: serde_json::Map::new() }
    }

    fn record(&mut self, name: &str) -> Result<()> {
        let bytes = std::fs::read(self.dir.join(name))?;
        self.written.push(ArtifactEntry { file: name.to_string(), sha256: sha256_hex(&bytes), bytes: bytes.len() });
        Ok(())
    }

    fn csv(&mut self, name: &str, table: &Table) -> Result<()> {
        table.write(&self.dir.join(name))?;
        self.record(name)
    }

    fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        write_json(&self.dir.join(name), value)?;
        self.record(name)
    }

    fn note(&mut self, key: &str, value: Value) {
        self.achieved.insert(key.to_string(), value);
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses `argv` (including the program name), runs the subcommand and returns
/// the process exit code.
pub fn run_subcommand<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
        }
    };
    let cfg = match cli.command.flags().resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{}", Cli::command().render_usage());
            return EXIT_CONFIG;
        }
    };
    match execute(cli.command.name(), &cfg) {
        Ok(_) => EXIT_OK,
        Err(LabError::Config(msg)) => {
            eprintln!("error: invalid configuration: {msg}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_NUMERICAL
        }
    }
}

/// Runs one subcommand with a resolved configuration and writes `run.json`.
/// Numerical failures leave partial artifacts plus `failure.json`.
pub fn execute(subcommand: &str, cfg: &RunConfig) -> Result<Manifest> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out)?;
    let start = Instant::now();
    let mut outputs = Outputs::new(&cfg.out);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Config(e.to_string()))?;
    let result = pool.install(|| dispatch(subcommand, cfg, &mut outputs));
    if result.is_ok() && cfg.gnuplot_stub {
        let script = gnuplot_script(&outputs.written);
        std::fs::write(cfg.out.join("plot.gp"), script)?;
        outputs.record("plot.gp")?;
    }
    let failure = result.as_ref().err().map(|e| e.to_string());
    if let Some(msg) = &failure {
        outputs.json("failure.json", &json!({ "subcommand": subcommand, "error": msg }))?;
    }
    let manifest = Manifest {
        tool: "cgr-lab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: subcommand.into(),
        status: if failure.is_none() { "ok".into() } else { "failed".into() },
        failure,
        config: cfg.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
        achieved: Value::Object(outputs.achieved.clone()),
        artifacts: outputs.written.clone(),
    };
    write_json(&cfg.out.join("run.json"), &manifest)?;
    result.map(|_| manifest)
}

fn dispatch(subcommand: &str, cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    match subcommand {
        "potential" => potential(cfg, out),
        "cgr-curve" => cgr_curve(cfg, out),
        "jumps" => jumps_cmd(cfg, out),
        "sweep-gamma" => sweep_gamma(cfg, out),
        "crit-fit" => crit_fit(cfg, out),
        "fg-check" => fg_check(cfg, out),
        "oracle-check" => oracle_check(cfg, out),
        other => Err(LabError::Config(format!("unknown subcommand '{other}'"))),
    }
}

fn interior(cfg: &RunConfig) -> (f64, f64) {
    (jumps::R_FLOOR * cfg.r_h, cfg.r_h * (1.0 - 1e-12))
}

fn potential(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let w = cfg.weight()?;
    let (lo, hi) = interior(cfg);
    let profile = functional::PotentialProfile::build(&w, lo, hi, functional::DEFAULT_GRID)?;
    out.csv("potential.csv", &profile.table())?;
    out.json("critical_points.json", &profile.critical_points)?;
    let worst = profile.critical_points.iter().map(|c| c.gradient).fold(0.0, f64::max);
    out.note("max_critical_gradient", json!(worst));
    out.note("barriers", json!(profile.critical_points.iter().filter(|c| c.kind == CriticalKind::LocalMax).count()));
    Ok(())
}

fn cgr_curve(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let w = cfg.weight()?;
    let solver = SurfaceSolver::new(&w, cfg.surface_config())?;
    let curve = solver.curve(&cfg.tau.values())?;
    out.csv("cgr_curve.csv", &curve.table())?;
    let failed: usize = solver.tables.iter().map(|t| t.failed).sum();
    out.json(
        "cgr_summary.json",
        &json!({
            "branches": solver.branches,
            "holes": curve.holes,
            "final_cgr": curve.points.last().map(|p| p.cgr),
        }),
    )?;
    out.note("table_failures", json!(failed));
    out.note("holes", json!(curve.holes.len()));
    if curve.points.is_empty() {
        return Err(LabError::Numerical("no extremal slice reaches the boundary on the tau grid".into()));
    }
    Ok(())
}

fn jumps_cmd(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let w = cfg.weight()?;
    let solver = SurfaceSolver::new(&w, cfg.surface_config())?;
    let curve = solver.curve(&cfg.tau.values())?;
    out.csv("cgr_curve.csv", &curve.table())?;
    let events = jumps::detect_jumps(&curve, &solver, 1e-6 * cfg.tau.max.max(1.0));
    out.json("jumps.json", &events)?;
    out.note("jumps", json!(events.len()));

    let (lo, hi) = interior(cfg);
    let cps = find_critical_points(&w, lo, hi, functional::DEFAULT_GRID)?;
    let records: Vec<Value> = cps
        .iter()
        .filter(|c| c.kind == CriticalKind::LocalMax)
        .map(|c| match jumps::sensitivity(&w, c, SensitivityOptions::default()) {
            Ok(rec) => json!(rec),
            Err(e) => json!({ "r_i": c.r_i, "error": e.to_string() }),
        })
        .collect();
    out.json("sensitivity.json", &records)?;

    if let Some(range) = &cfg.gamma_range {
        match jumps::jump_distance_flow(&w, &range.values()) {
            Ok(rows) => out.csv("flow.csv", &jumps::flow_table(&rows))?,
            Err(e) => out.note("flow", json!(e.to_string())),
        }
    }
    Ok(())
}

fn sweep_gamma(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    use rayon::prelude::*;
    let range = cfg.gamma_range.ok_or_else(|| LabError::Config("sweep-gamma needs a gamma range".into()))?;
    let w = cfg.weight()?;
    let (lo, _) = interior(cfg);
    let rows: Vec<(f64, Result<Vec<functional::CriticalPoint>>)> = range
        .values()
        .par_iter()
        .map(|&g| (g, functional::interior_maxima(&w.with_gamma(g), lo, functional::DEFAULT_GRID)))
        .collect();
    let mut t = Table::new(&["gamma", "barriers", "r_outer", "level_outer", "late_cgr"]);
    let mut failures = Vec::new();
    for (g, res) in rows {
        match res {
            Ok(maxima) => {
                let outer = maxima.iter().max_by(|a, b| a.r_i.total_cmp(&b.r_i));
                let top = maxima.iter().map(|c| c.level).fold(f64::NAN, f64::max);
                let cell = |x: Option<f64>| x.map(num).unwrap_or_default();
                t.push(vec![
                    num(g),
                    maxima.len().to_string(),
                    cell(outer.map(|c| c.r_i)),
                    cell(outer.map(|c| c.level)),
                    cell((!top.is_nan()).then(|| cfg.prefactor * top.sqrt())),
                ]);
            }
            Err(e) => failures.push(json!({ "gamma": g, "error": e.to_string() })),
        }
    }
    out.csv("sweep_gamma.csv", &t)?;
    out.note("failed_points", json!(failures.len()));
    if !failures.is_empty() {
        out.json("sweep_failures.json", &failures)?;
        return Err(LabError::Numerical(format!("{} coupling values failed", failures.len())));
    }
    Ok(())
}

fn outer_barrier<W: RadialWeight + ?Sized>(w: &W, cfg: &RunConfig) -> Result<f64> {
    let (lo, _) = interior(cfg);
    let maxima = functional::interior_maxima(w, lo, functional::DEFAULT_GRID)?;
    maxima
        .iter()
        .map(|c| c.r_i)
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))))
        .ok_or_else(|| LabError::Numerical("no barrier inside the horizon".into()))
}

fn crit_fit(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let w = cfg.weight()?;
    let r_i = outer_barrier(&w, cfg)?;
    let (flo, fhi) = cfg.tolerances.fit_window;
    let window = (r_i + flo * cfg.r_h, (r_i + fhi * cfg.r_h).min(cfg.r_h * (1.0 - 1e-9)));
    let samples: Vec<(f64, f64)> = functional::log_grid(window.0 - r_i, window.1 - r_i, 40)
        .into_iter()
        .map(|x| Ok((r_i + x, criticality::local_cgr_model(&w, r_i + x)?)))
        .collect::<Result<_>>()?;
    let fit = criticality::fit_exponent(&samples, r_i, ModelForm::PowerPlusConst, window)?;

    let lambdas = functional::log_grid(0.5, 2.0, 9);
    let eval = criticality::family_evaluator(&w);
    let c0 = criticality::scaling_collapse(&eval, r_i, cfg.gamma, &lambdas, 1.0, 0.0)?;
    let c1 = criticality::scaling_collapse(&eval, r_i, cfg.gamma, &lambdas, 1.0, 1.0)?;
    let mut table = c0.table();
    table.append(c1.table());
    out.csv("collapse.csv", &table)?;

    let model = cfg.model()?;
    let h = (window.1 - window.0) / 40.0;
    let rs: Vec<f64> = (0..41).map(|k| window.0 + h * k as f64).collect();
    let gammas: Vec<f64> = if cfg.gamma != 0.0 {
        (-2..=2).map(|k| cfg.gamma * (1.0 + 0.01 * k as f64)).collect()
    } else {
        vec![0.0]
    };
    let grid = CgrGrid::tabulate(rs, gammas, |r, g| criticality::local_cgr_model(&w.with_gamma(g), r).unwrap_or(f64::NAN));
    let mut cs = serde_json::Map::new();
    for chain in [ChainCoefficient::Plain, ChainCoefficient::RadialWeighted] {
        let key = match chain {
            ChainCoefficient::Plain => "plain",
            ChainCoefficient::RadialWeighted => "radial_weighted",
        };
        let nu0 = criticality::cs_residual(&grid, &model, chain, 1.0, 0.0, fit.delta_hat)?;
        let nu1 = criticality::cs_residual(&grid, &model, chain, 1.0, 1.0, fit.delta_hat).ok();
        cs.insert(key.into(), json!({ "nu0": nu0, "nu1": nu1 }));
    }
    out.json(
        "crit_fit.json",
        &json!({
            "fit": fit,
            "relation_gap": fit.relation_gap(cfg.d),
            "collapse": {
                "nu0": { "delta": c0.delta_collapse, "residual": c0.residual, "dropped": c0.dropped },
                "nu1": { "delta": c1.delta_collapse, "residual": c1.residual, "dropped": c1.dropped },
            },
            "cs_residual": cs,
        }),
    )?;
    out.note("fit_r2", json!(fit.fit_r2));
    Ok(())
}

fn fg_check(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let model = cfg.model()?;
    let report = fg::weyl_decomposition_check(&model)?;
    out.json("fg.json", &report)?;
    let models: Vec<BulkModel> = [0.8, 1.0, 1.25]
        .iter()
        .map(|s| BulkModel::new(cfg.family, cfg.d, cfg.l, s * cfg.r_h))
        .collect::<Result<_>>()?;
    let sweep = fg::ratio_constancy(&models)?;
    out.csv("fg_constancy.csv", &sweep.table())?;
    out.note("fit_residual", json!(report.fit_residual));
    out.note("ratio_spread", json!(sweep.spread));
    Ok(())
}

fn oracle_check(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    use rayon::prelude::*;
    let w = cfg.weight()?;
    let scfg = cfg.surface_config();
    let solver = SurfaceSolver::new(&w, scfg)?;
    let r_cut = solver.r_cut();
    let oracle = VolumeOracle::new(&w, cfg.oracle_nodes, r_cut)?.outer_basin()?;
    let taus = cfg.tau.values();
    let rows: Vec<Result<Vec<String>>> = taus
        .par_iter()
        .map(|&tau| {
            let p = solver
                .dominant_at(tau)
                .ok_or_else(|| LabError::Numerical(format!("no extremal slice at tau = {tau}")))?;
            let o = oracle.maximize(tau, 5)?;
            let rate = oracle.rate(tau, 0.05, 5)?;
            let value = cfg.prefactor * o.value;
            Ok(vec![
                num(tau),
                num(p.complexity),
                num(value),
                num((value - p.complexity) / p.complexity.abs()),
                num(p.cgr),
                num(cfg.prefactor * rate),
                o.stagnation.to_string(),
            ])
        })
        .collect();
    let mut t = Table::new(&["tau", "momentum_value", "oracle_value", "rel_diff", "momentum_rate", "oracle_rate", "stagnation"]);
    let mut first_err = None;
    for row in rows {
        match row {
            Ok(r) => t.push(r),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    out.csv("oracle.csv", &t)?;
    match first_err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn gnuplot_script(artifacts: &[ArtifactEntry]) -> String {
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\n");
    for a in artifacts.iter().filter(|a| a.file.ends_with(".csv")) {
        s.push_str(&format!("plot '{}' using 1:2 with lines\npause -1\n", a.file));
    }
    s
}
