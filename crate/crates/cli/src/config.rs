//! Run configuration: built-in defaults per command, overridden by a JSON
//! config file, overridden by command-line flags. Everything is validated
//! here, before any computation starts.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use tjusim_core::analysis::{Evaluation, SimulationParams, DEFAULT_MAX_SITES, DENSE_MAX_SITES};
use tjusim_core::collision::{find_species, load_species, AtomSpecies, StepTiming};
use tjusim_core::{Boundary, ModelParams, TrotterOrder};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `full` or `NUP,NDOWN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(try_from = "String")]
pub enum SectorArg {
    #[default]
    Full,
    Spin { up: usize, down: usize },
}

impl FromStr for SectorArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "full" {
            return Ok(SectorArg::Full);
        }
        let bad = || format!("sector must be 'full' or 'NUP,NDOWN', got '{s}'");
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let up = a.trim().parse().map_err(|_| bad())?;
        let down = b.trim().parse().map_err(|_| bad())?;
        Ok(SectorArg::Spin { up, down })
    }
}

impl TryFrom<String> for SectorArg {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl fmt::Display for SectorArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorArg::Full => write!(f, "full"),
            SectorArg::Spin { up, down } => write!(f, "{up},{down}"),
        }
    }
}

impl SectorArg {
    pub fn evaluation(self) -> Evaluation {
        match self {
            SectorArg::Full => Evaluation::Blocked,
            SectorArg::Spin { up, down } => Evaluation::Inputs { up, down },
        }
    }

    fn check(self, sites: usize) -> Result<()> {
        match self {
            SectorArg::Spin { up, down } if up > sites || down > sites => Err(CliError::config(format!(
                "sector {up},{down} does not fit {sites} sites"
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    FigShiftTimes,
    FigTime,
    FigSteps,
    FigSites,
    Feasibility,
    Evolve,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::FigShiftTimes => "fig-shift-times",
            Command::FigTime => "fig-time",
            Command::FigSteps => "fig-steps",
            Command::FigSites => "fig-sites",
            Command::Feasibility => "feasibility",
            Command::Evolve => "evolve",
        }
    }

    /// Config keys accepted by this command besides the common ones.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::FigShiftTimes => &["species", "species_file", "depths"],
            Command::FigTime => &["model", "boundary", "sector", "taus", "m", "orders"],
            Command::FigSteps => &["model", "boundary", "sector", "tau", "ms", "orders"],
            Command::FigSites => &["model", "boundary", "sector", "tau", "sites", "max_sites", "orders"],
            Command::Feasibility => &["species", "species_file", "depth", "lifetime_s", "m", "order", "dimension", "timing"],
            Command::Evolve => &[
                "model",
                "boundary",
                "sector",
                "tau",
                "m",
                "order",
                "samples",
                "include_propagator",
            ],
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::Feasibility | Command::Evolve => Format::Json,
            _ => Format::Csv,
        }
    }
}

const COMMON_KEYS: [&str; 3] = ["out", "format", "seed"];

/// Partial model; unset fields keep the command's defaults.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelOverrides {
    pub sites: Option<usize>,
    pub t: Option<f64>,
    pub t_prime: Option<f64>,
    pub u_s: Option<f64>,
    /// Sets `jx`, `jy` and `jz` together; the per-axis keys win.
    pub j: Option<f64>,
    pub jx: Option<f64>,
    pub jy: Option<f64>,
    pub jz: Option<f64>,
    pub u_eff_prime: Option<f64>,
    pub dimension: Option<u32>,
}

impl ModelOverrides {
    fn apply(&self, base: SimulationParams) -> SimulationParams {
        let mut p = base;
        let m = &mut p.model;
        m.sites = self.sites.unwrap_or(m.sites);
        m.t = self.t.unwrap_or(m.t);
        m.t_prime = self.t_prime.unwrap_or(m.t_prime);
        m.u = self.u_s.unwrap_or(m.u);
        if let Some(j) = self.j {
            (m.jx, m.jy, m.jz) = (j, j, j);
        }
        m.jx = self.jx.unwrap_or(m.jx);
        m.jy = self.jy.unwrap_or(m.jy);
        m.jz = self.jz.unwrap_or(m.jz);
        p.u_eff_prime = self.u_eff_prime.unwrap_or(p.u_eff_prime);
        p.dimension = self.dimension.unwrap_or(p.dimension);
        p
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

/// Contents of a `--config` file. Keys not used by the selected command are
/// rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub boundary: Option<Boundary>,
    pub sector: Option<SectorArg>,
    pub model: Option<ModelOverrides>,
    pub taus: Option<Vec<f64>>,
    pub tau: Option<f64>,
    pub m: Option<u64>,
    pub ms: Option<Vec<u64>>,
    pub sites: Option<Vec<usize>>,
    pub max_sites: Option<usize>,
    pub orders: Option<Vec<TrotterOrder>>,
    pub order: Option<TrotterOrder>,
    pub species: Option<OneOrMany>,
    pub species_file: Option<PathBuf>,
    pub depths: Option<Vec<f64>>,
    pub depth: Option<f64>,
    pub lifetime_s: Option<f64>,
    pub dimension: Option<u32>,
    pub timing: Option<StepTiming>,
    pub samples: Option<usize>,
    pub include_propagator: Option<bool>,
}

impl RunConfig {
    pub fn parse(text: &str, command: Command) -> Result<RunConfig> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::config(format!("config: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::config("config: expected a JSON object"))?;
        if let Some(key) = obj
            .keys()
            .find(|k| !COMMON_KEYS.contains(&k.as_str()) && !command.keys().contains(&k.as_str()))
        {
            return Err(CliError::config(format!("config: key '{key}' is not used by {}", command.name())));
        }
        serde_json::from_value(value).map_err(|e| CliError::config(format!("config: {e}")))
    }

    pub fn load(path: &Path, command: Command) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, command)
    }
}

/// Command-line flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub boundary: Option<Boundary>,
    pub sector: Option<SectorArg>,
    pub order: Option<TrotterOrder>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone)]
pub struct CurveJob {
    pub params: SimulationParams,
    pub orders: Vec<TrotterOrder>,
    pub sector: SectorArg,
}

/// A fully validated unit of work.
#[derive(Debug, Clone)]
pub enum Job {
    ShiftTimes {
        species: Vec<AtomSpecies>,
        depths: Vec<f64>,
    },
    Time {
        curve: CurveJob,
        taus: Vec<f64>,
        m: u64,
    },
    Steps {
        curve: CurveJob,
        tau: f64,
        ms: Vec<u64>,
    },
    Sites {
        curve: CurveJob,
        tau: f64,
        sites: Vec<usize>,
        max_sites: usize,
    },
    Feasibility {
        species: AtomSpecies,
        depth: f64,
        lifetime_s: f64,
        m: u64,
        order: TrotterOrder,
        dimension: u32,
        timing: StepTiming,
    },
    Evolve {
        params: SimulationParams,
        sector: SectorArg,
        tau: f64,
        m: u64,
        order: TrotterOrder,
        samples: usize,
        seed: u64,
        include_propagator: bool,
    },
}

fn time_defaults() -> SimulationParams {
    SimulationParams::new(ModelParams::isotropic(5, 1.0, 5.0, 0.3), -2.0)
}

fn steps_defaults() -> SimulationParams {
    SimulationParams::new(ModelParams::isotropic(5, 1.0, 10.0, 0.3), 0.0)
}

/// Five points per decade from 1e-3 to 1e2.
pub fn default_taus() -> Vec<f64> {
    (0..=25).map(|k| 10f64.powf(-3.0 + k as f64 / 5.0)).collect()
}

pub fn default_ms() -> Vec<u64> {
    let mut ms = vec![1, 2, 5, 10, 20, 50];
    ms.extend((1..=10).map(|k| 100 * k));
    ms
}

pub fn default_depths() -> Vec<f64> {
    (5..=50).map(f64::from).collect()
}

fn both_orders() -> Vec<TrotterOrder> {
    vec![TrotterOrder::First, TrotterOrder::Second]
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(format!("{name} must be positive and finite, got {v}")))
    }
}

fn non_empty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(CliError::config(format!("{name} must not be empty")))
    } else {
        Ok(())
    }
}

fn species_table(path: Option<&Path>) -> Result<Vec<AtomSpecies>> {
    load_species(path)
        .map_err(|e| CliError::io(path.unwrap_or(Path::new("<species>")), e))?
        .map_err(CliError::from)
}

fn check_model(params: &SimulationParams, sector: SectorArg) -> Result<()> {
    params.validate()?;
    sector.check(params.model.sites)
}

impl RunConfig {
    /// Merge defaults, this config and `flags` into a validated job.
    pub fn resolve(self, command: Command, flags: &Flags) -> Result<(Job, Output)> {
        let format = flags.format.or(self.format).unwrap_or(command.default_format());
        let output = Output {
            path: flags.out.clone().or(self.out.clone()),
            format,
        };
        let boundary = flags.boundary.or(self.boundary).unwrap_or_default();
        let sector = flags.sector.or(self.sector).unwrap_or_default();
        let overrides = self.model.unwrap_or_default();
        let curve = |base: SimulationParams| {
            let mut params = overrides.apply(base);
            params.model.boundary = boundary;
            let orders = match flags.order {
                Some(o) => vec![o],
                None => self.orders.clone().unwrap_or_else(both_orders),
            };
            CurveJob { params, orders, sector }
        };

        let job = match command {
            Command::FigShiftTimes => {
                let table = species_table(self.species_file.as_deref())?;
                let species = match &self.species {
                    None => table,
                    Some(OneOrMany::One(label)) => vec![find_species(&table, label)?.clone()],
                    Some(OneOrMany::Many(labels)) => labels
                        .iter()
                        .map(|l| find_species(&table, l).cloned())
                        .collect::<tjusim_core::Result<_>>()?,
                };
                let depths = self.depths.unwrap_or_else(default_depths);
                non_empty("species", &species)?;
                non_empty("depths", &depths)?;
                for &d in &depths {
                    positive("lattice depth", d)?;
                }
                Job::ShiftTimes { species, depths }
            }
            Command::FigTime => {
                let curve = curve(time_defaults());
                check_model(&curve.params, sector)?;
                let taus = self.taus.unwrap_or_else(default_taus);
                let m = self.m.unwrap_or(1);
                non_empty("taus", &taus)?;
                for &t in &taus {
                    positive("tau", t)?;
                }
                if m < 1 {
                    return Err(CliError::config("m must be at least 1"));
                }
                non_empty("orders", &curve.orders)?;
                Job::Time { curve, taus, m }
            }
            Command::FigSteps => {
                let curve = curve(steps_defaults());
                check_model(&curve.params, sector)?;
                let tau = self.tau.unwrap_or(100.0);
                let ms = self.ms.unwrap_or_else(default_ms);
                positive("tau", tau)?;
                non_empty("ms", &ms)?;
                if ms.contains(&0) {
                    return Err(CliError::config("every m must be at least 1"));
                }
                non_empty("orders", &curve.orders)?;
                Job::Steps { curve, tau, ms }
            }
            Command::FigSites => {
                let curve = curve(steps_defaults());
                let tau = self.tau.unwrap_or(0.01);
                let sites = self.sites.unwrap_or_else(|| vec![2, 3, 4, 5]);
                let max_sites = self.max_sites.unwrap_or(DEFAULT_MAX_SITES);
                positive("tau", tau)?;
                non_empty("sites", &sites)?;
                non_empty("orders", &curve.orders)?;
                for &m in &sites {
                    if m > max_sites {
                        return Err(CliError::config(format!(
                            "{m} sites exceeds max_sites = {max_sites}; raise max_sites if memory allows"
                        )));
                    }
                    check_model(&curve.params.with_sites(m), sector)?;
                }
                Job::Sites {
                    curve,
                    tau,
                    sites,
                    max_sites,
                }
            }
            Command::Feasibility => {
                if format == Format::Csv {
                    return Err(CliError::config("feasibility reports are JSON only"));
                }
                let table = species_table(self.species_file.as_deref())?;
                let species = match &self.species {
                    None => find_species(&table, "Rb")?.clone(),
                    Some(OneOrMany::One(label)) => find_species(&table, label)?.clone(),
                    Some(OneOrMany::Many(_)) => {
                        return Err(CliError::config("feasibility takes a single species label"))
                    }
                };
                let depth = self.depth.unwrap_or(34.0);
                let lifetime_s = self.lifetime_s.unwrap_or(1.0);
                let timing = self.timing.unwrap_or_default();
                let dimension = self.dimension.unwrap_or(1);
                positive("lattice depth", depth)?;
                positive("lifetime_s", lifetime_s)?;
                positive("timing.hop_time_s", timing.hop_time_s)?;
                positive("timing.step_time", timing.step_time)?;
                positive("timing.ramp_safety", timing.ramp_safety)?;
                if dimension < 1 {
                    return Err(CliError::config("dimension must be at least 1"));
                }
                Job::Feasibility {
                    species,
                    depth,
                    lifetime_s,
                    m: self.m.unwrap_or(500),
                    order: flags.order.or(self.order).unwrap_or(TrotterOrder::Second),
                    dimension,
                    timing,
                }
            }
            Command::Evolve => {
                let CurveJob { params, .. } = curve(time_defaults());
                check_model(&params, sector)?;
                let tau = self.tau.unwrap_or(1.0);
                let m = self.m.unwrap_or(1);
                let samples = self.samples.unwrap_or(0);
                let include_propagator = self.include_propagator.unwrap_or(false);
                if !(tau.is_finite() && tau >= 0.0) {
                    return Err(CliError::config(format!("tau must be finite and non-negative, got {tau}")));
                }
                if m < 1 {
                    return Err(CliError::config("m must be at least 1"));
                }
                if (samples > 0 || include_propagator) && params.model.sites > DENSE_MAX_SITES {
                    return Err(CliError::config(format!(
                        "samples and include_propagator need at most {DENSE_MAX_SITES} sites"
                    )));
                }
                if include_propagator && sector != SectorArg::Full {
                    return Err(CliError::config("include_propagator needs sector 'full'"));
                }
                Job::Evolve {
                    params,
                    sector,
                    tau,
                    m,
                    order: flags.order.or(self.order).unwrap_or(TrotterOrder::Second),
                    samples,
                    seed: flags.seed.or(self.seed).unwrap_or(0),
                    include_propagator,
                }
            }
        };
        Ok((job, output))
    }
}
