//! Experiment configuration: JSON in, a validated [`ExperimentConfig`] out.
//!
//! Every failure names the offending key both as a dotted path
//! (`grid.dt`) and as a JSON pointer (`/grid/dt`).

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::{Dealias, GridSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Conservation,
    SmallDataScattering,
    LsApprox,
    EuclideanApprox,
    ResonanceCombinatorics,
    StrichartzProbe,
    MorawetzCheck,
    ResonantSmalldata,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Conservation => "conservation",
            Scenario::SmallDataScattering => "small_data_scattering",
            Scenario::LsApprox => "ls_approx",
            Scenario::EuclideanApprox => "euclidean_approx",
            Scenario::ResonanceCombinatorics => "resonance_combinatorics",
            Scenario::StrichartzProbe => "strichartz_probe",
            Scenario::MorawetzCheck => "morawetz_check",
            Scenario::ResonantSmalldata => "resonant_smalldata",
        }
    }

    fn needs_grid(self) -> bool {
        !matches!(self, Scenario::ResonanceCombinatorics | Scenario::ResonantSmalldata)
    }
}

/// Initial data shared by the PDE scenarios: a Gaussian of width `sigma`
/// in the R² directions carrying the torus modes `(0,0)` and `(1,0)` with
/// weights `1` and `mode_weight`, modulated by `frequency` (rounded to the
/// box-dual lattice), rescaled to the requested `H¹` norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketParams {
    pub sigma: f64,
    pub h1_norm: f64,
    #[serde(default)]
    pub mode_weight: f64,
    #[serde(default)]
    pub frequency: [f64; 2],
    #[serde(default)]
    pub center: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConservationParams {
    pub t_final: f64,
    pub data: PacketParams,
    #[serde(default)]
    pub dealias: Dealias,
    #[serde(default = "d_mass_tol")]
    pub mass_tolerance: f64,
    #[serde(default = "d_mom_tol")]
    pub momentum_tolerance: f64,
    #[serde(default = "d_order2")]
    pub energy_ratio_range: [f64; 2],
    #[serde(default)]
    pub symmetry: Option<SymmetryParams>,
    /// Step-count ceiling over both runs.
    #[serde(default = "d_ceiling")]
    pub max_steps: usize,
}

/// Galilean and scaling checks run next to the conservation suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryParams {
    /// Boost, rounded to the box-dual lattice.
    pub boost: [f64; 2],
    pub t_final: f64,
    /// Coarse step; the runs use `dt`, `dt/2` and a reference at `dt/16`.
    pub dt: f64,
    #[serde(default = "d_lambda")]
    pub lambda: f64,
    #[serde(default = "d_order2")]
    pub ratio_range: [f64; 2],
    #[serde(default = "d_mass_tol")]
    pub rescale_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringParams {
    pub data: PacketParams,
    #[serde(default)]
    pub dealias: Dealias,
    /// Times `t` at which `gap(t, 2t)` is measured.
    pub gap_times: Vec<f64>,
    /// Horizons `T` for the Z-norm over `[T/2, T]`.
    pub z_horizons: Vec<f64>,
    #[serde(default = "d_sample_every")]
    pub sample_every: f64,
    #[serde(default = "d_ceiling")]
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonantSmallDataParams {
    pub box_side: f64,
    pub nx: usize,
    pub dt: f64,
    pub trunc: i64,
    pub sigma: f64,
    /// Target `E_ls` of the initial state.
    pub e_ls: f64,
    pub gap_times: Vec<f64>,
    pub w_horizons: Vec<f64>,
    #[serde(default = "d_sample_every")]
    pub sample_every: f64,
    #[serde(default = "d_ceiling")]
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LsApproxParams {
    pub sigma: f64,
    /// Amplitudes of the torus modes `(0,0)` and `(1,0)`.
    pub amplitudes: [f64; 2],
    pub ms: Vec<f64>,
    pub t0: f64,
    pub trunc: i64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
    #[serde(default = "d_residual_range")]
    pub residual_ratio_range: [f64; 2],
    #[serde(default = "d_ceiling")]
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EuclideanApproxParams {
    pub sigma: f64,
    pub amplitude: f64,
    pub ns: Vec<f64>,
    pub r: f64,
    pub t0: f64,
    /// 4-D time step.
    pub dt: f64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
    #[serde(default = "d_growth")]
    pub max_h1_growth: f64,
    #[serde(default = "d_ceiling")]
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinatoricsParams {
    /// Oracle check: every `|j|∞ ≤ jmax` at truncation `trunc`.
    pub jmax: i64,
    pub trunc: i64,
    /// Weight-sum probe over `|j|∞ ≤ weight_jmax` and nested truncations.
    pub weight_jmax: i64,
    pub weight_truncs: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzParams {
    pub p: f64,
    pub ns: Vec<u64>,
    /// Levels used for calibration.
    pub calibration_ns: Vec<u64>,
    pub sample_count: usize,
    #[serde(default = "d_windows")]
    pub windows: usize,
    #[serde(default = "d_nodes")]
    pub nodes_per_window: usize,
    /// Spectral decay exponent of the random data.
    #[serde(default = "d_decay")]
    pub decay: f64,
    #[serde(default = "d_factor")]
    pub bound_factor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorawetzParams {
    pub data: PacketParams,
    #[serde(default)]
    pub dealias: Dealias,
    pub t_final: f64,
    pub radius: f64,
    /// Time at which the identity residual is compared across `dt`, `dt/2`.
    pub residual_time: f64,
    #[serde(default = "d_order2_min")]
    pub residual_ratio_min: f64,
    #[serde(default = "d_ceiling")]
    pub max_steps: usize,
}

fn yes() -> bool {
    true
}
fn d_mass_tol() -> f64 {
    1e-10
}
fn d_mom_tol() -> f64 {
    1e-8
}
fn d_order2() -> [f64; 2] {
    [3.5, 4.5]
}
fn d_order2_min() -> f64 {
    3.5
}
fn d_lambda() -> f64 {
    2.0
}
fn d_sample_every() -> f64 {
    0.25
}
fn d_residual_range() -> [f64; 2] {
    [1.5, 2.5]
}
fn d_ceiling() -> usize {
    20_000
}
fn d_growth() -> f64 {
    2.0
}
fn d_windows() -> usize {
    8
}
fn d_nodes() -> usize {
    64
}
fn d_decay() -> f64 {
    1.0
}
fn d_factor() -> f64 {
    5.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ScenarioParams {
    Conservation(ConservationParams),
    SmallDataScattering(ScatteringParams),
    LsApprox(LsApproxParams),
    EuclideanApprox(EuclideanApproxParams),
    ResonanceCombinatorics(CombinatoricsParams),
    StrichartzProbe(StrichartzParams),
    MorawetzCheck(MorawetzParams),
    ResonantSmalldata(ResonantSmallDataParams),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Scenario,
    #[serde(default)]
    grid: Option<GridSpec>,
    #[serde(default)]
    seed: u64,
    output_dir: PathBuf,
    #[serde(default)]
    params: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub grid: Option<GridSpec>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub params: ScenarioParams,
    /// SHA-256 of the config text.
    pub hash: String,
}

/// A rejected config: where, and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    /// Dotted path such as `grid.dt`; empty for the document itself.
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { path: path.into(), message: message.into() }
    }

    /// RFC 6901 pointer to the offending key.
    pub fn pointer(&self) -> String {
        if self.path.is_empty() {
            return String::new();
        }
        self.path.split('.').map(|s| format!("/{}", s.replace('~', "~0").replace('/', "~1"))).collect()
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "config error: {}", self.message)
        } else {
            write!(f, "config error at {} ({}): {}", self.path, self.pointer(), self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn join(prefix: &str, rest: &str) -> String {
    match (prefix.is_empty(), rest.is_empty()) {
        (true, _) => rest.to_string(),
        (_, true) => prefix.to_string(),
        _ => format!("{prefix}.{rest}"),
    }
}

fn path_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    path.iter()
        .filter_map(|s| match s {
            Segment::Seq { index } => Some(index.to_string()),
            Segment::Map { key } => Some(key.clone()),
            Segment::Enum { variant } => Some(variant.clone()),
            Segment::Unknown => None,
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// Appends the key named in an "unknown field" message to the path.
fn locate(prefix: &str, path: String, message: String) -> ConfigError {
    let mut full = join(prefix, &path);
    if let Some(rest) = message.strip_prefix("unknown field `") {
        if let Some(key) = rest.split('`').next() {
            if !full.ends_with(key) {
                full = join(&full, key);
            }
        }
    }
    ConfigError::new(full, message)
}

fn parse_params<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = path_of(e.path());
        locate("params", path, e.into_inner().to_string())
    })
}

fn strip_position(msg: String) -> String {
    match msg.find(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = path_of(e.path());
        locate("", path, strip_position(e.into_inner().to_string()))
    })?;

    if let Some(g) = &raw.grid {
        g.validate().map_err(|e| {
            let msg = match e {
                crate::Error::InvalidGrid(m) => m,
                other => other.to_string(),
            };
            let field = msg.split_whitespace().next().unwrap_or("").to_string();
            ConfigError::new(format!("grid.{field}"), msg)
        })?;
    } else if raw.scenario.needs_grid() {
        return Err(ConfigError::new("grid", format!("scenario {} needs a grid", raw.scenario.name())));
    }

    let v = raw.params.ok_or_else(|| ConfigError::new("params", "missing scenario parameters"))?;
    let params = match raw.scenario {
        Scenario::Conservation => ScenarioParams::Conservation(parse_params(v)?),
        Scenario::SmallDataScattering => ScenarioParams::SmallDataScattering(parse_params(v)?),
        Scenario::LsApprox => ScenarioParams::LsApprox(parse_params(v)?),
        Scenario::EuclideanApprox => ScenarioParams::EuclideanApprox(parse_params(v)?),
        Scenario::ResonanceCombinatorics => ScenarioParams::ResonanceCombinatorics(parse_params(v)?),
        Scenario::StrichartzProbe => ScenarioParams::StrichartzProbe(parse_params(v)?),
        Scenario::MorawetzCheck => ScenarioParams::MorawetzCheck(parse_params(v)?),
        Scenario::ResonantSmalldata => ScenarioParams::ResonantSmalldata(parse_params(v)?),
    };
    validate_params(&params)?;
    Ok(ExperimentConfig {
        scenario: raw.scenario,
        grid: raw.grid,
        seed: raw.seed,
        output_dir: raw.output_dir,
        params,
        hash: hex::encode(Sha256::digest(text.as_bytes())),
    })
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(path, format!("must be > 0, got {v}")))
    }
}

fn nonempty<T>(path: &str, v: &[T]) -> Result<(), ConfigError> {
    if v.is_empty() {
        Err(ConfigError::new(path, "must not be empty"))
    } else {
        Ok(())
    }
}

fn packet(prefix: &str, d: &PacketParams) -> Result<(), ConfigError> {
    positive(&format!("{prefix}.sigma"), d.sigma)?;
    if !(d.h1_norm >= 0.0 && d.h1_norm.is_finite()) {
        return Err(ConfigError::new(format!("{prefix}.h1_norm"), format!("must be >= 0, got {}", d.h1_norm)));
    }
    Ok(())
}

fn validate_params(p: &ScenarioParams) -> Result<(), ConfigError> {
    match p {
        ScenarioParams::Conservation(c) => {
            positive("params.t_final", c.t_final)?;
            if let Some(s) = &c.symmetry {
                positive("params.symmetry.t_final", s.t_final)?;
                positive("params.symmetry.dt", s.dt)?;
                if crate::evolution::symmetry::check_power_of_two(s.lambda).is_err() {
                    return Err(ConfigError::new("params.symmetry.lambda", format!("must be a power of two, got {}", s.lambda)));
                }
            }
            packet("params.data", &c.data)
        }
        ScenarioParams::SmallDataScattering(c) => {
            packet("params.data", &c.data)?;
            nonempty("params.gap_times", &c.gap_times)?;
            nonempty("params.z_horizons", &c.z_horizons)?;
            positive("params.sample_every", c.sample_every)
        }
        ScenarioParams::ResonantSmalldata(c) => {
            positive("params.box_side", c.box_side)?;
            positive("params.dt", c.dt)?;
            positive("params.sigma", c.sigma)?;
            positive("params.e_ls", c.e_ls)?;
            if c.trunc < 0 {
                return Err(ConfigError::new("params.trunc", format!("must be >= 0, got {}", c.trunc)));
            }
            nonempty("params.gap_times", &c.gap_times)?;
            nonempty("params.w_horizons", &c.w_horizons)
        }
        ScenarioParams::LsApprox(c) => {
            positive("params.sigma", c.sigma)?;
            positive("params.t0", c.t0)?;
            nonempty("params.ms", &c.ms)?;
            for (i, m) in c.ms.iter().enumerate() {
                if crate::profiles::large_scale::check_large_scale(*m).is_err() {
                    return Err(ConfigError::new(format!("params.ms.{i}"), format!("M must be a power of two in (0, 1], got {m}")));
                }
            }
            Ok(())
        }
        ScenarioParams::EuclideanApprox(c) => {
            positive("params.sigma", c.sigma)?;
            positive("params.r", c.r)?;
            positive("params.t0", c.t0)?;
            positive("params.dt", c.dt)?;
            nonempty("params.ns", &c.ns)
        }
        ScenarioParams::ResonanceCombinatorics(c) => {
            if c.jmax < 0 || c.trunc < c.jmax {
                return Err(ConfigError::new("params.trunc", format!("need 0 <= jmax <= trunc, got jmax {} trunc {}", c.jmax, c.trunc)));
            }
            nonempty("params.weight_truncs", &c.weight_truncs)?;
            if c.weight_truncs.iter().any(|&t| t < c.weight_jmax) {
                return Err(ConfigError::new("params.weight_truncs", "every truncation must be >= weight_jmax"));
            }
            Ok(())
        }
        ScenarioParams::StrichartzProbe(c) => {
            if !(c.p > 10.0 / 3.0) {
                return Err(ConfigError::new("params.p", format!("p must exceed 10/3, got {}", c.p)));
            }
            nonempty("params.ns", &c.ns)?;
            nonempty("params.calibration_ns", &c.calibration_ns)?;
            if c.sample_count == 0 {
                return Err(ConfigError::new("params.sample_count", "must be >= 1"));
            }
            Ok(())
        }
        ScenarioParams::MorawetzCheck(c) => {
            packet("params.data", &c.data)?;
            positive("params.t_final", c.t_final)?;
            positive("params.radius", c.radius)?;
            positive("params.residual_time", c.residual_time)
        }
    }
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}
