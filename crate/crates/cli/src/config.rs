//! Run configuration: defaults, scenario presets, a flat `key = value`
//! file format that round-trips exactly, and field-by-field overrides.
//!
//! Precedence, lowest to highest: built-in defaults, a `scenario = N` key
//! inside the config file, the remaining file keys, the `--scenario` flag,
//! then individual command-line flags.

use eo_core::error::{Error, Result};
use eo_core::operators::Axis;
use eo_core::scanner::ScanOptions;
use eo_core::waves::{RealConvention, WaveParams, WaveSlice};
use serde::Serialize;

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Preset tag, kept for the echo; fields below are already resolved.
    pub scenario: Option<u32>,
    pub amplitude: f64,
    pub k1: f64,
    pub k2: f64,
    pub omega: f64,
    pub speed: f64,
    pub t_max: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub axis: Axis,
    pub convention: RealConvention,
    /// Frozen time for space slices and evaluation point on the time axis.
    pub t0: f64,
    /// Frozen radius for time slices and evaluation point on the space axis.
    pub r0: f64,
    pub i_max: usize,
    pub p_max: u32,
    pub n_list: Vec<i32>,
    pub epsilon: f64,
    pub quad_tol: f64,
    /// Relative threshold of the level comparison.
    pub theta: f64,
    /// Continuation step for the duplication command.
    pub dt: f64,
    /// Continuation series length.
    pub terms: usize,
    /// Term-comparison threshold of the duplication classifier.
    pub dup_epsilon: f64,
    /// Operator index range of the membership command.
    pub k_min: i32,
    pub k_max: i32,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = WaveParams::scenario(1).expect("preset 1 exists");
        RunConfig {
            scenario: None,
            amplitude: p.amplitude,
            k1: p.k1,
            k2: p.k2,
            omega: p.omega,
            speed: p.speed,
            t_max: p.t_max,
            r_min: p.r_min,
            r_max: p.r_max,
            axis: Axis::Time,
            convention: RealConvention::RealThenPower,
            t0: 0.0,
            r0: 2.0,
            i_max: 5,
            p_max: 1,
            n_list: vec![2],
            epsilon: 1e-10,
            quad_tol: 1e-9,
            theta: 1e-2,
            dt: 0.01,
            terms: 10,
            dup_epsilon: 1e-3,
            k_min: 0,
            k_max: 3,
        }
    }
}

impl RunConfig {
    /// Overwrites the wave-parameter fields from a named preset.
    pub fn apply_scenario(&mut self, which: u32) -> Result<()> {
        let p = WaveParams::scenario(which)?;
        self.scenario = Some(which);
        self.amplitude = p.amplitude;
        self.k1 = p.k1;
        self.k2 = p.k2;
        self.omega = p.omega;
        self.speed = p.speed;
        self.t_max = p.t_max;
        self.r_min = p.r_min;
        self.r_max = p.r_max;
        Ok(())
    }

    pub fn wave_params(&self) -> WaveParams {
        WaveParams {
            amplitude: self.amplitude,
            k1: self.k1,
            k2: self.k2,
            omega: self.omega,
            speed: self.speed,
            t_max: self.t_max,
            r_min: self.r_min,
            r_max: self.r_max,
        }
    }

    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            i_max: self.i_max,
            p_max: self.p_max,
            n_list: self.n_list.clone(),
            epsilon: self.epsilon,
            quad_tol: self.quad_tol,
        }
    }

    /// The configured axis slice of the wave family.
    pub fn slice(&self) -> Result<WaveSlice> {
        match self.axis {
            Axis::Time => WaveSlice::time_slice(self.wave_params(), self.r0, self.convention),
            Axis::Space => WaveSlice::space_slice(self.wave_params(), self.t0, self.convention),
        }
    }

    /// Scan interval along the configured axis.
    pub fn interval(&self) -> (f64, f64) {
        match self.axis {
            Axis::Time => (0.0, self.t_max),
            Axis::Space => (self.r_min, self.r_max),
        }
    }

    /// Evaluation point on the configured axis.
    pub fn point(&self) -> f64 {
        match self.axis {
            Axis::Time => self.t0,
            Axis::Space => self.r0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.wave_params().validate()?;
        self.scan_options().validate()?;
        self.slice()?;
        if !(0.0..=self.t_max).contains(&self.t0) {
            return Err(Error::InvalidConfig(format!(
                "t0 = {} outside the time box [0, {}]",
                self.t0, self.t_max
            )));
        }
        if !(self.r_min..=self.r_max).contains(&self.r0) {
            return Err(Error::InvalidConfig(format!(
                "r0 = {} outside the space box [{}, {}]",
                self.r0, self.r_min, self.r_max
            )));
        }
        if !self.theta.is_finite() || self.theta <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "theta must be positive, got {}",
                self.theta
            )));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.terms == 0 {
            return Err(Error::InvalidConfig("terms must be at least 1".into()));
        }
        if !self.dup_epsilon.is_finite() || self.dup_epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "dup_epsilon must be positive, got {}",
                self.dup_epsilon
            )));
        }
        if self.k_min < 0 || self.k_min > self.k_max {
            return Err(Error::InvalidConfig(format!(
                "operator index range needs 0 <= k_min <= k_max, got [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        Ok(())
    }
}

pub fn parse_axis(s: &str) -> Result<Axis> {
    match s {
        "time" => Ok(Axis::Time),
        "space" => Ok(Axis::Space),
        other => Err(Error::InvalidConfig(format!(
            "unknown axis {other:?} (expected time or space)"
        ))),
    }
}

pub fn parse_n_list(s: &str) -> Result<Vec<i32>> {
    s.split(',')
        .map(|part| {
            part.trim().parse::<i32>().map_err(|_| {
                Error::InvalidConfig(format!("bad n_list entry {:?}", part.trim()))
            })
        })
        .collect()
}

fn fmt_n_list(ns: &[i32]) -> String {
    ns.iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Serializes a configuration as flat `key = value` lines.
///
/// `parse_config(emit_config(cfg))` reconstructs `cfg` exactly: floats are
/// printed in round-trip-exact scientific notation.
pub fn emit_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    if let Some(s) = cfg.scenario {
        out.push_str(&format!("scenario = {s}\n"));
    }
    out.push_str(&format!("amplitude = {:e}\n", cfg.amplitude));
    out.push_str(&format!("k1 = {:e}\n", cfg.k1));
    out.push_str(&format!("k2 = {:e}\n", cfg.k2));
    out.push_str(&format!("omega = {:e}\n", cfg.omega));
    out.push_str(&format!("speed = {:e}\n", cfg.speed));
    out.push_str(&format!("t_max = {:e}\n", cfg.t_max));
    out.push_str(&format!("r_min = {:e}\n", cfg.r_min));
    out.push_str(&format!("r_max = {:e}\n", cfg.r_max));
    out.push_str(&format!("axis = {}\n", cfg.axis.as_str()));
    out.push_str(&format!("convention = {}\n", cfg.convention.as_str()));
    out.push_str(&format!("t0 = {:e}\n", cfg.t0));
    out.push_str(&format!("r0 = {:e}\n", cfg.r0));
    out.push_str(&format!("i_max = {}\n", cfg.i_max));
    out.push_str(&format!("p_max = {}\n", cfg.p_max));
    out.push_str(&format!("n_list = {}\n", fmt_n_list(&cfg.n_list)));
    out.push_str(&format!("epsilon = {:e}\n", cfg.epsilon));
    out.push_str(&format!("quad_tol = {:e}\n", cfg.quad_tol));
    out.push_str(&format!("theta = {:e}\n", cfg.theta));
    out.push_str(&format!("dt = {:e}\n", cfg.dt));
    out.push_str(&format!("terms = {}\n", cfg.terms));
    out.push_str(&format!("dup_epsilon = {:e}\n", cfg.dup_epsilon));
    out.push_str(&format!("k_min = {}\n", cfg.k_min));
    out.push_str(&format!("k_max = {}\n", cfg.k_max));
    out
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::InvalidConfig(format!("bad value {value:?} for config key `{key}`")))
}

/// Parses flat `key = value` text into a configuration.
///
/// Blank lines and `#` comments are ignored. A `scenario` key applies its
/// preset before any other key, regardless of position. Unknown keys are
/// rejected by name.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let entries: Vec<(&str, &str)> = text
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(|line| {
            line.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| {
                    Error::InvalidConfig(format!("malformed config line {line:?} (expected key = value)"))
                })
        })
        .collect::<Result<_>>()?;

    for &(key, value) in &entries {
        if key == "scenario" {
            cfg.apply_scenario(parse_num::<u32>(key, value)?)?;
        }
    }
    for &(key, value) in &entries {
        match key {
            "scenario" => {}
            "amplitude" => cfg.amplitude = parse_num(key, value)?,
            "k1" => cfg.k1 = parse_num(key, value)?,
            "k2" => cfg.k2 = parse_num(key, value)?,
            "omega" => cfg.omega = parse_num(key, value)?,
            "speed" => cfg.speed = parse_num(key, value)?,
            "t_max" => cfg.t_max = parse_num(key, value)?,
            "r_min" => cfg.r_min = parse_num(key, value)?,
            "r_max" => cfg.r_max = parse_num(key, value)?,
            "axis" => cfg.axis = parse_axis(value)?,
            "convention" => cfg.convention = value.parse()?,
            "t0" => cfg.t0 = parse_num(key, value)?,
            "r0" => cfg.r0 = parse_num(key, value)?,
            "i_max" => cfg.i_max = parse_num(key, value)?,
            "p_max" => cfg.p_max = parse_num(key, value)?,
            "n_list" => cfg.n_list = parse_n_list(value)?,
            "epsilon" => cfg.epsilon = parse_num(key, value)?,
            "quad_tol" => cfg.quad_tol = parse_num(key, value)?,
            "theta" => cfg.theta = parse_num(key, value)?,
            "dt" => cfg.dt = parse_num(key, value)?,
            "terms" => cfg.terms = parse_num(key, value)?,
            "dup_epsilon" => cfg.dup_epsilon = parse_num(key, value)?,
            "k_min" => cfg.k_min = parse_num(key, value)?,
            "k_max" => cfg.k_max = parse_num(key, value)?,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown config key `{other}`"
                )))
            }
        }
    }
    Ok(cfg)
}

/// Per-field command-line overrides; unset fields fall through to the
/// config file (if given) and the built-in defaults.
#[derive(Debug, Clone, clap::Args)]
pub struct Overrides {
    /// Flat `key = value` config file to start from.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Wave-parameter preset (1 or 2); wins over the file's wave fields.
    #[arg(long, global = true)]
    pub scenario: Option<u32>,
    /// Wave amplitude A.
    #[arg(long, global = true)]
    pub amplitude: Option<f64>,
    /// Oscillatory space wavenumber.
    #[arg(long, global = true)]
    pub k1: Option<f64>,
    /// Exponential space rate.
    #[arg(long, global = true)]
    pub k2: Option<f64>,
    /// Angular frequency.
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Propagation speed.
    #[arg(long, global = true)]
    pub speed: Option<f64>,
    /// Upper end of the time box.
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Lower end of the space box.
    #[arg(long, global = true)]
    pub r_min: Option<f64>,
    /// Upper end of the space box.
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    /// Slice axis: time or space.
    #[arg(long, global = true)]
    pub axis: Option<String>,
    /// Real-part convention: real-then-power or power-then-real.
    #[arg(long, global = true)]
    pub convention: Option<String>,
    /// Frozen time for space slices.
    #[arg(long, global = true)]
    pub t0: Option<f64>,
    /// Frozen radius for time slices.
    #[arg(long, global = true)]
    pub r0: Option<f64>,
    /// Highest derivative order scanned.
    #[arg(long, global = true)]
    pub i_max: Option<usize>,
    /// Highest chain level scanned.
    #[arg(long, global = true)]
    pub p_max: Option<u32>,
    /// Comma-separated powers for the suprema columns, e.g. 2,3,5.
    #[arg(long, global = true)]
    pub n_list: Option<String>,
    /// Emptiness threshold for scan cells.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    /// Relative threshold of the level comparison.
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Continuation step of the duplicate command.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Continuation series length.
    #[arg(long, global = true)]
    pub terms: Option<usize>,
    /// Term-comparison threshold of the duplication classifier.
    #[arg(long, global = true)]
    pub dup_epsilon: Option<f64>,
    /// Lowest operator index of the membership scan.
    #[arg(long, global = true)]
    pub k_min: Option<i32>,
    /// Highest operator index of the membership scan.
    #[arg(long, global = true)]
    pub k_max: Option<i32>,
    /// Output directory (default: EOSCAN_OUTDIR, else the working directory).
    #[arg(long, global = true)]
    pub out_dir: Option<std::path::PathBuf>,
}

/// Builds the effective configuration: defaults, then the config file, then
/// the `--scenario` preset, then the individual flags; validates the result.
pub fn resolve(ov: &Overrides) -> Result<RunConfig> {
    let mut cfg = match &ov.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidConfig(format!(
                    "cannot read config file {}: {e}",
                    path.display()
                ))
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = ov.scenario {
        cfg.apply_scenario(s)?;
    }
    if let Some(v) = ov.amplitude {
        cfg.amplitude = v;
    }
    if let Some(v) = ov.k1 {
        cfg.k1 = v;
    }
    if let Some(v) = ov.k2 {
        cfg.k2 = v;
    }
    if let Some(v) = ov.omega {
        cfg.omega = v;
    }
    if let Some(v) = ov.speed {
        cfg.speed = v;
    }
    if let Some(v) = ov.t_max {
        cfg.t_max = v;
    }
    if let Some(v) = ov.r_min {
        cfg.r_min = v;
    }
    if let Some(v) = ov.r_max {
        cfg.r_max = v;
    }
    if let Some(s) = &ov.axis {
        cfg.axis = parse_axis(s)?;
    }
    if let Some(s) = &ov.convention {
        cfg.convention = s.parse()?;
    }
    if let Some(v) = ov.t0 {
        cfg.t0 = v;
    }
    if let Some(v) = ov.r0 {
        cfg.r0 = v;
    }
    if let Some(v) = ov.i_max {
        cfg.i_max = v;
    }
    if let Some(v) = ov.p_max {
        cfg.p_max = v;
    }
    if let Some(s) = &ov.n_list {
        cfg.n_list = parse_n_list(s)?;
    }
    if let Some(v) = ov.epsilon {
        cfg.epsilon = v;
    }
    if let Some(v) = ov.quad_tol {
        cfg.quad_tol = v;
    }
    if let Some(v) = ov.theta {
        cfg.theta = v;
    }
    if let Some(v) = ov.dt {
        cfg.dt = v;
    }
    if let Some(v) = ov.terms {
        cfg.terms = v;
    }
    if let Some(v) = ov.dup_epsilon {
        cfg.dup_epsilon = v;
    }
    if let Some(v) = ov.k_min {
        cfg.k_min = v;
    }
    if let Some(v) = ov.k_max {
        cfg.k_max = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emit_parse_round_trip_on_defaults() {
        let cfg = RunConfig::default();
        let parsed = parse_config(&emit_config(&cfg)).unwrap();
        assert_eq!(parsed, cfg);
    }

    #[test]
    fn emit_parse_round_trip_with_preset_and_overrides() {
        let mut cfg = RunConfig::default();
        cfg.apply_scenario(2).unwrap();
        cfg.axis = Axis::Space;
        cfg.n_list = vec![2, 3, 5];
        cfg.epsilon = 2.5e-11;
        cfg.i_max = 4;
        let parsed = parse_config(&emit_config(&cfg)).unwrap();
        assert_eq!(parsed, cfg);
    }

    #[test]
    fn unknown_keys_are_named_in_the_error() {
        let err = parse_config("wobble = 3\n").unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("wobble"), "{err}");
    }

    #[test]
    fn scenario_key_applies_before_other_keys() {
        // omega appears before scenario in the file, but still wins
        let cfg = parse_config("omega = 7\nscenario = 2\n").unwrap();
        assert_eq!(cfg.omega, 7.0);
        assert_eq!(cfg.k1, 1e-3);
        assert_eq!(cfg.scenario, Some(2));
    }

    #[test]
    fn bad_values_name_the_key() {
        let err = parse_config("epsilon = tiny\n").unwrap_err();
        assert!(err.to_string().contains("epsilon"), "{err}");
        let err = parse_config("axis = sideways\n").unwrap_err();
        assert!(err.to_string().contains("sideways"), "{err}");
    }

    #[test]
    fn validation_rejects_broken_geometry() {
        let cfg = RunConfig {
            r0: 500.0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            t0: -1.0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            k_min: 2,
            k_max: 1,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
