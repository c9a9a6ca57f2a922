//! Flat JSON run configuration shared by every CLI verb.
//!
//! One document drives a whole run: family and weight selection, the
//! geometric radius grid, quadrature tolerances, and output routing. Keys
//! are all top-level and unknown keys are rejected, so a typo fails loudly
//! instead of silently falling back to a default.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::families::RadialProfile;
use crate::geometry::PlanePoint;
use crate::quadrature::QuadratureSettings;
use crate::table::RadialTable;
use crate::weights::WeightSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("config is not valid JSON: {message}")]
    Json { message: String },

    #[error("config key {key:?} is required here")]
    MissingKey { key: &'static str },

    #[error("unknown {what} {found:?}; expected one of: {expected}")]
    UnknownName {
        what: &'static str,
        found: String,
        expected: &'static str,
    },

    #[error("config key {what:?} must be {requirement}, got {value}")]
    Value {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("grid count must be at least {needed}, got {count}")]
    GridTooSmall { count: usize, needed: usize },

    #[error("cannot read {what} file {path:?}: {message}")]
    File {
        what: &'static str,
        path: String,
        message: String,
    },
}

fn missing(key: &'static str) -> Error {
    ConfigError::MissingKey { key }.into()
}

fn default_r0() -> f64 {
    1.0
}

fn default_exponent_p() -> f64 {
    1.0
}

fn default_tail_fraction() -> f64 {
    0.25
}

/// Parsed run configuration. Grid and family keys are optional at parse
/// time because not every verb needs them; the accessors demand what the
/// verb actually uses.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Catalog family name: `identity`, `power`, or `log-stretch`.
    pub family: Option<String>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(default)]
    pub z0_re: f64,
    #[serde(default)]
    pub z0_im: f64,
    #[serde(default = "default_r0")]
    pub r0: f64,
    /// Weight kind: `reciprocal` (default), `canonical`, `constant`, or
    /// `tabulated`.
    pub weight: Option<String>,
    pub weight_depth: Option<u32>,
    pub weight_value: Option<f64>,
    /// Path to a radius,value CSV; required when `weight` is `tabulated`.
    pub weight_table: Option<String>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub count: Option<usize>,
    /// Statement selector: `lemma3`, `lemma4`, `thm2`, `cor1`, or `cor2`.
    pub theorem: Option<String>,
    #[serde(default = "default_exponent_p")]
    pub exponent_p: f64,
    pub constant_c: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<u32>,
    pub angular_nodes: Option<u32>,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    pub floor: Option<f64>,
    /// Path to a precomputed report CSV; verdicts run on it instead of a
    /// fresh sweep.
    pub reports_csv: Option<String>,
    pub ring_r1: Option<f64>,
    pub ring_r2: Option<f64>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<u32>,
}

/// Fewest radii a sweep grid may have.
pub const MIN_GRID_COUNT: usize = 8;

impl RunConfig {
    /// Parses and validates a configuration document. Performs no file IO;
    /// referenced files are only opened by the accessor that consumes them.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| ConfigError::Json { message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        self.center()?;
        require_positive("r0", self.r0)?;
        if self.family.is_some() {
            self.profile()?;
        }
        match self.weight.as_deref() {
            None | Some("tabulated") => {
                if self.weight.is_some() && self.weight_table.is_none() {
                    return Err(missing("weight_table"));
                }
            }
            Some(_) => {
                self.pure_weight()?;
            }
        }
        if self.r_min.is_some() || self.r_max.is_some() || self.count.is_some() {
            self.grid()?;
        }
        if !(self.tail_fraction.is_finite() && 0.0 < self.tail_fraction && self.tail_fraction <= 1.0)
        {
            return Err(ConfigError::Value {
                what: "tail_fraction",
                requirement: "within (0, 1]",
                value: self.tail_fraction,
            }
            .into());
        }
        if !(self.exponent_p.is_finite() && self.exponent_p <= 2.0) {
            return Err(ConfigError::Value {
                what: "exponent_p",
                requirement: "a finite value <= 2",
                value: self.exponent_p,
            }
            .into());
        }
        if let Some(c) = self.constant_c {
            require_positive("constant_c", c)?;
        }
        if let Some(f) = self.floor {
            require_positive("floor", f)?;
        }
        self.settings()?;
        if self.ring_r1.is_some() || self.ring_r2.is_some() {
            let r1 = self.ring_r1.unwrap_or(self.r0);
            let r2 = self.ring_r2.ok_or(missing("ring_r2"))?;
            require_positive("ring_r1", r1)?;
            if !(r2.is_finite() && r2 > r1) {
                return Err(ConfigError::Value {
                    what: "ring_r2",
                    requirement: "finite and greater than ring_r1",
                    value: r2,
                }
                .into());
            }
        }
        if let Some(format) = self.format.as_deref() {
            if format != "csv" && format != "json" {
                return Err(ConfigError::UnknownName {
                    what: "format",
                    found: format.to_string(),
                    expected: "csv, json",
                }
                .into());
            }
        }
        Ok(())
    }

    pub fn center(&self) -> Result<PlanePoint> {
        PlanePoint::new(self.z0_re, self.z0_im)
    }

    pub fn profile(&self) -> Result<RadialProfile> {
        let family = self.family.as_deref().ok_or_else(|| missing("family"))?;
        let center = self.center()?;
        match family {
            "identity" => Ok(RadialProfile::identity(center)),
            "power" => RadialProfile::power(center, self.alpha.ok_or_else(|| missing("alpha"))?),
            "log-stretch" => {
                RadialProfile::log_stretch(center, self.gamma.ok_or_else(|| missing("gamma"))?)
            }
            other => Err(ConfigError::UnknownName {
                what: "family",
                found: other.to_string(),
                expected: "identity, power, log-stretch",
            }
            .into()),
        }
    }

    /// Iterated-log depth for canonical weights; defaults to 1, the first
    /// depth where the weight differs from `1/t`.
    pub fn weight_depth(&self) -> u32 {
        self.weight_depth.unwrap_or(1)
    }

    fn pure_weight(&self) -> Result<WeightSpec> {
        match self.weight.as_deref().unwrap_or("reciprocal") {
            "reciprocal" => Ok(WeightSpec::reciprocal()),
            "canonical" => WeightSpec::canonical(self.weight_depth()),
            "constant" => {
                WeightSpec::constant(self.weight_value.ok_or_else(|| missing("weight_value"))?)
            }
            "tabulated" => Err(missing("weight_table")),
            other => Err(ConfigError::UnknownName {
                what: "weight",
                found: other.to_string(),
                expected: "canonical, reciprocal, constant, tabulated",
            }
            .into()),
        }
    }

    /// Builds the configured weight. Reads the table file when the weight is
    /// `tabulated`; every other kind is constructed in memory.
    pub fn weight(&self) -> Result<WeightSpec> {
        if self.weight.as_deref() == Some("tabulated") {
            let path = self
                .weight_table
                .as_deref()
                .ok_or_else(|| missing("weight_table"))?;
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
                what: "weight table",
                path: path.to_string(),
                message: e.to_string(),
            })?;
            return WeightSpec::tabulated(RadialTable::parse_str(&text)?);
        }
        self.pure_weight()
    }

    fn check_grid(&self) -> Result<(f64, f64, usize)> {
        let r_min = self.r_min.ok_or_else(|| missing("r_min"))?;
        let r_max = self.r_max.ok_or_else(|| missing("r_max"))?;
        let count = self.count.ok_or_else(|| missing("count"))?;
        if !(r_min.is_finite() && r_min > self.r0) {
            return Err(ConfigError::Value {
                what: "r_min",
                requirement: "finite and greater than r0",
                value: r_min,
            }
            .into());
        }
        if !(r_max.is_finite() && r_max > r_min) {
            return Err(ConfigError::Value {
                what: "r_max",
                requirement: "finite and greater than r_min",
                value: r_max,
            }
            .into());
        }
        if count < MIN_GRID_COUNT {
            return Err(ConfigError::GridTooSmall {
                count,
                needed: MIN_GRID_COUNT,
            }
            .into());
        }
        Ok((r_min, r_max, count))
    }

    /// The geometric radius grid `r_min * (r_max/r_min)^(i/(count-1))`,
    /// endpoints exact.
    pub fn grid(&self) -> Result<Vec<f64>> {
        let (r_min, r_max, count) = self.check_grid()?;
        let ratio = r_max / r_min;
        let points: Vec<f64> = (0..count)
            .map(|i| {
                if i == count - 1 {
                    r_max
                } else {
                    r_min * ratio.powf(i as f64 / (count - 1) as f64)
                }
            })
            .collect();
        // A window too narrow (or too wide) for the requested count collapses
        // neighboring radii in floating point; the sweep needs them distinct.
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ConfigError::Value {
                what: "count",
                requirement: "resolvable into distinct radii between r_min and r_max",
                value: count as f64,
            }
            .into());
        }
        Ok(points)
    }

    pub fn settings(&self) -> Result<QuadratureSettings> {
        let mut settings = QuadratureSettings::default();
        if let Some(v) = self.rel_tol {
            settings.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            settings.abs_tol = v;
        }
        if let Some(v) = self.max_subdivisions {
            settings.max_subdivisions = v;
        }
        if let Some(v) = self.angular_nodes {
            settings.angular_nodes_initial = v;
        }
        settings.validate()?;
        Ok(settings)
    }

    /// Radial window for ring-inequality trials: explicit `ring_r1`/`ring_r2`
    /// when given, otherwise `r0` to `r_max`.
    pub fn ring_window(&self) -> Result<(f64, f64)> {
        let r1 = self.ring_r1.unwrap_or(self.r0);
        let r2 = match (self.ring_r2, self.r_max) {
            (Some(r2), _) => r2,
            (None, Some(r_max)) => r_max,
            (None, None) => return Err(missing("ring_r2")),
        };
        if !(r1.is_finite() && r1 > 0.0 && r2.is_finite() && r2 > r1) {
            return Err(ConfigError::Value {
                what: "ring_r2",
                requirement: "finite and greater than ring_r1",
                value: r2,
            }
            .into());
        }
        Ok((r1, r2))
    }
}

fn require_positive(what: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(ConfigError::Value {
            what,
            requirement: "finite and positive",
            value,
        }
        .into());
    }
    Ok(())
}
