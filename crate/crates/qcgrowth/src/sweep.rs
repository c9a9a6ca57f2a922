//! Criterion-driven sweeps over a geometric radius grid.
//!
//! A sweep fixes a family, a weight, and a statement to monitor, then walks
//! the grid producing one [`GrowthReport`] per radius. The `envelope` column
//! is always the quadrature-backed `M(R) exp(-2pi/Lambda(R))`; the `ratio`
//! column is the statement's own monitored quantity, which for the plain
//! modulus envelope simply repeats the envelope.

use std::fmt;
use std::str::FromStr;

use crate::bounds::{
    envelope_floor, growth_envelope, iterated_log_ratio, mass_envelope, power_ratio,
    VerdictSource,
};
use crate::config::{ConfigError, RunConfig};
use crate::dilatation::CoefficientField;
use crate::error::{Error, Result};
use crate::geometry::{AnnulusSpec, CircleSpec};
use crate::quadrature::{annulus_integral, circle_average, QuadratureSettings};
use crate::report::GrowthReport;
use crate::weights::{normalization_integral, WeightSpec};

/// The statement a sweep monitors. CLI selector tokens are `lemma3`,
/// `lemma4`, `thm2`, `cor1`, and `cor2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// `M(R) exp(-2pi/Lambda(R))` stays away from zero.
    ModulusEnvelope,
    /// `M(R) exp(-(2pi/c) I(R)^{2-p})` stays away from zero, under the
    /// hypothesis that the annulus integral is at most `c I(R)^p`.
    MassEnvelope,
    /// `M(R) / (ln_N R)^gamma` stays away from zero, `gamma = 2pi/c`.
    IteratedLogPower,
    /// `M(R) / R^{2pi/c}` stays away from zero.
    RadialPower,
    /// `M(R) / R^{1/K}` stays away from zero, `K` an upper dilatation bound.
    CircleAveragePower,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::ModulusEnvelope,
        Criterion::MassEnvelope,
        Criterion::IteratedLogPower,
        Criterion::RadialPower,
        Criterion::CircleAveragePower,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Criterion::ModulusEnvelope => "lemma3",
            Criterion::MassEnvelope => "lemma4",
            Criterion::IteratedLogPower => "thm2",
            Criterion::RadialPower => "cor1",
            Criterion::CircleAveragePower => "cor2",
        }
    }

    /// Which report column the verdict for this statement reads.
    pub fn source(self) -> VerdictSource {
        match self {
            Criterion::ModulusEnvelope => VerdictSource::Envelope,
            _ => VerdictSource::Ratio,
        }
    }

    /// The statement selected by a config, defaulting to the plain modulus
    /// envelope when no `theorem` key is present.
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        match cfg.theorem.as_deref() {
            None => Ok(Criterion::ModulusEnvelope),
            Some(token) => token.parse(),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.token() == s)
            .ok_or_else(|| {
                ConfigError::UnknownName {
                    what: "theorem",
                    found: s.to_string(),
                    expected: "lemma3, lemma4, thm2, cor1, cor2",
                }
                .into()
            })
    }
}

/// Result of a sweep: the per-radius reports plus the constants the run
/// settled on.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub criterion: Criterion,
    pub reports: Vec<GrowthReport>,
    /// Indices of reports assembled from non-converged quadrature estimates.
    pub flagged: Vec<usize>,
    /// `c` fitted as the mean of `annulus integral / I(R)^p` over the grid;
    /// the hypothesis constant when no explicit `constant_c` is configured.
    pub fitted_c: Option<f64>,
    /// Ratio exponent the sweep used (`gamma`, `2pi/c`, or `1/K`).
    pub exponent: Option<f64>,
    pub source: VerdictSource,
    pub floor: Option<f64>,
}

/// Accepts a non-converged quadrature value as a flagged estimate instead of
/// aborting the sweep; every other error still aborts.
fn tolerate(result: Result<f64>, flagged: &mut bool) -> Result<f64> {
    match result {
        Ok(v) => Ok(v),
        Err(Error::NoConvergence { estimate, .. }) => {
            *flagged = true;
            Ok(estimate)
        }
        Err(e) => Err(e),
    }
}

/// The weight a statement integrates against. The power-scale statements pin
/// `1/t` and the iterated-log statement pins the canonical weight of the
/// configured depth; only the envelope statements honor a custom weight.
fn statement_weight(criterion: Criterion, cfg: &RunConfig) -> Result<WeightSpec> {
    match criterion {
        Criterion::ModulusEnvelope | Criterion::MassEnvelope => cfg.weight(),
        Criterion::IteratedLogPower => WeightSpec::canonical(cfg.weight_depth()),
        Criterion::RadialPower | Criterion::CircleAveragePower => Ok(WeightSpec::reciprocal()),
    }
}

/// Walks the configured radius grid and assembles one report per radius.
///
/// Rows whose quadrature did not converge are kept (built from the best
/// estimates) and listed in `flagged`; callers decide how loudly to fail.
pub fn run_sweep(cfg: &RunConfig, settings: &QuadratureSettings) -> Result<SweepOutcome> {
    let criterion = Criterion::from_config(cfg)?;
    let profile = cfg.profile()?;
    let field = CoefficientField::from_profile(profile);
    let weight = statement_weight(criterion, cfg)?;
    let grid = cfg.grid()?;
    let r0 = cfg.r0;
    let floor = match cfg.floor {
        Some(f) => Some(f),
        None => Some(envelope_floor(&profile, r0)?),
    };

    struct Row {
        radius: f64,
        max_modulus: f64,
        weight_mass: f64,
        annulus: f64,
        majorant: f64,
        envelope: f64,
        circle_avg: f64,
        flagged: bool,
    }

    let mut rows = Vec::with_capacity(grid.len());
    for &radius in &grid {
        let mut row_flagged = false;
        let annulus_spec = AnnulusSpec::new(field.center(), r0, radius)?;
        let max_modulus = profile.max_modulus(radius)?;
        let weight_mass = tolerate(
            normalization_integral(&weight, r0, radius, settings),
            &mut row_flagged,
        )?;
        let annulus = tolerate(
            annulus_integral(&field, &weight, &annulus_spec, settings),
            &mut row_flagged,
        )?;
        let majorant = annulus / (weight_mass * weight_mass);
        let envelope = match growth_envelope(max_modulus, majorant) {
            Ok(v) => v,
            Err(_) => {
                row_flagged = true;
                f64::NAN
            }
        };
        let circle_avg = if criterion == Criterion::CircleAveragePower {
            let circle = CircleSpec::new(field.center(), radius)?;
            tolerate(circle_average(&field, &circle, settings), &mut row_flagged)?
        } else {
            f64::NAN
        };
        rows.push(Row {
            radius,
            max_modulus,
            weight_mass,
            annulus,
            majorant,
            envelope,
            circle_avg,
            flagged: row_flagged,
        });
    }

    let hypothesis_p = match criterion {
        Criterion::MassEnvelope => cfg.exponent_p,
        _ => 1.0,
    };
    let fitted_c = {
        let sum: f64 = rows
            .iter()
            .map(|r| r.annulus / r.weight_mass.powf(hypothesis_p))
            .sum();
        let mean = sum / rows.len() as f64;
        (mean.is_finite() && mean > 0.0).then_some(mean)
    };
    let c = match cfg.constant_c {
        Some(c) => Some(c),
        None => fitted_c,
    };
    let need_c = matches!(
        criterion,
        Criterion::MassEnvelope | Criterion::IteratedLogPower | Criterion::RadialPower
    );
    if need_c && c.is_none() {
        return Err(Error::InvalidParameter {
            what: "hypothesis constant c",
            value: fitted_c.unwrap_or(f64::NAN),
        });
    }

    let exponent = match criterion {
        Criterion::ModulusEnvelope | Criterion::MassEnvelope => None,
        Criterion::IteratedLogPower | Criterion::RadialPower => {
            Some(std::f64::consts::TAU / c.unwrap())
        }
        Criterion::CircleAveragePower => {
            let k_bound = rows.iter().map(|r| r.circle_avg).fold(f64::NAN, f64::max);
            if !(k_bound.is_finite() && k_bound >= 1.0) {
                return Err(Error::InvalidDilatation { value: k_bound });
            }
            Some(1.0 / k_bound)
        }
    };

    let mut reports = Vec::with_capacity(rows.len());
    let mut flagged = Vec::new();
    for (index, row) in rows.iter().enumerate() {
        let ratio = match criterion {
            Criterion::ModulusEnvelope => row.envelope,
            Criterion::MassEnvelope => {
                mass_envelope(row.max_modulus, row.weight_mass, c.unwrap(), cfg.exponent_p)?
            }
            Criterion::IteratedLogPower => iterated_log_ratio(
                row.max_modulus,
                row.radius,
                cfg.weight_depth(),
                exponent.unwrap(),
            )?,
            Criterion::RadialPower | Criterion::CircleAveragePower => {
                power_ratio(row.max_modulus, row.radius, exponent.unwrap())?
            }
        };
        if row.flagged {
            flagged.push(index);
        }
        reports.push(GrowthReport {
            radius: row.radius,
            max_modulus: row.max_modulus,
            weight_mass: row.weight_mass,
            majorant: row.majorant,
            envelope: row.envelope,
            ratio,
            floor,
        });
    }

    Ok(SweepOutcome {
        criterion,
        reports,
        flagged,
        fitted_c,
        exponent,
        source: criterion.source(),
        floor,
    })
}
