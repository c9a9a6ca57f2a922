//! Growth envelopes, capacity bounds, the ring inequality, and liminf
//! verdicts.
//!
//! The chain this module implements, for a map with dilatation field `K` and
//! radial weight `psi` on the annulus `r0 < |z - z0| < R`:
//!
//! ```text
//! 4 pi / ln(area ratio)  <=  2 pi / ln(rho(R)/rho(r0))  <=  Lambda(R)
//! ```
//!
//! with `Lambda(R)` the weighted dilatation mass over the annulus divided by
//! the squared weight mass. A positive lower bound on `M(R) e^{-2pi/Lambda}`
//! along an expanding radius grid is the desk-scale form of the growth
//! theorems; [`liminf_verdict`] reduces a sweep to that statement.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dilatation::CoefficientField;
use crate::error::{Error, Result};
use crate::families::RadialProfile;
use crate::geometry::AnnulusSpec;
use crate::quadrature::{annulus_integral, weighted_annulus_integral, QuadratureSettings};
use crate::report::GrowthReport;
use crate::weights::{iterated_exp, iterated_log, normalization_integral, WeightSpec};

/// Verdicts treat `0.5 * floor` as the pass line when a theoretical floor is
/// known; without one, this absolute threshold separates quadrature noise
/// from genuine decay.
pub const VERDICT_ABSOLUTE_THRESHOLD: f64 = 1e-6;

/// A tail counts as decaying only once it has dropped three orders of
/// magnitude below the first grid value.
pub const VERDICT_DECAY_FACTOR: f64 = 1e-3;

/// Fraction of a known floor a tail minimum must reach to count as bounded.
pub const VERDICT_FLOOR_FACTOR: f64 = 0.5;

/// Fewest reports a verdict may be based on.
pub const VERDICT_MIN_REPORTS: usize = 8;

/// Relative slack when comparing the exact ring modulus against a quadrature
/// value of the right-hand side.
pub const RING_CHECK_RELATIVE_SLACK: f64 = 1e-8;

/// Test functions must integrate to at least `1 - ADMISSIBILITY_SLACK`;
/// the slack absorbs rounding in exactly normalized constructions.
pub const ADMISSIBILITY_SLACK: f64 = 1e-9;

/// `4 pi / ln(area_a / area_c)`: the capacity of a condenser with outer area
/// `area_a` and inner area `area_c` is at least this, with equality for
/// concentric round disks.
pub fn capacity_lower_bound(area_a: f64, area_c: f64) -> Result<f64> {
    if !(area_a.is_finite() && area_c.is_finite() && area_a > area_c && area_c > 0.0) {
        return Err(Error::DegenerateCondenser { area_a, area_c });
    }
    Ok(4.0 * PI / (area_a / area_c).ln())
}

/// `Lambda(R)`: the annulus integral of `K psi^2` divided by the squared
/// weight mass `I(R)^2`. This majorizes the modulus of the image ring.
pub fn modulus_majorant(
    field: &CoefficientField,
    weight: &WeightSpec,
    r0: f64,
    big_r: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let annulus = AnnulusSpec::new(field.center(), r0, big_r)?;
    let mass = normalization_integral(weight, r0, big_r, settings)?;
    let integral = annulus_integral(field, weight, &annulus, settings)?;
    Ok(integral / (mass * mass))
}

/// `M(R) exp(-2 pi / Lambda(R))`, the envelope whose liminf the growth
/// theorems keep positive.
pub fn growth_envelope(max_modulus: f64, majorant: f64) -> Result<f64> {
    if !(majorant.is_finite() && majorant > 0.0) {
        return Err(Error::InvalidParameter { what: "modulus majorant", value: majorant });
    }
    if !(max_modulus.is_finite() && max_modulus > 0.0) {
        return Err(Error::InvalidParameter { what: "max modulus", value: max_modulus });
    }
    Ok(max_modulus * (-TAU / majorant).exp())
}

/// The proven lower bound for [`growth_envelope`] on an exact family: the
/// radius of the image disk at `r0`, `sqrt(area(f B_{r0}) / pi)`.
pub fn envelope_floor(profile: &RadialProfile, r0: f64) -> Result<f64> {
    Ok((profile.image_area(r0)? / PI).sqrt())
}

/// `M(R) exp(-(2 pi / c) I(R)^{2-p})`: the envelope under the hypothesis that
/// the annulus integral is at most `c I(R)^p` with `p <= 2`.
pub fn mass_envelope(max_modulus: f64, weight_mass: f64, c: f64, p: f64) -> Result<f64> {
    if !(p.is_finite() && p <= 2.0) {
        return Err(Error::InvalidParameter { what: "hypothesis exponent p", value: p });
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter { what: "hypothesis constant c", value: c });
    }
    if !(weight_mass.is_finite() && weight_mass > 0.0) {
        return Err(Error::ZeroWeightMass { integral: weight_mass });
    }
    Ok(max_modulus * (-(TAU / c) * weight_mass.powf(2.0 - p)).exp())
}

/// `M(R) / (ln_depth R)^gamma`, the growth ratio on the iterated-log scale.
///
/// Needs `ln_depth R > 0`, that is `R` above the tower value `e_{depth-1}`.
pub fn iterated_log_ratio(max_modulus: f64, big_r: f64, depth: u32, gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter { what: "ratio exponent gamma", value: gamma });
    }
    let log = iterated_log(depth, big_r)?;
    if log <= 0.0 {
        let lo = if depth == 0 { 0.0 } else { iterated_exp(depth - 1)? };
        return Err(Error::OutOfDomain { what: "ratio radius", value: big_r, lo, hi: f64::INFINITY });
    }
    Ok(max_modulus / log.powf(gamma))
}

/// `M(R) / R^exponent`, the plain power-scale growth ratio.
pub fn power_ratio(max_modulus: f64, big_r: f64, exponent: f64) -> Result<f64> {
    if !(exponent.is_finite() && exponent > 0.0) {
        return Err(Error::InvalidParameter { what: "ratio exponent", value: exponent });
    }
    if !(big_r.is_finite() && big_r > 0.0) {
        return Err(Error::OutOfDomain { what: "ratio radius", value: big_r, lo: 0.0, hi: f64::INFINITY });
    }
    Ok(max_modulus / big_r.powf(exponent))
}

enum TestForm {
    Constant { value: f64 },
    /// `scale / t`; with `scale = 1/ln(hi/lo)` this is the extremal density.
    ScaledReciprocal { scale: f64 },
    /// Nonnegative piecewise-linear interpolation of `(t, value)` knots
    /// spanning the window.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

/// A nonnegative radial test density `eta` on a window `(lo, hi)`, the trial
/// object of the ring inequality. Admissible once `int eta >= 1`.
pub struct RadialTestFunction {
    lo: f64,
    hi: f64,
    form: TestForm,
}

fn check_window(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(Error::InvalidParameter { what: "test function window edge", value: lo });
    }
    Ok(())
}

impl RadialTestFunction {
    pub fn constant(lo: f64, hi: f64, value: f64) -> Result<Self> {
        check_window(lo, hi)?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidParameter { what: "test function value", value });
        }
        Ok(RadialTestFunction { lo, hi, form: TestForm::Constant { value } })
    }

    /// `eta(t) = 1 / (t ln(hi/lo))`: integrates to exactly 1 and minimizes
    /// `int K eta^2 dm` over admissible densities when `K` is constant.
    pub fn extremal(lo: f64, hi: f64) -> Result<Self> {
        check_window(lo, hi)?;
        let scale = 1.0 / (hi / lo).ln();
        Ok(RadialTestFunction { lo, hi, form: TestForm::ScaledReciprocal { scale } })
    }

    /// Piecewise-linear density through `knots`, whose abscissas must be
    /// strictly increasing and span exactly `[lo, hi]`.
    pub fn piecewise_linear(lo: f64, hi: f64, knots: Vec<(f64, f64)>) -> Result<Self> {
        check_window(lo, hi)?;
        if knots.len() < 2 || knots[0].0 != lo || knots[knots.len() - 1].0 != hi {
            return Err(Error::InvalidParameter {
                what: "test function knot span",
                value: knots.first().map(|k| k.0).unwrap_or(f64::NAN),
            });
        }
        for pair in knots.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::InvalidParameter { what: "test function knot order", value: pair[1].0 });
            }
        }
        for &(_, v) in &knots {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter { what: "test function value", value: v });
            }
        }
        Ok(RadialTestFunction { lo, hi, form: TestForm::PiecewiseLinear { knots } })
    }

    /// A random nonnegative piecewise-linear density with 4 to 16 knots,
    /// values drawn uniformly and rescaled so the integral is exactly 1,
    /// making the admissibility constraint tight.
    pub fn random_piecewise_linear<R: Rng>(lo: f64, hi: f64, rng: &mut R) -> Result<Self> {
        check_window(lo, hi)?;
        loop {
            let count: usize = rng.gen_range(4..=16);
            let mut ts = Vec::with_capacity(count);
            ts.push(lo);
            for _ in 0..count - 2 {
                ts.push(lo + (hi - lo) * rng.gen::<f64>());
            }
            ts.push(hi);
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            if ts.len() < 2 {
                continue;
            }
            let mut knots: Vec<(f64, f64)> = ts.into_iter().map(|t| (t, rng.gen::<f64>())).collect();
            let mass = trapezoid(&knots);
            if !(mass > 1e-12 * (hi - lo)) {
                continue;
            }
            for k in &mut knots {
                k.1 /= mass;
            }
            return Self::piecewise_linear(lo, hi, knots);
        }
    }

    pub fn window(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// `eta(t)`; zero outside the window.
    pub fn eval(&self, t: f64) -> f64 {
        if !(t >= self.lo && t <= self.hi) {
            return 0.0;
        }
        match &self.form {
            TestForm::Constant { value } => *value,
            TestForm::ScaledReciprocal { scale } => scale / t,
            TestForm::PiecewiseLinear { knots } => {
                let idx = match knots.binary_search_by(|k| k.0.total_cmp(&t)) {
                    Ok(i) => return knots[i].1,
                    Err(i) => i,
                };
                // In range because t lies within the knot span.
                let (t0, v0) = knots[idx - 1];
                let (t1, v1) = knots[idx];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// `int_lo^hi eta(t) dt` in closed form.
    pub fn integral(&self) -> f64 {
        match &self.form {
            TestForm::Constant { value } => value * (self.hi - self.lo),
            TestForm::ScaledReciprocal { scale } => scale * (self.hi / self.lo).ln(),
            TestForm::PiecewiseLinear { knots } => trapezoid(knots),
        }
    }

    fn seeds(&self, out: &mut Vec<f64>) {
        if let TestForm::PiecewiseLinear { knots } = &self.form {
            out.extend(knots.iter().map(|k| k.0).filter(|&t| t > self.lo && t < self.hi));
        }
    }
}

/// The deterministic trial battery for ring checks: the extremal density
/// first, then `count - 1` random piecewise-linear ones drawn from a fixed
/// cipher stream, so a (window, count, seed) triple always produces the same
/// batch.
pub fn seeded_test_densities(
    lo: f64,
    hi: f64,
    count: u32,
    seed: u64,
) -> Result<Vec<RadialTestFunction>> {
    use rand::SeedableRng;

    if count == 0 {
        return Err(Error::InvalidParameter { what: "test density count", value: 0.0 });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut etas = Vec::with_capacity(count as usize);
    etas.push(RadialTestFunction::extremal(lo, hi)?);
    for _ in 1..count {
        etas.push(RadialTestFunction::random_piecewise_linear(lo, hi, &mut rng)?);
    }
    Ok(etas)
}

fn trapezoid(knots: &[(f64, f64)]) -> f64 {
    knots
        .windows(2)
        .map(|pair| 0.5 * (pair[1].0 - pair[0].0) * (pair[0].1 + pair[1].1))
        .sum()
}

/// One trial of the ring inequality: the exact image-ring modulus against the
/// weighted dilatation integral of a test density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingCheckRow {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `ring_modulus(r1, r2) <= int_A K eta^2 dm` for every supplied test
/// density. Sub-admissible densities are rejected by index rather than
/// silently producing a vacuous row.
pub fn ring_inequality_check(
    profile: &RadialProfile,
    annulus: &AnnulusSpec,
    etas: &[RadialTestFunction],
    settings: &QuadratureSettings,
) -> Result<Vec<RingCheckRow>> {
    let lhs = profile.ring_modulus(annulus.r_inner(), annulus.r_outer())?;
    let field = CoefficientField::from_profile(*profile);
    let mut rows = Vec::with_capacity(etas.len());
    for (index, eta) in etas.iter().enumerate() {
        let mass = eta.integral();
        if !(mass >= 1.0 - ADMISSIBILITY_SLACK) {
            return Err(Error::Inadmissible { index, integral: mass });
        }
        let (lo, hi) = eta.window();
        if lo < annulus.r_inner() * (1.0 - 1e-12) || hi > annulus.r_outer() * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter { what: "test function window edge", value: lo });
        }
        let mut seeds = Vec::new();
        eta.seeds(&mut seeds);
        seeds.push(lo);
        seeds.push(hi);
        let rhs = weighted_annulus_integral(
            &field,
            &|t| {
                let e = eta.eval(t);
                Ok(e * e)
            },
            &seeds,
            annulus,
            settings,
        )?;
        rows.push(RingCheckRow { lhs, rhs, holds: lhs <= rhs * (1.0 + RING_CHECK_RELATIVE_SLACK) });
    }
    Ok(rows)
}

/// What a sweep's tail minimum certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    BoundedBelow,
    TendsToZero,
    Inconclusive,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::BoundedBelow => "bounded-below",
            VerdictKind::TendsToZero => "tends-to-zero",
            VerdictKind::Inconclusive => "inconclusive",
        })
    }
}

/// Which report column a verdict monitors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictSource {
    Envelope,
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub tail_min: f64,
    pub threshold: f64,
}

/// Estimates the liminf of the monitored column over the tail of an
/// increasing radius grid.
///
/// The tail is the last `ceil(tail_fraction * n)` reports. `bounded-below`
/// needs the tail minimum to clear the threshold (half the floor when one is
/// given, [`VERDICT_ABSOLUTE_THRESHOLD`] otherwise); `tends-to-zero`
/// additionally needs a non-increasing tail that has fallen well under the
/// first grid value; anything else is `inconclusive`.
pub fn liminf_verdict(
    reports: &[GrowthReport],
    tail_fraction: f64,
    floor: Option<f64>,
    source: VerdictSource,
) -> Result<Verdict> {
    if reports.len() < VERDICT_MIN_REPORTS {
        return Err(Error::InsufficientReports { count: reports.len(), needed: VERDICT_MIN_REPORTS });
    }
    if !(tail_fraction.is_finite() && 0.0 < tail_fraction && tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter { what: "tail fraction", value: tail_fraction });
    }
    if reports.windows(2).any(|w| !(w[1].radius > w[0].radius)) {
        return Err(Error::ReportsNotSorted);
    }
    if let Some(f) = floor {
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::InvalidParameter { what: "verdict floor", value: f });
        }
    }

    let series: Vec<f64> = reports
        .iter()
        .map(|r| match source {
            VerdictSource::Envelope => r.envelope,
            VerdictSource::Ratio => r.ratio,
        })
        .collect();
    let n = series.len();
    let tail_len = ((tail_fraction * n as f64).ceil() as usize).clamp(1, n);
    let tail = &series[n - tail_len..];
    let tail_min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = match floor {
        Some(f) => VERDICT_FLOOR_FACTOR * f,
        None => VERDICT_ABSOLUTE_THRESHOLD,
    };

    let kind = if tail_min >= threshold {
        VerdictKind::BoundedBelow
    } else {
        let non_increasing = tail.windows(2).all(|w| w[1] <= w[0]);
        if non_increasing && tail_min < VERDICT_DECAY_FACTOR * series[0] {
            VerdictKind::TendsToZero
        } else {
            VerdictKind::Inconclusive
        }
    };
    Ok(Verdict { kind, tail_min, threshold })
}
