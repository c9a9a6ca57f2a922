//! Exactly solvable radial stretch maps.
//!
//! Each profile is a strictly increasing `rho: [0, inf) -> [0, inf)` with
//! `rho(0) = 0`, defining the plane homeomorphism
//!
//! ```text
//! f(z) = rho(|z - z0|) * (z - z0)/|z - z0|
//! ```
//!
//! For these maps every quantity the bound machinery estimates numerically is
//! available in closed form: the coefficient, the dilatation, the maximal
//! modulus on a circle, image areas, and image ring moduli. The catalog is the
//! ground truth the verification suite measures the quadrature against.

use std::f64::consts::{E, PI};

use crate::dilatation::BeltramiValue;
use crate::error::{Error, Result};
use crate::geometry::PlanePoint;

#[derive(Debug, Clone, Copy, PartialEq)]
enum ProfileKind {
    /// `rho(r) = r`, the conformal reference map.
    Identity,
    /// `rho(r) = r^alpha` with `alpha` in `(0, 1]`; constant dilatation `1/alpha`.
    Power { alpha: f64 },
    /// `rho(r) = r/e` up to `r = e`, then `(ln r)^gamma`; dilatation grows
    /// like `ln r` in the tail, so it is unbounded yet integrable.
    LogStretch { gamma: f64 },
}

/// A radial stretch profile together with its center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    kind: ProfileKind,
    center: PlanePoint,
}

fn unit_interval_param(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 && value <= 1.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { what, value })
    }
}

impl RadialProfile {
    pub fn identity(center: PlanePoint) -> Self {
        RadialProfile { kind: ProfileKind::Identity, center }
    }

    /// `rho(r) = r^alpha`, `alpha` in `(0, 1]`.
    pub fn power(center: PlanePoint, alpha: f64) -> Result<Self> {
        let alpha = unit_interval_param("power exponent alpha", alpha)?;
        Ok(RadialProfile { kind: ProfileKind::Power { alpha }, center })
    }

    /// `rho(r) = r/e` for `r <= e`, `(ln r)^gamma` beyond, `gamma` in `(0, 1]`.
    pub fn log_stretch(center: PlanePoint, gamma: f64) -> Result<Self> {
        let gamma = unit_interval_param("log-stretch exponent gamma", gamma)?;
        Ok(RadialProfile { kind: ProfileKind::LogStretch { gamma }, center })
    }

    pub fn center(&self) -> PlanePoint {
        self.center
    }

    /// Catalog name, matching the CLI family selector.
    pub fn name(&self) -> &'static str {
        match self.kind {
            ProfileKind::Identity => "identity",
            ProfileKind::Power { .. } => "power",
            ProfileKind::LogStretch { .. } => "log-stretch",
        }
    }

    /// `rho(r)` for `r >= 0`.
    pub fn value(&self, r: f64) -> Result<f64> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::OutOfDomain { what: "radius", value: r, lo: 0.0, hi: f64::INFINITY });
        }
        Ok(match self.kind {
            ProfileKind::Identity => r,
            ProfileKind::Power { alpha } => r.powf(alpha),
            ProfileKind::LogStretch { gamma } => {
                if r <= E {
                    r / E
                } else {
                    r.ln().powf(gamma)
                }
            }
        })
    }

    /// The coefficient of the stretch at `z`,
    /// `mu(z) = (w/conj w) * (r rho' - rho)/(r rho' + rho)` with `w = z - center`.
    ///
    /// At the one non-smooth radius of the log-stretch the tail derivative is
    /// used; the circle has measure zero in every integral downstream.
    pub fn mu_at(&self, z: &PlanePoint) -> Result<BeltramiValue> {
        let w_re = z.re - self.center.re;
        let w_im = z.im - self.center.im;
        let r2 = w_re * w_re + w_im * w_im;
        if r2 == 0.0 {
            return Err(Error::UndefinedAtCenter);
        }
        let r = r2.sqrt();
        let m = match self.kind {
            ProfileKind::Identity => 0.0,
            ProfileKind::Power { alpha } => (alpha - 1.0) / (alpha + 1.0),
            ProfileKind::LogStretch { gamma } => {
                if r < E {
                    0.0
                } else {
                    let l = r.ln();
                    (gamma - l) / (gamma + l)
                }
            }
        };
        // w/conj(w) = w^2 / |w|^2.
        BeltramiValue::new(m * (w_re * w_re - w_im * w_im) / r2, m * (2.0 * w_re * w_im) / r2)
    }

    /// Dilatation at distance `r > 0` from the center: `max(r rho'/rho, rho/(r rho'))`.
    ///
    /// The log-stretch takes its right limit `1/gamma` at the splice radius.
    pub fn dilatation_at_radius(&self, r: f64) -> Result<f64> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::OutOfDomain { what: "radius", value: r, lo: 0.0, hi: f64::INFINITY });
        }
        Ok(match self.kind {
            ProfileKind::Identity => 1.0,
            ProfileKind::Power { alpha } => 1.0 / alpha,
            ProfileKind::LogStretch { gamma } => {
                if r < E {
                    1.0
                } else {
                    r.ln() / gamma
                }
            }
        })
    }

    /// `max_{|z - center| = r} |f(z) - f(center)|`, which for a radial stretch
    /// is `rho(r)` at every boundary point.
    pub fn max_modulus(&self, r: f64) -> Result<f64> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::OutOfDomain { what: "radius", value: r, lo: 0.0, hi: f64::INFINITY });
        }
        self.value(r)
    }

    /// Area of the image of the disk of radius `r`: `pi * rho(r)^2` exactly.
    pub fn image_area(&self, r: f64) -> Result<f64> {
        Ok(PI * self.max_modulus(r)?.powi(2))
    }

    /// Modulus of the curve family connecting the two boundary circles of the
    /// image ring: the image of the round ring `(r1, r2)` is the round ring
    /// with radii `rho(r1) < rho(r2)`, giving `2 pi / ln(rho(r2)/rho(r1))`.
    pub fn ring_modulus(&self, r1: f64, r2: f64) -> Result<f64> {
        if !(r1.is_finite() && r1 > 0.0) {
            return Err(Error::OutOfDomain { what: "inner radius", value: r1, lo: 0.0, hi: f64::INFINITY });
        }
        if !(r2.is_finite() && r2 > r1) {
            return Err(Error::OutOfDomain { what: "outer radius", value: r2, lo: r1, hi: f64::INFINITY });
        }
        Ok(2.0 * PI / (self.value(r2)? / self.value(r1)?).ln())
    }

    /// Radii in `(lo, hi)` where `rho` changes formula.
    pub(crate) fn breakpoints_within(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        if let ProfileKind::LogStretch { .. } = self.kind {
            if lo < E && E < hi {
                out.push(E);
            }
        }
    }
}
