//! Beltrami coefficients, the dilatation, and evaluable coefficient fields.
//!
//! A measurable coefficient `mu` with `|mu| < 1` prescribes the local distortion
//! of a mapping; its dilatation
//!
//! ```text
//! K = (1 + |mu|) / (1 - |mu|) >= 1
//! ```
//!
//! is the quantity every bound in this crate integrates. [`CoefficientField`]
//! packages the three ways a dilatation field enters: a closed-form radial
//! family, a table of `(radius, K)` samples, or a constant.

use crate::error::{Error, Result};
use crate::families::RadialProfile;
use crate::geometry::PlanePoint;
use crate::table::RadialTable;

/// Band under the degeneracy edge `|mu| = 1` inside which coefficients are
/// rejected rather than mapped to huge dilatations.
pub const DEFAULT_DEGENERACY_EPSILON: f64 = 1e-12;

/// Ceiling for pointwise dilatation values; evaluation beyond it is an error.
pub const DEFAULT_K_MAX: f64 = 1e12;

/// A single value of the complex coefficient, `|mu| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeltramiValue {
    re: f64,
    im: f64,
}

impl BeltramiValue {
    pub const ZERO: BeltramiValue = BeltramiValue { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        let modulus = re.hypot(im);
        if !modulus.is_finite() {
            return Err(Error::NonFinite { what: "coefficient modulus", value: modulus });
        }
        if modulus >= 1.0 {
            return Err(Error::Degenerate { modulus, epsilon: 0.0 });
        }
        Ok(BeltramiValue { re, im })
    }

    /// The coefficient with `|mu| = (k - 1)/(k + 1)` and the given argument.
    pub fn from_dilatation(k: f64, phase: f64) -> Result<Self> {
        if !k.is_finite() || k < 1.0 {
            return Err(Error::InvalidDilatation { value: k });
        }
        if !phase.is_finite() {
            return Err(Error::NonFinite { what: "coefficient phase", value: phase });
        }
        let m = (k - 1.0) / (k + 1.0);
        Ok(BeltramiValue { re: m * phase.cos(), im: m * phase.sin() })
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// The dilatation `(1 + |mu|)/(1 - |mu|)`, rejecting coefficients within
    /// [`DEFAULT_DEGENERACY_EPSILON`] of the degeneracy edge.
    pub fn dilatation(&self) -> Result<f64> {
        self.dilatation_with_epsilon(DEFAULT_DEGENERACY_EPSILON)
    }

    pub fn dilatation_with_epsilon(&self, epsilon: f64) -> Result<f64> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidParameter { what: "degeneracy epsilon", value: epsilon });
        }
        let m = self.modulus();
        if m >= 1.0 - epsilon {
            return Err(Error::Degenerate { modulus: m, epsilon });
        }
        Ok((1.0 + m) / (1.0 - m))
    }
}

enum FieldKind {
    Profile(RadialProfile),
    /// Samples of K over a closed radius window; K is interpolated linearly
    /// in log-radius between nodes.
    Tabulated(RadialTable),
    Constant(f64),
}

/// An evaluable dilatation field `K(z) >= 1` with a designated center.
///
/// Every supported kind is radial: the value depends only on `|z - center|`.
/// Annuli and circles handed to the quadrature routines must share the field's
/// center; call sites check this.
pub struct CoefficientField {
    center: PlanePoint,
    kind: FieldKind,
    k_max: f64,
}

impl CoefficientField {
    /// The field of an exact radial family.
    pub fn from_profile(profile: RadialProfile) -> Self {
        CoefficientField {
            center: profile.center(),
            kind: FieldKind::Profile(profile),
            k_max: DEFAULT_K_MAX,
        }
    }

    /// A field interpolating tabulated `(radius, K)` samples; every sample
    /// needs `K >= 1`.
    pub fn tabulated(center: PlanePoint, table: RadialTable) -> Result<Self> {
        for v in table.values() {
            if v < 1.0 {
                return Err(Error::InvalidDilatation { value: v });
            }
        }
        Ok(CoefficientField { center, kind: FieldKind::Tabulated(table), k_max: DEFAULT_K_MAX })
    }

    pub fn constant(center: PlanePoint, k: f64) -> Result<Self> {
        if !k.is_finite() || k < 1.0 {
            return Err(Error::InvalidDilatation { value: k });
        }
        Ok(CoefficientField { center, kind: FieldKind::Constant(k), k_max: DEFAULT_K_MAX })
    }

    pub fn with_k_max(mut self, k_max: f64) -> Result<Self> {
        if !(k_max.is_finite() && k_max >= 1.0) {
            return Err(Error::InvalidParameter { what: "dilatation ceiling k_max", value: k_max });
        }
        self.k_max = k_max;
        Ok(self)
    }

    pub fn center(&self) -> PlanePoint {
        self.center
    }

    /// Dilatation at the point `z`.
    pub fn dilatation_at(&self, z: &PlanePoint) -> Result<f64> {
        self.dilatation_at_radius(z.distance(&self.center))
    }

    /// Dilatation at distance `r` from the center.
    pub fn dilatation_at_radius(&self, r: f64) -> Result<f64> {
        let k = match &self.kind {
            FieldKind::Profile(p) => p.dilatation_at_radius(r)?,
            FieldKind::Tabulated(t) => {
                if !(r >= t.min_radius() && r <= t.max_radius()) {
                    return Err(Error::OutOfDomain {
                        what: "radius",
                        value: r,
                        lo: t.min_radius(),
                        hi: t.max_radius(),
                    });
                }
                t.interpolate_by(f64::ln, r.ln())
            }
            FieldKind::Constant(k) => *k,
        };
        if k > self.k_max {
            return Err(Error::DilatationOverflow { value: k, k_max: self.k_max });
        }
        Ok(k)
    }

    /// Confirms every radius in `[lo, hi]` is evaluable before a quadrature
    /// pass starts; only tabulated fields have a bounded window.
    pub(crate) fn check_radial_window(&self, lo: f64, hi: f64) -> Result<()> {
        if let FieldKind::Tabulated(t) = &self.kind {
            if lo < t.min_radius() || hi > t.max_radius() {
                return Err(Error::OutOfDomain {
                    what: "field radius window",
                    value: if lo < t.min_radius() { lo } else { hi },
                    lo: t.min_radius(),
                    hi: t.max_radius(),
                });
            }
        }
        Ok(())
    }

    /// Radii in `(lo, hi)` where the field is not smooth; quadrature seeds
    /// panel boundaries here.
    pub(crate) fn breakpoints_within(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        match &self.kind {
            FieldKind::Profile(p) => p.breakpoints_within(lo, hi, out),
            FieldKind::Tabulated(t) => {
                out.extend(t.rows().iter().map(|&(r, _)| r).filter(|&r| r > lo && r < hi));
            }
            FieldKind::Constant(_) => {}
        }
    }
}
