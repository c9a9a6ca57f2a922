//! Iterated exponentials and logarithms, radial weights, and the closed-form
//! identity that anchors them.
//!
//! The tower `e_0 = 1`, `e_{k+1} = exp(e_k)` and the iterated logarithm
//! `ln_k` are the scale on which unbounded-dilatation growth is measured.
//! The canonical weight
//!
//! ```text
//! psi(t) = 1 / (t * ln t * ... * ln_N t)
//! ```
//!
//! integrates in closed form, `int_{e_N}^R psi = ln_{N+1} R`, which
//! [`iterated_log_identity_check`] verifies numerically and the test suite
//! uses as the sharpest available quadrature oracle.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_radial, QuadratureSettings};
use crate::table::RadialTable;

/// Largest tower index representable in binary floating point; `e_4` is
/// `exp(3814279.1)` and overflows.
pub const MAX_TOWER_INDEX: u32 = 3;

/// `e_k` with `e_0 = 1` and `e_{k+1} = exp(e_k)`.
pub fn iterated_exp(k: u32) -> Result<f64> {
    if k > MAX_TOWER_INDEX {
        return Err(Error::IteratedExpOverflow { k });
    }
    let mut v = 1.0f64;
    for _ in 0..k {
        v = v.exp();
    }
    Ok(v)
}

/// `ln_k t`, the k-fold logarithm; `ln_0 t = t`.
///
/// The domain is `t > e_{k-2}` for `k >= 2` and `t > 0` for `k = 1`, exactly
/// where every intermediate logarithm stays positive; the final value may be
/// negative.
pub fn iterated_log(k: u32, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "iterated log argument", value: t });
    }
    if k == 0 {
        return Ok(t);
    }
    let edge = if k == 1 { 0.0 } else { iterated_exp(k - 2)? };
    if t <= edge {
        return Err(Error::OutOfDomain {
            what: "iterated log argument",
            value: t,
            lo: edge,
            hi: f64::INFINITY,
        });
    }
    let mut v = t;
    for _ in 0..k {
        v = v.ln();
    }
    Ok(v)
}

#[derive(Debug, Clone)]
enum WeightKind {
    /// `1 / prod_{k=0}^{depth} ln_k t` on `t > e_{depth - 1}` (with `e_{-1} = 0`).
    Canonical { depth: u32 },
    /// `1/t` on `t > 0`.
    Reciprocal,
    Constant { value: f64 },
    /// Linear interpolation in `t` between sampled `(t, psi)` pairs.
    Tabulated { table: RadialTable },
}

/// A nonnegative radial weight `psi(t)`, the density of the normalization
/// integral `I(R) = int_{r0}^R psi(t) dt`.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    kind: WeightKind,
}

impl WeightSpec {
    /// The canonical iterated-log weight of the given depth `N`, `N <= 3`.
    pub fn canonical(depth: u32) -> Result<Self> {
        if depth > MAX_TOWER_INDEX {
            return Err(Error::IteratedExpOverflow { k: depth });
        }
        Ok(WeightSpec { kind: WeightKind::Canonical { depth } })
    }

    pub fn reciprocal() -> Self {
        WeightSpec { kind: WeightKind::Reciprocal }
    }

    pub fn constant(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter { what: "constant weight value", value });
        }
        Ok(WeightSpec { kind: WeightKind::Constant { value } })
    }

    /// A weight interpolating sampled `(t, psi)` pairs; samples must be
    /// nonnegative; the domain is the sampled window.
    pub fn tabulated(table: RadialTable) -> Result<Self> {
        for v in table.values() {
            if v < 0.0 {
                return Err(Error::InvalidParameter { what: "tabulated weight value", value: v });
            }
        }
        Ok(WeightSpec { kind: WeightKind::Tabulated { table } })
    }

    /// `psi(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        match &self.kind {
            WeightKind::Canonical { depth } => {
                let edge = canonical_domain_edge(*depth);
                if !t.is_finite() || t <= edge {
                    return Err(Error::OutOfDomain {
                        what: "weight argument",
                        value: t,
                        lo: edge,
                        hi: f64::INFINITY,
                    });
                }
                let mut product = t;
                let mut v = t;
                for _ in 0..*depth {
                    v = v.ln();
                    product *= v;
                }
                Ok(1.0 / product)
            }
            WeightKind::Reciprocal => {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::OutOfDomain {
                        what: "weight argument",
                        value: t,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    });
                }
                Ok(1.0 / t)
            }
            WeightKind::Constant { value } => {
                if !t.is_finite() {
                    return Err(Error::NonFinite { what: "weight argument", value: t });
                }
                Ok(*value)
            }
            WeightKind::Tabulated { table } => {
                if !(t >= table.min_radius() && t <= table.max_radius()) {
                    return Err(Error::OutOfDomain {
                        what: "weight argument",
                        value: t,
                        lo: table.min_radius(),
                        hi: table.max_radius(),
                    });
                }
                Ok(table.interpolate_by(|x| x, t))
            }
        }
    }

    /// Shrinks `[lo, hi]` to a window the weight can be evaluated on, nudging
    /// `lo` just inside when it sits exactly on an open domain edge. The nudge
    /// is `lo * (1 + 1e-14)`, far below every integration tolerance.
    pub(crate) fn effective_window(&self, lo: f64, hi: f64) -> Result<(f64, f64)> {
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(Error::InvalidParameter { what: "integration window edge", value: lo });
        }
        let open_edge = match &self.kind {
            WeightKind::Canonical { depth } => canonical_domain_edge(*depth),
            WeightKind::Reciprocal => 0.0,
            WeightKind::Constant { .. } => return Ok((lo, hi)),
            WeightKind::Tabulated { table } => {
                if lo < table.min_radius() || hi > table.max_radius() {
                    return Err(Error::OutOfDomain {
                        what: "integration window",
                        value: if lo < table.min_radius() { lo } else { hi },
                        lo: table.min_radius(),
                        hi: table.max_radius(),
                    });
                }
                return Ok((lo, hi));
            }
        };
        if lo > open_edge {
            return Ok((lo, hi));
        }
        if lo == open_edge {
            let nudged = lo * (1.0 + 1e-14);
            if nudged < hi {
                return Ok((nudged, hi));
            }
        }
        Err(Error::OutOfDomain { what: "integration window", value: lo, lo: open_edge, hi: f64::INFINITY })
    }

    /// Interior points of `(lo, hi)` where the weight is not smooth.
    pub(crate) fn breakpoints_within(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        if let WeightKind::Tabulated { table } = &self.kind {
            out.extend(table.rows().iter().map(|&(t, _)| t).filter(|&t| t > lo && t < hi));
        }
    }
}

fn canonical_domain_edge(depth: u32) -> f64 {
    if depth == 0 {
        0.0
    } else {
        // In range because depth <= MAX_TOWER_INDEX.
        iterated_exp(depth - 1).unwrap()
    }
}

/// `I(R) = int_{r0}^R psi(t) dt`, the weight mass on the window.
///
/// The result must be strictly positive and finite; a weight that is zero
/// along the whole window violates the normalization hypothesis and errors.
pub fn normalization_integral(
    w: &WeightSpec,
    r0: f64,
    big_r: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let (lo, hi) = w.effective_window(r0, big_r)?;
    let mut seeds = Vec::new();
    w.breakpoints_within(lo, hi, &mut seeds);
    let mass = integrate_radial(&|t| w.eval(t), lo, hi, &seeds, settings)?;
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::ZeroWeightMass { integral: mass });
    }
    Ok(mass)
}

/// The numeric and closed-form sides of a quadrature identity, with their
/// absolute disagreement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub numeric: f64,
    pub closed_form: f64,
    pub abs_error: f64,
}

/// Checks `int_{e_N}^R dt / (t ln t ... ln_N t) = ln_{N+1} R` by quadrature.
pub fn iterated_log_identity_check(
    depth: u32,
    big_r: f64,
    settings: &QuadratureSettings,
) -> Result<IdentityCheck> {
    let w = WeightSpec::canonical(depth)?;
    let r0 = iterated_exp(depth)?;
    if !(big_r > r0) {
        return Err(Error::OutOfDomain {
            what: "identity upper limit",
            value: big_r,
            lo: r0,
            hi: f64::INFINITY,
        });
    }
    let numeric = normalization_integral(&w, r0, big_r, settings)?;
    let closed_form = iterated_log(depth + 1, big_r)?;
    Ok(IdentityCheck { numeric, closed_form, abs_error: (numeric - closed_form).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn tower_values_match_the_recursion() {
        assert_eq!(iterated_exp(0).unwrap(), 1.0);
        assert_eq!(iterated_exp(1).unwrap(), E);
        assert!((iterated_exp(2).unwrap() - 15.154262241479262).abs() < 1e-13);
        assert!((iterated_exp(3).unwrap() - 3814279.104760214).abs() < 1e-7 * 3814279.0);
        assert!(matches!(iterated_exp(4), Err(Error::IteratedExpOverflow { k: 4 })));
    }

    #[test]
    fn iterated_log_matches_hand_values() {
        assert_eq!(iterated_log(0, 7.0).unwrap(), 7.0);
        assert!((iterated_log(1, E).unwrap() - 1.0).abs() < 1e-15);
        let e2 = iterated_exp(2).unwrap();
        assert!((iterated_log(2, e2).unwrap() - 1.0).abs() < 1e-14);
        // Final value may be negative as long as intermediates stay positive.
        assert!(iterated_log(2, 1.5).unwrap() < 0.0);
    }

    #[test]
    fn iterated_log_rejects_its_domain_edge() {
        assert!(iterated_log(1, 0.0).is_err());
        assert!(iterated_log(2, 1.0).is_err());
        assert!(iterated_log(3, E).is_err());
        assert!(iterated_log(1, f64::INFINITY).is_err());
        assert!(iterated_log(2, 1.0 + 1e-9).is_ok());
    }

    #[test]
    fn iterated_log_is_increasing_in_t() {
        for k in 0..=3u32 {
            let edge = if k <= 1 { 0.0 } else { iterated_exp(k - 2).unwrap() };
            let mut prev = f64::NEG_INFINITY;
            for i in 1..=12 {
                let t = edge + i as f64;
                let v = iterated_log(k, t).unwrap();
                assert!(v > prev, "k={k}, t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn canonical_weight_matches_closed_form() {
        let n0 = WeightSpec::canonical(0).unwrap();
        assert_eq!(n0.eval(2.0).unwrap(), 0.5);
        let n1 = WeightSpec::canonical(1).unwrap();
        let t = E * E;
        assert!((n1.eval(t).unwrap() - 0.06766764161830635).abs() < 1e-17);
        assert!(n1.eval(1.0).is_err());
        assert!(n1.eval(0.5).is_err());
        assert!(WeightSpec::canonical(4).is_err());
    }

    #[test]
    fn reciprocal_and_constant_weights_evaluate() {
        assert_eq!(WeightSpec::reciprocal().eval(4.0).unwrap(), 0.25);
        assert!(WeightSpec::reciprocal().eval(0.0).is_err());
        let c = WeightSpec::constant(1.0).unwrap();
        assert_eq!(c.eval(123.0).unwrap(), 1.0);
        assert!(WeightSpec::constant(0.0).is_err());
        assert!(WeightSpec::constant(f64::NAN).is_err());
    }

    #[test]
    fn tabulated_weight_interpolates_linearly_in_t() {
        let table = RadialTable::parse_str("1,0\n3,4\n").unwrap();
        let w = WeightSpec::tabulated(table).unwrap();
        assert_eq!(w.eval(2.0).unwrap(), 2.0);
        assert!(w.eval(0.5).is_err());
        assert!(w.eval(3.5).is_err());
        let negative = RadialTable::parse_str("1,-0.5\n3,4\n").unwrap();
        assert!(WeightSpec::tabulated(negative).is_err());
    }

    #[test]
    fn effective_window_nudges_only_the_exact_edge() {
        let n2 = WeightSpec::canonical(2).unwrap();
        // Domain edge of depth 2 is e_1 = e.
        let (lo, hi) = n2.effective_window(E, 10.0).unwrap();
        assert!(lo > E && lo < E * (1.0 + 1e-13));
        assert_eq!(hi, 10.0);
        let (lo, _) = n2.effective_window(3.0, 10.0).unwrap();
        assert_eq!(lo, 3.0);
        assert!(n2.effective_window(2.0, 10.0).is_err());
    }

    #[test]
    fn normalization_integral_matches_closed_forms() {
        let q = QuadratureSettings::default();
        let one = WeightSpec::constant(1.0).unwrap();
        assert!((normalization_integral(&one, 1.0, 3.0, &q).unwrap() - 2.0).abs() < 1e-12);
        let n0 = WeightSpec::canonical(0).unwrap();
        assert!((normalization_integral(&n0, 1.0, E, &q).unwrap() - 1.0).abs() < 1e-10);
        let n1 = WeightSpec::canonical(1).unwrap();
        let e2 = iterated_exp(2).unwrap();
        assert!((normalization_integral(&n1, E, e2, &q).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn normalization_integral_is_monotone_and_additive() {
        let q = QuadratureSettings::default();
        let n1 = WeightSpec::canonical(1).unwrap();
        let mut prev = 0.0;
        for i in 1..=8 {
            let r = E + (i as f64) * 3.7;
            let mass = normalization_integral(&n1, E, r, &q).unwrap();
            assert!(mass > prev);
            prev = mass;
        }
        let a = normalization_integral(&n1, E, 10.0, &q).unwrap();
        let b = normalization_integral(&n1, 10.0, 300.0, &q).unwrap();
        let whole = normalization_integral(&n1, E, 300.0, &q).unwrap();
        assert!((a + b - whole).abs() < 1e-9 * whole);
    }

    #[test]
    fn zero_weight_mass_is_rejected() {
        let q = QuadratureSettings::default();
        let table = RadialTable::parse_str("1,0\n5,0\n").unwrap();
        let zero = WeightSpec::tabulated(table).unwrap();
        assert!(matches!(
            normalization_integral(&zero, 1.0, 5.0, &q),
            Err(Error::ZeroWeightMass { .. })
        ));
    }

    #[test]
    fn identity_check_agrees_across_depths() {
        let q = QuadratureSettings::default();
        for depth in 0..=2u32 {
            let r = 4.0 * iterated_exp(depth).unwrap();
            let c = iterated_log_identity_check(depth, r, &q).unwrap();
            assert!(
                c.abs_error <= 1e-8f64.max(1e-8 * c.closed_form.abs()),
                "depth {depth}: numeric {} vs closed {}",
                c.numeric,
                c.closed_form
            );
        }
        assert!(iterated_log_identity_check(1, E, &QuadratureSettings::default()).is_err());
    }
}
