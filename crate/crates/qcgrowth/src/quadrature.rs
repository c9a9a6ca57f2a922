//! Adaptive quadrature over annuli and circles.
//!
//! All in-scope integrals are radial after the angular average is taken, so
//! the engine is one-dimensional: adaptive composite Gauss-Legendre in the
//! radius, periodic trapezoid with node doubling in the angle. Panel
//! subdivision is worst-error-first with a deterministic tie-break, and the
//! final sum is taken in radius order, so repeated runs produce bit-identical
//! results.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::dilatation::CoefficientField;
use crate::error::{Error, Result};
use crate::geometry::{AnnulusSpec, CircleSpec, PlanePoint};
use crate::weights::WeightSpec;

/// Tolerances and budget for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: u32,
    pub angular_nodes_initial: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 1 << 20,
            angular_nodes_initial: 16,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter { what: "rel_tol", value: self.rel_tol });
        }
        if !(self.abs_tol.is_finite() && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter { what: "abs_tol", value: self.abs_tol });
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter { what: "max_subdivisions", value: 0.0 });
        }
        if self.angular_nodes_initial < 2 {
            return Err(Error::InvalidParameter {
                what: "angular_nodes_initial",
                value: self.angular_nodes_initial as f64,
            });
        }
        Ok(())
    }
}

fn legendre_15(x: f64) -> (f64, f64) {
    let mut p_prev = 1.0f64;
    let mut p = x;
    for k in 2..=15u32 {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let dp = 15.0 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Nodes and weights of 15-point Gauss-Legendre on [-1, 1], found once by
/// Newton iteration on the Legendre recurrence.
fn gauss_legendre_15() -> &'static [(f64, f64); 15] {
    static NODES: OnceLock<[(f64, f64); 15]> = OnceLock::new();
    NODES.get_or_init(|| {
        let mut out = [(0.0f64, 0.0f64); 15];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut x = (PI * (i as f64 + 0.75) / 15.5).cos();
            for _ in 0..60 {
                let (p, dp) = legendre_15(x);
                let step = p / dp;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_15(x);
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

fn gl15<F: Fn(f64) -> Result<f64>>(f: &F, lo: f64, hi: f64) -> Result<f64> {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for &(x, w) in gauss_legendre_15() {
        acc += w * f(c + h * x)?;
    }
    Ok(acc * h)
}

struct Panel {
    lo: f64,
    hi: f64,
    left: f64,
    right: f64,
    err: f64,
    seq: u64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // Max-heap pops the largest error; equal errors pop in creation order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.seq.cmp(&self.seq))
    }
}

fn make_panel<F: Fn(f64) -> Result<f64>>(
    f: &F,
    lo: f64,
    hi: f64,
    whole_hint: Option<f64>,
    seq: &mut u64,
) -> Result<Panel> {
    let whole = match whole_hint {
        Some(v) => v,
        None => gl15(f, lo, hi)?,
    };
    let mid = 0.5 * (lo + hi);
    let left = gl15(f, lo, mid)?;
    let right = gl15(f, mid, hi)?;
    *seq += 1;
    Ok(Panel { lo, hi, left, right, err: (whole - (left + right)).abs(), seq: *seq })
}

/// Initial panel edges: caller-provided interior seeds, then a geometric
/// refinement so no panel spans more than one decade. Without the refinement
/// a window like (e_3, 1e300) would look converged after a single panel whose
/// 45 sample points all miss the mass near the left edge.
fn panel_edges(lo: f64, hi: f64, seeds: &[f64]) -> Vec<f64> {
    let mut cuts: Vec<f64> = seeds.iter().copied().filter(|s| s.is_finite() && *s > lo && *s < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut coarse = Vec::with_capacity(cuts.len() + 2);
    coarse.push(lo);
    coarse.extend(cuts);
    coarse.push(hi);

    let mut edges = Vec::with_capacity(coarse.len());
    edges.push(lo);
    for w in coarse.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a > 0.0 && b / a > 10.0 {
            let pieces = (b / a).log10().ceil().min(4096.0) as usize;
            let ratio = (b / a).powf(1.0 / pieces as f64);
            let mut x = a;
            for _ in 1..pieces {
                x *= ratio;
                if x > *edges.last().unwrap() && x < b {
                    edges.push(x);
                }
            }
        }
        edges.push(b);
    }
    edges
}

fn ordered_sum(mut panels: Vec<Panel>) -> f64 {
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    panels.iter().map(Panel::value).sum()
}

/// Adaptive Gauss-Legendre integration of `f` over `[lo, hi]`.
///
/// `seeds` are interior points where the integrand changes formula; panels
/// never straddle them. The error estimate of a panel is the difference
/// between its 15-point value and the sum over its halves; subdivision is
/// worst-first until the summed estimate meets the tolerance.
pub(crate) fn integrate_radial<F: Fn(f64) -> Result<f64>>(
    f: &F,
    lo: f64,
    hi: f64,
    seeds: &[f64],
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter { what: "integration interval edge", value: lo });
    }

    let edges = panel_edges(lo, hi, seeds);
    let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
    let mut unsplittable: Vec<Panel> = Vec::new();
    let mut seq = 0u64;
    let mut sum = 0.0;
    let mut err_sum = 0.0;
    for w in edges.windows(2) {
        let p = make_panel(f, w[0], w[1], None, &mut seq)?;
        sum += p.value();
        err_sum += p.err;
        heap.push(p);
    }

    let mut splits = 0u32;
    loop {
        if err_sum <= settings.abs_tol.max(settings.rel_tol * sum.abs()) {
            break;
        }
        let bail = |heap: BinaryHeap<Panel>, mut rest: Vec<Panel>, splits: u32| {
            rest.extend(heap.into_vec());
            Err(Error::NoConvergence {
                estimate: ordered_sum(rest),
                error_bound: err_sum,
                subdivisions: splits,
            })
        };
        if splits >= settings.max_subdivisions {
            return bail(heap, unsplittable, splits);
        }
        let Some(worst) = heap.pop() else {
            return bail(heap, unsplittable, splits);
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            unsplittable.push(worst);
            continue;
        }
        splits += 1;
        let l = make_panel(f, worst.lo, mid, Some(worst.left), &mut seq)?;
        let r = make_panel(f, mid, worst.hi, Some(worst.right), &mut seq)?;
        sum += l.value() + r.value() - worst.value();
        err_sum += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
    }

    let mut panels = unsplittable;
    panels.extend(heap.into_vec());
    Ok(ordered_sum(panels))
}

/// `int_0^{2pi} K(center + r e^{i theta}) d theta` by the periodic trapezoid
/// rule, doubling the node count until two successive estimates agree.
pub(crate) fn circle_integral(
    field: &CoefficientField,
    center: PlanePoint,
    radius: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let mut n = settings.angular_nodes_initial.max(2) as u64;
    let mut sum = 0.0;
    for j in 0..n {
        let theta = TAU * (j as f64) / (n as f64);
        sum += field.dilatation_at(&center.polar_offset(radius, theta))?;
    }
    let mut estimate = sum * TAU / (n as f64);
    loop {
        let mut odd = 0.0;
        for j in 0..n {
            let theta = TAU * (j as f64 + 0.5) / (n as f64);
            odd += field.dilatation_at(&center.polar_offset(radius, theta))?;
        }
        let refined = 0.5 * estimate + odd * TAU / (2.0 * n as f64);
        let diff = (refined - estimate).abs();
        if diff <= settings.abs_tol.max(settings.rel_tol * refined.abs()) {
            return Ok(refined);
        }
        if 2 * n > 1 << 21 {
            return Err(Error::NoConvergence {
                estimate: refined,
                error_bound: diff,
                subdivisions: n as u32,
            });
        }
        estimate = refined;
        n *= 2;
    }
}

/// Mean of the dilatation over a circle, `(1/2pi) int K |dz| / r`.
pub fn circle_average(
    field: &CoefficientField,
    circle: &CircleSpec,
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    Ok(circle_integral(field, circle.center(), circle.radius(), settings)? / TAU)
}

/// `int_A K(z) psi^2(|z - z0|) dm(z)` in polar form: the angular circle
/// integral of the field, then the radial weight integral.
pub fn annulus_integral(
    field: &CoefficientField,
    weight: &WeightSpec,
    annulus: &AnnulusSpec,
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    check_concentric(field, annulus)?;
    let (lo, hi) = weight.effective_window(annulus.r_inner(), annulus.r_outer())?;
    field.check_radial_window(lo, hi)?;
    let mut seeds = Vec::new();
    field.breakpoints_within(lo, hi, &mut seeds);
    weight.breakpoints_within(lo, hi, &mut seeds);
    let center = field.center();
    let f = |t: f64| -> Result<f64> {
        let psi = weight.eval(t)?;
        Ok(psi * psi * t * circle_integral(field, center, t, settings)?)
    };
    integrate_radial(&f, lo, hi, &seeds, settings)
}

/// Same integral with an arbitrary squared radial density in place of
/// `psi^2`; the test-function machinery integrates `K eta^2` through this.
pub(crate) fn weighted_annulus_integral<D: Fn(f64) -> Result<f64>>(
    field: &CoefficientField,
    squared_density: &D,
    extra_seeds: &[f64],
    annulus: &AnnulusSpec,
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    check_concentric(field, annulus)?;
    let (lo, hi) = (annulus.r_inner(), annulus.r_outer());
    field.check_radial_window(lo, hi)?;
    let mut seeds = Vec::from(extra_seeds);
    field.breakpoints_within(lo, hi, &mut seeds);
    let center = field.center();
    let f = |t: f64| -> Result<f64> {
        Ok(squared_density(t)? * t * circle_integral(field, center, t, settings)?)
    };
    integrate_radial(&f, lo, hi, &seeds, settings)
}

fn check_concentric(field: &CoefficientField, annulus: &AnnulusSpec) -> Result<()> {
    let fc = field.center();
    let ac = annulus.center();
    if fc != ac {
        return Err(Error::CenterMismatch {
            field_re: fc.re,
            field_im: fc.im,
            region_re: ac.re,
            region_im: ac.im,
        });
    }
    Ok(())
}
