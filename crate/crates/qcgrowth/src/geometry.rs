//! Points, annuli, and circles in the plane.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the finite plane, `z = re + i*im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub re: f64,
    pub im: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() {
            return Err(Error::NonFinite { what: "point re coordinate", value: re });
        }
        if !im.is_finite() {
            return Err(Error::NonFinite { what: "point im coordinate", value: im });
        }
        Ok(PlanePoint { re, im })
    }

    pub fn distance(&self, other: &PlanePoint) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }

    /// The point at distance `radius` from `self` in direction `angle`.
    pub fn polar_offset(&self, radius: f64, angle: f64) -> PlanePoint {
        PlanePoint {
            re: self.re + radius * angle.cos(),
            im: self.im + radius * angle.sin(),
        }
    }
}

/// The open annulus `r_inner < |z - center| < r_outer` with `0 < r_inner < r_outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    center: PlanePoint,
    r_inner: f64,
    r_outer: f64,
}

impl AnnulusSpec {
    pub fn new(center: PlanePoint, r_inner: f64, r_outer: f64) -> Result<Self> {
        if !(r_inner.is_finite() && r_inner > 0.0) {
            return Err(Error::InvalidParameter { what: "annulus inner radius", value: r_inner });
        }
        if !(r_outer.is_finite() && r_outer > r_inner) {
            return Err(Error::InvalidParameter { what: "annulus outer radius", value: r_outer });
        }
        Ok(AnnulusSpec { center, r_inner, r_outer })
    }

    pub fn center(&self) -> PlanePoint {
        self.center
    }

    pub fn r_inner(&self) -> f64 {
        self.r_inner
    }

    pub fn r_outer(&self) -> f64 {
        self.r_outer
    }
}

/// The circle `|z - center| = radius` with `radius > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    center: PlanePoint,
    radius: f64,
}

impl CircleSpec {
    pub fn new(center: PlanePoint, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter { what: "circle radius", value: radius });
        }
        Ok(CircleSpec { center, radius })
    }

    pub fn center(&self) -> PlanePoint {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}
