//! Test bench for modulus-of-continuity and growth bounds of plane mappings
//! with unbounded distortion.
//!
//! The crate is organized around radial stretch maps, the exactly solvable
//! family `f(z) = rho(|z - z0|) (z - z0)/|z - z0|`. For these, the complex
//! coefficient, the dilatation, the maximum modulus `M(R)`, image areas, and
//! ring moduli all have closed forms ([`families`]), which makes them sharp
//! oracles for everything the numerical side produces:
//!
//! * [`quadrature`] integrates dilatation fields over annuli in polar form,
//!   adaptively in the radius and by periodic refinement in the angle;
//! * [`weights`] supplies the admissible radial weights, including the
//!   canonical iterated-log weights and their closed-form integrals;
//! * [`bounds`] assembles capacity lower bounds, the modulus majorant
//!   `Lambda(R)`, growth envelopes and ratios, the ring inequality with
//!   random test densities, and tail verdicts over a radius grid;
//! * [`sweep`] walks a geometric `R` grid for one monitored statement and
//!   emits plot-ready [`report`] rows.
//!
//! ```
//! use qcgrowth::{
//!     growth_envelope, modulus_majorant, CoefficientField, PlanePoint, QuadratureSettings,
//!     RadialProfile, WeightSpec,
//! };
//!
//! let profile = RadialProfile::identity(PlanePoint::ORIGIN);
//! let field = CoefficientField::from_profile(profile);
//! let settings = QuadratureSettings::default();
//! let majorant = modulus_majorant(&field, &WeightSpec::reciprocal(), 1.0, 100.0, &settings)?;
//! let envelope = growth_envelope(profile.max_modulus(100.0)?, majorant)?;
//! assert!((envelope - 1.0).abs() < 1e-6);
//! # Ok::<(), qcgrowth::Error>(())
//! ```

pub mod bounds;
pub mod config;
pub mod dilatation;
mod error;
pub mod families;
pub mod geometry;
pub mod quadrature;
pub mod report;
pub mod sweep;
pub mod table;
pub mod weights;

pub use crate::bounds::{
    capacity_lower_bound, envelope_floor, growth_envelope, iterated_log_ratio, liminf_verdict,
    mass_envelope, modulus_majorant, power_ratio, ring_inequality_check, seeded_test_densities,
    RadialTestFunction, RingCheckRow, Verdict, VerdictKind, VerdictSource,
};
pub use crate::config::{ConfigError, RunConfig};
pub use crate::dilatation::{BeltramiValue, CoefficientField};
pub use crate::error::{Error, Result};
pub use crate::families::RadialProfile;
pub use crate::geometry::{AnnulusSpec, CircleSpec, PlanePoint};
pub use crate::quadrature::{annulus_integral, circle_average, QuadratureSettings};
pub use crate::report::{
    parse_reports_csv, reports_to_csv, GrowthReport, ReportCsvError, CSV_HEADER,
};
pub use crate::sweep::{run_sweep, Criterion, SweepOutcome};
pub use crate::table::{RadialTable, TableError};
pub use crate::weights::{
    iterated_exp, iterated_log, iterated_log_identity_check, normalization_integral,
    IdentityCheck, WeightSpec,
};
