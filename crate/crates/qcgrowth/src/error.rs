use crate::config::ConfigError;
use crate::report::ReportCsvError;
use crate::table::TableError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by construction, evaluation, and integration.
///
/// Quadrature failures are not bare errors: [`Error::NoConvergence`] carries the
/// best available estimate and its error bound so callers can degrade gracefully.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("coefficient is degenerate: |mu| = {modulus} is within {epsilon} of 1")]
    Degenerate { modulus: f64, epsilon: f64 },

    #[error("dilatation must be a finite value >= 1, got {value}")]
    InvalidDilatation { value: f64 },

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} = {value} is outside the supported range ({lo}, {hi})")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{what} = {value} is invalid")]
    InvalidParameter { what: &'static str, value: f64 },

    #[error("the coefficient of a radial stretch is undefined at its center")]
    UndefinedAtCenter,

    #[error("iterated exponential e_{k} exceeds binary floating point range")]
    IteratedExpOverflow { k: u32 },

    #[error("dilatation {value} exceeds the configured ceiling {k_max}")]
    DilatationOverflow { value: f64, k_max: f64 },

    #[error("field center ({field_re}, {field_im}) differs from region center ({region_re}, {region_im})")]
    CenterMismatch {
        field_re: f64,
        field_im: f64,
        region_re: f64,
        region_im: f64,
    },

    #[error("condenser areas must satisfy outer {area_a} > inner {area_c} > 0 for a nontrivial bound")]
    DegenerateCondenser { area_a: f64, area_c: f64 },

    #[error("weight has nonpositive or non-finite mass {integral} on the integration window")]
    ZeroWeightMass { integral: f64 },

    #[error(
        "quadrature did not converge within {subdivisions} subdivisions \
         (estimate {estimate}, error bound {error_bound})"
    )]
    NoConvergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: u32,
    },

    #[error("test function {index} is inadmissible: integral {integral} < 1")]
    Inadmissible { index: usize, integral: f64 },

    #[error("verdict needs at least {needed} reports, got {count}")]
    InsufficientReports { count: usize, needed: usize },

    #[error("reports must be sorted by strictly increasing R")]
    ReportsNotSorted,

    #[error(transparent)]
    Table(#[from] TableError),

    #[error(transparent)]
    ReportCsv(#[from] ReportCsvError),

    #[error(transparent)]
    Config(#[from] ConfigError),
}
