//! Floating-point polynomial hull experiments: sample sets, Chebyshev
//! exclusion certificates, the fiber density table and the Kallin
//! separation demo.

pub mod chebyshev;
pub mod fiber;
pub mod kallin;
pub mod probes;
pub mod sampleset;
pub mod simplex;

pub use num_complex::Complex64;

pub use chebyshev::{
    hull_excludes, monomial_basis, search_degrees, ExclusionCertificate, ExclusionOptions, HullOutcome,
    NoCertificate,
};
pub use fiber::{fiber_density_experiment, FiberRow, FiberTable};
pub use kallin::{default_balls, kallin_separation_demo, Ball, KallinOptions, KallinReport};
pub use probes::{normal_form_samples, probe_experiment, probe_set, Probe, ProbeOptions, ProbeReport};
pub use sampleset::{sample_chart, Axis, GridSpec, SampleSet};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum HullError {
    #[error("sample set is empty")]
    EmptySampleSet,
    #[error("degenerate problem: empty monomial basis")]
    Degenerate,
    #[error("query point lies in the sample set")]
    QueryInSet,
    #[error("balls intersect: centre distance {distance} ≤ sum of radii {radii}")]
    BallsIntersect { distance: f64, radii: f64 },
    #[error("certificate recheck failed: stored margin {stored}, recomputed {recomputed}")]
    Recheck { stored: f64, recomputed: f64 },
    #[error("linear program: {0}")]
    Lp(String),
    #[error("construction: {0}")]
    Construction(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for HullError {
    fn from(e: std::io::Error) -> Self {
        HullError::Io(e.to_string())
    }
}

impl From<csv::Error> for HullError {
    fn from(e: csv::Error) -> Self {
        HullError::Io(e.to_string())
    }
}
