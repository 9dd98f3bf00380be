//! Periodic cycles, hyperbolic centers, residue fixed-point indices and
//! continuation of the indifference locus.

mod aberth;
mod centers;
mod cycles;
mod index;
mod locus;

pub use aberth::{aberth, AberthConfig};
pub use centers::{
    critical_orbit_residual, enumerate_centers, newton_center, newton_center_with, CenterConfig, CenterHit,
    SearchWindow,
};
pub use cycles::{cycle_through, find_cycles, find_cycles_dyn, Cycle, CycleClass, CycleConfig};
pub use index::{
    contour_index, iterate_index, residue_index_by_formula, residue_index_contour, symmetric_pair,
    ContourConfig, FixedPointIndex, IndexContext, IndexMethod, Precision,
};
pub use locus::{
    interpolate_on_locus, locus_residual, project_to_locus, trace_indifference_locus, LocusConfig, LocusEnd, LocusFraming, LocusSample, LocusSkeleton,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OrbitError {
    #[error("root solver diverged")]
    SolverDiverged,
    #[error("period {period} exceeds the configured bound {max}")]
    PeriodTooLarge { period: u32, max: u32 },
    #[error("fixed-point polynomial degree {degree} exceeds the configured bound {max}")]
    DegreeTooLarge { degree: u64, max: u64 },
    #[error("contour of radius {radius:e} encloses {inside} fixed points, expected {expected}")]
    ContourContaminated { inside: i64, expected: i64, radius: f64 },
    #[error("contour quadrature did not converge")]
    QuadratureStalled,
    #[error("formula inapplicable: {0}")]
    FormulaInapplicable(&'static str),
    #[error("continuation step collapsed below the minimum at arclength {arclength}")]
    StepCollapse { arclength: f64 },
    #[error("invalid start: {0}")]
    InvalidStart(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
