//! Fatou coordinates at simple parabolic points, Ecalle heights, Koenigs
//! ratios, internal rays and lifted horn maps.

mod frame;
mod germ;
mod horn;
mod internal;
mod koenigs;

pub use frame::{
    build_fatou, build_fatou_at, characteristic_point, critical_ecalle_height, critical_height_from, critical_parabolic_cycle,
    FatouConfig, FatouFrame, FrameKind, FrameReport, Gauge,
};
pub use germ::{asymptotic_series, ParabolicGerm};
pub use horn::{lifted_horn_map, HornBand, HornSampler};
pub use internal::{
    ecalle_koenigs_limit, ecalle_koenigs_limit_probe, trace_internal_ray, Component, InternalRay,
    InternalRayConfig,
};
pub use koenigs::{attracting_cycle_of, build_koenigs, koenigs_ratio, KoenigsConfig, KoenigsFrame};
pub(crate) use internal::solve_invariant;

use crate::scalar::C64;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FatouError {
    #[error("cycle is not parabolic (return multiplier {multiplier})")]
    NotParabolic { multiplier: C64 },
    #[error("parabolic point is degenerate (vanishing quadratic coefficient)")]
    NotSimpleParabolic,
    #[error("sample left the petal")]
    PetalEscape,
    #[error("orbit does not enter the petal of this frame")]
    OrbitMissesPetal,
    #[error("Fatou coordinate did not settle after {doublings} depth doublings")]
    NoConvergence { doublings: u32 },
    #[error("linearizer degenerate (superattracting or non-attracting cycle)")]
    LinearizerDegenerate,
    #[error("internal ray branch lost at radius {radius}")]
    BranchLost { radius: f64 },
    #[error("point outside the horn band")]
    OutsideBand,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
