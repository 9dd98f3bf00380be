//! Numerical core for unicritical antiholomorphic polynomial dynamics.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function
//! of its inputs; IO, parallel rendering and the command line live in the
//! `multicorn-lab` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arcs;
pub mod dd;
pub mod dynamics;
pub mod fatou;
pub mod linalg;
pub mod maps;
pub mod orbits;
pub mod poly;
pub mod raster;
pub mod renorm;
pub mod scalar;
pub mod series;

pub use dynamics::{Dynamics, Family};
pub use maps::{AntiPolyMap, MapDescriptor, MultibrotMap, RealCubicMap};
pub use scalar::{Param, C64};
