//! Parameter and dynamical plane rasters.
//!
//! Only the per-pixel semantics live here. Parallel rendering, wall-clock
//! budgets and image formats belong to the lab crate, which calls
//! [`render_row`] per row.

use alloc::vec::Vec;

use crate::dynamics::Family;
use crate::maps::MapDescriptor;
use crate::scalar::{c64, hypot, Param, C64};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RasterError {
    #[error("invalid raster job: {0}")]
    InvalidJob(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Plane {
    /// Parameter plane of `conj(z)^d + c`.
    ParameterAnti { degree: u32 },
    /// Parameter plane of `z^d + c`.
    ParameterMultibrot { degree: u32 },
    /// The `(a, b)` plane of `−z³ − 3a²z + b`, with `a` horizontal.
    ParameterCubic,
    Dynamical(MapDescriptor),
}

/// A rectangle given by its center and horizontal extent; the vertical
/// extent follows from the pixel aspect ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub center: C64,
    pub width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coloring {
    Binary,
    SmoothGreen,
    PeriodTint,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RasterJob {
    pub plane: Plane,
    pub window: Window,
    pub width: u32,
    pub height: u32,
    pub max_iter: u32,
    pub coloring: Coloring,
    /// Largest period tried by period tinting.
    pub max_period: u32,
}

impl RasterJob {
    pub fn new(plane: Plane, window: Window, width: u32, height: u32, max_iter: u32, coloring: Coloring) -> Self {
        RasterJob { plane, window, width, height, max_iter, coloring, max_period: 16 }
    }

    pub fn validate(&self) -> Result<(), RasterError> {
        if !(self.window.width > 0.0) || !self.window.width.is_finite() {
            return Err(RasterError::InvalidJob("window width must be positive"));
        }
        if self.width == 0 || self.height == 0 {
            return Err(RasterError::InvalidJob("resolution must be at least 1x1"));
        }
        if self.max_iter == 0 {
            return Err(RasterError::InvalidJob("max_iter must be at least 1"));
        }
        if self.max_period == 0 {
            return Err(RasterError::InvalidJob("max_period must be at least 1"));
        }
        Ok(())
    }

    /// Plane coordinate at the center of pixel `(row, col)`; row 0 is the top.
    pub fn pixel_point(&self, row: u32, col: u32) -> C64 {
        let w = self.window.width;
        let h = w * self.height as f64 / self.width as f64;
        let x = w * ((col as f64 + 0.5) / self.width as f64 - 0.5);
        let y = h * (0.5 - (row as f64 + 0.5) / self.height as f64);
        self.window.center + c64(x, y)
    }
}

/// Per-pixel verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sample {
    /// Escaped after `iterations` steps; `potential` is the Green's function
    /// estimate `d^{-n} log|z_n|` (0 unless smooth coloring was asked for).
    Escaped { iterations: u32, potential: f64 },
    /// Stayed bounded; `period` is filled in by period tinting.
    Bounded { period: Option<u32> },
    /// The pixel's parameter is outside the region where the computation is
    /// defined (used by renormalization windows).
    Invalid,
}

impl Sample {
    pub fn is_member(&self) -> bool {
        matches!(self, Sample::Bounded { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RasterResult {
    pub job: RasterJob,
    /// Row-major, `width · height` entries.
    pub pixels: Vec<Sample>,
    pub elapsed_secs: f64,
}

/// Escape radius large enough that the Green's function estimate is
/// accurate to plotting precision.
const SMOOTH_RADIUS: f64 = 1e8;

fn orbit_sample(map: &MapDescriptor, starts: &[C64], max_iter: u32, smooth: bool) -> Sample {
    let r = if smooth { map.escape_radius().max(SMOOTH_RADIUS) } else { map.escape_radius() };
    let d = map.degree() as f64;
    for &z0 in starts {
        let mut z = z0;
        for n in 0..=max_iter {
            let m = hypot(z);
            if !(m <= r) {
                let potential = if smooth && m.is_finite() { libm::log(m) / libm::pow(d, n as f64) } else { 0.0 };
                return Sample::Escaped { iterations: n, potential };
            }
            if n < max_iter {
                z = map.eval(z);
            }
        }
    }
    Sample::Bounded { period: None }
}

/// The map a parameter-plane pixel stands for, with the orbit starts
/// (critical points) deciding membership.
pub fn plane_map(plane: &Plane, point: C64) -> (MapDescriptor, Vec<C64>, bool) {
    match *plane {
        Plane::ParameterAnti { degree } => {
            let m = Family::Multicorn { degree }.descriptor(Param::from_c64(point));
            (m, alloc::vec![C64::default()], true)
        }
        Plane::ParameterMultibrot { degree } => {
            let m = Family::Multibrot { degree }.descriptor(Param::from_c64(point));
            (m, alloc::vec![C64::default()], true)
        }
        Plane::ParameterCubic => {
            let m = Family::RealCubic.descriptor(Param::from_c64(point));
            let cps = m.critical_points();
            (m, cps, true)
        }
        Plane::Dynamical(m) => (m, alloc::vec![point], false),
    }
}

/// Membership verdict for one plane point.
pub fn sample_point(plane: &Plane, point: C64, max_iter: u32, coloring: Coloring, max_period: u32) -> Sample {
    let (map, starts, _) = plane_map(plane, point);
    let s = orbit_sample(&map, &starts, max_iter, coloring == Coloring::SmoothGreen);
    match (s, coloring) {
        (Sample::Bounded { .. }, Coloring::PeriodTint) => {
            let period = period_detect(&map, starts[0], max_period, max_iter);
            Sample::Bounded { period }
        }
        _ => s,
    }
}

/// Whether the point belongs to the filled set (parameter planes: the
/// connectedness locus) at the given depth.
pub fn membership(plane: &Plane, point: C64, max_iter: u32) -> bool {
    sample_point(plane, point, max_iter, Coloring::Binary, 1).is_member()
}

pub fn render_row(job: &RasterJob, row: u32) -> Vec<Sample> {
    (0..job.width)
        .map(|col| sample_point(&job.plane, job.pixel_point(row, col), job.max_iter, job.coloring, job.max_period))
        .collect()
}

/// Single-threaded render. No clock is available here, so
/// `elapsed_secs` is left at 0.
pub fn render(job: &RasterJob) -> Result<RasterResult, RasterError> {
    job.validate()?;
    let mut pixels = Vec::with_capacity(job.width as usize * job.height as usize);
    for row in 0..job.height {
        pixels.extend(render_row(job, row));
    }
    Ok(RasterResult { job: *job, pixels, elapsed_secs: 0.0 })
}

/// Least `k ≤ max_period` such that the orbit of `z0` converges to an
/// attracting `k`-cycle of the map (for antiholomorphic maps `k` is the
/// period under the map itself; attraction is tested on the holomorphic
/// return). `burn_in` orbit steps are taken first.
pub fn period_detect(map: &MapDescriptor, z0: C64, max_period: u32, burn_in: u32) -> Option<u32> {
    let dy = map.dynamics();
    let mut z = z0;
    for _ in 0..burn_in {
        z = dy.eval(z);
        if !(hypot(z) <= dy.escape_radius) {
            return None;
        }
    }
    let scale = 1.0 + hypot(z);
    for k in 1..=max_period {
        let ret = dy.iterate(k);
        let g = ret.holomorphic_power();
        // Newton on the holomorphic return, which must stay next to the orbit
        let mut w = z;
        let mut ok = false;
        for _ in 0..30 {
            let e = g.eval_d(w);
            let step = (e.value - w) / (e.deriv - 1.0);
            if !(hypot(step).is_finite()) {
                break;
            }
            w -= step;
            if hypot(step) <= 1e-13 * scale {
                ok = true;
                break;
            }
        }
        if !ok || hypot(w - z) > 1e-4 * scale {
            continue;
        }
        if hypot(ret.eval(w) - w) > 1e-9 * scale {
            continue;
        }
        if hypot(g.eval_d(w).deriv) < 0.999 {
            return Some(k);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{AntiPolyMap, RealCubicMap};

    #[test]
    fn period_of_simple_attractors() {
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, C64::default()));
        assert_eq!(period_detect(&m, C64::default(), 8, 100), Some(1));
        let a = core::f64::consts::FRAC_1_SQRT_2;
        let m = MapDescriptor::Cubic(RealCubicMap::new(a, 0.0));
        assert_eq!(period_detect(&m, c64(0.0, a), 8, 100), Some(2));
    }

    #[test]
    fn one_pixel_job_samples_the_center() {
        let job = RasterJob::new(
            Plane::ParameterAnti { degree: 2 },
            Window { center: c64(0.1, 0.0), width: 1.0 },
            1,
            1,
            50,
            Coloring::Binary,
        );
        assert_eq!(job.pixel_point(0, 0), c64(0.1, 0.0));
        assert!(render(&job).unwrap().pixels[0].is_member());
    }
}
