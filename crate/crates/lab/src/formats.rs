//! PPM, CSV and JSON output.

use std::fmt::Write as _;
use std::io::{self, Write};

use multicorn_core::raster::{Coloring, RasterResult, Sample};

const INVALID: [u8; 3] = [200, 40, 160];

fn period_color(p: u32) -> [u8; 3] {
    const TINTS: [[u8; 3]; 8] = [
        [20, 20, 30],
        [40, 90, 200],
        [200, 60, 50],
        [60, 170, 80],
        [220, 170, 40],
        [130, 70, 190],
        [40, 180, 190],
        [150, 150, 150],
    ];
    TINTS[(p.saturating_sub(1) % 8) as usize]
}

/// RGB for one sample under a coloring.
pub fn color(s: &Sample, coloring: Coloring) -> [u8; 3] {
    match (*s, coloring) {
        (Sample::Invalid, _) => INVALID,
        (Sample::Bounded { .. }, Coloring::Binary | Coloring::SmoothGreen) => [0, 0, 0],
        (Sample::Bounded { period: Some(p) }, Coloring::PeriodTint) => period_color(p),
        (Sample::Bounded { period: None }, Coloring::PeriodTint) => [0, 0, 0],
        (Sample::Escaped { .. }, Coloring::Binary | Coloring::PeriodTint) => [255, 255, 255],
        (Sample::Escaped { potential, .. }, Coloring::SmoothGreen) => {
            // brighter farther out; log scale spreads the boundary detail
            let t = ((potential.max(1e-12).ln() + 12.0) / 14.0).clamp(0.0, 1.0);
            let v = (40.0 + 215.0 * t) as u8;
            [v, v, v]
        }
    }
}

/// Binary PPM: header `P6\n<w> <h>\n255\n` then row-major RGB.
pub fn ppm_bytes(r: &RasterResult) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", r.job.width, r.job.height).into_bytes();
    out.reserve(r.pixels.len() * 3);
    for s in &r.pixels {
        out.extend_from_slice(&color(s, r.job.coloring));
    }
    out
}

pub fn write_ppm<W: Write>(mut w: W, r: &RasterResult) -> io::Result<()> {
    w.write_all(&ppm_bytes(r))
}

/// Scalar value of a pixel: the Green's function under smooth coloring
/// (0 on the filled set), the detected period under period tinting (0 when
/// none, −1 when escaped), otherwise 1 for members and 0 for escapes.
/// Invalid pixels are `NaN`.
pub fn scalar(s: &Sample, coloring: Coloring) -> f64 {
    match (*s, coloring) {
        (Sample::Invalid, _) => f64::NAN,
        (Sample::Escaped { potential, .. }, Coloring::SmoothGreen) => potential,
        (Sample::Escaped { .. }, Coloring::PeriodTint) => -1.0,
        (Sample::Escaped { .. }, Coloring::Binary) => 0.0,
        (Sample::Bounded { .. }, Coloring::SmoothGreen) => 0.0,
        (Sample::Bounded { period }, Coloring::PeriodTint) => period.map_or(0.0, f64::from),
        (Sample::Bounded { .. }, Coloring::Binary) => 1.0,
    }
}

/// `row,col,value` dump with shortest round-trip floats.
pub fn csv_string(r: &RasterResult) -> String {
    let mut s = String::from("row,col,value\n");
    let w = r.job.width as usize;
    for (i, p) in r.pixels.iter().enumerate() {
        let _ = writeln!(s, "{},{},{}", i / w, i % w, scalar(p, r.job.coloring));
    }
    s
}
