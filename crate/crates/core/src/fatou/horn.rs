use alloc::vec::Vec;

use super::frame::{FatouFrame, FrameKind};
use super::FatouError;
use crate::scalar::{c64, cis_turns, hypot, C64};

/// Lifted horn map `ψ_att ∘ ψ_rep⁻¹` at `ζ` in the repelling cylinder.
pub fn lifted_horn_map(att: &FatouFrame, rep: &FatouFrame, zeta: C64) -> Result<C64, FatouError> {
    if att.kind != FrameKind::Attracting || rep.kind != FrameKind::Repelling {
        return Err(FatouError::InvalidArgument("horn map needs an attracting and a repelling frame"));
    }
    let w = rep.inverse_dev(zeta).map_err(|_| FatouError::OutsideBand)?;
    let w = w + rep.parabolic_point - att.parabolic_point;
    att.psi_dev(w).map_err(|_| FatouError::OutsideBand)
}

/// Horizontal band `Im ζ = im`, `Re ζ = re0 + j/count` for `j < count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HornBand {
    pub im: f64,
    pub re0: f64,
    pub count: usize,
}

impl Default for HornBand {
    fn default() -> Self {
        HornBand { im: 1.5, re0: 0.0, count: 10 }
    }
}

impl HornBand {
    pub fn points(&self) -> Vec<C64> {
        (0..self.count).map(|j| c64(self.re0 + j as f64 / self.count as f64, self.im)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HornSampler {
    pub att: FatouFrame,
    pub rep: FatouFrame,
    pub band: HornBand,
}

impl HornSampler {
    pub fn new(att: FatouFrame, rep: FatouFrame, band: HornBand) -> Self {
        HornSampler { att, rep, band }
    }

    pub fn eval(&self, zeta: C64) -> Result<C64, FatouError> {
        lifted_horn_map(&self.att, &self.rep, zeta)
    }

    /// Projected horn map `h(w) = e^{2πi H(ζ)}` at `w = e^{2πiζ}`.
    pub fn projected(&self, zeta: C64) -> Result<(C64, C64), FatouError> {
        let h = self.eval(zeta)?;
        Ok((exp_turns(zeta), exp_turns(h)))
    }

    /// `(ζ, H(ζ))` over the band.
    pub fn samples(&self) -> Result<Vec<(C64, C64)>, FatouError> {
        self.band.points().into_iter().map(|z| self.eval(z).map(|h| (z, h))).collect()
    }

    /// Max of `|H(ζ + s) − H(ζ) − s|` over the band.
    pub fn shift_residual(&self, s: f64) -> Result<f64, FatouError> {
        let mut worst: f64 = 0.0;
        for z in self.band.points() {
            let a = self.eval(z)?;
            let b = self.eval(z + s)?;
            worst = worst.max(hypot(b - a - s));
        }
        Ok(worst)
    }

    /// Max of `|h(−w) + h(w)|` over the band.
    pub fn oddness_residual(&self) -> Result<f64, FatouError> {
        let mut worst: f64 = 0.0;
        for z in self.band.points() {
            let (_, a) = self.projected(z)?;
            let (_, b) = self.projected(z + 0.5)?;
            worst = worst.max(hypot(a + b));
        }
        Ok(worst)
    }

    /// `H(ζ) − ζ` high in the band, approximating the asymptotic offset.
    pub fn asymptotic_offset(&self, height: f64) -> Result<C64, FatouError> {
        let z = c64(self.band.re0, height);
        Ok(self.eval(z)? - z)
    }
}

fn exp_turns(z: C64) -> C64 {
    cis_turns(z.re) * libm::exp(-2.0 * core::f64::consts::PI * z.im)
}
