use alloc::vec::Vec;

use super::germ::ParabolicGerm;
use super::FatouError;
use crate::dynamics::Dynamics;
use crate::orbits::Cycle;
use crate::scalar::{c64, hypot, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    Attracting,
    Repelling,
}

/// Horizontal gauge of an attracting frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    /// Real part of the critical value's coordinate set to 0.
    CriticalValue,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FatouConfig {
    pub series_terms: usize,
    /// Initial acceptance radius in the preferred coordinate.
    pub radius: f64,
    pub agree_tol: f64,
    pub max_doublings: u32,
    pub max_iter: u32,
    pub petal_samples: usize,
    /// Petal samples sit at `Z = ±sample_re + i·y`, `|y| ≤ sample_im`.
    pub sample_re: f64,
    pub sample_im: f64,
    pub gauge: Gauge,
}

impl Default for FatouConfig {
    fn default() -> Self {
        FatouConfig {
            series_terms: 10,
            radius: 32.0,
            agree_tol: 1e-9,
            max_doublings: 8,
            max_iter: 2_000_000,
            petal_samples: 20,
            sample_re: 6.0,
            sample_im: 5.0,
            gauge: Gauge::CriticalValue,
        }
    }
}

/// Validation figures gathered while building a frame.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FrameReport {
    pub abel_max: f64,
    pub equator_max: f64,
    pub beta_spread: f64,
}

/// A normalized Fatou coordinate `ψ` for the squared return `G` at a
/// simple parabolic point: `ψ(G z) = ψ(z) + 1`, and for antiholomorphic
/// half-returns `ψ(H z) = conj ψ(z) + 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct FatouFrame {
    pub kind: FrameKind,
    pub germ: ParabolicGerm,
    pub parabolic_point: C64,
    pub period_k: u32,
    pub quadratic_coeff: C64,
    pub residu_iteratif: C64,
    /// Largest iteration depth used while validating.
    pub truncation: u32,
    /// Purely imaginary shift applied so that `Im β = 0`.
    pub equator_shift: C64,
    pub horizontal_shift: f64,
    /// Measured half-return constant before normalization.
    pub beta: Option<C64>,
    pub report: FrameReport,
    escape: f64,
    cfg: FatouConfig,
}

impl FatouFrame {
    fn shift(&self) -> C64 {
        self.equator_shift + self.horizontal_shift
    }

    fn raw_dev(&self, w0: C64) -> Result<(C64, u32), FatouError> {
        self.raw_dev_from(w0, self.cfg.radius)
    }

    fn raw_dev_from(&self, w0: C64, r0: f64) -> Result<(C64, u32), FatouError> {
        let g = &self.germ;
        let cfg = &self.cfg;
        let mut w = w0;
        let mut n = 0u32;
        let mut r = r0;
        let mut prev: Option<C64> = None;
        let mut doublings = 0;
        let att = self.kind == FrameKind::Attracting;
        loop {
            let z = g.z_of(w);
            let inside = if att { z.re >= r && z.im.abs() <= z.re } else { -z.re >= r && z.im.abs() <= -z.re };
            if inside {
                let val = if att { g.phi_att(z) - n as f64 } else { g.phi_rep(z) + n as f64 };
                if let Some(p) = prev {
                    if hypot(val - p) <= cfg.agree_tol * hypot(val).max(1.0) {
                        return Ok((val, n));
                    }
                }
                prev = Some(val);
                doublings += 1;
                if doublings > cfg.max_doublings {
                    return Err(FatouError::NoConvergence { doublings });
                }
                r *= 2.0;
            }
            if n >= cfg.max_iter {
                return Err(if att { FatouError::OrbitMissesPetal } else { FatouError::PetalEscape });
            }
            w = if att { g.g(w) } else { g.g_inv(w).ok_or(FatouError::PetalEscape)? };
            n += 1;
            if !(hypot(w) <= self.escape) {
                return Err(FatouError::PetalEscape);
            }
        }
    }

    /// `ψ` at a deviation `w = z − z₁`, with the depth used.
    pub fn psi_dev_depth(&self, w: C64) -> Result<(C64, u32), FatouError> {
        self.raw_dev(w).map(|(v, n)| (v + self.shift(), n))
    }

    pub fn psi_dev(&self, w: C64) -> Result<C64, FatouError> {
        self.psi_dev_depth(w).map(|p| p.0)
    }

    pub fn psi(&self, z: C64) -> Result<C64, FatouError> {
        self.psi_dev(z - self.parabolic_point)
    }

    /// Deviation `w` with `ψ(z₁ + w) = ζ`, reached through the asymptotic
    /// region and `n` exact steps of the return map.
    pub fn inverse_dev(&self, zeta: C64) -> Result<C64, FatouError> {
        let g = &self.germ;
        let t = zeta - self.shift();
        let r = 2.0 * self.cfg.radius + hypot(g.resid) * 8.0;
        match self.kind {
            FrameKind::Repelling => {
                let n = libm::ceil(t.re + r + (t.im.abs())).max(0.0);
                let zz = g.phi_rep_inverse(t - n).ok_or(FatouError::OutsideBand)?;
                let mut w = g.w_of(zz);
                for _ in 0..n as u64 {
                    w = g.g(w);
                    if !(hypot(w) <= self.escape) {
                        return Err(FatouError::OutsideBand);
                    }
                }
                Ok(w)
            }
            FrameKind::Attracting => {
                let n = libm::ceil(r + t.im.abs() - t.re).max(0.0);
                let zz = att_inverse(g, t + n).ok_or(FatouError::OutsideBand)?;
                let mut w = g.w_of(zz);
                for _ in 0..n as u64 {
                    w = g.g_inv(w).ok_or(FatouError::OutsideBand)?;
                }
                Ok(w)
            }
        }
    }

    pub fn inverse(&self, zeta: C64) -> Result<C64, FatouError> {
        self.inverse_dev(zeta).map(|w| w + self.parabolic_point)
    }

    /// Petal sample deviations used for the equator and the validation.
    pub fn petal_samples(&self) -> Vec<C64> {
        let m = self.cfg.petal_samples.max(2);
        let sgn = if self.kind == FrameKind::Attracting { 1.0 } else { -1.0 };
        (0..m)
            .map(|j| {
                let y = -self.cfg.sample_im + 2.0 * self.cfg.sample_im * j as f64 / (m - 1) as f64;
                self.germ.w_of(c64(sgn * self.cfg.sample_re, y))
            })
            .collect()
    }

    /// Max Abel residual `|ψ(G w) − ψ(w) − 1|` over the petal samples. The
    /// two sides are evaluated with different acceptance radii, so they do
    /// not share an orbit tail.
    pub fn abel_residual(&self) -> Result<f64, FatouError> {
        let mut worst: f64 = 0.0;
        for w in self.petal_samples() {
            worst = worst.max(self.abel_at(w)?.0);
        }
        Ok(worst)
    }

    fn abel_at(&self, w: C64) -> Result<(f64, u32), FatouError> {
        let (a, n1) = self.raw_dev_from(w, 1.5 * self.cfg.radius)?;
        let (b, n2) = self.raw_dev_from(self.germ.g(w), self.cfg.radius)?;
        Ok((hypot(b - a - 1.0), n1.max(n2)))
    }
}

fn att_inverse(g: &ParabolicGerm, t: C64) -> Option<C64> {
    let mut z = t + g.resid * t.ln();
    for _ in 0..60 {
        let step = (g.phi_att(z) - t) / g.dphi(z);
        if !crate::scalar::is_finite(step) {
            return None;
        }
        z -= step;
        if hypot(step) <= 1e-15 * hypot(z) {
            return Some(z);
        }
    }
    None
}

/// The return map used to decide which cycle point attracts an orbit:
/// `f^{∘2k}` for antiholomorphic returns, `f^{∘k}` otherwise.
fn squared_return(dy: &Dynamics, period: u32) -> crate::poly::Chain {
    let ret = dy.iterate(period);
    if ret.is_anti() {
        ret.then(&ret)
    } else {
        ret
    }
}

/// Index of the cycle point whose immediate basin contains the critical
/// value, if the critical orbit visibly converges to the cycle.
pub fn characteristic_point(dy: &Dynamics, points: &[C64]) -> Option<usize> {
    let period = points.len() as u32;
    let g = squared_return(dy, period);
    let mut z = dy.critical_value();
    for _ in 0..4000 {
        z = g.eval(z);
        if !(hypot(z) <= dy.escape_radius) {
            return None;
        }
    }
    let mut sep = f64::INFINITY;
    for i in 0..points.len() {
        for j in 0..i {
            sep = sep.min(hypot(points[i] - points[j]));
        }
    }
    let (best, d) = points
        .iter()
        .enumerate()
        .map(|(i, &p)| (i, hypot(z - p)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    if d < (0.25 * sep).min(0.1 * (1.0 + hypot(points[best]))) {
        Some(best)
    } else {
        None
    }
}

/// Build a frame at the characteristic point of a parabolic cycle (or at
/// its first point when the critical orbit does not single one out).
pub fn build_fatou(dy: &Dynamics, cycle: &Cycle, kind: FrameKind, cfg: &FatouConfig) -> Result<FatouFrame, FatouError> {
    let idx = characteristic_point(dy, &cycle.points).unwrap_or(0);
    build_fatou_at(dy, cycle.points[idx], cycle.period, kind, cfg)
}

pub fn build_fatou_at(
    dy: &Dynamics,
    point: C64,
    period: u32,
    kind: FrameKind,
    cfg: &FatouConfig,
) -> Result<FatouFrame, FatouError> {
    let germ = ParabolicGerm::new(dy, point, period, cfg.series_terms)?;
    let mut frame = FatouFrame {
        kind,
        parabolic_point: point,
        period_k: period,
        quadratic_coeff: germ.quadratic,
        residu_iteratif: germ.resid,
        truncation: 0,
        equator_shift: C64::default(),
        horizontal_shift: 0.0,
        beta: None,
        report: FrameReport::default(),
        escape: 2.0 * dy.escape_radius + hypot(point),
        cfg: *cfg,
        germ,
    };
    let samples = frame.petal_samples();
    let mut depth = 0;
    if frame.germ.is_anti() {
        let mut betas = Vec::with_capacity(samples.len());
        for &w in &samples {
            let hw = frame.germ.half(w).expect("anti germ");
            let (a, n1) = frame.raw_dev(w)?;
            let (b, n2) = frame.raw_dev(hw)?;
            depth = depth.max(n1).max(n2);
            betas.push(b - a.conj());
        }
        let beta = betas.iter().sum::<C64>() / betas.len() as f64;
        frame.report.beta_spread = betas.iter().map(|b| hypot(b - beta)).fold(0.0, f64::max);
        frame.beta = Some(beta);
        frame.equator_shift = c64(0.0, -beta.im / 2.0);
    }
    if kind == FrameKind::Attracting && cfg.gauge == Gauge::CriticalValue {
        if let Ok(v) = frame.psi_dev(dy.critical_value() - point) {
            frame.horizontal_shift = -v.re;
        }
    }
    let mut abel: f64 = 0.0;
    let mut eq: f64 = 0.0;
    for &w in &samples {
        let (r, n) = frame.abel_at(w)?;
        depth = depth.max(n);
        abel = abel.max(r);
        let a = frame.psi_dev(w)?;
        if let Some(hw) = frame.germ.half(w) {
            let c = frame.psi_dev(hw)?;
            eq = eq.max((c.im + a.im).abs());
        }
    }
    frame.report.abel_max = abel;
    frame.report.equator_max = eq;
    frame.truncation = depth;
    Ok(frame)
}

/// Critical Ecalle height: `Im ψ` at the critical value.
pub fn critical_ecalle_height(dy: &Dynamics, frame: &FatouFrame) -> Result<f64, FatouError> {
    critical_height_from(dy, frame, 0)
}

/// Critical Ecalle height measured at the representative `G^{∘n}(c_v)`.
pub fn critical_height_from(dy: &Dynamics, frame: &FatouFrame, n: u32) -> Result<f64, FatouError> {
    if frame.kind != FrameKind::Attracting {
        return Err(FatouError::InvalidArgument("critical height needs an attracting frame"));
    }
    let mut w = dy.critical_value() - frame.parabolic_point;
    for _ in 0..n {
        w = frame.germ.g(w);
    }
    Ok(frame.psi_dev(w)?.im)
}

/// The indifferent cycle of the given period that attracts the critical
/// orbit, if any.
pub fn critical_parabolic_cycle(dy: &Dynamics, period: u32) -> Option<Cycle> {
    let cycles = crate::orbits::find_cycles_dyn(dy, period, &crate::orbits::CycleConfig::default()).ok()?;
    cycles
        .into_iter()
        .filter(|c| c.class == crate::orbits::CycleClass::Indifferent)
        .find(|c| characteristic_point(dy, &c.points).is_some())
}
