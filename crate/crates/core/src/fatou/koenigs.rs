use alloc::vec::Vec;

use super::frame::characteristic_point;
use super::FatouError;
use crate::dynamics::Dynamics;
use crate::orbits::Cycle;
use crate::poly::Recentered;
use crate::scalar::{c64, hypot, is_finite, C64};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KoenigsConfig {
    pub terms: usize,
    pub max_iter: u32,
    pub validation_samples: usize,
}

impl Default for KoenigsConfig {
    fn default() -> Self {
        KoenigsConfig { terms: 40, max_iter: 5_000_000, validation_samples: 8 }
    }
}

/// Koenigs linearizer of the squared return at an attracting cycle point:
/// `κ(G z) = ρ κ(z)`, `κ'(z₁) = 1`, with `ρ = |λ|²` for antiholomorphic
/// returns and `ρ = λ` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct KoenigsFrame {
    pub point: C64,
    pub period: u32,
    /// Linear coefficient of the return `f^{∘k}` (`∂/∂z̄` when anti).
    pub multiplier: C64,
    pub rho: C64,
    half: Option<Recentered>,
    full: Recentered,
    coeffs: Vec<C64>,
    /// Series radius: the series is used directly only below it.
    pub radius: f64,
    /// Max relative functional-equation residual on validation samples.
    pub validation: f64,
    max_iter: u32,
}

impl KoenigsFrame {
    fn series(&self, w: C64) -> C64 {
        let mut acc = C64::default();
        for &k in self.coeffs.iter().rev() {
            acc = (acc + k) * w;
        }
        acc
    }

    /// `(K(G^n w), n)`, so that `κ(w) = ρ^{−n} K(G^n w)`.
    fn reduced(&self, w0: C64) -> Result<(C64, u32), FatouError> {
        let mut w = w0;
        let mut n = 0;
        while !(hypot(w) <= self.radius) {
            if n >= self.max_iter || !is_finite(w) {
                return Err(FatouError::OrbitMissesPetal);
            }
            w = self.full.eval(w);
            n += 1;
        }
        Ok((self.series(w), n))
    }

    pub fn eval_dev(&self, w: C64) -> Result<C64, FatouError> {
        let (k, n) = self.reduced(w)?;
        Ok(k * self.rho.powi(-(n as i32)))
    }

    pub fn eval(&self, z: C64) -> Result<C64, FatouError> {
        self.eval_dev(z - self.point)
    }

    /// `κ(b)/κ(a)` without forming either factor of `ρ^{−n}`.
    pub fn ratio_dev(&self, num: C64, den: C64) -> Result<C64, FatouError> {
        let (kn, nn) = self.reduced(num)?;
        let (kd, nd) = self.reduced(den)?;
        Ok(kn / kd * self.rho.powi(nd as i32 - nn as i32))
    }

    /// Antiholomorphic half-return in deviation coordinates.
    pub fn half(&self, w: C64) -> Option<C64> {
        self.half.as_ref().map(|h| h.eval(w))
    }

    pub fn g(&self, w: C64) -> C64 {
        self.full.eval(w)
    }
}

pub fn build_koenigs(dy: &Dynamics, point: C64, period: u32, cfg: &KoenigsConfig) -> Result<KoenigsFrame, FatouError> {
    let first = Recentered::new(&dy.iterate(period), point);
    let lam = first.multiplier();
    let (half, full, rho) = if first.is_anti() {
        let full = first.then(&first);
        (Some(first), full, c64(hypot(lam) * hypot(lam), 0.0))
    } else {
        (None, first.clone(), lam)
    };
    if !(hypot(rho) > 1e-24 && hypot(rho) < 1.0) {
        return Err(FatouError::LinearizerDegenerate);
    }
    let m = cfg.terms;
    let mut g = Series::from_coeffs(full.taylor(m), m + 1);
    // taylor() starts at g₁; shift to a series with zero constant term
    g.coeffs.insert(0, C64::default());
    g.coeffs.truncate(m + 1);
    g.coeffs[1] = rho;
    let mut powers = Vec::with_capacity(m);
    let mut p = g.clone();
    for _ in 1..m {
        powers.push(p.clone());
        p = p.mul(&g);
    }
    let mut coeffs = Vec::with_capacity(m);
    coeffs.push(c64(1.0, 0.0));
    let mut rho_m = rho;
    for mm in 2..=m {
        rho_m *= rho;
        let mut s = C64::default();
        for (j, &k) in coeffs.iter().enumerate() {
            s += k * powers[j].coeff(mm);
        }
        coeffs.push(s / (rho - rho_m));
    }
    // radius where the tail of the truncated series is below rounding
    let mut radius = f64::INFINITY;
    for mm in (m - 6)..m {
        let k = hypot(coeffs[mm]);
        if k > 0.0 {
            radius = radius.min(libm::pow(1e-17 / k, 1.0 / mm as f64));
        }
    }
    let scale = 1.0 + hypot(point);
    let radius = radius.min(0.5 * scale);
    let mut frame = KoenigsFrame {
        point,
        period,
        multiplier: lam,
        rho,
        half,
        full,
        coeffs,
        radius,
        validation: 0.0,
        max_iter: cfg.max_iter,
    };
    let mut worst: f64 = 0.0;
    for j in 0..cfg.validation_samples {
        let w = 3.0 * radius * crate::scalar::cis_turns(j as f64 / cfg.validation_samples as f64 + 0.03);
        let a = frame.eval_dev(w)?;
        let b = frame.eval_dev(frame.full.eval(w))?;
        worst = worst.max(hypot(b - rho * a) / hypot(a));
    }
    frame.validation = worst;
    Ok(frame)
}

/// Point of the attracting cycle of period `period` whose basin holds the
/// critical value, polished by Newton on the squared return. A `guess`
/// skips the critical-orbit iteration.
pub fn attracting_cycle_of(dy: &Dynamics, period: u32, guess: Option<C64>) -> Result<C64, FatouError> {
    let ret = dy.iterate(period);
    let g = if ret.is_anti() { ret.then(&ret) } else { ret };
    let mut z = match guess {
        Some(z) => z,
        None => {
            let mut z = dy.critical_value();
            for _ in 0..200_000 {
                let nz = g.eval(z);
                if !(hypot(nz) <= dy.escape_radius) {
                    return Err(FatouError::OrbitMissesPetal);
                }
                let done = hypot(nz - z) < 1e-9;
                z = nz;
                if done {
                    break;
                }
            }
            z
        }
    };
    for _ in 0..60 {
        let e = g.eval_d(z);
        let step = (e.value - z) / (e.deriv - 1.0);
        if !is_finite(step) {
            return Err(FatouError::LinearizerDegenerate);
        }
        z -= step;
        if hypot(step) <= 1e-15 * (1.0 + hypot(z)) {
            return Ok(z);
        }
    }
    Ok(z)
}

/// `ρ_H = κ(f^{∘k}(c_v))/κ(c_v)` at an attracting cycle with
/// antiholomorphic return; 0 at a superattracting cycle.
pub fn koenigs_ratio(dy: &Dynamics, cycle: &Cycle) -> Result<C64, FatouError> {
    let idx = characteristic_point(dy, &cycle.points).unwrap_or(0);
    let point = attracting_cycle_of(dy, cycle.period, Some(cycle.points[idx]))?;
    ratio_at(dy, point, cycle.period, &KoenigsConfig::default())
}

pub(crate) fn ratio_at(dy: &Dynamics, point: C64, period: u32, cfg: &KoenigsConfig) -> Result<C64, FatouError> {
    let ret = dy.iterate(period);
    if !ret.is_anti() {
        return Err(FatouError::InvalidArgument("Koenigs ratio needs an antiholomorphic return"));
    }
    let lam = Recentered::new(&ret, point).multiplier();
    if hypot(lam) < 1e-12 {
        return Ok(C64::default());
    }
    let frame = build_koenigs(dy, point, period, cfg)?;
    let cv = dy.critical_value() - point;
    let hv = frame.half(cv).expect("anti return");
    frame.ratio_dev(hv, cv)
}
