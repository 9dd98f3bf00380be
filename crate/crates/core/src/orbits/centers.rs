use alloc::vec::Vec;

use crate::dynamics::Family;
use crate::linalg;
use crate::scalar::{hypot, Param, C64};

/// A parameter whose critical point is periodic of exact period `period`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterHit {
    pub parameter: Param,
    pub period: u32,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterConfig {
    pub max_iter: u32,
    /// Finite-difference step, relative to the parameter scale.
    pub fd_step: f64,
    pub residual_tol: f64,
}

impl Default for CenterConfig {
    fn default() -> Self {
        CenterConfig { max_iter: 80, fd_step: 1e-7, residual_tol: 1e-12 }
    }
}

/// `f_p^{∘k}(crit) − crit` for the family's marked critical point.
pub fn critical_orbit_residual(family: Family, p: Param, k: u32) -> C64 {
    let dy = family.dynamics(p);
    let mut u = dy.critical_point;
    for _ in 0..k {
        u = dy.eval(u);
        if !(hypot(u) < 1e150) {
            return C64::new(f64::INFINITY, f64::INFINITY);
        }
    }
    u - dy.critical_point
}

fn normalize(family: Family, p: Param) -> Param {
    match family {
        // g depends on a², and conj swaps the two critical points
        Family::RealCubic | Family::RealCubicAnti { .. } => Param::new(p.x.abs(), p.y),
        _ => p,
    }
}

pub fn newton_center(family: Family, period: u32, seed: Param) -> Option<CenterHit> {
    newton_center_with(family, period, seed, &CenterConfig::default())
}

/// Damped Newton on the critical-orbit periodicity equation, with the
/// parameter as two independent reals and a finite-difference Jacobian.
pub fn newton_center_with(family: Family, period: u32, seed: Param, cfg: &CenterConfig) -> Option<CenterHit> {
    if period == 0 {
        return None;
    }
    let res = |p: Param| critical_orbit_residual(family, p, period);
    let mut p = seed;
    let mut r = res(p);
    if !r.re.is_finite() {
        return None;
    }
    for _ in 0..cfg.max_iter {
        let h = cfg.fd_step * family.scale(p);
        let rx = res(Param::new(p.x + h, p.y));
        let ry = res(Param::new(p.x, p.y + h));
        let jac = [[(rx.re - r.re) / h, (ry.re - r.re) / h], [(rx.im - r.im) / h, (ry.im - r.im) / h]];
        let dx = linalg::solve(jac, [-r.re, -r.im])?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let q = Param::new(p.x + t * dx[0], p.y + t * dx[1]);
            let rq = res(q);
            if hypot(rq) < hypot(r) || hypot(rq) < cfg.residual_tol * 1e-2 {
                accepted = Some((q, rq));
                break;
            }
            t *= 0.5;
        }
        let (q, rq) = accepted?;
        let step = libm::hypot(q.x - p.x, q.y - p.y);
        p = q;
        r = rq;
        if hypot(r) < cfg.residual_tol * 1e-3 || step < 1e-16 * family.scale(p) {
            break;
        }
    }
    let residual = hypot(r);
    if !(residual < cfg.residual_tol) {
        return None;
    }
    // exact period: no proper divisor closes the critical orbit
    for j in 1..period {
        if period % j == 0 && hypot(critical_orbit_residual(family, p, j)) < 1e-6 {
            return None;
        }
    }
    Some(CenterHit { parameter: normalize(family, p), period, residual })
}

/// Disk of parameters searched by a regular seed grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchWindow {
    pub center: Param,
    pub radius: f64,
    pub grid: u32,
}

impl SearchWindow {
    pub fn disk(radius: f64) -> Self {
        SearchWindow { center: Param::default(), radius, grid: 72 }
    }
}

/// Every center of the given period found from a grid of Newton seeds,
/// deduplicated and sorted by (real part, imaginary part).
pub fn enumerate_centers(family: Family, period: u32, window: &SearchWindow) -> Vec<CenterHit> {
    let n = window.grid.max(2);
    let mut hits: Vec<CenterHit> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x = window.center.x + window.radius * (2.0 * (i as f64 + 0.5) / n as f64 - 1.0);
            let y = window.center.y + window.radius * (2.0 * (j as f64 + 0.5) / n as f64 - 1.0);
            let seed = Param::new(x, y);
            if seed.dist(window.center) > window.radius {
                continue;
            }
            if let Some(hit) = newton_center(family, period, seed) {
                if hit.parameter.dist(window.center) >= window.radius {
                    continue;
                }
                if !hits.iter().any(|h| h.parameter.dist(hit.parameter) < 1e-8) {
                    hits.push(hit);
                }
            }
        }
    }
    hits.sort_by(|a, b| a.parameter.x.total_cmp(&b.parameter.x).then(a.parameter.y.total_cmp(&b.parameter.y)));
    hits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_center() {
        let h = newton_center(Family::Multicorn { degree: 2 }, 1, Param::new(0.1, 0.0)).unwrap();
        assert!(h.parameter.as_c64().norm() < 1e-12);
    }

    #[test]
    fn bitransitive_cubic_center() {
        let h = newton_center(Family::RealCubic, 2, Param::new(0.7, 0.0)).unwrap();
        assert!((h.parameter.x - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(h.parameter.y.abs() < 1e-12);
    }
}
