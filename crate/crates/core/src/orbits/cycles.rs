use alloc::vec::Vec;

use super::aberth::{aberth, AberthConfig};
use super::OrbitError;
use crate::dynamics::Dynamics;
use crate::maps::MapDescriptor;
use crate::poly::Chain;
use crate::scalar::{hypot, is_finite, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleClass {
    Superattracting,
    Attracting,
    Indifferent,
    Repelling,
}

/// A periodic orbit, listed from its characteristic point (the point closest
/// to the critical value).
#[derive(Clone, Debug, PartialEq)]
pub struct Cycle {
    pub period: u32,
    pub points: Vec<C64>,
    /// `∂f^{∘k}/∂z̄` at the first point, when the return map is antiholomorphic.
    pub anti_multiplier: Option<C64>,
    /// Multiplier of the holomorphic return (`f^{∘2k}` when `f^{∘k}` is anti).
    pub sq_multiplier: C64,
    pub class: CycleClass,
    /// Multiplicity as a root of the fixed-point equation of the return.
    pub multiplicity: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleConfig {
    pub max_period: u32,
    pub max_degree: u64,
    /// Roots closer than this (relative) are merged into a multiple root.
    pub cluster_tol: f64,
    /// `| |ρ| − 1 |` below this counts as indifferent.
    pub indifferent_tol: f64,
    pub aberth: AberthConfig,
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig {
            max_period: 8,
            max_degree: 4096,
            cluster_tol: 1e-5,
            indifferent_tol: 1e-8,
            aberth: AberthConfig::default(),
        }
    }
}

pub fn find_cycles(map: &MapDescriptor, period: u32) -> Result<Vec<Cycle>, OrbitError> {
    find_cycles_dyn(&map.dynamics(), period, &CycleConfig::default())
}

/// Newton polish of a simple fixed point of a holomorphic chain.
fn polish_simple(h: &Chain, mut z: C64) -> C64 {
    for _ in 0..8 {
        let r = h.fixed_point_newton_ratio(z);
        if !is_finite(r) {
            break;
        }
        z -= r;
        if hypot(r) < 1e-16 * hypot(z).max(1.0) {
            break;
        }
    }
    z
}

/// Polish a multiple fixed point as a root of `h'(z) = 1`.
fn polish_multiple(h: &Chain, mut z: C64) -> C64 {
    for _ in 0..30 {
        let j = h.jet(z, 3);
        let d1 = j.coeffs[1] - 1.0;
        let d2 = j.coeffs[2] * 2.0;
        let step = d1 / d2;
        if !is_finite(step) {
            break;
        }
        z -= step;
        if hypot(step) < 1e-16 * hypot(z).max(1.0) {
            break;
        }
    }
    z
}

/// Least `j ≥ 1` with `f^j(z) ≈ z`, up to `limit`.
fn minimal_period(dy: &Dynamics, z: C64, limit: u32, tol: f64) -> Option<u32> {
    let mut u = z;
    for j in 1..=limit {
        u = dy.eval(u);
        if hypot(u - z) <= tol * hypot(z).max(1.0) {
            return Some(j);
        }
    }
    None
}

/// All cycles of exact period `k`, from the roots of the fixed-point equation
/// of the holomorphic return (`f^{∘2k}` when `f^{∘k}` is antiholomorphic).
pub fn find_cycles_dyn(dy: &Dynamics, period: u32, cfg: &CycleConfig) -> Result<Vec<Cycle>, OrbitError> {
    if period == 0 {
        return Err(OrbitError::InvalidArgument("period must be at least 1"));
    }
    if period > cfg.max_period {
        return Err(OrbitError::PeriodTooLarge { period, max: cfg.max_period });
    }
    let h = dy.iterate(period).holomorphic_power();
    let degree = h.degree();
    if degree > cfg.max_degree {
        return Err(OrbitError::DegreeTooLarge { degree, max: cfg.max_degree });
    }
    let roots = aberth(|z| h.fixed_point_newton_ratio(z), degree as usize, dy.escape_radius, &cfg.aberth)?;

    // merge clusters into multiple roots
    let mut used = alloc::vec![false; roots.len()];
    let mut fixed: Vec<(C64, u32)> = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = alloc::vec![i];
        used[i] = true;
        for j in i + 1..roots.len() {
            if !used[j] && hypot(roots[j] - roots[i]) <= cfg.cluster_tol * hypot(roots[i]).max(1.0) {
                used[j] = true;
                members.push(j);
            }
        }
        let m = members.len() as u32;
        let mean = members.iter().map(|&j| roots[j]).sum::<C64>() / m as f64;
        let z = if m == 1 { polish_simple(&h, mean) } else { polish_multiple(&h, mean) };
        fixed.push((z, m));
    }

    let tol = 1e-7;
    let mut taken = alloc::vec![false; fixed.len()];
    let mut out = Vec::new();
    for i in 0..fixed.len() {
        if taken[i] {
            continue;
        }
        let (z, m) = fixed[i];
        if minimal_period(dy, z, period, tol) != Some(period) {
            taken[i] = true;
            continue;
        }
        // collect the orbit, preferring the polished roots
        let mut pts = Vec::with_capacity(period as usize);
        let mut u = z;
        for _ in 0..period {
            let near = (0..fixed.len())
                .filter(|&j| !taken[j])
                .min_by(|&a, &b| hypot(fixed[a].0 - u).total_cmp(&hypot(fixed[b].0 - u)));
            match near {
                Some(j) if hypot(fixed[j].0 - u) <= 1e-6 * hypot(u).max(1.0) => {
                    taken[j] = true;
                    pts.push(fixed[j].0);
                }
                _ => pts.push(u),
            }
            u = dy.eval(*pts.last().unwrap());
        }
        out.push(build_cycle(dy, period, pts, m, cfg.indifferent_tol));
    }
    Ok(out)
}

fn build_cycle(dy: &Dynamics, period: u32, mut pts: Vec<C64>, multiplicity: u32, ind_tol: f64) -> Cycle {
    let cv = dy.critical_value();
    let first = (0..pts.len()).min_by(|&a, &b| hypot(pts[a] - cv).total_cmp(&hypot(pts[b] - cv))).unwrap_or(0);
    pts.rotate_left(first);
    let ret = dy.iterate(period);
    let e = ret.eval_d(pts[0]);
    let (anti_multiplier, sq_multiplier) = if e.anti {
        let e2 = ret.repeat(2).eval_d(pts[0]);
        (Some(e.deriv), e2.deriv)
    } else {
        (None, e.deriv)
    };
    let r = hypot(sq_multiplier);
    let class = if multiplicity > 1 || (r - 1.0).abs() <= ind_tol {
        CycleClass::Indifferent
    } else if r < 1e-12 {
        CycleClass::Superattracting
    } else if r < 1.0 {
        CycleClass::Attracting
    } else {
        CycleClass::Repelling
    };
    Cycle { period, points: pts, anti_multiplier, sq_multiplier, class, multiplicity }
}

/// The cycle through a known periodic point (polished on the holomorphic
/// return), for callers that located the point by other means.
pub fn cycle_through(dy: &Dynamics, point: C64, period: u32) -> Cycle {
    let h = dy.iterate(period).holomorphic_power();
    let residual = |z: C64| hypot(h.eval(z) - z);
    let simple = (0..8).fold(point, |z, _| polish_simple(&h, z));
    let double = polish_multiple(&h, point);
    let close = |z: C64| hypot(z - point) < 0.1 * hypot(point).max(1.0);
    let cand_double = close(double)
        && residual(double) <= 1e-9 * hypot(double).max(1.0)
        && hypot(h.jet(double, 2).coeffs[1] - 1.0) < 1e-6;
    let (z, parabolic) = if cand_double {
        (double, true)
    } else {
        (simple, false)
    };
    let mut pts = Vec::with_capacity(period as usize);
    let mut u = z;
    for _ in 0..period {
        pts.push(u);
        u = dy.eval(u);
    }
    build_cycle(dy, period, pts, if parabolic { 2 } else { 1 }, 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{AntiPolyMap, RealCubicMap};
    use crate::scalar::c64;

    #[test]
    fn parabolic_fixed_point_of_quarter() {
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, c64(0.25, 0.0)));
        let cyc = find_cycles(&m, 1).unwrap();
        let p = cyc.iter().find(|c| (c.points[0] - c64(0.5, 0.0)).norm() < 1e-7).unwrap();
        assert_eq!(p.class, CycleClass::Indifferent);
        assert!((p.anti_multiplier.unwrap().norm() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn superattracting_origin() {
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, C64::default()));
        let cyc = find_cycles(&m, 1).unwrap();
        assert!(cyc.iter().any(|c| c.points[0].norm() < 1e-12 && c.class == CycleClass::Superattracting));
        // the other fixed points are the cube roots of unity
        assert_eq!(cyc.len(), 4);
    }

    #[test]
    fn cubic_parabolic_four_cycle() {
        let a = libm::pow(8.0 / 9.0, 0.25);
        let m = MapDescriptor::Cubic(RealCubicMap::new(a, 0.0));
        let cyc = find_cycles(&m, 4).unwrap();
        let par: Vec<_> = cyc.iter().filter(|c| c.class == CycleClass::Indifferent).collect();
        assert!(!par.is_empty());
        for c in par {
            assert!((c.sq_multiplier - 1.0).norm() < 1e-7);
        }
    }

    #[test]
    fn anti_multiplier_law_on_period_three() {
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, c64(-0.3, 0.9)));
        for c in find_cycles(&m, 3).unwrap() {
            let lam = c.anti_multiplier.unwrap();
            let want = lam.norm_sqr();
            assert!((c.sq_multiplier - want).norm() <= 1e-10 * want.max(1.0), "{c:?}");
        }
    }
}
