//! External rays: equipotential stepping with Newton correction on the
//! Böttcher equation, and landing points by pullback.

use alloc::vec::Vec;

use super::MapError;
use crate::dynamics::{Dynamics, Family};
use crate::linalg;
use crate::poly::Chain;
use crate::scalar::{c64, cis_turns, frac, hypot, is_finite, Param, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayConfig {
    /// Potential at which tracing starts.
    pub start_green: f64,
    /// Newton points per halving of the potential.
    pub substeps: u32,
    pub max_halvings: u32,
    pub newton_iters: u32,
    /// Iterate depth: the Böttcher equation is imposed on the first iterate
    /// whose potential exceeds this value.
    pub far_green: f64,
    /// Potential where `ray_landing` stops tracing and starts pulling back.
    pub landing_green: f64,
    pub pullbacks: u32,
}

impl Default for RayConfig {
    fn default() -> Self {
        RayConfig {
            start_green: 16.0,
            substeps: 4,
            max_halvings: 40,
            newton_iters: 64,
            far_green: 16.0,
            landing_green: 1e-7,
            pullbacks: 64,
        }
    }
}

/// Exact orbit of a rational angle under `θ ↦ σdθ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AngleOrbit {
    Rational { num: i128, den: i128 },
    Real(f64),
}

impl AngleOrbit {
    pub fn new(theta: f64) -> Self {
        let t = frac(theta);
        for den in 1..=1_000_000i128 {
            let num = libm::round(t * den as f64);
            if (t * den as f64 - num).abs() < 1e-9 * (den as f64).max(1.0) * 1e-3 {
                return AngleOrbit::Rational { num: num as i128 % den, den };
            }
        }
        AngleOrbit::Real(t)
    }

    pub fn turns(&self) -> f64 {
        match *self {
            AngleOrbit::Rational { num, den } => num as f64 / den as f64,
            AngleOrbit::Real(t) => t,
        }
    }

    pub fn image(&self, factor: i64) -> Self {
        match *self {
            AngleOrbit::Rational { num, den } => {
                AngleOrbit::Rational { num: (num * factor as i128).rem_euclid(den), den }
            }
            AngleOrbit::Real(t) => AngleOrbit::Real(frac(t * factor as f64)),
        }
    }

    pub fn nth_image(&self, factor: i64, n: u32) -> Self {
        (0..n).fold(*self, |a, _| a.image(factor))
    }

    /// `(preperiod, period)` for rational angles with period at most `max`.
    pub fn portrait(&self, factor: i64, max: u32) -> Option<(u32, u32)> {
        let mut seen: Vec<AngleOrbit> = Vec::new();
        let mut a = *self;
        for _ in 0..=max * 2 {
            if let Some(pos) = seen.iter().position(|s| *s == a) {
                return Some((pos as u32, (seen.len() - pos) as u32));
            }
            if matches!(a, AngleOrbit::Real(_)) {
                return None;
            }
            seen.push(a);
            a = a.image(factor);
        }
        None
    }
}

pub fn angle_orbit(theta: f64) -> AngleOrbit {
    AngleOrbit::new(theta)
}

fn factor_of(dy: &Dynamics) -> i64 {
    dy.angle_factor() as i64
}

/// Depth `n` and target `rot·F^n(z)` of the Böttcher equation at potential `g`.
fn target(dy: &Dynamics, angle: AngleOrbit, g: f64, far: f64) -> (u32, C64) {
    let d = dy.degree() as f64;
    let mut n = 0;
    let mut gn = g;
    while gn < far && n < 2000 {
        gn *= d;
        n += 1;
    }
    let t = angle.nth_image(factor_of(dy), n).turns();
    let w = cis_turns(t) * libm::exp(gn);
    (n, w)
}

/// `rot·F^n(z)` made holomorphic (conjugated when `F^n` is antiholomorphic),
/// together with its complex derivative.
fn holo_iterate(dy: &Dynamics, n: u32, z: C64) -> (C64, C64, bool) {
    let rot = cis_turns(dy.lead_turns);
    let e = dy.step.repeat(n).eval_d(z);
    let v = rot * e.value;
    let dv = rot * e.deriv;
    if e.anti {
        (v.conj(), dv.conj(), true)
    } else {
        (v, dv, false)
    }
}

fn newton_dynamical(dy: &Dynamics, angle: AngleOrbit, g: f64, seed: C64, cfg: &RayConfig) -> Option<C64> {
    let (n, w) = target(dy, angle, g, cfg.far_green);
    let mut z = seed;
    for _ in 0..cfg.newton_iters {
        let (v, dv, anti) = holo_iterate(dy, n, z);
        let goal = if anti { w.conj() } else { w };
        let step = (v - goal) / dv;
        if !is_finite(step) {
            return None;
        }
        z -= step;
        if hypot(step) <= 1e-14 * hypot(z).max(1e-3) {
            return Some(z);
        }
    }
    None
}

/// Generic equipotential stepper: `solve(g, seed)` returns the ray point at
/// potential `g` near `seed`.
fn step_down(
    start: C64,
    g0: f64,
    g_target: f64,
    cfg: &RayConfig,
    angle: f64,
    mut solve: impl FnMut(f64, C64) -> Option<C64>,
) -> Result<Vec<C64>, MapError> {
    let mut pts = alloc::vec![start];
    let mut g = g0;
    let mut z = start;
    let base = libm::pow(2.0, -1.0 / cfg.substeps.max(1) as f64);
    let mut last_jump = f64::INFINITY;
    while g > g_target {
        let mut halvings = 0;
        let mut factor = base;
        loop {
            let g_next = (g * factor).max(g_target);
            let accepted = solve(g_next, z).filter(|zn| {
                let jump = hypot(*zn - z);
                jump.is_finite() && (jump <= 4.0 * last_jump + 1e-12 || last_jump.is_infinite())
            });
            if let Some(zn) = accepted {
                last_jump = hypot(zn - z).max(1e-300);
                g = g_next;
                z = zn;
                pts.push(z);
                break;
            }
            halvings += 1;
            if halvings > cfg.max_halvings {
                return Err(MapError::RayBlocked { angle, green: g });
            }
            factor = libm::sqrt(factor);
        }
    }
    Ok(pts)
}

/// Dynamical ray of the given angle from a high equipotential down to
/// `target_green`.
pub fn trace_dynamical_ray(
    dy: &Dynamics,
    angle: f64,
    target_green: f64,
    cfg: &RayConfig,
) -> Result<Vec<C64>, MapError> {
    if !(target_green > 0.0) {
        return Err(MapError::InvalidArgument("target potential must be positive"));
    }
    let a = AngleOrbit::new(angle);
    let g0 = cfg.start_green.max(target_green);
    let rot = cis_turns(dy.lead_turns);
    let seed = cis_turns(a.turns()) * libm::exp(g0) / rot;
    let start = newton_dynamical(dy, a, g0, seed, cfg).ok_or(MapError::RayBlocked { angle, green: g0 })?;
    step_down(start, g0, target_green, cfg, angle, |g, s| newton_dynamical(dy, a, g, s, cfg))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RayLanding {
    pub point: C64,
    pub preperiod: u32,
    pub period: u32,
    /// `|G(point) − point|` for the holomorphic return `G` of the landing
    /// cycle, or the pre-image equation residual.
    pub residual: f64,
    pub ray: Vec<C64>,
}

fn solve_iterate_eq(dy: &Dynamics, n: u32, goal: C64, seed: C64, iters: u32) -> Option<C64> {
    let rot = cis_turns(dy.lead_turns);
    let mut z = seed;
    for _ in 0..iters {
        let (v, dv, anti) = holo_iterate(dy, n, z);
        let gl = rot * goal;
        let gl = if anti { gl.conj() } else { gl };
        let step = (v - gl) / dv;
        if !is_finite(step) {
            return None;
        }
        z -= step;
        if hypot(step) <= 1e-15 * hypot(z).max(1e-3) {
            return Some(z);
        }
    }
    Some(z)
}

/// Landing sequence of a periodic ray: traced points, pullbacks along the
/// ray, then the landing point polished as a fixed point of the holomorphic
/// return.
fn periodic_landing(dy: &Dynamics, angle: f64, period: u32, cfg: &RayConfig) -> Result<(Vec<C64>, C64, f64), MapError> {
    let mut ray = trace_dynamical_ray(dy, angle, cfg.landing_green, cfg)?;
    let mut x = *ray.last().unwrap();
    for _ in 0..cfg.pullbacks {
        match solve_iterate_eq(dy, period, x, x, 60) {
            Some(y) if hypot(y - x) < 1.0 => {
                x = y;
                ray.push(x);
            }
            _ => break,
        }
    }
    let ret: Chain = dy.step.repeat(period).holomorphic_power();
    let mut z = x;
    let mut best = (f64::INFINITY, z);
    for _ in 0..400 {
        let r = ret.fixed_point_newton_ratio(z);
        if !is_finite(r) {
            break;
        }
        z -= r;
        let res = hypot(ret.eval(z) - z);
        if res < best.0 {
            best = (res, z);
        }
        if hypot(r) <= 1e-16 * hypot(z).max(1.0) {
            break;
        }
    }
    let (res, z) = best;
    if hypot(z - x) > 0.05 {
        return Err(MapError::RayBlocked { angle, green: cfg.landing_green });
    }
    Ok((ray, z, res))
}

/// Landing point of a rational ray (periodic or preperiodic angle).
pub fn ray_landing(dy: &Dynamics, angle: f64, cfg: &RayConfig) -> Result<RayLanding, MapError> {
    let a = AngleOrbit::new(angle);
    let f = factor_of(dy);
    let (pre, per) = a.portrait(f, 64).ok_or(MapError::InvalidArgument("angle is not rational with small period"))?;
    if pre == 0 {
        let (ray, point, residual) = periodic_landing(dy, angle, per, cfg)?;
        return Ok(RayLanding { point, preperiod: 0, period: per, residual, ray });
    }
    let periodic = a.nth_image(f, pre);
    let ray = trace_dynamical_ray(dy, angle, cfg.landing_green, cfg)?;
    let (pray, landing, _) = periodic_landing(dy, periodic.turns(), per, cfg)?;
    // continue the pre-image branch along the image ray down to its landing point
    let d = dy.degree() as f64;
    let g_img = cfg.landing_green * libm::pow(d, pre as f64);
    let img_ray = trace_dynamical_ray(dy, periodic.turns(), g_img, cfg)?;
    let mut y = *ray.last().unwrap();
    let mut path: Vec<C64> = Vec::new();
    path.push(*img_ray.last().unwrap());
    let anchor = *img_ray.last().unwrap();
    let tail_start = (0..pray.len())
        .min_by(|&i, &j| hypot(pray[i] - anchor).total_cmp(&hypot(pray[j] - anchor)))
        .unwrap_or(0);
    path.extend(pray.iter().skip(tail_start + 1).copied());
    path.push(landing);
    let mut out = ray;
    for q in path {
        y = solve_iterate_eq(dy, pre, q, y, 80).ok_or(MapError::RayBlocked { angle, green: 0.0 })?;
        out.push(y);
    }
    let rot_check = dy.step.repeat(pre).eval(y);
    Ok(RayLanding { point: y, preperiod: pre, period: per, residual: hypot(rot_check - landing), ray: out })
}

/// Parameter ray of a unicritical family, traced by Newton on
/// `Φ(c) = φ_c(c)` with the parameter treated as two real unknowns.
pub fn trace_parameter_ray(
    family: Family,
    angle: f64,
    target_green: f64,
    cfg: &RayConfig,
) -> Result<Vec<C64>, MapError> {
    if !matches!(family, Family::Multicorn { .. } | Family::Multibrot { .. }) {
        return Err(MapError::InvalidArgument("parameter rays need a unicritical family"));
    }
    let a = AngleOrbit::new(angle);
    let residual = |c: C64, g: f64| -> Option<[f64; 2]> {
        let dy = family.dynamics(Param::from_c64(c));
        let (n, w) = target(&dy, a, g, cfg.far_green);
        // critical value c has potential g; its n-th image has d^n g
        let (v, _, anti) = holo_iterate(&dy, n, c);
        let goal = if anti { w.conj() } else { w };
        let r = (v - goal) / goal;
        is_finite(r).then_some([r.re, r.im])
    };
    let solve = |g: f64, seed: C64| -> Option<C64> {
        let mut c = seed;
        for _ in 0..cfg.newton_iters {
            let r0 = residual(c, g)?;
            let h = 1e-7 * hypot(c).max(1.0);
            let rx = residual(c + c64(h, 0.0), g)?;
            let ry = residual(c + c64(0.0, h), g)?;
            let jac = [[(rx[0] - r0[0]) / h, (ry[0] - r0[0]) / h], [(rx[1] - r0[1]) / h, (ry[1] - r0[1]) / h]];
            let dx = linalg::solve(jac, [-r0[0], -r0[1]])?;
            c += c64(dx[0], dx[1]);
            if libm::hypot(dx[0], dx[1]) <= 1e-13 * hypot(c).max(1e-3) {
                return Some(c);
            }
        }
        None
    };
    let g0 = cfg.start_green.max(target_green);
    let dy0 = family.dynamics(Param::default());
    let rot = cis_turns(dy0.lead_turns);
    // Φ(c) ≈ c far out (the critical value has the same leading behaviour)
    let seed = cis_turns(a.turns()) * libm::exp(g0) / rot;
    let start = solve(g0, seed).ok_or(MapError::RayBlocked { angle, green: g0 })?;
    step_down(start, g0, target_green, cfg, angle, solve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{green_and_boettcher_dyn, AntiPolyMap};

    #[test]
    fn zero_ray_of_conjugated_square_lands_at_one() {
        let dy = AntiPolyMap::new(2, C64::default()).dynamics();
        let ray = trace_dynamical_ray(&dy, 0.0, 1e-6, &RayConfig::default()).unwrap();
        let end = *ray.last().unwrap();
        assert!((end - c64(1.0, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn traced_points_carry_the_requested_angle() {
        let dy = AntiPolyMap::new(2, c64(0.25, 0.0)).dynamics();
        let ray = trace_dynamical_ray(&dy, 0.0, 1e-3, &RayConfig::default()).unwrap();
        for p in ray.iter().step_by(5) {
            let gb = green_and_boettcher_dyn(&dy, *p, 100_000).unwrap();
            assert!(crate::scalar::wrap_half(gb.angle).abs() < 1e-8, "{p} {gb:?}");
        }
    }

    #[test]
    fn parabolic_landing() {
        let dy = AntiPolyMap::new(2, c64(0.25, 0.0)).dynamics();
        let l = ray_landing(&dy, 0.0, &RayConfig::default()).unwrap();
        assert!((l.point - c64(0.5, 0.0)).norm() < 1e-6, "{:?}", l.point);
    }

    #[test]
    fn quarter_ray_for_airplane_lands_off_the_axis_symmetrically() {
        let dy = AntiPolyMap::new(2, c64(-1.75, 0.0)).dynamics();
        let cfg = RayConfig::default();
        let q1 = ray_landing(&dy, 0.25, &cfg).unwrap();
        let q3 = ray_landing(&dy, 0.75, &cfg).unwrap();
        let beta = (1.0 + 2.0 * core::f64::consts::SQRT_2) / 2.0;
        let y = libm::sqrt(beta - 1.75);
        assert_eq!(q1.preperiod, 2);
        assert!((q1.point.re).abs() < 1e-9 && (q1.point.im.abs() - y).abs() < 1e-9, "{:?}", q1.point);
        assert!((q1.point - q3.point.conj()).norm() < 1e-9);
    }

    #[test]
    fn rational_angle_orbits_are_exact() {
        let a = AngleOrbit::new(3.0 / 7.0);
        assert_eq!(a.portrait(-2, 64), Some((0, 6)));
        assert_eq!(AngleOrbit::new(0.25).portrait(-2, 64), Some((2, 1)));
    }
}
