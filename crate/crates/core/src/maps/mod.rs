//! The studied map families, escape oracles and the Böttcher machinery.

mod rays;

pub use rays::{
    angle_orbit, ray_landing, trace_dynamical_ray, trace_parameter_ray, AngleOrbit, RayConfig,
    RayLanding,
};

use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::Dynamics;
use crate::poly::{Chain, Poly, Step};
use crate::scalar::{arg_turns, c64, cis_turns, hypot, powu, wrap_half, C64};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("orbit did not escape within {0} iterations")]
    InsideOrUndecided(u32),
    #[error("ray tracing blocked at potential {green:e} (angle {angle})")]
    RayBlocked { angle: f64, green: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// `f_c(z) = conj(z)^d + c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntiPolyMap {
    pub degree: u32,
    pub c: C64,
}

impl AntiPolyMap {
    pub fn new(degree: u32, c: C64) -> Self {
        assert!(degree >= 2, "degree must be at least 2");
        AntiPolyMap { degree, c }
    }

    #[inline]
    pub fn eval(&self, z: C64) -> C64 {
        powu(z.conj(), self.degree) + self.c
    }

    /// `z^d + conj(c)`; the map is `conj` of this polynomial.
    pub fn poly(&self) -> Poly {
        Poly::monic_unicritical(self.degree, self.c.conj())
    }

    pub fn chain(&self) -> Chain {
        Chain::new(vec![Step::Poly(self.poly()), Step::Conj])
    }

    pub fn escape_radius(&self) -> f64 {
        unicritical_escape_radius(self.degree, self.c)
    }

    pub fn second_iterate(&self) -> SecondIterate {
        SecondIterate { base: *self }
    }

    pub fn dynamics(&self) -> Dynamics {
        Dynamics::new(self.chain(), C64::default(), self.escape_radius())
    }
}

/// `P(z) = (z^d + conj(c))^d + c = f_c(f_c(z))`, holomorphic of degree `d²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondIterate {
    pub base: AntiPolyMap,
}

impl SecondIterate {
    #[inline]
    pub fn eval(&self, z: C64) -> C64 {
        let d = self.base.degree;
        powu(powu(z, d) + self.base.c.conj(), d) + self.base.c
    }

    pub fn chain(&self) -> Chain {
        Chain::new(vec![
            Step::Poly(self.base.poly()),
            Step::Poly(Poly::monic_unicritical(self.base.degree, self.base.c)),
        ])
    }
}

/// `z^d + c`; the holomorphic family needed for the classical index
/// computations that accompany the anti family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultibrotMap {
    pub degree: u32,
    pub c: C64,
}

impl MultibrotMap {
    pub fn new(degree: u32, c: C64) -> Self {
        assert!(degree >= 2, "degree must be at least 2");
        MultibrotMap { degree, c }
    }

    #[inline]
    pub fn eval(&self, z: C64) -> C64 {
        powu(z, self.degree) + self.c
    }

    pub fn chain(&self) -> Chain {
        Chain::new(vec![Step::Poly(Poly::monic_unicritical(self.degree, self.c))])
    }

    pub fn escape_radius(&self) -> f64 {
        unicritical_escape_radius(self.degree, self.c)
    }

    pub fn dynamics(&self) -> Dynamics {
        Dynamics::new(self.chain(), C64::default(), self.escape_radius())
    }
}

/// `g(z) = −z³ − 3a²z + b` with real `a ≥ 0`, `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealCubicMap {
    pub a: f64,
    pub b: f64,
}

impl RealCubicMap {
    pub fn new(a: f64, b: f64) -> Self {
        RealCubicMap { a, b }
    }

    #[inline]
    pub fn eval(&self, z: C64) -> C64 {
        let s = 3.0 * self.a * self.a;
        -(z * z * z) - z * s + self.b
    }

    pub fn poly(&self) -> Poly {
        let s = 3.0 * self.a * self.a;
        Poly::new(vec![c64(self.b, 0.0), c64(-s, 0.0), C64::default(), c64(-1.0, 0.0)])
    }

    pub fn chain(&self) -> Chain {
        Chain::new(vec![Step::Poly(self.poly())])
    }

    /// `±ia`, the roots of `g'(z) = −3(z² + a²)`.
    pub fn critical_points(&self) -> [C64; 2] {
        [c64(0.0, self.a), c64(0.0, -self.a)]
    }

    pub fn escape_radius(&self) -> f64 {
        libm::sqrt(3.0 * self.a * self.a + self.b.abs() + 2.0).max(2.0)
    }

    pub fn dynamics(&self) -> Dynamics {
        Dynamics::new(self.chain(), self.critical_points()[0], self.escape_radius())
    }
}

fn unicritical_escape_radius(d: u32, c: C64) -> f64 {
    (libm::pow(hypot(c), 1.0 / (d as f64 - 1.0)) + 1.0).max(2.0)
}

/// A concrete map of one of the families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MapDescriptor {
    Anti(AntiPolyMap),
    Multibrot(MultibrotMap),
    Cubic(RealCubicMap),
}

impl MapDescriptor {
    #[inline]
    pub fn eval(&self, z: C64) -> C64 {
        match self {
            MapDescriptor::Anti(m) => m.eval(z),
            MapDescriptor::Multibrot(m) => m.eval(z),
            MapDescriptor::Cubic(m) => m.eval(z),
        }
    }

    pub fn escape_radius(&self) -> f64 {
        match self {
            MapDescriptor::Anti(m) => m.escape_radius(),
            MapDescriptor::Multibrot(m) => m.escape_radius(),
            MapDescriptor::Cubic(m) => m.escape_radius(),
        }
    }

    pub fn dynamics(&self) -> Dynamics {
        match self {
            MapDescriptor::Anti(m) => m.dynamics(),
            MapDescriptor::Multibrot(m) => m.dynamics(),
            MapDescriptor::Cubic(m) => m.dynamics(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            MapDescriptor::Anti(m) => m.degree,
            MapDescriptor::Multibrot(m) => m.degree,
            MapDescriptor::Cubic(_) => 3,
        }
    }

    pub fn is_anti(&self) -> bool {
        matches!(self, MapDescriptor::Anti(_))
    }

    pub fn critical_points(&self) -> Vec<C64> {
        match self {
            MapDescriptor::Cubic(m) => m.critical_points().to_vec(),
            _ => vec![C64::default()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EscapeVerdict {
    pub escaped: bool,
    pub iterations_used: u32,
    pub final_modulus: f64,
}

/// Iterate until the orbit leaves the escape radius or the budget runs out.
pub fn escape_test(map: &MapDescriptor, z0: C64, max_iter: u32) -> EscapeVerdict {
    let r = map.escape_radius();
    let mut z = z0;
    if hypot(z) > r {
        return EscapeVerdict { escaped: true, iterations_used: 0, final_modulus: hypot(z) };
    }
    for n in 1..=max_iter.max(1) {
        z = map.eval(z);
        let m = hypot(z);
        if m > r || !m.is_finite() {
            return EscapeVerdict { escaped: true, iterations_used: n, final_modulus: m };
        }
    }
    EscapeVerdict { escaped: false, iterations_used: max_iter, final_modulus: hypot(z) }
}

/// Green's function and external angle (turns) of an escaping point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenBoettcher {
    pub green: f64,
    pub angle: f64,
}

/// Default iteration budget of [`green_and_boettcher`].
pub const GREEN_MAX_ITER: u32 = 100_000;

pub fn green_and_boettcher(map: &MapDescriptor, z: C64) -> Result<GreenBoettcher, MapError> {
    green_and_boettcher_dyn(&map.dynamics(), z, GREEN_MAX_ITER)
}

/// Log-escape estimate `d^{-n} log|z_n|`, stopped once `|z_n|` is so large
/// that the next correction is below rounding, plus argument transport
/// `θ₀ = t₀ + Σ (σd)^{-(n+1)} δ_n` with `σ = −1` for antiholomorphic maps.
pub fn green_and_boettcher_dyn(dy: &Dynamics, z: C64, max_iter: u32) -> Result<GreenBoettcher, MapError> {
    const BAILOUT: f64 = 1e10;
    let d = dy.degree() as f64;
    let f = dy.angle_factor();
    let rot = cis_turns(dy.lead_turns);
    let mut u = z;
    let mut t_prev = arg_turns(rot * u);
    let mut angle = t_prev;
    let mut weight = 1.0;
    let mut scale = 1.0;
    for _ in 0..max_iter {
        if hypot(u) > BAILOUT {
            return Ok(GreenBoettcher { green: libm::log(hypot(u)) * scale, angle: crate::scalar::frac(angle) });
        }
        u = dy.eval(u);
        if !crate::scalar::is_finite(u) {
            break;
        }
        let t = arg_turns(rot * u);
        weight /= f;
        scale /= d;
        angle += weight * wrap_half(t - f * t_prev);
        t_prev = t;
    }
    Err(MapError::InsideOrUndecided(max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_anti_examples() {
        let f = AntiPolyMap::new(2, c64(0.25, 0.0));
        assert_eq!(f.eval(c64(0.5, 0.0)), c64(0.5, 0.0));
        let f = AntiPolyMap::new(3, C64::default());
        assert_eq!(f.eval(C64::default()), C64::default());
        let f = AntiPolyMap::new(2, c64(0.0, 1.0));
        assert_eq!(f.eval(c64(1.0, 1.0)), c64(0.0, -1.0));
    }

    #[test]
    fn eval_cubic_examples() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let g = RealCubicMap::new(s, 0.0);
        assert!((g.eval(c64(0.0, s)) - c64(0.0, -s)).norm() < 1e-15);
        assert_eq!(RealCubicMap::new(0.0, 0.0).eval(c64(1.0, 0.0)), c64(-1.0, 0.0));
        let a = libm::pow(8.0 / 9.0, 0.25);
        assert_eq!(RealCubicMap::new(a, 0.0).eval(C64::default()), C64::default());
    }

    #[test]
    fn second_iterate_is_composition() {
        let f = AntiPolyMap::new(3, c64(0.1, -0.4));
        let p = f.second_iterate();
        let z = c64(0.3, 0.2);
        assert!((p.eval(z) - f.eval(f.eval(z))).norm() < 1e-15);
        assert!((p.chain().eval(z) - p.eval(z)).norm() < 1e-15);
    }

    #[test]
    fn escape_examples() {
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, C64::default()));
        assert!(!escape_test(&m, C64::default(), 1000).escaped);
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, c64(3.0, 0.0)));
        let v = escape_test(&m, C64::default(), 1000);
        assert!(v.escaped && v.final_modulus > m.escape_radius());
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, c64(-1.75, 0.0)));
        assert!(!escape_test(&m, C64::default(), 10_000).escaped);
    }

    #[test]
    fn green_examples_for_conjugated_square() {
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, C64::default()));
        let g = green_and_boettcher(&m, c64(4.0, 0.0)).unwrap();
        assert!((g.green - libm::log(4.0)).abs() < 1e-12);
        assert!(g.angle.abs() < 1e-12 || (1.0 - g.angle) < 1e-12);
        let g = green_and_boettcher(&m, c64(-4.0, 0.0)).unwrap();
        assert!((g.angle - 0.5).abs() < 1e-12);
        // z = 4 e^{2πi/10}: arg transport sees θ ↦ −2θ
        let g = green_and_boettcher(&m, 4.0 * cis_turns(0.1)).unwrap();
        assert!((g.angle - 0.1).abs() < 1e-12);
    }

    #[test]
    fn cubic_boettcher_marks_positive_axis_as_quarter() {
        let m = MapDescriptor::Cubic(RealCubicMap::new(0.3, 0.0));
        let g = green_and_boettcher(&m, c64(50.0, 0.0)).unwrap();
        assert!((g.angle - 0.25).abs() < 1e-9);
    }

    #[test]
    fn inside_points_are_undecided() {
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, C64::default()));
        assert!(matches!(green_and_boettcher(&m, c64(0.5, 0.0)), Err(MapError::InsideOrUndecided(_))));
    }
}
