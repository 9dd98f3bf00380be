//! Families of maps and their per-parameter dynamics.

use crate::maps::{AntiPolyMap, MapDescriptor, MultibrotMap, RealCubicMap};
use crate::poly::{Chain, Step};
use crate::scalar::{arg_turns, c64, hypot, Param, C64};

/// One-parameter (two real dimensional) families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `conj(z)^d + c`.
    Multicorn { degree: u32 },
    /// `z^d + c`.
    Multibrot { degree: u32 },
    /// `g(z) = −z³ − 3a²z + b`, parameter `(a, b)`.
    RealCubic,
    /// `conj ∘ g^{∘n}`: the antiholomorphic return of a real cubic window.
    RealCubicAnti { half_return: u32 },
}

impl Family {
    pub fn is_anti(&self) -> bool {
        matches!(self, Family::Multicorn { .. } | Family::RealCubicAnti { .. })
    }

    pub fn dynamics(&self, p: Param) -> Dynamics {
        match *self {
            Family::Multicorn { degree } => AntiPolyMap::new(degree, p.as_c64()).dynamics(),
            Family::Multibrot { degree } => MultibrotMap::new(degree, p.as_c64()).dynamics(),
            Family::RealCubic => RealCubicMap::new(p.x, p.y).dynamics(),
            Family::RealCubicAnti { half_return } => {
                let g = RealCubicMap::new(p.x, p.y);
                let mut steps = g.chain().repeat(half_return).steps;
                steps.push(Step::Conj);
                Dynamics::new(Chain::new(steps), g.critical_points()[0], g.escape_radius())
            }
        }
    }

    pub fn descriptor(&self, p: Param) -> MapDescriptor {
        match *self {
            Family::Multicorn { degree } => MapDescriptor::Anti(AntiPolyMap::new(degree, p.as_c64())),
            Family::Multibrot { degree } => MapDescriptor::Multibrot(MultibrotMap::new(degree, p.as_c64())),
            Family::RealCubic | Family::RealCubicAnti { .. } => {
                MapDescriptor::Cubic(RealCubicMap::new(p.x, p.y))
            }
        }
    }

    /// Unicritical degree of one step.
    pub fn step_degree(&self) -> u64 {
        match *self {
            Family::Multicorn { degree } | Family::Multibrot { degree } => degree as u64,
            Family::RealCubic => 3,
            Family::RealCubicAnti { half_return } => 3u64.pow(half_return),
        }
    }

    /// Typical parameter scale, used for finite-difference steps.
    pub fn scale(&self, p: Param) -> f64 {
        libm::hypot(p.x, p.y).max(1.0)
    }
}

/// A concrete map presented as one step of a chain, with the data the
/// orbit and ray code needs.
#[derive(Clone, Debug, PartialEq)]
pub struct Dynamics {
    pub step: Chain,
    pub critical_point: C64,
    pub escape_radius: f64,
    /// Rotation (in turns) `α` making `e^{2πiα}·z` the Böttcher normalization
    /// at infinity, so that in that coordinate the leading term is monic.
    pub lead_turns: f64,
}

impl Dynamics {
    pub fn new(step: Chain, critical_point: C64, escape_radius: f64) -> Self {
        let mut lead = c64(1.0, 0.0);
        for s in &step.steps {
            match s {
                Step::Poly(p) => lead = p.leading() * crate::scalar::powu(lead, p.degree()),
                Step::Conj => lead = lead.conj(),
            }
        }
        let deg = step.degree() as f64;
        let l = arg_turns(lead);
        let lead_turns = if step.is_anti() { l / (deg + 1.0) } else { l / (deg - 1.0) };
        Dynamics { step, critical_point, escape_radius, lead_turns }
    }

    pub fn is_anti(&self) -> bool {
        self.step.is_anti()
    }

    pub fn degree(&self) -> u64 {
        self.step.degree()
    }

    /// `σ·d`: the factor by which external angles are multiplied per step.
    pub fn angle_factor(&self) -> f64 {
        let d = self.degree() as f64;
        if self.is_anti() {
            -d
        } else {
            d
        }
    }

    #[inline]
    pub fn eval(&self, z: C64) -> C64 {
        self.step.eval(z)
    }

    pub fn critical_value(&self) -> C64 {
        self.eval(self.critical_point)
    }

    /// The `n`-th iterate as a chain.
    pub fn iterate(&self, n: u32) -> Chain {
        self.step.repeat(n)
    }

    /// Iterate `n` times; `None` once the orbit passes the escape radius.
    pub fn orbit_bounded(&self, z: C64, n: u32) -> Option<C64> {
        let mut u = z;
        for _ in 0..n {
            u = self.eval(u);
            if hypot(u) > self.escape_radius {
                return None;
            }
        }
        Some(u)
    }
}
