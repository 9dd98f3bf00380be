//! Complex scalars, parameters and the small amount of float plumbing shared
//! by every module.

use core::ops::{Add, Div, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;
use num_complex::ComplexFloat;

pub const TAU: f64 = core::f64::consts::TAU;
pub const PI: f64 = core::f64::consts::PI;

#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64 { re, im }
}

/// `e^{2πi t}` for `t` measured in turns.
#[inline]
pub fn cis_turns(t: f64) -> C64 {
    let a = TAU * t;
    c64(libm::cos(a), libm::sin(a))
}

/// Argument in turns, in `[0, 1)`.
#[inline]
pub fn arg_turns(z: C64) -> f64 {
    frac(libm::atan2(z.im, z.re) / TAU)
}

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac(t: f64) -> f64 {
    let f = t - libm::floor(t);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Signed representative of an angle difference in turns, in `[-1/2, 1/2)`.
#[inline]
pub fn wrap_half(t: f64) -> f64 {
    frac(t + 0.5) - 0.5
}

#[inline]
pub fn hypot(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Integer power by repeated multiplication, left to right, so that conjugate
/// inputs give bitwise conjugate outputs.
#[inline]
pub fn powu(z: C64, n: u32) -> C64 {
    if n == 0 {
        return c64(1.0, 0.0);
    }
    let mut acc = z;
    for _ in 1..n {
        acc = acc * z;
    }
    acc
}

/// A point of a two real dimensional parameter space.
///
/// For the anti-polynomial and multibrot families this is the complex
/// parameter `c = x + iy`; for the real cubic family it is `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Param {
    pub x: f64,
    pub y: f64,
}

impl Param {
    pub const fn new(x: f64, y: f64) -> Self {
        Param { x, y }
    }
    pub fn from_c64(c: C64) -> Self {
        Param { x: c.re, y: c.im }
    }
    pub fn as_c64(self) -> C64 {
        c64(self.x, self.y)
    }
    pub fn dist(self, other: Param) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

/// Complex field used by the generic polynomial evaluators, so the same
/// chain code runs in `f64` and in double-double.
pub trait Cx:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(z: C64) -> Self;
    fn to_c64(self) -> C64;
    fn conj(self) -> Self;
    fn zero() -> Self {
        Self::from_c64(c64(0.0, 0.0))
    }
}

impl Cx for C64 {
    #[inline]
    fn from_c64(z: C64) -> Self {
        z
    }
    #[inline]
    fn to_c64(self) -> C64 {
        self
    }
    #[inline]
    fn conj(self) -> Self {
        ComplexFloat::conj(self)
    }
}

pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
