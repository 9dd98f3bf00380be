//! Polynomials, chains of polynomial and conjugation steps, and chains
//! recentred along a periodic orbit.
//!
//! Every map in the crate is a [`Chain`]: a composition of holomorphic
//! polynomial steps and complex conjugations. An anti-polynomial is
//! `[z^d + conj(c), Conj]`, the return map of a real cubic window is
//! `[g, g, Conj]`. Derivatives are propagated step by step: a conjugation
//! step conjugates the running derivative, so after an odd number of
//! conjugations the chain reports `∂/∂z̄`, otherwise `∂/∂z`.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::{c64, hypot, Cx, C64};
use crate::series::Series;

/// Polynomial with ascending complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Poly { coeffs }
    }

    /// `z^d + c`.
    pub fn monic_unicritical(d: u32, c: C64) -> Self {
        let mut coeffs = vec![C64::default(); d as usize + 1];
        coeffs[0] = c;
        coeffs[d as usize] = c64(1.0, 0.0);
        Poly { coeffs }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    #[inline]
    pub fn eval<T: Cx>(&self, z: T) -> T {
        let mut acc = T::from_c64(self.leading());
        for &a in self.coeffs.iter().rev().skip(1) {
            acc = acc * z + T::from_c64(a);
        }
        acc
    }

    /// Value and first derivative.
    #[inline]
    pub fn eval_d(&self, z: C64) -> (C64, C64) {
        let mut p = self.leading();
        let mut dp = C64::default();
        for &a in self.coeffs.iter().rev().skip(1) {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    }

    pub fn conj_coeffs(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|a| a.conj()).collect() }
    }

    /// Coefficients of `w ↦ P(u + w)`.
    pub fn taylor_shift(&self, u: C64) -> Vec<C64> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let hi = c[j + 1];
                c[j] += u * hi;
            }
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Poly(Poly),
    Conj,
}

/// Composition of steps, applied left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub steps: Vec<Step>,
}

/// Value of a chain with its derivative (`∂/∂z̄` when `anti`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eval {
    pub value: C64,
    pub deriv: C64,
    pub anti: bool,
}

impl Chain {
    pub fn new(steps: Vec<Step>) -> Self {
        Chain { steps }
    }

    pub fn identity() -> Self {
        Chain { steps: Vec::new() }
    }

    /// An odd number of conjugation steps.
    pub fn is_anti(&self) -> bool {
        self.steps.iter().filter(|s| matches!(s, Step::Conj)).count() % 2 == 1
    }

    pub fn degree(&self) -> u64 {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Poly(p) => p.degree() as u64,
                Step::Conj => 1,
            })
            .product()
    }

    pub fn then(&self, other: &Chain) -> Chain {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Chain { steps }
    }

    pub fn repeat(&self, n: u32) -> Chain {
        let mut steps = Vec::with_capacity(self.steps.len() * n as usize);
        for _ in 0..n {
            steps.extend(self.steps.iter().cloned());
        }
        Chain { steps }
    }

    /// The smallest holomorphic power: `self` when holomorphic, `self∘self`
    /// otherwise.
    pub fn holomorphic_power(&self) -> Chain {
        if self.is_anti() {
            self.repeat(2)
        } else {
            self.clone()
        }
    }

    #[inline]
    pub fn eval<T: Cx>(&self, z: T) -> T {
        let mut u = z;
        for s in &self.steps {
            u = match s {
                Step::Poly(p) => p.eval(u),
                Step::Conj => u.conj(),
            };
        }
        u
    }

    #[inline]
    pub fn eval_d(&self, z: C64) -> Eval {
        let mut u = z;
        let mut d = c64(1.0, 0.0);
        let mut anti = false;
        for s in &self.steps {
            match s {
                Step::Poly(p) => {
                    let (v, dv) = p.eval_d(u);
                    u = v;
                    d = dv * d;
                }
                Step::Conj => {
                    u = u.conj();
                    d = d.conj();
                    anti = !anti;
                }
            }
        }
        Eval { value: u, deriv: d, anti }
    }

    /// Newton correction `(G(z) − z)/(G'(z) − 1)` for a holomorphic chain,
    /// computed without overflow when the orbit of `z` leaves every bounded
    /// region: once intermediate values are huge, each remaining step divides
    /// the ratio `u/D` by its degree.
    pub fn fixed_point_newton_ratio(&self, z: C64) -> C64 {
        const HUGE: f64 = 1e60;
        let mut u = z;
        let mut d = c64(1.0, 0.0);
        for (i, s) in self.steps.iter().enumerate() {
            match s {
                Step::Poly(p) => {
                    let (v, dv) = p.eval_d(u);
                    u = v;
                    d = dv * d;
                }
                Step::Conj => {
                    u = u.conj();
                    d = d.conj();
                }
            }
            if hypot(u) > HUGE {
                let mut r = u / d;
                for s in &self.steps[i + 1..] {
                    match s {
                        Step::Poly(p) => r = r / p.degree() as f64,
                        Step::Conj => r = r.conj(),
                    }
                }
                return r;
            }
        }
        (u - z) / (d - 1.0)
    }

    /// Taylor jet of the chain at `z`, truncated to `len` coefficients.
    /// The returned series (constant term included) is in `w` for a
    /// holomorphic chain and in `w̄` for an antiholomorphic one.
    pub fn jet(&self, z: C64, len: usize) -> Series {
        let mut s = Series::from_coeffs(vec![z, c64(1.0, 0.0)], len);
        for st in &self.steps {
            match st {
                Step::Poly(p) => {
                    let base = s.coeffs[0];
                    let q = Series::from_coeffs(p.taylor_shift(base), len);
                    let mut dev = s.clone();
                    dev.coeffs[0] = C64::default();
                    s = q.compose(&dev);
                }
                Step::Conj => {
                    s = Series { coeffs: s.coeffs.iter().map(|a| a.conj()).collect() };
                }
            }
        }
        s
    }

    /// The chain with every polynomial's coefficients conjugated, i.e.
    /// `z ↦ conj(self(conj z))`.
    pub fn conjugated(&self) -> Chain {
        Chain {
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    Step::Poly(p) => Step::Poly(p.conj_coeffs()),
                    Step::Conj => Step::Conj,
                })
                .collect(),
        }
    }
}

/// A chain expressed in deviation coordinates along the orbit of a base
/// point `z₁`: each polynomial step is Taylor-shifted at the image of `z₁`
/// so that `0 ↦ 0` holds exactly. Small deviations keep full relative
/// precision, which ordinary evaluation near a periodic point does not.
#[derive(Clone, Debug, PartialEq)]
pub struct Recentered {
    /// Per step: `None` is a conjugation, `Some(t)` is `w ↦ Σ_{m≥1} t[m-1] w^m`.
    steps: Vec<Option<Vec<C64>>>,
    pub base: C64,
}

impl Recentered {
    pub fn new(chain: &Chain, base: C64) -> Self {
        let mut u = base;
        let mut steps = Vec::with_capacity(chain.steps.len());
        for s in &chain.steps {
            match s {
                Step::Poly(p) => {
                    let t = p.taylor_shift(u);
                    u = t[0];
                    steps.push(Some(t[1..].to_vec()));
                }
                Step::Conj => {
                    u = u.conj();
                    steps.push(None);
                }
            }
        }
        Recentered { steps, base }
    }

    pub fn is_anti(&self) -> bool {
        self.steps.iter().filter(|s| s.is_none()).count() % 2 == 1
    }

    /// `other ∘ self`, both taken in the same deviation coordinate.
    pub fn then(&self, other: &Recentered) -> Recentered {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Recentered { steps, base: self.base }
    }

    /// Linear coefficient of the composite (`∂/∂z̄` for an anti chain).
    pub fn multiplier(&self) -> C64 {
        let mut d = c64(1.0, 0.0);
        for s in &self.steps {
            match s {
                Some(t) => d = t[0] * d,
                None => d = d.conj(),
            }
        }
        d
    }

    /// Rescale the first polynomial step so that the composite linear
    /// coefficient becomes `target`. Used to remove rounding from a
    /// multiplier that is exactly 1 (or of modulus 1) in exact arithmetic.
    pub fn set_multiplier(&mut self, target: C64) {
        let cur = self.multiplier();
        let Some(first) = self.steps.iter().position(|s| s.is_some()) else {
            return;
        };
        // the factor reaches the composite through every later conjugation
        let later = self.steps[first + 1..].iter().filter(|s| s.is_none()).count();
        let mut k = target / cur;
        if later % 2 == 1 {
            k = k.conj();
        }
        if let Some(t) = &mut self.steps[first] {
            t[0] *= k;
        }
    }

    #[inline]
    pub fn eval(&self, w: C64) -> C64 {
        let mut v = w;
        for s in &self.steps {
            v = match s {
                Some(t) => {
                    let mut acc = *t.last().unwrap();
                    for &a in t.iter().rev().skip(1) {
                        acc = acc * v + a;
                    }
                    acc * v
                }
                None => v.conj(),
            };
        }
        v
    }

    /// Value and derivative (`∂/∂w̄` for an anti chain).
    #[inline]
    pub fn eval_d(&self, w: C64) -> (C64, C64) {
        let mut v = w;
        let mut d = c64(1.0, 0.0);
        for s in &self.steps {
            match s {
                Some(t) => {
                    // q(v) = v·Σ t[m] v^m
                    let mut acc = *t.last().unwrap();
                    let mut dacc = C64::default();
                    for &a in t.iter().rev().skip(1) {
                        dacc = dacc * v + acc;
                        acc = acc * v + a;
                    }
                    let val = acc * v;
                    let der = dacc * v + acc;
                    v = val;
                    d = der * d;
                }
                None => {
                    v = v.conj();
                    d = d.conj();
                }
            }
        }
        (v, d)
    }

    /// Taylor coefficients `[g₁, g₂, …]` of the composite at 0 (only for a
    /// holomorphic chain).
    pub fn taylor(&self, len: usize) -> Vec<C64> {
        let n = len + 1;
        let mut s = Series::from_coeffs(vec![C64::default(), c64(1.0, 0.0)], n);
        for st in &self.steps {
            match st {
                Some(t) => {
                    let mut q = vec![C64::default()];
                    q.extend_from_slice(t);
                    s = Series::from_coeffs(q, n).compose(&s);
                }
                None => s = Series { coeffs: s.coeffs.iter().map(|a| a.conj()).collect() },
            }
        }
        s.coeffs[1..].to_vec()
    }

    /// Solve `self(v) = w` by Newton from `seed` (holomorphic chains).
    pub fn solve_preimage(&self, w: C64, seed: C64, tol: f64, max_iter: usize) -> Option<C64> {
        let mut v = seed;
        for _ in 0..max_iter {
            let (g, dg) = self.eval_d(v);
            let step = (g - w) / dg;
            if !crate::scalar::is_finite(step) {
                return None;
            }
            v -= step;
            if hypot(step) <= tol * hypot(v).max(1e-300) {
                return Some(v);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anti(d: u32, c: C64) -> Chain {
        Chain::new(vec![Step::Poly(Poly::monic_unicritical(d, c.conj())), Step::Conj])
    }

    #[test]
    fn anti_chain_matches_direct_formula() {
        let f = anti(2, c64(0.0, 1.0));
        let z = c64(1.0, 1.0);
        assert_eq!(f.eval(z), c64(0.0, -1.0));
    }

    #[test]
    fn anti_derivative_is_wrt_conjugate() {
        let c = c64(0.2, -0.3);
        let f = anti(3, c);
        let z = c64(0.4, 0.7);
        let e = f.eval_d(z);
        assert!(e.anti);
        // ∂/∂z̄ of conj(z)^3 + c is 3 conj(z)^2
        let want = 3.0 * z.conj() * z.conj();
        assert!((e.deriv - want).norm() < 1e-14);
    }

    #[test]
    fn taylor_shift_reproduces_values() {
        let p = Poly::new(vec![c64(1.0, 2.0), c64(-0.5, 0.0), c64(0.0, 3.0), c64(2.0, 0.0)]);
        let u = c64(0.3, -0.8);
        let t = p.taylor_shift(u);
        let w = c64(0.1, 0.05);
        let direct = p.eval(u + w);
        let shifted = Poly::new(t).eval(w);
        assert!((direct - shifted).norm() < 1e-14);
    }

    #[test]
    fn jet_of_second_iterate_at_parabolic_point() {
        // F² for c = 1/4 is p∘p with p = z² + 1/4; at 1/2: w + 2w² + 2w³ + …
        let f = anti(2, c64(0.25, 0.0)).repeat(2);
        let j = f.jet(c64(0.5, 0.0), 5);
        assert!((j.coeffs[0] - c64(0.5, 0.0)).norm() < 1e-15);
        assert!((j.coeffs[1] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((j.coeffs[2] - c64(2.0, 0.0)).norm() < 1e-14);
        assert!((j.coeffs[3] - c64(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn recentered_agrees_with_jet() {
        let f = anti(2, c64(0.25, 0.0)).repeat(2);
        let r = Recentered::new(&f, c64(0.5, 0.0));
        let t = r.taylor(4);
        assert!((t[0] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((t[1] - c64(2.0, 0.0)).norm() < 1e-14);
        let w = c64(1e-9, 2e-9);
        let direct = f.eval(c64(0.5, 0.0) + w) - c64(0.5, 0.0);
        assert!((r.eval(w) - direct).norm() < 1e-16);
    }

    #[test]
    fn set_multiplier_only_touches_linear_part() {
        let f = anti(2, c64(0.25, 0.0));
        let mut r = Recentered::new(&f, c64(0.5, 0.0));
        r.set_multiplier(c64(0.5, 0.0));
        assert!((r.multiplier() - c64(0.5, 0.0)).norm() < 1e-15);
        // z² + 1/4 at 1/2: w ↦ w + w²; after rescaling: w ↦ w/2 + w²
        let w = c64(0.1, 0.0);
        assert!((r.eval(w) - c64(0.05 + 0.01, 0.0)).norm() < 1e-15);
    }
}
