//! A parabolic germ in deviation coordinates and the asymptotic expansion of
//! its Fatou coordinates.

use alloc::vec::Vec;

use super::FatouError;
use crate::dynamics::Dynamics;
use crate::poly::Recentered;
use crate::scalar::{c64, hypot, is_finite, C64};
use crate::series::Series;

/// The return map near a multiplier-one fixed point `z₁`, written in the
/// deviation `w = z − z₁`:
/// `G(w) = w + a w² + b w³ + …`, with `G = H∘H` for an antiholomorphic
/// half-return `H` when the return of the cycle is antiholomorphic.
#[derive(Clone, Debug, PartialEq)]
pub struct ParabolicGerm {
    pub base: C64,
    pub period: u32,
    half: Option<Recentered>,
    full: Recentered,
    /// Taylor coefficients `[g₁, g₂, …]` of `G`.
    pub taylor: Vec<C64>,
    /// Quadratic coefficient `a = g₂`.
    pub quadratic: C64,
    /// Residue fixed-point index `ι = g₃/g₂²`.
    pub index: C64,
    /// Résidu itératif `A = 1 − ι`, the coefficient of the logarithm.
    pub resid: C64,
    /// `c₁ … c_M` of `φ(Z) = Z − A log Z + Σ c_j Z^{−j}`.
    pub coeffs: Vec<C64>,
}

impl ParabolicGerm {
    pub fn new(dy: &Dynamics, point: C64, period: u32, terms: usize) -> Result<Self, FatouError> {
        let ret = dy.iterate(period);
        let mut first = Recentered::new(&ret, point);
        let (half, full) = if first.is_anti() {
            let lam = first.multiplier();
            if (hypot(lam) - 1.0).abs() > 1e-6 {
                return Err(FatouError::NotParabolic { multiplier: lam });
            }
            first.set_multiplier(lam / hypot(lam));
            let full = first.then(&first);
            (Some(first), full)
        } else {
            let m = first.multiplier();
            if hypot(m - 1.0) > 1e-6 {
                return Err(FatouError::NotParabolic { multiplier: m });
            }
            first.set_multiplier(c64(1.0, 0.0));
            (None, first)
        };
        let len = terms + 4;
        let taylor = full.taylor(len);
        let a = taylor[1];
        if hypot(a) < 1e-6 {
            return Err(FatouError::NotSimpleParabolic);
        }
        let index = taylor[2] / (a * a);
        let (resid, coeffs) = asymptotic_series(&taylor, terms);
        Ok(ParabolicGerm {
            base: point,
            period,
            half,
            full,
            taylor,
            quadratic: a,
            index,
            resid,
            coeffs,
        })
    }

    pub fn is_anti(&self) -> bool {
        self.half.is_some()
    }

    #[inline]
    pub fn g(&self, w: C64) -> C64 {
        self.full.eval(w)
    }

    #[inline]
    pub fn g_d(&self, w: C64) -> (C64, C64) {
        self.full.eval_d(w)
    }

    /// The antiholomorphic half-return, when there is one.
    pub fn half(&self, w: C64) -> Option<C64> {
        self.half.as_ref().map(|h| h.eval(w))
    }

    /// Branch of `G^{-1}` fixing 0, by Newton from the translation seed.
    pub fn g_inv(&self, w: C64) -> Option<C64> {
        let seed = self.w_of(self.z_of(w) - 1.0);
        self.full.solve_preimage(w, seed, 1e-15, 40)
    }

    /// Preferred coordinate `Z = −1/(a w)`, in which `G` is `Z ↦ Z + 1 + A/Z + …`.
    #[inline]
    pub fn z_of(&self, w: C64) -> C64 {
        -c64(1.0, 0.0) / (self.quadratic * w)
    }

    #[inline]
    pub fn w_of(&self, z: C64) -> C64 {
        -c64(1.0, 0.0) / (self.quadratic * z)
    }

    fn tail(&self, z: C64) -> (C64, C64) {
        let u = c64(1.0, 0.0) / z;
        let mut s = C64::default();
        let mut ds = C64::default();
        let mut up = u;
        for (j, &c) in self.coeffs.iter().enumerate() {
            s += c * up;
            ds -= c * up * u * (j as f64 + 1.0);
            up *= u;
        }
        (s, ds)
    }

    /// Asymptotic attracting coordinate `Z − A log Z + Σ c_j Z^{−j}`.
    pub fn phi_att(&self, z: C64) -> C64 {
        z - self.resid * z.ln() + self.tail(z).0
    }

    /// Asymptotic repelling coordinate `Z − A log(−Z) + Σ c_j Z^{−j}`.
    pub fn phi_rep(&self, z: C64) -> C64 {
        z - self.resid * (-z).ln() + self.tail(z).0
    }

    /// `dφ/dZ`, the same for both kinds.
    pub fn dphi(&self, z: C64) -> C64 {
        c64(1.0, 0.0) - self.resid / z + self.tail(z).1
    }

    /// Solve `φ_rep(Z) = t` for `Re Z` large negative.
    pub fn phi_rep_inverse(&self, t: C64) -> Option<C64> {
        let mut z = t + self.resid * (-t).ln();
        for _ in 0..60 {
            let step = (self.phi_rep(z) - t) / self.dphi(z);
            if !is_finite(step) {
                return None;
            }
            z -= step;
            if hypot(step) <= 1e-15 * hypot(z) {
                return Some(z);
            }
        }
        None
    }
}

/// Log coefficient `A` and coefficients `c_j` of the formal Fatou coordinate
/// of `G(w) = Σ g_j w^j` (with `g₁ = 1`), in `Z = −1/(g₂ w)`.
///
/// With `u = 1/Z`, `G` becomes `Z ↦ Z·R(u)` where `R = 1/S` and
/// `S(u) = Σ g_j (−u/g₂)^{j−1}`. The Abel equation for
/// `φ = Z − A log Z + Σ c_j u^j` reads
/// `(R − 1)/u − 1 − A log R + Σ c_j u^j (S^j − 1) = 0`, whose `u^{m+1}`
/// coefficient is linear in `c_m` with slope `−m`.
pub fn asymptotic_series(taylor: &[C64], terms: usize) -> (C64, Vec<C64>) {
    let len = terms + 3;
    let a = taylor[1];
    let mut s = Series::zeros(len);
    s.coeffs[0] = c64(1.0, 0.0);
    let mut pw = c64(1.0, 0.0);
    for j in 1..len {
        pw *= -c64(1.0, 0.0) / a;
        s.coeffs[j] = taylor.get(j).copied().unwrap_or_default() * pw;
    }
    let r = s.recip();
    let log_r = r.log();
    // (R − 1)/u − 1
    let mut base = Series::zeros(len);
    for j in 0..len - 1 {
        base.coeffs[j] = r.coeffs[j + 1];
    }
    base.coeffs[0] -= 1.0;
    let resid = r.coeffs[2];
    let base = base.sub(&log_r.scale(resid));
    let mut powers: Vec<Series> = Vec::with_capacity(terms + 1);
    let mut p = Series::constant(c64(1.0, 0.0), len);
    for _ in 0..=terms {
        p = p.mul(&s);
        let mut q = p.clone();
        q.coeffs[0] -= 1.0;
        powers.push(q); // S^j − 1 for j = 1, 2, …
    }
    let mut coeffs: Vec<C64> = Vec::with_capacity(terms);
    for m in 1..=terms {
        let mut e = base.coeff(m + 1);
        for (j, &c) in coeffs.iter().enumerate() {
            let jj = j + 1;
            // u^j (S^j − 1) contributes its coefficient at u^{m+1−j}
            if m + 1 >= jj {
                e += c * powers[j].coeff(m + 1 - jj);
            }
        }
        coeffs.push(e / m as f64);
    }
    (resid, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_solves_abel_equation_for_a_sample_germ() {
        // G(w) = w + w² + 0.3 w³ − 0.1 w⁴
        let taylor = [c64(1.0, 0.0), c64(1.0, 0.0), c64(0.3, 0.0), c64(-0.1, 0.0), C64::default(), C64::default()];
        let (resid, coeffs) = asymptotic_series(&taylor, 8);
        assert!((resid - 0.7).norm() < 1e-14);
        let g = |w: C64| w + w * w + 0.3 * w * w * w - 0.1 * w * w * w * w;
        let phi = |z: C64| {
            let mut s = z - resid * z.ln();
            let u = 1.0 / z;
            let mut up = u;
            for c in &coeffs {
                s += c * up;
                up *= u;
            }
            s
        };
        let z = c64(40.0, 7.0);
        let w = -1.0 / z;
        let z1 = -1.0 / g(w);
        let err = phi(z1) - phi(z) - 1.0;
        assert!(err.norm() < 1e-13, "{err}");
    }
}
