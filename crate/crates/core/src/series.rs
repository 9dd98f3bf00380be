//! Truncated power series with complex coefficients.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::{c64, C64};

/// `Σ coeffs[j] w^j`, all arithmetic truncated at the series' length.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub coeffs: Vec<C64>,
}

impl Series {
    pub fn zeros(len: usize) -> Self {
        Series { coeffs: vec![C64::default(); len] }
    }

    pub fn constant(v: C64, len: usize) -> Self {
        let mut s = Self::zeros(len);
        s.coeffs[0] = v;
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<C64>, len: usize) -> Self {
        coeffs.resize(len, C64::default());
        Series { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, j: usize) -> C64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn add(&self, o: &Series) -> Series {
        let n = self.len();
        Series { coeffs: (0..n).map(|j| self.coeffs[j] + o.coeff(j)).collect() }
    }

    pub fn sub(&self, o: &Series) -> Series {
        let n = self.len();
        Series { coeffs: (0..n).map(|j| self.coeffs[j] - o.coeff(j)).collect() }
    }

    pub fn scale(&self, k: C64) -> Series {
        Series { coeffs: self.coeffs.iter().map(|&a| a * k).collect() }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.len();
        let mut out = vec![C64::default(); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == C64::default() {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += a * o.coeff(j);
            }
        }
        Series { coeffs: out }
    }

    /// `self(inner(w))`; requires `inner` to have no constant term.
    pub fn compose(&self, inner: &Series) -> Series {
        debug_assert!(inner.coeff(0) == C64::default());
        let n = self.len();
        let mut acc = Series::zeros(n);
        for &a in self.coeffs.iter().rev() {
            acc = acc.mul(inner);
            acc.coeffs[0] += a;
        }
        acc
    }

    /// Multiplicative inverse; requires a non-zero constant term.
    pub fn recip(&self) -> Series {
        let n = self.len();
        let a0 = self.coeffs[0];
        let mut out = vec![C64::default(); n];
        out[0] = c64(1.0, 0.0) / a0;
        for m in 1..n {
            let mut s = C64::default();
            for j in 1..=m {
                s += self.coeffs[j] * out[m - j];
            }
            out[m] = -s / a0;
        }
        Series { coeffs: out }
    }

    /// Principal logarithm of a series with constant term 1.
    pub fn log(&self) -> Series {
        let n = self.len();
        debug_assert!((self.coeffs[0] - c64(1.0, 0.0)).norm() < 1e-12);
        // (log S)' = S'/S
        let mut deriv = Series::zeros(n);
        for j in 1..n {
            deriv.coeffs[j - 1] = self.coeffs[j] * j as f64;
        }
        let q = deriv.mul(&self.recip());
        let mut out = Series::zeros(n);
        for j in 1..n {
            out.coeffs[j] = q.coeffs[j - 1] / j as f64;
        }
        out
    }

    pub fn powu(&self, k: u32) -> Series {
        let mut acc = Series::constant(c64(1.0, 0.0), self.len());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, w: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::default(), |acc, &a| acc * w + a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_of_geometric_series() {
        // 1/(1-w) has log = Σ w^j / j
        let s = Series::from_coeffs(vec![c64(1.0, 0.0); 8], 8);
        let l = s.log();
        for j in 1..8 {
            assert!((l.coeffs[j] - c64(1.0 / j as f64, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn compose_then_recip() {
        let inner = Series::from_coeffs(vec![C64::default(), c64(1.0, 0.0), c64(0.5, 0.0)], 6);
        let outer = Series::from_coeffs(vec![c64(1.0, 0.0), c64(2.0, 0.0)], 6);
        let comp = outer.compose(&inner); // 1 + 2w + w^2
        assert!((comp.coeffs[2] - c64(1.0, 0.0)).norm() < 1e-15);
        let prod = comp.mul(&comp.recip());
        assert!((prod.coeffs[0] - c64(1.0, 0.0)).norm() < 1e-15);
        for j in 1..6 {
            assert!(prod.coeffs[j].norm() < 1e-13);
        }
    }
}
