//! Aberth–Ehrlich simultaneous root iteration driven by a Newton ratio, so
//! that the polynomial never has to be expanded into coefficients.

use alloc::vec::Vec;

use super::OrbitError;
use crate::scalar::{c64, cis_turns, hypot, is_finite, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AberthConfig {
    pub max_sweeps: u32,
    /// Relative size of a correction regarded as converged.
    pub tol: f64,
}

impl Default for AberthConfig {
    fn default() -> Self {
        AberthConfig { max_sweeps: 600, tol: 1e-14 }
    }
}

/// All `degree` roots of the polynomial whose Newton ratio `p/p'` is
/// `ratio`, starting from a circle of the given radius. Multiple roots come
/// back as clusters accurate to roughly the square root of the precision.
pub fn aberth(ratio: impl Fn(C64) -> C64, degree: usize, radius: f64, cfg: &AberthConfig) -> Result<Vec<C64>, OrbitError> {
    let mut z: Vec<C64> = (0..degree)
        .map(|k| cis_turns(k as f64 / degree as f64 + 0.137) * radius * (0.9 + 0.05 * ((k % 3) as f64)))
        .collect();
    let mut done = alloc::vec![false; degree];
    let mut stall = 0u32;
    for _ in 0..cfg.max_sweeps {
        let mut moved = false;
        let mut max_corr = 0.0f64;
        for k in 0..degree {
            if done[k] {
                continue;
            }
            let n = ratio(z[k]);
            if !is_finite(n) {
                return Err(OrbitError::SolverDiverged);
            }
            let mut s = C64::default();
            for j in 0..degree {
                if j != k {
                    s += c64(1.0, 0.0) / (z[k] - z[j]);
                }
            }
            let w = n / (c64(1.0, 0.0) - n * s);
            if !is_finite(w) {
                return Err(OrbitError::SolverDiverged);
            }
            z[k] -= w;
            let rel = hypot(w) / hypot(z[k]).max(1e-3);
            max_corr = max_corr.max(rel);
            if rel < cfg.tol {
                done[k] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
        // clusters around multiple roots stop improving near 1e-8
        if max_corr < 1e-7 {
            stall += 1;
            if stall > 60 {
                break;
            }
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_roots_of_unity() {
        let roots = aberth(|z| (z * z * z - 1.0) / (3.0 * z * z), 3, 2.0, &AberthConfig::default()).unwrap();
        for k in 0..3 {
            let want = cis_turns(k as f64 / 3.0);
            assert!(roots.iter().any(|r| (r - want).norm() < 1e-13));
        }
    }

    #[test]
    fn double_root_cluster() {
        // (z - 1)^2 (z + 2)
        let p = |z: C64| (z - 1.0) * (z - 1.0) * (z + 2.0);
        let dp = |z: C64| 2.0 * (z - 1.0) * (z + 2.0) + (z - 1.0) * (z - 1.0);
        let roots = aberth(|z| p(z) / dp(z), 3, 3.0, &AberthConfig::default()).unwrap();
        let near_one = roots.iter().filter(|r| (**r - 1.0).norm() < 1e-6).count();
        assert_eq!(near_one, 2);
    }
}
