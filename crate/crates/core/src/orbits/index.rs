use alloc::vec::Vec;

use super::cycles::Cycle;
use super::OrbitError;
use crate::dd::Cdd;
use crate::maps::MapDescriptor;
use crate::poly::{Chain, Recentered};
use crate::scalar::{c64, cis_turns, hypot, Cx, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMethod {
    Contour,
    MultiplierFormula,
    FixedPointTheorem,
}

/// Residue fixed-point index `ι = (1/2πi) ∮ dz/(z − F(z))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointIndex {
    pub value: C64,
    pub point: C64,
    pub method: IndexMethod,
    /// `(q+1)/2 − ι` for a multiplier-one point with `q` petals.
    pub residu_iteratif: Option<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// Evaluation in coordinates recentred at the fixed point.
    Double,
    /// Software double-double evaluation of the map.
    DoubleDouble,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourConfig {
    pub precision: Precision,
    /// Agreement required between successive node doublings.
    pub node_tol: f64,
    /// Agreement required between successive radii.
    pub radius_tol: f64,
    pub max_nodes: usize,
    pub max_shrinks: u32,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig {
            precision: Precision::DoubleDouble,
            node_tol: 1e-10,
            radius_tol: 1e-9,
            max_nodes: 1 << 16,
            max_shrinks: 24,
        }
    }
}

/// Number of petals `q` and multiplicity of a fixed point from its jet.
fn local_multiplicity(h: &Chain, z0: C64) -> (i64, C64) {
    let j = h.jet(z0, 4);
    let rho = j.coeffs[1];
    if hypot(rho - 1.0) > 1e-7 {
        (1, rho)
    } else if hypot(j.coeffs[2]) > 1e-6 {
        (2, rho)
    } else {
        (3, rho)
    }
}

/// Trapezoidal quadrature of the index and of the argument-principle count
/// on one circle, doubling nodes until the index estimate settles.
fn quadrature(h: &Chain, rec: &Recentered, z0: C64, r: f64, cfg: &ContourConfig) -> Result<(C64, f64), OrbitError> {
    let mut n = 64usize;
    let mut prev: Option<C64> = None;
    let z0dd = Cdd::from_c64(z0);
    while n <= cfg.max_nodes {
        let mut idx = C64::default();
        let mut count = C64::default();
        for j in 0..n {
            let e = cis_turns(j as f64 / n as f64) * r;
            let (diff, deriv) = match cfg.precision {
                Precision::Double => {
                    let (g, dg) = rec.eval_d(e);
                    (e - g, dg)
                }
                Precision::DoubleDouble => {
                    let zd = z0dd + Cdd::from_c64(e);
                    let v = zd - h.eval(zd);
                    // derivative only feeds the integer root count
                    (v.to_c64(), h.eval_d(z0 + e).deriv)
                }
            };
            idx += e / diff;
            count += e * (c64(1.0, 0.0) - deriv) / diff;
        }
        idx /= n as f64;
        count /= n as f64;
        if let Some(p) = prev {
            if hypot(idx - p) <= cfg.node_tol {
                return Ok((idx, count.re));
            }
        }
        prev = Some(idx);
        n *= 2;
    }
    Err(OrbitError::QuadratureStalled)
}

/// Contour index of a fixed point of the holomorphic chain `h`. With no
/// radius given, the circle starts at a tenth of the distance to the nearest
/// other fixed point detected by the argument principle and is halved until
/// two radii agree.
pub fn contour_index(h: &Chain, z0: C64, radius: Option<f64>, cfg: &ContourConfig) -> Result<FixedPointIndex, OrbitError> {
    if h.is_anti() {
        return Err(OrbitError::InvalidArgument("contour index needs a holomorphic iterate"));
    }
    let (mult, rho) = local_multiplicity(h, z0);
    let rec = Recentered::new(h, z0);
    let residu = (mult > 1).then(|| c64(mult as f64 / 2.0, 0.0));
    let finish = |value: C64| FixedPointIndex {
        value,
        point: z0,
        method: IndexMethod::Contour,
        residu_iteratif: residu.map(|q| q - value),
    };
    if let Some(r) = radius {
        let (v, count) = quadrature(h, &rec, z0, r, cfg)?;
        let inside = libm::round(count) as i64;
        if inside != mult {
            return Err(OrbitError::ContourContaminated { inside, expected: mult, radius: r });
        }
        return Ok(finish(v));
    }
    let _ = rho;
    // grow until a second fixed point shows up, then start at a tenth of that
    let mut r = 1e-3 * hypot(z0).max(1.0);
    let mut clean = r;
    for _ in 0..12 {
        // a stalled quadrature means a pole sits near the circle
        match quadrature(h, &rec, z0, r, cfg) {
            Ok((_, count)) if libm::round(count) as i64 == mult => {}
            _ => break,
        }
        clean = r;
        r *= 2.0;
    }
    let mut r = (0.1 * r).min(clean);
    let mut prev: Option<C64> = None;
    for _ in 0..cfg.max_shrinks {
        let Ok((v, count)) = quadrature(h, &rec, z0, r, cfg) else {
            prev = None;
            r *= 0.5;
            continue;
        };
        let inside = libm::round(count) as i64;
        if inside == mult {
            if let Some(p) = prev {
                if hypot(v - p) <= cfg.radius_tol {
                    return Ok(finish(v));
                }
            }
            prev = Some(v);
        } else {
            prev = None;
        }
        r *= 0.5;
    }
    Err(OrbitError::ContourContaminated { inside: -1, expected: mult, radius: r })
}

/// Contour index of a fixed point of `map^{∘iterate}`; for an
/// antiholomorphic iterate the holomorphic square is used.
pub fn residue_index_contour(
    map: &MapDescriptor,
    iterate: u32,
    fixed_point: C64,
    radius: Option<f64>,
) -> Result<FixedPointIndex, OrbitError> {
    let h = map.dynamics().iterate(iterate).holomorphic_power();
    contour_index(&h, fixed_point, radius, &ContourConfig::default())
}

/// Index of a fixed point of multiplier one under the `n`-th iterate of its
/// germ: `(n − 1 + ι)/n`.
pub fn iterate_index(index: C64, n: u32) -> C64 {
    (index + (n as f64 - 1.0)) / n as f64
}

/// Algebraic routes to the index.
#[derive(Clone, Debug, PartialEq)]
pub enum IndexContext {
    /// `ι = 1/(1 − ρ)` from the cycle's holomorphic multiplier.
    Multiplier,
    /// Holomorphic fixed-point formula for a polynomial of the given degree:
    /// the indices of all fixed points sum to zero. The simple fixed points
    /// are given by their multipliers; the remaining `parabolic_count` points
    /// of equal `multiplicity` are conjugate and share one index.
    FixedPointTheorem {
        degree: u32,
        simple_multipliers: Vec<C64>,
        parabolic_count: u32,
        multiplicity: u32,
    },
}

/// Index from multipliers, optionally carried to the `iterate_factor`-th
/// iterate of a multiplier-one germ.
pub fn residue_index_by_formula(cycle: &Cycle, context: &IndexContext, iterate_factor: u32) -> Result<FixedPointIndex, OrbitError> {
    let rho = cycle.sq_multiplier;
    let parabolic = hypot(rho - 1.0) < 1e-6;
    let (value, method) = match context {
        IndexContext::Multiplier => {
            if parabolic {
                return Err(OrbitError::FormulaInapplicable("multiplier is one"));
            }
            (c64(1.0, 0.0) / (c64(1.0, 0.0) - rho), IndexMethod::MultiplierFormula)
        }
        IndexContext::FixedPointTheorem { degree, simple_multipliers, parabolic_count, multiplicity } => {
            if !parabolic || *parabolic_count == 0 {
                return Err(OrbitError::FormulaInapplicable("cycle is not parabolic"));
            }
            if simple_multipliers.len() as u32 + parabolic_count * multiplicity != *degree {
                return Err(OrbitError::FormulaInapplicable("fixed point count does not match the degree"));
            }
            if simple_multipliers.iter().any(|m| hypot(*m - 1.0) < 1e-9) {
                return Err(OrbitError::FormulaInapplicable("a simple fixed point has multiplier one"));
            }
            let s: C64 = simple_multipliers.iter().map(|m| c64(1.0, 0.0) / (c64(1.0, 0.0) - *m)).sum();
            (-s / *parabolic_count as f64, IndexMethod::FixedPointTheorem)
        }
    };
    let value = if iterate_factor > 1 {
        if !parabolic {
            return Err(OrbitError::FormulaInapplicable("iterate transport needs multiplier one"));
        }
        iterate_index(value, iterate_factor)
    } else {
        value
    };
    Ok(FixedPointIndex {
        value,
        point: cycle.points[0],
        method,
        residu_iteratif: parabolic.then(|| c64(cycle.multiplicity as f64 / 2.0, 0.0) - value),
    })
}

/// The two roots of `x² − sum·x + product`, each raised to `power`.
pub fn symmetric_pair(sum: C64, product: C64, power: u32) -> [C64; 2] {
    let disc = (sum * sum - product * 4.0).sqrt();
    let l1 = (sum + disc) / 2.0;
    let l2 = (sum - disc) / 2.0;
    [crate::scalar::powu(l1, power), crate::scalar::powu(l2, power)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{AntiPolyMap, MultibrotMap};
    use crate::poly::{Poly, Step};

    #[test]
    fn attracting_index_is_one_over_one_minus_rho() {
        // z ↦ z/2 + z² has ρ = 1/2 at 0
        let h = Chain::new(alloc::vec![Step::Poly(Poly::new(alloc::vec![
            C64::default(),
            c64(0.5, 0.0),
            c64(1.0, 0.0)
        ]))]);
        let idx = contour_index(&h, C64::default(), None, &ContourConfig::default()).unwrap();
        assert!((idx.value - 2.0).norm() < 1e-10);
    }

    #[test]
    fn quarter_index_both_precisions() {
        let m = MapDescriptor::Anti(AntiPolyMap::new(2, c64(0.25, 0.0)));
        let h = m.dynamics().iterate(2);
        for precision in [Precision::Double, Precision::DoubleDouble] {
            let cfg = ContourConfig { precision, ..Default::default() };
            let idx = contour_index(&h, c64(0.5, 0.0), None, &cfg).unwrap();
            assert!((idx.value - 0.5).norm() < 1e-8, "{precision:?} {idx:?}");
        }
    }

    #[test]
    fn fixed_radius_contamination_is_reported() {
        let m = MapDescriptor::Multibrot(MultibrotMap::new(2, c64(0.0, 0.0)));
        // fixed points 0 and 1: a radius-2 circle around 0 holds both
        let err = residue_index_contour(&m, 1, C64::default(), Some(2.0)).unwrap_err();
        assert!(matches!(err, OrbitError::ContourContaminated { inside: 2, .. }));
    }

    #[test]
    fn iterate_doubling_rule() {
        let xi = c64(-2.0 / 49.0, 0.0);
        assert!((iterate_index(xi, 2) - 47.0 / 98.0).norm() < 1e-15);
    }
}
