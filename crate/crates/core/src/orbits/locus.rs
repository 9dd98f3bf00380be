use alloc::vec::Vec;

use super::OrbitError;
use crate::dynamics::Family;
use crate::linalg;
use crate::scalar::{hypot, Param, C64};

/// Which derivative must have modulus one along the locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusFraming {
    /// `|∂f^{∘k}/∂z̄| = 1` for an antiholomorphic return.
    Anti,
    /// `|∂f^{∘k}/∂z| = 1` for a holomorphic return.
    Holomorphic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocusConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Samples per direction (the start sample is shared).
    pub max_samples: usize,
    pub corrector_tol: f64,
    pub max_corrector_iter: u32,
    pub fd_step: f64,
    pub both_directions: bool,
    /// Stop a direction at a sample whose quadratic coefficient vanishes.
    pub stop_at_cusps: bool,
    pub cusp_tol: f64,
    pub max_arclength: f64,
    /// Smallest accepted cosine between consecutive tangents.
    pub max_turn_cos: f64,
}

impl Default for LocusConfig {
    fn default() -> Self {
        LocusConfig {
            initial_step: 1e-3,
            min_step: 1e-10,
            max_step: 0.02,
            max_samples: 400,
            corrector_tol: 1e-12,
            max_corrector_iter: 16,
            fd_step: 1e-7,
            both_directions: true,
            stop_at_cusps: true,
            cusp_tol: 1e-6,
            max_arclength: 20.0,
            max_turn_cos: 0.995,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocusSample {
    /// Signed arclength in `(Re z, Im z, p₁, p₂)` space from the start.
    pub arclength: f64,
    pub param: Param,
    pub point: C64,
    /// Multiplier of the return (`∂/∂z̄` in the anti framing).
    pub multiplier: C64,
    /// Max norm of the defining equations.
    pub residual: f64,
    /// Second Taylor coefficient of the holomorphic return at the point
    /// (anti framing only).
    pub quadratic: Option<C64>,
    pub cusp_adjacent: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusEnd {
    SampleLimit,
    ArclengthLimit,
    StepCollapse,
    Cusp,
    Closed,
    NotTraced,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocusSkeleton {
    pub family: Family,
    pub period: u32,
    pub framing: LocusFraming,
    /// Ordered along the curve, from the backward end to the forward end.
    pub samples: Vec<LocusSample>,
    pub ends: [LocusEnd; 2],
}

type X = [f64; 4];

fn unpack(x: &X) -> (C64, Param) {
    (C64::new(x[0], x[1]), Param::new(x[2], x[3]))
}

/// Periodicity and unimodularity residuals at `(z, p)`.
pub fn locus_residual(family: Family, period: u32, framing: LocusFraming, z: C64, p: Param) -> [f64; 3] {
    let ret = family.dynamics(p).iterate(period);
    let e = ret.eval_d(z);
    let m = e.deriv;
    let _ = framing;
    let f = e.value - z;
    [f.re, f.im, m.norm_sqr() - 1.0]
}

struct Tracer {
    family: Family,
    period: u32,
    framing: LocusFraming,
    cfg: LocusConfig,
}

impl Tracer {
    fn eqs(&self, x: &X) -> [f64; 3] {
        let (z, p) = unpack(x);
        locus_residual(self.family, self.period, self.framing, z, p)
    }

    fn jac(&self, x: &X, f0: &[f64; 3]) -> [[f64; 4]; 3] {
        let mut j = [[0.0; 4]; 3];
        for c in 0..4 {
            let h = self.cfg.fd_step * x[c].abs().max(1.0);
            let mut xp = *x;
            xp[c] += h;
            let fp = self.eqs(&xp);
            let mut xm = *x;
            xm[c] -= h;
            let fm = self.eqs(&xm);
            for r in 0..3 {
                j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
            }
            let _ = f0;
        }
        j
    }

    fn tangent(&self, x: &X) -> Option<X> {
        let f = self.eqs(x);
        linalg::kernel_3x4(self.jac(x, &f))
    }

    /// Newton on the equations plus the hyperplane `t·(x − xp) = 0`.
    fn correct(&self, xp: X, t: &X) -> Option<(X, u32)> {
        let mut x = xp;
        for it in 0..self.cfg.max_corrector_iter {
            let f = self.eqs(&x);
            let norm = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !norm.is_finite() {
                return None;
            }
            if norm < self.cfg.corrector_tol {
                return Some((x, it));
            }
            let j = self.jac(&x, &f);
            let a = [j[0], j[1], j[2], *t];
            let plane: f64 = (0..4).map(|k| t[k] * (x[k] - xp[k])).sum();
            let dx = linalg::solve(a, [-f[0], -f[1], -f[2], -plane])?;
            for k in 0..4 {
                x[k] += dx[k];
            }
        }
        let f = self.eqs(&x);
        let norm = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (norm < self.cfg.corrector_tol).then_some((x, self.cfg.max_corrector_iter))
    }

    fn sample(&self, x: &X, s: f64) -> LocusSample {
        let (z, p) = unpack(x);
        let ret = self.family.dynamics(p).iterate(self.period);
        let e = ret.eval_d(z);
        let f = self.eqs(x);
        let quadratic = match self.framing {
            LocusFraming::Anti => Some(ret.holomorphic_power().jet(z, 3).coeffs[2]),
            LocusFraming::Holomorphic => None,
        };
        LocusSample {
            arclength: s,
            param: p,
            point: z,
            multiplier: e.deriv,
            residual: f.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            quadratic,
            cusp_adjacent: quadratic.is_some_and(|a| hypot(a) < self.cfg.cusp_tol),
        }
    }

    /// Golden-section search for the smallest quadratic coefficient between
    /// two accepted points, re-solving the corrector at each trial.
    fn refine_cusp(&self, a: (X, X), b: (X, X)) -> Option<X> {
        let qa = |x: &X| {
            let (z, p) = unpack(x);
            hypot(self.family.dynamics(p).iterate(self.period).holomorphic_power().jet(z, 3).coeffs[2])
        };
        let point_at = |s: f64| -> Option<X> {
            let mut xp = [0.0; 4];
            for k in 0..4 {
                xp[k] = a.0[k] + s * (b.0[k] - a.0[k]);
            }
            let mut t = [0.0; 4];
            let mut n = 0.0;
            for k in 0..4 {
                t[k] = b.0[k] - a.0[k];
                n += t[k] * t[k];
            }
            let n = libm::sqrt(n);
            let t = t.map(|v| v / n);
            self.correct(xp, &t).map(|r| r.0)
        };
        let g = 0.5 * (libm::sqrt(5.0) - 1.0);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut best: Option<(f64, X)> = None;
        for _ in 0..80 {
            let m1 = hi - g * (hi - lo);
            let m2 = lo + g * (hi - lo);
            let x1 = point_at(m1)?;
            let x2 = point_at(m2)?;
            let (q1, q2) = (qa(&x1), qa(&x2));
            for (q, x) in [(q1, x1), (q2, x2)] {
                if best.is_none_or(|(bq, _)| q < bq) {
                    best = Some((q, x));
                }
            }
            if q1 < q2 {
                hi = m2;
            } else {
                lo = m1;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        let _ = b.1;
        best.map(|(_, x)| x)
    }

    fn run(&self, x0: X, t0: X, dir: f64) -> (Vec<LocusSample>, LocusEnd) {
        let mut out = Vec::new();
        let mut x = x0;
        let mut t = t0.map(|v| v * dir);
        let mut h = self.cfg.initial_step;
        let mut s = 0.0;
        let mut prev_q = f64::INFINITY;
        let mut prev_x: X = x0;
        let mut prev_t: X;
        let mut prev2_x: X;
        let mut falling = false;
        let q_ref = self.sample(&x0, 0.0).quadratic.map(hypot).unwrap_or(f64::INFINITY);
        while out.len() < self.cfg.max_samples {
            let mut xp = [0.0; 4];
            for k in 0..4 {
                xp[k] = x[k] + h * t[k];
            }
            let Some((xn, iters)) = self.correct(xp, &t) else {
                h *= 0.5;
                if h < self.cfg.min_step {
                    return (out, LocusEnd::StepCollapse);
                }
                continue;
            };
            let Some(mut tn) = self.tangent(&xn) else {
                return (out, LocusEnd::StepCollapse);
            };
            let dot: f64 = (0..4).map(|k| tn[k] * t[k]).sum();
            if dot < 0.0 {
                tn = tn.map(|v| -v);
            }
            // keep the tangent turn per step small so that the step scales
            // with the curvature of the locus
            if dot.abs() < self.cfg.max_turn_cos && h > self.cfg.min_step {
                h *= 0.5;
                continue;
            }
            let step: f64 = libm::sqrt((0..4).map(|k| (xn[k] - x[k]) * (xn[k] - x[k])).sum::<f64>());
            s += dir * step;
            prev2_x = prev_x;
            prev_x = x;
            prev_t = t;
            x = xn;
            t = tn;
            let smp = self.sample(&x, s);
            let q = smp.quadratic.map(hypot).unwrap_or(f64::INFINITY);
            if self.cfg.stop_at_cusps && smp.quadratic.is_some() {
                if smp.cusp_adjacent {
                    out.push(smp);
                    return (out, LocusEnd::Cusp);
                }
                // a local minimum of |a| below a few steps' worth of change
                if falling && q > prev_q && prev_q < 0.5 * q_ref {
                    // the minimum lies on either side of the previous sample
                    if let Some(xc) = self.refine_cusp((prev2_x, prev_t), (x, t)) {
                        let prior = out.last().map(|l: &LocusSample| l.arclength).unwrap_or(0.0);
                        let mut c = self.sample(&xc, s);
                        if c.cusp_adjacent {
                            out.pop();
                            let len = libm::sqrt((0..4).map(|k| (xc[k] - prev_x[k]) * (xc[k] - prev_x[k])).sum::<f64>());
                            c.arclength = prior + dir * len;
                            out.push(c);
                            return (out, LocusEnd::Cusp);
                        }
                    }
                }
                falling = q < prev_q;
                prev_q = q;
            }
            out.push(smp);
            if s.abs() > self.cfg.max_arclength {
                return (out, LocusEnd::ArclengthLimit);
            }
            if out.len() > 10 && (0..4).map(|k| (x[k] - x0[k]) * (x[k] - x0[k])).sum::<f64>() < 0.25 * h * h {
                return (out, LocusEnd::Closed);
            }
            if iters <= 3 {
                h = (h * 1.5).min(self.cfg.max_step);
            }
        }
        (out, LocusEnd::SampleLimit)
    }
}

/// Pseudo-arclength continuation of `{f^{∘k}(z) = z, |multiplier|² = 1}` in
/// the four real unknowns `(Re z, Im z, p₁, p₂)`.
pub fn trace_indifference_locus(
    family: Family,
    period: u32,
    start: (Param, C64),
    framing: LocusFraming,
    cfg: &LocusConfig,
) -> Result<LocusSkeleton, OrbitError> {
    let tr = Tracer { family, period, framing, cfg: *cfg };
    let x0 = [start.1.re, start.1.im, start.0.x, start.0.y];
    let f0 = tr.eqs(&x0);
    if f0.iter().any(|v| !(v.abs() < 1e-8)) {
        return Err(OrbitError::InvalidStart("start is not on the indifference locus"));
    }
    let t0 = [1.0, 0.0, 0.0, 0.0];
    let (x0, _) = tr.correct(x0, &t0).ok_or(OrbitError::InvalidStart("corrector failed at the start"))?;
    let t0 = tr.tangent(&x0).ok_or(OrbitError::InvalidStart("singular start"))?;
    let first = tr.sample(&x0, 0.0);
    let (fwd, fend) = tr.run(x0, t0, 1.0);
    let (bwd, bend) = if cfg.both_directions { tr.run(x0, t0, -1.0) } else { (Vec::new(), LocusEnd::NotTraced) };
    if fwd.is_empty() && bwd.is_empty() {
        return Err(OrbitError::StepCollapse { arclength: 0.0 });
    }
    let mut samples: Vec<LocusSample> = bwd.into_iter().rev().collect();
    samples.push(first);
    samples.extend(fwd);
    Ok(LocusSkeleton { family, period, framing, samples, ends: [bend, fend] })
}

/// Minimal-norm Gauss–Newton projection of `(z, p)` onto the locus.
pub fn project_to_locus(
    family: Family,
    period: u32,
    framing: LocusFraming,
    z: C64,
    p: Param,
    cfg: &LocusConfig,
) -> Option<LocusSample> {
    let tr = Tracer { family, period, framing, cfg: *cfg };
    let mut x = [z.re, z.im, p.x, p.y];
    for _ in 0..40 {
        let f = tr.eqs(&x);
        let norm = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !norm.is_finite() {
            return None;
        }
        if norm < cfg.corrector_tol {
            return Some(tr.sample(&x, 0.0));
        }
        let j = tr.jac(&x, &f);
        // dx = Jᵀ (J Jᵀ)⁻¹ (−f)
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = (0..4).map(|k| j[r][k] * j[c][k]).sum();
            }
        }
        let y = linalg::solve(m, [-f[0], -f[1], -f[2]])?;
        for k in 0..4 {
            x[k] += (0..3).map(|r| j[r][k] * y[r]).sum::<f64>();
        }
    }
    None
}

/// Locus point between two samples: the chord point at fraction `s`,
/// corrected on the hyperplane normal to the chord.
pub fn interpolate_on_locus(
    family: Family,
    period: u32,
    framing: LocusFraming,
    a: &LocusSample,
    b: &LocusSample,
    s: f64,
    cfg: &LocusConfig,
) -> Option<LocusSample> {
    let tr = Tracer { family, period, framing, cfg: *cfg };
    let xa = [a.point.re, a.point.im, a.param.x, a.param.y];
    let xb = [b.point.re, b.point.im, b.param.x, b.param.y];
    let mut t = [0.0; 4];
    let mut xp = [0.0; 4];
    for k in 0..4 {
        t[k] = xb[k] - xa[k];
        xp[k] = xa[k] + s * t[k];
    }
    let n = libm::sqrt(t.iter().map(|v| v * v).sum::<f64>());
    if n == 0.0 {
        return Some(*a);
    }
    let t = t.map(|v| v / n);
    let (x, _) = tr.correct(xp, &t)?;
    Some(tr.sample(&x, a.arclength + s * (b.arclength - a.arclength)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_deltoid_arc_reaches_both_cusps() {
        let fam = Family::Multicorn { degree: 2 };
        let sk = trace_indifference_locus(
            fam,
            1,
            (Param::new(0.25, 0.0), C64::new(0.5, 0.0)),
            LocusFraming::Anti,
            &LocusConfig::default(),
        )
        .unwrap();
        assert_eq!(sk.ends, [LocusEnd::Cusp, LocusEnd::Cusp]);
        for s in &sk.samples {
            assert!(s.residual < 1e-9);
            assert!((s.multiplier.norm() - 1.0).abs() < 1e-8);
        }
        // cusps of the deltoid sit at e^{±iπ/3}/2 − e^{∓2iπ/3}/4
        let end = sk.samples.last().unwrap().param.as_c64();
        let t = core::f64::consts::FRAC_PI_3;
        let want = [C64::from_polar(0.5, t) - C64::from_polar(0.25, -2.0 * t), C64::from_polar(0.5, -t) - C64::from_polar(0.25, 2.0 * t)];
        assert!(want.iter().any(|w| (w - end).norm() < 1e-5), "{end}");
    }
}
