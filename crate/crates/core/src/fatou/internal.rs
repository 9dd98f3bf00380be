use alloc::vec::Vec;

use super::koenigs::{attracting_cycle_of, ratio_at, KoenigsConfig};
use super::FatouError;
use crate::dynamics::Family;
use crate::linalg;
use crate::orbits::{project_to_locus, trace_indifference_locus, LocusConfig, LocusEnd, LocusFraming};
use crate::poly::Recentered;
use crate::scalar::{cis_turns, hypot, Param, C64};

/// A hyperbolic component, identified by its center and period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Component {
    pub family: Family,
    pub center: Param,
    pub period: u32,
}

impl Component {
    /// Whether the component is parametrized by the Koenigs ratio (odd
    /// period with antiholomorphic return) rather than the multiplier.
    pub fn uses_koenigs_ratio(&self) -> bool {
        self.family.dynamics(self.center).iterate(self.period).is_anti()
    }

    /// The invariant (Koenigs ratio or multiplier) at `p`, continuing the
    /// attracting cycle from `guess`.
    pub fn invariant(&self, p: Param, guess: Option<C64>) -> Result<(C64, C64), FatouError> {
        let dy = self.family.dynamics(p);
        let z = attracting_cycle_of(&dy, self.period, guess)?;
        let ret = dy.iterate(self.period);
        let v = if ret.is_anti() {
            ratio_at(&dy, z, self.period, &KoenigsConfig::default())?
        } else {
            Recentered::new(&ret, z).multiplier()
        };
        Ok((v, z))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InternalRayConfig {
    pub r_start: f64,
    pub r_max: f64,
    /// Radius increment while `r < 0.9`; beyond, `1 − r` shrinks by `tail_factor`.
    pub linear_step: f64,
    pub tail_factor: f64,
    pub newton_tol: f64,
    pub fd_step: f64,
    pub max_halvings: u32,
    /// A cusp counts as the landing point when locus continuation from the
    /// projected landing point reaches it within this multiple of the
    /// projection distance.
    pub cusp_window: f64,
}

impl Default for InternalRayConfig {
    fn default() -> Self {
        InternalRayConfig {
            r_start: 0.1,
            r_max: 0.999,
            linear_step: 0.05,
            tail_factor: 0.6,
            newton_tol: 1e-12,
            fd_step: 1e-8,
            max_halvings: 12,
            cusp_window: 20.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InternalRay {
    pub angle: f64,
    pub radii: Vec<f64>,
    pub params: Vec<Param>,
    pub values: Vec<C64>,
    /// Projection of the last ray point onto the indifference locus, or
    /// the cusp found next to it.
    pub landing: Param,
    /// Distance from the last ray point to the landing point.
    pub landing_residual: f64,
    pub cusp: bool,
}

fn newton_on(
    comp: &Component,
    target: C64,
    p0: Param,
    z0: C64,
    h: f64,
    cfg: &InternalRayConfig,
) -> Option<(Param, C64, C64)> {
    // near the boundary the invariant is only known to a few units of
    // (1 − r) times the parameter rounding
    let tol = cfg.newton_tol.max(1e-8 * (1.0 - hypot(target)));
    let mut p = p0;
    let (mut v, mut z) = comp.invariant(p, Some(z0)).ok()?;
    for _ in 0..40 {
        let f = v - target;
        if hypot(f) <= tol {
            return Some((p, v, z));
        }
        let fd = |q: Param| comp.invariant(q, Some(z)).ok().map(|r| r.0);
        let dx = match fd(Param::new(p.x + h, p.y)) {
            Some(vx) => (vx - v) / h,
            None => (v - fd(Param::new(p.x - h, p.y))?) / h,
        };
        let dy = match fd(Param::new(p.x, p.y + h)) {
            Some(vy) => (vy - v) / h,
            None => (v - fd(Param::new(p.x, p.y - h))?) / h,
        };
        let d = linalg::solve([[dx.re, dy.re], [dx.im, dy.im]], [-f.re, -f.im])?;
        if !(hypot(C64::new(d[0], d[1])) <= 0.5) {
            return None;
        }
        // damped: accept the first fraction of the step that reduces |f|
        let mut lam = 1.0;
        loop {
            let q = Param::new(p.x + lam * d[0], p.y + lam * d[1]);
            if let Ok((vq, zq)) = comp.invariant(q, Some(z)) {
                if hypot(vq - target) < hypot(f) {
                    p = q;
                    v = vq;
                    z = zq;
                    break;
                }
            }
            lam *= 0.5;
            if lam < 1e-6 {
                return (hypot(f) <= 10.0 * tol).then_some((p, v, z));
            }
        }
    }
    None
}

/// Parameter near `p0` where the component invariant equals `target`, with
/// the attracting cycle continued from `z0`.
pub(crate) fn solve_invariant(comp: &Component, target: C64, p0: Param, z0: C64, h: f64) -> Option<(Param, C64, C64)> {
    newton_on(comp, target, p0, z0, h, &InternalRayConfig::default())
}

/// Continue the internal ray of angle `angle` (turns) from a seed parameter
/// near the component's center, up to radius `r_max`, and locate where it
/// lands on the boundary.
pub fn trace_internal_ray(
    comp: &Component,
    angle: f64,
    branch_seed: Param,
    cfg: &InternalRayConfig,
) -> Result<InternalRay, FatouError> {
    let dir = cis_turns(angle);
    let dy0 = comp.family.dynamics(branch_seed);
    let z0 = attracting_cycle_of(&dy0, comp.period, None)?;
    let h0 = cfg.fd_step * (1.0 + hypot(branch_seed.as_c64()));
    let (p, v, z) = newton_on(comp, dir * cfg.r_start, branch_seed, z0, h0, cfg)
        .ok_or(FatouError::BranchLost { radius: cfg.r_start })?;
    let mut ray = InternalRay {
        angle,
        radii: alloc::vec![cfg.r_start],
        params: alloc::vec![p],
        values: alloc::vec![v],
        landing: p,
        landing_residual: f64::INFINITY,
        cusp: false,
    };
    let mut zs = alloc::vec![z];
    let mut r = cfg.r_start;
    let next_r = |r: f64| {
        if r < 0.9 - 1e-12 {
            (r + cfg.linear_step).min(0.9)
        } else {
            1.0 - (1.0 - r) * cfg.tail_factor
        }
    };
    while r < cfg.r_max - 1e-15 {
        let mut rn = next_r(r).min(cfg.r_max);
        let mut halvings = 0;
        loop {
            let n = ray.params.len();
            let guess = if n >= 2 && rn <= 0.9 + 1e-12 {
                let (pa, pb) = (ray.params[n - 2], ray.params[n - 1]);
                let (ra, rb) = (ray.radii[n - 2], ray.radii[n - 1]);
                let s = (rn - rb) / (rb - ra);
                Param::new(pb.x + s * (pb.x - pa.x), pb.y + s * (pb.y - pa.y))
            } else {
                ray.params[n - 1]
            };
            // difference step well below the distance between ray points
            let h = if n >= 2 {
                (1e-6 * ray.params[n - 1].dist(ray.params[n - 2])).clamp(1e-13, cfg.fd_step)
            } else {
                cfg.fd_step
            };
            if let Some((p, v, z)) = newton_on(comp, dir * rn, guess, zs[n - 1], h, cfg) {
                ray.radii.push(rn);
                ray.params.push(p);
                ray.values.push(v);
                zs.push(z);
                r = rn;
                break;
            }
            halvings += 1;
            if halvings > cfg.max_halvings {
                return Err(FatouError::BranchLost { radius: r });
            }
            rn = 0.5 * (r + rn);
        }
    }
    let last = *ray.params.last().unwrap();
    let zl = *zs.last().unwrap();
    let framing = if comp.uses_koenigs_ratio() { LocusFraming::Anti } else { LocusFraming::Holomorphic };
    let lcfg = LocusConfig { corrector_tol: 1e-13, ..LocusConfig::default() };
    if let Some(s) = project_to_locus(comp.family, comp.period, framing, zl, last, &lcfg) {
        ray.landing = s.param;
        ray.landing_residual = s.param.dist(last);
        if framing == LocusFraming::Anti {
            let window = (cfg.cusp_window * ray.landing_residual).max(1e-9);
            let tcfg = LocusConfig {
                max_arclength: window,
                max_step: window / 8.0,
                initial_step: window / 64.0,
                min_step: window * 1e-9,
                ..lcfg
            };
            if let Ok(sk) = trace_indifference_locus(comp.family, comp.period, (s.param, s.point), framing, &tcfg) {
                let mut best: Option<(f64, Param)> = None;
                for (k, end) in sk.ends.iter().enumerate() {
                    if *end == LocusEnd::Cusp {
                        let smp = if k == 0 { sk.samples.first() } else { sk.samples.last() };
                        if let Some(smp) = smp {
                            let d = smp.param.dist(s.param);
                            if best.is_none_or(|b| d < b.0) {
                                best = Some((d, smp.param));
                            }
                        }
                    }
                }
                if let Some((_, cp)) = best {
                    ray.landing = cp;
                    ray.landing_residual = cp.dist(last);
                    ray.cusp = true;
                }
            }
        }
    }
    Ok(ray)
}

/// `(1 − ρ)/(1 − |ρ|²)`, which tends to `1/2 − 2ih` as `ρ` approaches a
/// parabolic parameter of critical Ecalle height `h`.
pub fn ecalle_koenigs_limit(rho: C64) -> C64 {
    (1.0 - rho) / (1.0 - rho.norm_sqr())
}

/// The limit quantity along a path of parameters in an odd component.
pub fn ecalle_koenigs_limit_probe(comp: &Component, path: &[Param]) -> Result<Vec<C64>, FatouError> {
    let mut out = Vec::with_capacity(path.len());
    let mut guess = None;
    for &p in path {
        let (rho, z) = comp.invariant(p, guess)?;
        guess = Some(z);
        out.push(ecalle_koenigs_limit(rho));
    }
    Ok(out)
}
