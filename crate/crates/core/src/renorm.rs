//! Renormalization windows at odd-period centers, baby-set membership and
//! straightening by invariant matching.
//!
//! The trap domain is a round disk `D` about the critical point. A window
//! is valid at a parameter when the return map sends `∂D` outside `D` and
//! winds it around the critical point exactly as often as the local degree:
//! then the component of the preimage of `D` holding the critical point is
//! compactly inside `D` and the return is polynomial-like of that degree.

use alloc::vec::Vec;

use crate::arcs::{build_arc, evaluate_sample, locate_height, ArcConfig, ArcError};
use crate::dynamics::{Dynamics, Family};
use crate::fatou::{attracting_cycle_of, characteristic_point, critical_parabolic_cycle, solve_invariant, Component, FatouError};
use crate::orbits::{project_to_locus, trace_indifference_locus, LocusConfig, LocusFraming};
use crate::poly::Recentered;
use crate::raster::{Coloring, Plane, RasterJob, RasterResult, Sample, Window};
use crate::scalar::{arg_turns, c64, cis_turns, hypot, wrap_half, Param, C64};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RenormError {
    #[error("renormalization period must exceed 1")]
    PeriodOne,
    #[error("no trap disk nests compactly (best margin {margin})")]
    NestingFailed { margin: f64 },
    #[error("window does not nest at this parameter (margin {margin})")]
    WindowInvalid { margin: f64 },
    #[error("parameter is not in a supported component of the baby set")]
    ComponentUnmatched,
    #[error("no marking: the window has no real symmetry and no marking seed was given")]
    BranchAmbiguous,
    #[error("continuation from the center lost the branch")]
    ContinuationFailed,
    #[error(transparent)]
    Fatou(#[from] FatouError),
    #[error(transparent)]
    Arc(#[from] ArcError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowConfig {
    /// Return iterations for membership.
    pub depth: u32,
    pub boundary_samples: usize,
    /// Candidate trap radii, geometric between these multiples of
    /// `1 + |critical point|`.
    pub radius_range: (f64, f64),
    pub radius_candidates: usize,
    /// Side of the parameter grid over which candidate radii are scored.
    pub radius_grid: usize,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig { depth: 64, boundary_samples: 512, radius_range: (1e-3, 2.0), radius_candidates: 64, radius_grid: 9 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenormWindow {
    pub family: Family,
    pub center: Param,
    pub period: u32,
    /// Local degree of the return at the critical point.
    pub local_degree: u32,
    pub anti: bool,
    pub trap_radius: f64,
    /// Nesting margin at the center.
    pub margin: f64,
    /// Half-width of the square parameter box rendered around the center.
    pub box_half_width: f64,
    pub cfg: WindowConfig,
}

/// Nesting check of the disk `D(cp, r)` under the return: relative margin
/// `min (|R(z) − cp| − r)/r` over `∂D`, and the winding of `R(∂D)` around `cp`.
fn nesting(dy: &Dynamics, period: u32, r: f64, n: usize) -> (f64, i64) {
    let ret = dy.iterate(period);
    let cp = dy.critical_point;
    let mut margin = f64::INFINITY;
    let mut turns = 0.0;
    let mut prev: Option<f64> = None;
    let mut first = 0.0;
    for j in 0..n {
        let z = cp + r * cis_turns((j as f64 + 0.5) / n as f64);
        let w = ret.eval(z) - cp;
        let m = hypot(w);
        if !m.is_finite() {
            return (f64::NEG_INFINITY, 0);
        }
        margin = margin.min((m - r) / r);
        let a = arg_turns(w);
        match prev {
            Some(p) => turns += wrap_half(a - p),
            None => first = a,
        }
        prev = Some(a);
    }
    if let Some(p) = prev {
        turns += wrap_half(first - p);
    }
    (margin, libm::round(turns) as i64)
}

fn local_degree(dy: &Dynamics, period: u32) -> u32 {
    let ret = dy.iterate(period);
    let cp = dy.critical_point;
    let len = dy.degree().min(16) as usize;
    let t = Recentered::new(&ret, cp).taylor(len);
    let scale = t.iter().map(|c| hypot(*c)).fold(0.0, f64::max);
    t.iter().position(|c| hypot(*c) > 1e-9 * scale).map_or(1, |i| i as u32 + 1)
}

fn param_delta(a: Param, b: Param) -> C64 {
    c64(a.x - b.x, a.y - b.y)
}

fn offset(p: Param, d: C64) -> Param {
    Param::new(p.x + d.re, p.y + d.im)
}

/// Build a window at a center of the given period.
///
/// The trap radius maximizes the nesting margin at the center over a
/// geometric set of candidates; the parameter box is sized from how fast
/// the return's critical value moves with the parameter.
pub fn build_window(family: Family, center: Param, period: u32) -> Result<RenormWindow, RenormError> {
    build_window_with(family, center, period, &WindowConfig::default())
}

pub fn build_window_with(family: Family, center: Param, period: u32, cfg: &WindowConfig) -> Result<RenormWindow, RenormError> {
    let unicritical = matches!(family, Family::Multicorn { .. } | Family::Multibrot { .. });
    if period == 0 || (unicritical && period == 1) {
        return Err(RenormError::PeriodOne);
    }
    let dy = family.dynamics(center);
    let m = local_degree(&dy, period);
    let anti = dy.iterate(period).is_anti();
    let want = if anti { -(m as i64) } else { m as i64 };
    // Near the center the return is `v + A·w^m` (in `w` or `w̄`), conjugate
    // to the model with parameter `|A|^{1/(m−1)}·v`; the model set has radius
    // about 2, and `v` moves with the parameter at rate `|∂v/∂p|`.
    let lead = Recentered::new(&dy.iterate(period), dy.critical_point).taylor(m as usize)[m as usize - 1];
    let a_scale = libm::pow(hypot(lead), 1.0 / (m as f64 - 1.0).max(1.0));
    let h = 1e-7 * family.scale(center);
    let v0 = dy.iterate(period).eval(dy.critical_point) - dy.critical_point;
    let mut jn: f64 = 0.0;
    for d in [c64(h, 0.0), c64(0.0, h)] {
        let q = offset(center, d);
        let dq = family.dynamics(q);
        let v = dq.iterate(period).eval(dq.critical_point) - dq.critical_point;
        jn = jn.max(hypot(v - v0) / h);
    }
    let box_half_width = if jn > 0.0 && a_scale > 0.0 { 2.5 / (a_scale * jn) } else { 0.1 * family.scale(center) };
    // The trap radius is the candidate valid over most of the parameter
    // box (then with the largest margin at the center).
    let scale = 1.0 + hypot(dy.critical_point);
    let (lo, hi) = cfg.radius_range;
    let g = cfg.radius_grid;
    let grid: Vec<Dynamics> = (0..g * g)
        .map(|i| {
            let u = 2.0 * ((i % g) as f64 + 0.5) / g as f64 - 1.0;
            let v = 2.0 * ((i / g) as f64 + 0.5) / g as f64 - 1.0;
            family.dynamics(offset(center, c64(u, v) * box_half_width))
        })
        .collect();
    let mut best: Option<(usize, f64, f64)> = None;
    let mut best_any = f64::NEG_INFINITY;
    for j in 0..cfg.radius_candidates {
        let t = j as f64 / (cfg.radius_candidates - 1).max(1) as f64;
        let r = scale * lo * libm::pow(hi / lo, t);
        let (margin, wind) = nesting(&dy, period, r, cfg.boundary_samples);
        best_any = best_any.max(margin);
        if wind != want || margin <= 0.0 {
            continue;
        }
        let valid = grid
            .iter()
            .filter(|d| {
                let (m2, w2) = nesting(d, period, r, cfg.boundary_samples / 4);
                m2 > 0.0 && w2 == want
            })
            .count();
        if best.is_none_or(|b| (valid, margin) > (b.0, b.2)) {
            best = Some((valid, r, margin));
        }
    }
    let (_, r, margin) = best.ok_or(RenormError::NestingFailed { margin: best_any })?;
    Ok(RenormWindow { family, center, period, local_degree: m, anti, trap_radius: r, margin, box_half_width, cfg: *cfg })
}

impl RenormWindow {
    /// Nesting margin at `p`, or the reason the window is invalid there.
    pub fn validity(&self, p: Param) -> Result<f64, RenormError> {
        let dy = self.family.dynamics(p);
        let (margin, wind) = nesting(&dy, self.period, self.trap_radius, self.cfg.boundary_samples);
        let want = if self.anti { -(self.local_degree as i64) } else { self.local_degree as i64 };
        if margin > 0.0 && wind == want {
            Ok(margin)
        } else {
            Err(RenormError::WindowInvalid { margin })
        }
    }

    /// The square parameter box around the center, as a raster window.
    pub fn box_window(&self) -> Window {
        Window { center: self.center.as_c64(), width: 2.0 * self.box_half_width }
    }

    /// Whether the window's real structure (`Im p = 0`, or `b = 0` in the
    /// cubic family) is preserved by the family's reflection.
    pub fn is_real_symmetric(&self) -> bool {
        self.center.y == 0.0
    }

    /// Model family of the straightening.
    pub fn model_family(&self) -> Family {
        if self.anti {
            Family::Multicorn { degree: self.local_degree }
        } else {
            Family::Multibrot { degree: self.local_degree }
        }
    }
}

/// Whether the renormalized critical orbit stays in the trap for the
/// configured depth.
pub fn baby_membership(window: &RenormWindow, p: Param) -> Result<bool, RenormError> {
    window.validity(p)?;
    let dy = window.family.dynamics(p);
    let ret = dy.iterate(window.period);
    let cp = dy.critical_point;
    let mut z = cp;
    for _ in 0..window.cfg.depth {
        z = ret.eval(z);
        if !(hypot(z - cp) <= window.trap_radius) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn baby_sample(window: &RenormWindow, p: Param) -> Sample {
    match baby_membership(window, p) {
        Ok(true) => Sample::Bounded { period: None },
        Ok(false) => Sample::Escaped { iterations: 0, potential: 0.0 },
        Err(_) => Sample::Invalid,
    }
}

/// A raster job over the window's box; the plane is recorded for the
/// metadata only, pixels come from [`render_baby_row`].
pub fn baby_job(window: &RenormWindow, width: u32, height: u32) -> RasterJob {
    let plane = match window.family {
        Family::Multicorn { degree } => Plane::ParameterAnti { degree },
        Family::Multibrot { degree } => Plane::ParameterMultibrot { degree },
        Family::RealCubic | Family::RealCubicAnti { .. } => Plane::ParameterCubic,
    };
    RasterJob::new(plane, window.box_window(), width, height, window.cfg.depth, Coloring::Binary)
}

pub fn render_baby_row(window: &RenormWindow, job: &RasterJob, row: u32) -> Vec<Sample> {
    (0..job.width).map(|col| baby_sample(window, Param::from_c64(job.pixel_point(row, col)))).collect()
}

/// Single-threaded baby-set render; invalid pixels are [`Sample::Invalid`].
pub fn render_baby(window: &RenormWindow, job: &RasterJob) -> RasterResult {
    let mut pixels = Vec::with_capacity(job.width as usize * job.height as usize);
    for row in 0..job.height {
        pixels.extend(render_baby_row(window, job, row));
    }
    RasterResult { job: *job, pixels, elapsed_secs: 0.0 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchedInvariant {
    KoenigsRatio,
    EcalleHeight,
    Multiplier,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StraighteningRecord {
    pub source: Param,
    /// Parameter of the model family (`Multicorn`/`Multibrot` of the local degree).
    pub image: Param,
    pub invariant: MatchedInvariant,
    pub source_value: C64,
    pub image_value: C64,
    pub residual: f64,
    /// Residue index of the holomorphic return at the parabolic point (arc case).
    pub source_index: Option<f64>,
    pub image_index: Option<f64>,
    /// Multiplier moduli of the attracting cycles (hyperbolic case).
    pub source_multiplier: Option<f64>,
    pub image_multiplier: Option<f64>,
    /// Branch index of the marking used.
    pub branch: u32,
}

/// Near-center inverse of the model invariant: the branch candidates for
/// value `v`, in increasing angle from `arg v / (branches)`.
fn model_branches(anti: bool, m: u32, v: C64) -> Vec<C64> {
    let md = m as f64;
    let r = libm::pow(hypot(v) / md, 1.0 / (md - 1.0));
    let (n, a) = if anti { (m + 1, arg_turns(v)) } else { (m - 1, arg_turns(v)) };
    (0..n.max(1)).map(|j| r * cis_turns((a + j as f64) / n.max(1) as f64)).collect()
}

fn angle_between(a: C64, b: C64) -> f64 {
    wrap_half(arg_turns(a) - arg_turns(b)).abs()
}

struct Marking {
    /// Image direction of the source direction `+1` (`+a` for the cubic).
    e_x: C64,
    /// `+1` if the local straightening preserves orientation.
    orient: f64,
    branch: u32,
}

impl RenormWindow {
    fn source_component(&self) -> Component {
        Component { family: self.family, center: self.center, period: self.period }
    }

    fn model_component(&self) -> Component {
        Component { family: self.model_family(), center: Param::default(), period: 1 }
    }

    fn source_invariant(&self, p: Param, guess: Option<C64>) -> Result<(C64, C64), RenormError> {
        Ok(self.source_component().invariant(p, guess)?)
    }

    /// A probe offset in direction `dir` whose invariant is small but well
    /// above rounding.
    fn probe(&self, dir: C64) -> Result<C64, RenormError> {
        let mut eps = 0.01 * self.box_half_width;
        for _ in 0..40 {
            let Ok((v, _)) = self.source_invariant(offset(self.center, eps * dir), None) else {
                eps *= 0.25;
                continue;
            };
            let a = hypot(v);
            if a > 0.1 {
                eps *= 0.25;
            } else if a < 1e-4 {
                eps *= 4.0;
            } else {
                return Ok(v);
            }
        }
        Err(RenormError::ComponentUnmatched)
    }

    fn marking(&self, seed: Option<u32>) -> Result<Marking, RenormError> {
        let m = self.local_degree;
        let vx = self.probe(c64(1.0, 0.0))?;
        let cands = model_branches(self.anti, m, vx);
        let n = cands.len() as u32;
        let branch = match seed {
            Some(j) => j % n,
            None if self.is_real_symmetric() => {
                // closest to the real axis, ties toward the positive side
                let key = |c: &C64| (libm::fabs(c.im) / hypot(*c), if c.re >= 0.0 { 0 } else { 1 });
                let mut best = 0;
                for (j, c) in cands.iter().enumerate() {
                    let (a, b) = (key(c), key(&cands[best]));
                    if a.0 < b.0 - 1e-9 || (libm::fabs(a.0 - b.0) <= 1e-9 && a.1 < b.1) {
                        best = j;
                    }
                }
                best as u32
            }
            None => return Err(RenormError::BranchAmbiguous),
        };
        let e_x = cands[branch as usize] / hypot(cands[branch as usize]);
        let orient = if self.anti {
            // a quarter turn of the source direction turns the invariant by ±(m+1)/4 turns
            let q = 0.25 / (m as f64 + 1.0);
            let vq = self.probe(cis_turns(q))?;
            if wrap_half(arg_turns(vq) - arg_turns(vx)) >= 0.0 { 1.0 } else { -1.0 }
        } else {
            1.0
        };
        Ok(Marking { e_x, orient, branch })
    }
}

fn model_real_parabolic(m: u32) -> (Param, C64) {
    let md = m as f64;
    let z = libm::pow(md, -1.0 / (md - 1.0));
    (Param::new(z - libm::pow(z, md), 0.0), c64(z, 0.0))
}

/// Straighten `p`: find the model parameter with the same Koenigs ratio
/// (or multiplier) when `p` has an attracting cycle of the window period,
/// or the same critical Ecalle height when that cycle is parabolic.
pub fn straighten(window: &RenormWindow, p: Param, marking_seed: Option<u32>) -> Result<StraighteningRecord, RenormError> {
    if !baby_membership(window, p)? {
        return Err(RenormError::ComponentUnmatched);
    }
    let dy = window.family.dynamics(p);
    let attracting = attracting_cycle_of(&dy, window.period, None)
        .ok()
        .map(|z| (z, hypot(Recentered::new(&dy.iterate(window.period), z).multiplier())))
        .filter(|(_, l)| *l < 1.0 - 1e-6);
    match attracting {
        Some((z, lam)) => straighten_hyperbolic(window, p, z, lam, marking_seed),
        None if window.anti => straighten_arc(window, p, marking_seed),
        None => Err(RenormError::ComponentUnmatched),
    }
}

fn straighten_hyperbolic(
    window: &RenormWindow,
    p: Param,
    z_p: C64,
    lam_p: f64,
    seed: Option<u32>,
) -> Result<StraighteningRecord, RenormError> {
    let invariant = if window.anti { MatchedInvariant::KoenigsRatio } else { MatchedInvariant::Multiplier };
    let (target, _) = window.source_invariant(p, Some(z_p))?;
    let model = window.model_component();
    let delta = param_delta(p, window.center);
    let mk = window.marking(seed)?;
    if hypot(target) == 0.0 || hypot(delta) == 0.0 {
        return Ok(StraighteningRecord {
            source: p,
            image: Param::default(),
            invariant,
            source_value: target,
            image_value: C64::default(),
            residual: hypot(target),
            source_index: None,
            image_index: None,
            source_multiplier: Some(lam_p),
            image_multiplier: Some(0.0),
            branch: mk.branch,
        });
    }
    let dir = delta / hypot(delta);
    let dir = if mk.orient > 0.0 { dir } else { dir.conj() };
    let u = mk.e_x * dir;
    // first path point: small invariant, branch picked by direction
    let mut s = 1.0;
    let mut zs = None;
    let (mut v, z_first) = loop {
        let (v, z) = window.source_invariant(offset(window.center, s * delta), zs)?;
        if hypot(v) <= 0.05 || s < 1e-12 {
            break (v, z);
        }
        zs = Some(z);
        s *= 0.5;
    };
    zs = Some(z_first);
    let cands = model_branches(window.anti, window.local_degree, v);
    let mut c = *cands.iter().min_by(|a, b| angle_between(**a, u).total_cmp(&angle_between(**b, u))).unwrap();
    let mdy = model.family.dynamics(Param::from_c64(c));
    let mut zm = attracting_cycle_of(&mdy, 1, None)?;
    let h = |c: C64| (1e-6 * hypot(c)).clamp(1e-13, 1e-8);
    let (pc, vc, zc) = solve_invariant(&model, v, Param::from_c64(c), zm, h(c)).ok_or(RenormError::ContinuationFailed)?;
    c = pc.as_c64();
    zm = zc;
    let mut vm = vc;
    let mut ds = s;
    while s < 1.0 {
        let sn = (s + ds).min(1.0);
        let step = window
            .source_invariant(offset(window.center, sn * delta), zs)
            .ok()
            .and_then(|(vn, zn)| solve_invariant(&model, vn, Param::from_c64(c), zm, h(c)).map(|r| (vn, zn, r)));
        match step {
            Some((vn, zn, (pc, vc, zc))) if pc.as_c64().norm() < 2.0 => {
                s = sn;
                v = vn;
                zs = Some(zn);
                c = pc.as_c64();
                zm = zc;
                vm = vc;
                ds *= 2.0;
            }
            _ => {
                ds *= 0.5;
                if ds < 1e-6 {
                    return Err(RenormError::ContinuationFailed);
                }
            }
        }
    }
    let mdy = model.family.dynamics(Param::from_c64(c));
    let lam_m = hypot(Recentered::new(&mdy.iterate(1), zm).multiplier());
    Ok(StraighteningRecord {
        source: p,
        image: Param::from_c64(c),
        invariant,
        source_value: v,
        image_value: vm,
        residual: hypot(vm - v),
        source_index: None,
        image_index: None,
        source_multiplier: Some(lam_p),
        image_multiplier: Some(lam_m),
        branch: mk.branch,
    })
}

fn straighten_arc(window: &RenormWindow, p: Param, seed: Option<u32>) -> Result<StraighteningRecord, RenormError> {
    let dy = window.family.dynamics(p);
    let k = window.period;
    let cyc = critical_parabolic_cycle(&dy, k).ok_or(RenormError::ComponentUnmatched)?;
    let idx = characteristic_point(&dy, &cyc.points).ok_or(RenormError::ComponentUnmatched)?;
    let lcfg = LocusConfig { corrector_tol: 1e-13, ..LocusConfig::default() };
    let ls = project_to_locus(window.family, k, LocusFraming::Anti, cyc.points[idx], p, &lcfg)
        .ok_or(RenormError::ComponentUnmatched)?;
    let acfg = ArcConfig::default();
    let src = evaluate_sample(window.family, k, &ls, &acfg)?;

    let m = window.local_degree;
    let model = window.model_family();
    let (c0, z0) = model_real_parabolic(m);
    let skel = trace_indifference_locus(model, 1, (c0, z0), LocusFraming::Anti, &LocusConfig { max_step: 0.01, ..LocusConfig::default() })
        .map_err(ArcError::from)?;
    let arc = build_arc(&skel, &acfg)?;
    let img = locate_height(&arc, src.height, &acfg)?;
    // the (m+1)-fold symmetry carries the real arc to the others
    let branch = match seed {
        Some(j) => j % (m + 1),
        None if window.is_real_symmetric() => 0,
        None => return Err(RenormError::BranchAmbiguous),
    };
    let image = Param::from_c64(img.param.as_c64() * cis_turns(branch as f64 / (m as f64 + 1.0)));
    Ok(StraighteningRecord {
        source: p,
        image,
        invariant: MatchedInvariant::EcalleHeight,
        source_value: c64(src.height, 0.0),
        image_value: c64(img.height, 0.0),
        residual: libm::fabs(img.height - src.height),
        source_index: Some(src.index),
        image_index: Some(img.index),
        source_multiplier: None,
        image_multiplier: None,
        branch,
    })
}
