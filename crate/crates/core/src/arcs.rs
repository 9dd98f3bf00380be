//! Parabolic arcs parametrized by critical Ecalle height, the index
//! function along them, and bifurcation thresholds.

use alloc::vec::Vec;

use crate::dynamics::{Dynamics, Family};
use crate::fatou::{build_fatou_at, characteristic_point, critical_ecalle_height, FatouConfig, FatouError, FrameKind};
use crate::maps::{ray_landing, RayConfig};
use crate::orbits::{
    contour_index, interpolate_on_locus, ContourConfig, LocusConfig, LocusEnd, LocusFraming, LocusSample,
    LocusSkeleton, OrbitError,
};
use crate::scalar::{hypot, Param, C64};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ArcError {
    #[error("critical Ecalle height is not monotone along the skeleton near h = {at}")]
    HeightNonMonotone { at: f64 },
    #[error("target value is not bracketed by the arc samples")]
    NotBracketed,
    #[error("no usable samples on the skeleton")]
    Empty,
    #[error(transparent)]
    Fatou(#[from] FatouError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcType {
    Root,
    Coroot,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcEnd {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcConfig {
    pub max_height: f64,
    /// Largest height gap near `h = 0`; the bound grows by `growth` per
    /// unit of `|h|`.
    pub near_step: f64,
    pub growth: f64,
    pub height_tol: f64,
    pub index_tol: f64,
    pub fatou: FatouConfig,
    pub contour: ContourConfig,
    pub locus: LocusConfig,
    /// Run the (slow, numeric) root/co-root classification.
    pub classify: bool,
}

impl Default for ArcConfig {
    fn default() -> Self {
        ArcConfig {
            max_height: 3.0,
            near_step: 0.05,
            growth: 1.5,
            height_tol: 1e-8,
            index_tol: 1e-9,
            fatou: FatouConfig::default(),
            contour: ContourConfig::default(),
            locus: LocusConfig::default(),
            classify: false,
        }
    }
}

/// One parabolic parameter on an arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcSample {
    pub param: Param,
    /// Characteristic point of the parabolic cycle.
    pub point: C64,
    pub height: f64,
    /// Residue index of the squared return at the characteristic point.
    pub index: f64,
    pub index_imag: f64,
    /// `|multiplier of the squared return − 1|`.
    pub multiplier_residual: f64,
    /// The locus sample this was computed from.
    pub locus: LocusSample,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParabolicArc {
    pub family: Family,
    pub period: u32,
    pub framing: LocusFraming,
    /// Ordered by increasing height.
    pub samples: Vec<ArcSample>,
    /// Whether the skeleton ended at a cusp on the minus / plus side.
    pub cusp_flags: [bool; 2],
    pub arc_type: ArcType,
}

fn orbit_points(dy: &Dynamics, z: C64, period: u32) -> Vec<C64> {
    let mut pts = Vec::with_capacity(period as usize);
    let mut u = z;
    for _ in 0..period {
        pts.push(u);
        u = dy.eval(u);
    }
    pts
}

/// Height and index at one locus sample.
pub fn evaluate_sample(
    family: Family,
    period: u32,
    s: &LocusSample,
    cfg: &ArcConfig,
) -> Result<ArcSample, ArcError> {
    let dy = family.dynamics(s.param);
    let pts = orbit_points(&dy, s.point, period);
    let idx = characteristic_point(&dy, &pts).ok_or(FatouError::OrbitMissesPetal)?;
    let z = pts[idx];
    let frame = build_fatou_at(&dy, z, period, FrameKind::Attracting, &cfg.fatou)?;
    let height = critical_ecalle_height(&dy, &frame)?;
    let g = dy.iterate(period).holomorphic_power();
    let m = g.eval_d(z).deriv;
    let index = contour_index(&g, z, None, &cfg.contour)?;
    Ok(ArcSample {
        param: s.param,
        point: z,
        height,
        index: index.value.re,
        index_imag: index.value.im,
        multiplier_residual: hypot(m - 1.0),
        locus: *s,
    })
}

impl ParabolicArc {
    fn interpolate(&self, a: &ArcSample, b: &ArcSample, t: f64, cfg: &ArcConfig) -> Result<ArcSample, ArcError> {
        let s = interpolate_on_locus(self.family, self.period, self.framing, &a.locus, &b.locus, t, &cfg.locus)
            .ok_or(OrbitError::InvalidStart("locus corrector failed between samples"))?;
        evaluate_sample(self.family, self.period, &s, cfg)
    }

    /// Indices `(i, i+1)` of consecutive samples whose values of `f`
    /// bracket `target`, scanning outward from `h = 0` toward `end` (or
    /// over the whole arc when `end` is `None`).
    fn bracket(&self, f: impl Fn(&ArcSample) -> f64, target: f64, end: Option<ArcEnd>) -> Option<usize> {
        let n = self.samples.len();
        let ok = |i: usize| {
            let (a, b) = (f(&self.samples[i]) - target, f(&self.samples[i + 1]) - target);
            a == 0.0 || a.signum() != b.signum()
        };
        match end {
            None => (0..n.saturating_sub(1)).find(|&i| ok(i)),
            Some(ArcEnd::Plus) => (0..n.saturating_sub(1)).filter(|&i| self.samples[i + 1].height > 0.0).find(|&i| ok(i)),
            Some(ArcEnd::Minus) => (0..n.saturating_sub(1)).rev().filter(|&i| self.samples[i].height < 0.0).find(|&i| ok(i)),
        }
    }

    /// Illinois regula falsi on the chord fraction between two samples.
    fn solve_between(
        &self,
        i: usize,
        f: impl Fn(&ArcSample) -> f64,
        target: f64,
        tol: f64,
        cfg: &ArcConfig,
    ) -> Result<ArcSample, ArcError> {
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let (mut t0, mut t1) = (0.0, 1.0);
        let (mut f0, mut f1) = (f(&a) - target, f(&b) - target);
        let mut best = if f0.abs() < f1.abs() { a } else { b };
        let mut side = 0;
        for _ in 0..100 {
            if f0.abs().min(f1.abs()) <= tol {
                break;
            }
            let t = (t0 * f1 - t1 * f0) / (f1 - f0);
            let s = self.interpolate(&a, &b, t, cfg)?;
            let ft = f(&s) - target;
            if ft.abs() < (f(&best) - target).abs() {
                best = s;
            }
            if ft.abs() <= tol {
                return Ok(s);
            }
            if ft.signum() == f1.signum() {
                t1 = t;
                f1 = ft;
                if side == 1 {
                    f0 *= 0.5;
                }
                side = 1;
            } else {
                t0 = t;
                f0 = ft;
                if side == -1 {
                    f1 *= 0.5;
                }
                side = -1;
            }
        }
        Ok(best)
    }
}

/// Enrich a locus skeleton with heights and indices, keep `|h| ≤ max_height`,
/// refine until height gaps are below the sampling bound, and order by `h`.
pub fn build_arc(skel: &LocusSkeleton, cfg: &ArcConfig) -> Result<ParabolicArc, ArcError> {
    let n = skel.samples.len();
    if n == 0 {
        return Err(ArcError::Empty);
    }
    let start = (0..n)
        .min_by(|&i, &j| skel.samples[i].arclength.abs().total_cmp(&skel.samples[j].arclength.abs()))
        .unwrap();
    let eval = |s: &LocusSample| evaluate_sample(skel.family, skel.period, s, cfg);
    let mut fwd = Vec::new();
    let mut reached = [false; 2];
    // walk outward from the start until the height cap or a failure
    for i in start..n {
        match eval(&skel.samples[i]) {
            Ok(s) => {
                let beyond = s.height.abs() > cfg.max_height;
                fwd.push(s);
                if beyond {
                    break;
                }
            }
            Err(_) if i > start => break,
            Err(e) => return Err(e),
        }
        if i + 1 == n {
            reached[1] = true;
        }
    }
    let mut bwd = Vec::new();
    for i in (0..start).rev() {
        match eval(&skel.samples[i]) {
            Ok(s) => {
                let beyond = s.height.abs() > cfg.max_height;
                bwd.push(s);
                if beyond {
                    break;
                }
            }
            Err(_) => break,
        }
        if i == 0 {
            reached[0] = true;
        }
    }
    bwd.reverse();
    bwd.extend(fwd);
    let mut samples = bwd;
    if samples.len() < 2 {
        return Err(ArcError::Empty);
    }
    let increasing = samples.last().unwrap().height > samples[0].height;
    let mut ends = skel.ends;
    if !increasing {
        samples.reverse();
        ends.reverse();
        reached.reverse();
    }
    let mut arc = ParabolicArc {
        family: skel.family,
        period: skel.period,
        framing: skel.framing,
        samples,
        cusp_flags: [ends[0] == LocusEnd::Cusp, ends[1] == LocusEnd::Cusp],
        arc_type: ArcType::Unknown,
    };
    for w in arc.samples.windows(2) {
        if !(w[1].height > w[0].height) {
            return Err(ArcError::HeightNonMonotone { at: w[0].height });
        }
    }
    // refine
    let bound = |h: f64| cfg.near_step * libm::pow(cfg.growth, h.abs());
    let mut i = 0;
    let mut guard = 0;
    while i + 1 < arc.samples.len() && guard < 10_000 {
        let (a, b) = (arc.samples[i], arc.samples[i + 1]);
        let inside = a.height.abs().min(b.height.abs()) <= cfg.max_height;
        if inside && b.height - a.height > bound(a.height.abs().min(b.height.abs())) {
            let mid = arc.interpolate(&a, &b, 0.5, cfg)?;
            if !(mid.height > a.height && mid.height < b.height) {
                return Err(ArcError::HeightNonMonotone { at: mid.height });
            }
            arc.samples.insert(i + 1, mid);
            guard += 1;
        } else {
            i += 1;
        }
    }
    let _ = reached;
    arc.samples.retain(|s| s.height.abs() <= cfg.max_height);
    if cfg.classify {
        if let Some(s) = arc.samples.iter().min_by(|a, b| a.height.abs().total_cmp(&b.height.abs())) {
            arc.arc_type = classify_arc_type(&arc, s, &RayConfig::default());
        }
    }
    Ok(arc)
}

/// Sampled index function `h ↦ τ` with its end-behavior report.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexTable {
    pub heights: Vec<f64>,
    pub indices: Vec<f64>,
    pub max_imag: f64,
    /// The outermost samples' indices exceed every interior index.
    pub ends_dominate: bool,
    /// Index strictly increasing outward over the 5 outermost samples on the
    /// minus / plus side.
    pub end_growth: [bool; 2],
}

pub fn index_function(arc: &ParabolicArc) -> IndexTable {
    let heights: Vec<f64> = arc.samples.iter().map(|s| s.height).collect();
    let indices: Vec<f64> = arc.samples.iter().map(|s| s.index).collect();
    let n = indices.len();
    let max_imag = arc.samples.iter().map(|s| s.index_imag.abs()).fold(0.0, f64::max);
    let interior = if n > 2 { indices[1..n - 1].iter().copied().fold(f64::NEG_INFINITY, f64::max) } else { f64::NEG_INFINITY };
    let ends_dominate = n >= 2 && indices[0] > interior && indices[n - 1] > interior;
    let k = 5.min(n);
    let plus = indices[n - k..].windows(2).all(|w| w[1] > w[0]);
    let minus = indices[..k].windows(2).all(|w| w[0] > w[1]);
    IndexTable { heights, indices, max_imag, ends_dominate, end_growth: [minus, plus] }
}

/// The arc parameter with critical Ecalle height `target`.
pub fn locate_height(arc: &ParabolicArc, target: f64, cfg: &ArcConfig) -> Result<ArcSample, ArcError> {
    let i = arc.bracket(|s| s.height, target, None).ok_or(ArcError::NotBracketed)?;
    arc.solve_between(i, |s| s.height, target, cfg.height_tol, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub height: f64,
    pub sample: ArcSample,
    /// Strictly increasing index over the samples checked above the threshold.
    pub monotone_above: bool,
    pub checked: usize,
}

/// Height `h₀` where the index first reaches 1 going toward `end`.
pub fn bifurcation_threshold(arc: &ParabolicArc, end: ArcEnd, cfg: &ArcConfig) -> Result<Threshold, ArcError> {
    let i = arc.bracket(|s| s.index, 1.0, Some(end)).ok_or(ArcError::NotBracketed)?;
    let s = arc.solve_between(i, |s| s.index, 1.0, cfg.index_tol, cfg)?;
    let beyond: Vec<f64> = match end {
        ArcEnd::Plus => arc.samples.iter().filter(|x| x.height > s.height).take(10).map(|x| x.index).collect(),
        ArcEnd::Minus => arc.samples.iter().rev().filter(|x| x.height < s.height).take(10).map(|x| x.index).collect(),
    };
    let monotone_above = s.index <= beyond.first().copied().unwrap_or(f64::INFINITY)
        && beyond.windows(2).all(|w| w[1] > w[0]);
    Ok(Threshold { height: s.height, sample: s, monotone_above, checked: beyond.len() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LedgerEntry {
    pub index_a: f64,
    pub index_b: f64,
    pub difference: f64,
    pub distinct: bool,
}

/// Compare `τ(h = 0)` across pairs of arcs.
pub fn discontinuity_ledger(pairs: &[(&ParabolicArc, &ParabolicArc)], cfg: &ArcConfig) -> Result<Vec<LedgerEntry>, ArcError> {
    pairs
        .iter()
        .map(|(a, b)| {
            let ia = locate_height(a, 0.0, cfg)?.index;
            let ib = locate_height(b, 0.0, cfg)?.index;
            let difference = ia - ib;
            Ok(LedgerEntry { index_a: ia, index_b: ib, difference, distinct: difference.abs() > 1e-6 })
        })
        .collect()
}

/// Root/co-root classification at a sample: count periodic dynamical rays
/// (period dividing twice the cycle period) landing at the characteristic
/// point. Numeric and best-effort.
pub fn classify_arc_type(arc: &ParabolicArc, at: &ArcSample, rays: &RayConfig) -> ArcType {
    let dy = arc.family.dynamics(at.param);
    let d = dy.degree();
    let Some(den) = d.checked_pow(2 * arc.period).map(|v| v - 1) else {
        return ArcType::Unknown;
    };
    if den > 4096 {
        return ArcType::Unknown;
    }
    let tol = 1e-4 * (1.0 + hypot(at.point));
    let mut count = 0;
    for j in 0..den {
        if let Ok(l) = ray_landing(&dy, j as f64 / den as f64, rays) {
            if hypot(l.point - at.point) <= tol {
                count += 1;
            }
        }
    }
    match count {
        1 => ArcType::Coroot,
        2 => ArcType::Root,
        _ => ArcType::Unknown,
    }
}
