//! The twelve acceptance criteria, each evaluated at its stated tolerance.

use std::fmt::Write as _;
use std::time::Instant;

use multicorn_core::arcs::{discontinuity_ledger, index_function, ArcConfig, ParabolicArc};
use multicorn_core::fatou::{
    build_fatou, critical_ecalle_height, critical_parabolic_cycle, ecalle_koenigs_limit, trace_internal_ray,
    Component, FatouConfig, FatouFrame, FrameKind, HornBand, HornSampler, InternalRayConfig,
};
use multicorn_core::maps::{AntiPolyMap, MapDescriptor, MultibrotMap, RealCubicMap};
use multicorn_core::orbits::{
    contour_index, cycle_through, enumerate_centers, find_cycles, iterate_index, newton_center, residue_index_by_formula,
    residue_index_contour, symmetric_pair, trace_indifference_locus, ContourConfig, CycleClass, IndexContext, LocusConfig,
    LocusFraming, SearchWindow,
};
use multicorn_core::poly::{Chain, Poly, Step};
use multicorn_core::raster::{membership, Plane};
use multicorn_core::renorm::{build_window, straighten};
use multicorn_core::scalar::{c64, cis_turns, Param, C64};
use multicorn_core::Family;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::arc_through;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = Result<String, String>;

fn within(name: &str, got: f64, want: f64, tol: f64) -> Check {
    let err = (got - want).abs();
    if err <= tol {
        Ok(format!("{name} = {got:.12} (err {err:.1e})"))
    } else {
        Err(format!("{name} = {got:.12}, want {want:.12} ± {tol:.0e} (err {err:.1e})"))
    }
}

fn at_most(name: &str, got: f64, tol: f64) -> Check {
    if got <= tol {
        Ok(format!("{name} = {got:.2e}"))
    } else {
        Err(format!("{name} = {got:.2e} > {tol:.0e}"))
    }
}

fn all(parts: Vec<Check>) -> Check {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for p in parts {
        match p {
            Ok(s) => ok.push(s),
            Err(s) => bad.push(s),
        }
    }
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        Err(bad.join("; "))
    }
}

fn cubic_a() -> f64 {
    (8.0f64 / 9.0).powf(0.25)
}

fn tricorn() -> Family {
    Family::Multicorn { degree: 2 }
}

fn cubic_anti() -> Family {
    Family::RealCubicAnti { half_return: 2 }
}

/// The three height-0 parabolic maps: `(family, parameter, period)`.
fn height_zero_maps() -> [(Family, Param, u32); 3] {
    [
        (tricorn(), Param::new(0.25, 0.0), 1),
        (tricorn(), Param::new(-1.75, 0.0), 3),
        (cubic_anti(), Param::new(cubic_a(), 0.0), 1),
    ]
}

/// Shared, lazily built objects reused across criteria.
#[derive(Default)]
pub struct Suite {
    frames: Option<Vec<FatouFrame>>,
    arcs: Option<Vec<ParabolicArc>>,
}

impl Suite {
    fn frames(&mut self) -> Result<&[FatouFrame], String> {
        if self.frames.is_none() {
            let mut v = Vec::new();
            for (fam, p, k) in height_zero_maps() {
                let dy = fam.dynamics(p);
                let cyc = critical_parabolic_cycle(&dy, k).ok_or("no parabolic cycle")?;
                v.push(build_fatou(&dy, &cyc, FrameKind::Attracting, &FatouConfig::default()).map_err(|e| e.to_string())?);
            }
            self.frames = Some(v);
        }
        Ok(self.frames.as_deref().unwrap())
    }

    fn arcs(&mut self) -> Result<&[ParabolicArc], String> {
        if self.arcs.is_none() {
            let cfg = ArcConfig::default();
            let v = height_zero_maps()
                .iter()
                .map(|&(f, p, k)| arc_through(f, p, k, &cfg).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            self.arcs = Some(v);
        }
        Ok(self.arcs.as_deref().unwrap())
    }
}

fn c1_quarter_index() -> Check {
    let m = MapDescriptor::Anti(AntiPolyMap::new(2, c64(0.25, 0.0)));
    let idx = residue_index_contour(&m, 2, c64(0.5, 0.0), None).map_err(|e| e.to_string())?;
    all(vec![within("ι(f∘f, 1/2)", idx.value.re, 0.5, 1e-8), at_most("|Im ι|", idx.value.im.abs(), 1e-8)])
}

fn c2_airplane_index() -> Check {
    let m = MapDescriptor::Multibrot(MultibrotMap::new(2, c64(-1.75, 0.0)));
    let cycles = find_cycles(&m, 3).map_err(|e| e.to_string())?;
    let cyc = cycles.iter().find(|c| c.class == CycleClass::Indifferent).ok_or("no parabolic 3-cycle")?;
    let mut parts = Vec::new();
    let mut worst_xi: f64 = 0.0;
    let mut worst_tau: f64 = 0.0;
    for &z in &cyc.points {
        let idx = residue_index_contour(&m, 3, z, None).map_err(|e| e.to_string())?;
        worst_xi = worst_xi.max((idx.value - c64(-2.0 / 49.0, 0.0)).norm());
        worst_tau = worst_tau.max((iterate_index(idx.value, 2) - c64(47.0 / 98.0, 0.0)).norm());
    }
    parts.push(at_most("max |ξ + 2/49| over the cycle", worst_xi, 1e-8));
    parts.push(at_most("max |(1+ξ)/2 − 47/98|", worst_tau, 1e-8));
    let simple = symmetric_pair(c64(2.0, 0.0), c64(-7.0, 0.0), 3).to_vec();
    let ctx = IndexContext::FixedPointTheorem { degree: 8, simple_multipliers: simple, parabolic_count: 3, multiplicity: 2 };
    let xi = residue_index_by_formula(cyc, &ctx, 1).map_err(|e| e.to_string())?;
    let tau = residue_index_by_formula(cyc, &ctx, 2).map_err(|e| e.to_string())?;
    parts.push(within("formula ξ", xi.value.re, -2.0 / 49.0, 1e-8));
    parts.push(within("formula τ", tau.value.re, 47.0 / 98.0, 1e-8));
    all(parts)
}

fn c3_cubic_index() -> Check {
    let a = cubic_a();
    let g = RealCubicMap::new(a, 0.0);
    let minus_g2 = g.chain().repeat(2).then(&Chain::new(vec![Step::Poly(Poly::new(vec![C64::default(), c64(-1.0, 0.0)]))]));
    let mut parts = Vec::new();
    // exact: (−g∘g)'(0) = −g'(0)² = −9a⁴ and 9a⁴ = 9·(8/9) = 8
    let (num, den) = (8i64, 9i64);
    parts.push(if -9 * num % den == 0 && -9 * num / den == -8 {
        Ok("(−g∘g)'(0) = −9·(8/9) = −8 exactly".into())
    } else {
        Err("exact derivative is not −8".into())
    });
    let d0 = minus_g2.eval_d(C64::default()).deriv;
    parts.push(at_most("|float (−g∘g)'(0) + 8|", (d0 - c64(-8.0, 0.0)).norm(), 1e-12));
    let dy = MapDescriptor::Cubic(g).dynamics();
    let g4 = g.chain().repeat(4);
    let cfg = ContourConfig::default();
    let mut w1: f64 = 0.0;
    let mut w4: f64 = 0.0;
    for y in [0.946_877_f64, 1.829_225] {
        for s in [1.0, -1.0] {
            let z = cycle_through(&dy, c64(0.0, s * y), 4).points[0];
            let i1 = contour_index(&minus_g2, z, None, &cfg).map_err(|e| e.to_string())?;
            let i4 = contour_index(&g4, z, None, &cfg).map_err(|e| e.to_string())?;
            w1 = w1.max((i1.value - c64(-1.0 / 36.0, 0.0)).norm());
            w4 = w4.max((i4.value - c64(35.0 / 72.0, 0.0)).norm());
        }
    }
    parts.push(at_most("max |ι(−g∘g) + 1/36| over 4 points", w1, 1e-8));
    parts.push(at_most("max |ι(g^4) − 35/72|", w4, 1e-8));
    all(parts)
}

fn c4_heights(suite: &mut Suite) -> Check {
    let maps = height_zero_maps();
    let frames = suite.frames()?;
    let names = ["h(f_1/4)", "h(f_-7/4)", "h(g_cubic)"];
    let mut parts = Vec::new();
    for ((fam, p, _), (f, name)) in maps.iter().zip(frames.iter().zip(names)) {
        let h = critical_ecalle_height(&fam.dynamics(*p), f).map_err(|e| e.to_string())?;
        parts.push(within(name, h, 0.0, 1e-6));
    }
    all(parts)
}

fn c5_cubic_curve() -> Check {
    let a0 = 1.0 / 3f64.sqrt();
    let cfg = LocusConfig { max_samples: 100, stop_at_cusps: false, max_step: 0.01, ..Default::default() };
    let sk = trace_indifference_locus(Family::RealCubic, 1, (Param::new(a0, 0.0), C64::default()), LocusFraming::Holomorphic, &cfg)
        .map_err(|e| e.to_string())?;
    let worst = sk
        .samples
        .iter()
        .map(|s| {
            let q = 3.0 * s.param.x * s.param.x;
            (4.0 * (q - 1.0) * (q + 2.0) * (q + 2.0) + 27.0 * s.param.y * s.param.y).abs()
        })
        .fold(0.0, f64::max);
    let n = sk.samples.len();
    all(vec![
        if n >= 200 { Ok(format!("{n} samples")) } else { Err(format!("only {n} samples")) },
        at_most("max |4(3a²−1)(3a²+2)² + 27b²|", worst, 1e-9),
    ])
}

/// Real root of `c³ + 2c² + c + 1`, isolated by a sign change.
fn airplane_center_oracle() -> f64 {
    let p = |c: f64| ((c + 2.0) * c + 1.0) * c + 1.0;
    let (mut lo, mut hi) = (-2.0, -1.5);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn c6_centers() -> Check {
    let w = SearchWindow::disk(2.0);
    let d2 = enumerate_centers(tricorn(), 3, &w);
    let d3 = enumerate_centers(Family::Multicorn { degree: 3 }, 3, &w);
    let mut parts = vec![
        if d2.len() == 3 { Ok("3 centers for d=2".into()) } else { Err(format!("{} centers for d=2", d2.len())) },
        if d3.len() == 8 { Ok("8 centers for d=3".into()) } else { Err(format!("{} centers for d=3", d3.len())) },
    ];
    let closed = d2.iter().all(|h| {
        let r = h.parameter.as_c64() * cis_turns(1.0 / 3.0);
        d2.iter().any(|k| (k.parameter.as_c64() - r).norm() < 1e-9)
    });
    parts.push(if closed { Ok("closed under ω".into()) } else { Err("not closed under ω".into()) });
    match d2.iter().find(|h| h.parameter.y.abs() < 1e-12) {
        Some(h) => {
            parts.push(within("real center", h.parameter.x, airplane_center_oracle(), 1e-10));
            parts.push(at_most("residual", h.residual, 1e-10));
        }
        None => parts.push(Err("no real center".into())),
    }
    all(parts)
}

fn c7_symmetry() -> Check {
    let plane = Plane::ParameterAnti { degree: 2 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a1c_0de5);
    let omega = cis_turns(1.0 / 3.0);
    let max_iter = 200;
    let mut rot = 0;
    let mut refl = 0;
    let mut members = 0;
    for _ in 0..10_000 {
        let c = c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let m = membership(&plane, c, max_iter);
        members += m as usize;
        rot += (m != membership(&plane, omega * c, max_iter)) as usize;
        refl += (m != membership(&plane, c.conj(), max_iter)) as usize;
    }
    let detail = format!("{members} members of 10000; {rot} rotation and {refl} reflection violations");
    if rot == 0 && refl == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main_component() -> Component {
    Component { family: tricorn(), center: Param::default(), period: 1 }
}

fn c8_ecalle_koenigs() -> Check {
    let ray = trace_internal_ray(&main_component(), 0.0, Param::new(0.05, 0.0), &InternalRayConfig::default()).map_err(|e| e.to_string())?;
    let rho = *ray.values.last().ok_or("empty ray")?;
    let q = ecalle_koenigs_limit(rho);
    all(vec![
        within("|ρ|", rho.norm(), 0.999, 1e-9),
        at_most("|(1−ρ)/(1−|ρ|²) − 1/2|", (q - c64(0.5, 0.0)).norm(), 1e-3),
    ])
}

fn c9_landing() -> Check {
    let cfg = InternalRayConfig::default();
    let main = trace_internal_ray(&main_component(), 0.0, Param::new(0.05, 0.0), &cfg).map_err(|e| e.to_string())?;
    let center = newton_center(tricorn(), 3, Param::new(-1.75, 0.0)).ok_or("no period-3 center")?.parameter;
    let comp = Component { family: tricorn(), center, period: 3 };
    // the real segment of the component runs both ways from the center;
    // the θ = 0 ray is the one along which ρ is positive
    let mut best = f64::INFINITY;
    for off in [1e-3, -1e-3] {
        if let Ok(r) = trace_internal_ray(&comp, 0.0, Param::new(center.x + off, 0.0), &cfg) {
            best = best.min(r.landing.dist(Param::new(-1.75, 0.0)));
        }
    }
    all(vec![
        at_most("main ray landing − 1/4", main.landing.dist(Param::new(0.25, 0.0)), 1e-5),
        at_most("period-3 ray landing + 7/4", best, 1e-5),
    ])
}

fn c10_horn(suite: &mut Suite) -> Check {
    let att = suite.frames()?[0].clone();
    let dy = tricorn().dynamics(Param::new(0.25, 0.0));
    let cyc = critical_parabolic_cycle(&dy, 1).ok_or("no parabolic fixed point")?;
    let rep = build_fatou(&dy, &cyc, FrameKind::Repelling, &FatouConfig::default()).map_err(|e| e.to_string())?;
    let horn = HornSampler::new(att, rep, HornBand::default());
    let one = horn.shift_residual(1.0).map_err(|e| e.to_string())?;
    let half = horn.shift_residual(0.5).map_err(|e| e.to_string())?;
    all(vec![at_most("translation residual", one, 1e-6), at_most("half-translation residual", half, 1e-5)])
}

fn c11_ledger(suite: &mut Suite) -> Check {
    let arcs = suite.arcs()?;
    let cfg = ArcConfig::default();
    let pairs = [(&arcs[0], &arcs[1]), (&arcs[0], &arcs[2])];
    let ledger = discontinuity_ledger(&pairs, &cfg).map_err(|e| e.to_string())?;
    all(vec![
        within("τ main", ledger[0].index_a, 0.5, 1e-6),
        within("τ period 3", ledger[0].index_b, 47.0 / 98.0, 1e-6),
        within("τ cubic", ledger[1].index_b, 35.0 / 72.0, 1e-6),
        within("τ main − τ period 3", ledger[0].difference, 1.0 / 49.0, 1e-6),
        within("τ main − τ cubic", ledger[1].difference, 1.0 / 72.0, 1e-6),
    ])
}

fn c12_properties(suite: &mut Suite) -> Check {
    let mut parts = Vec::new();
    // Abel residuals of the three height-0 frames
    let abel = suite.frames()?.iter().map(|f| f.report.abel_max.max(f.abel_residual().unwrap_or(f64::INFINITY))).fold(0.0, f64::max);
    parts.push(at_most("Abel residual", abel, 1e-8));
    // index constancy along the parabolic 3-cycle of z² − 7/4
    let m = MapDescriptor::Multibrot(MultibrotMap::new(2, c64(-1.75, 0.0)));
    let cyc = find_cycles(&m, 3).map_err(|e| e.to_string())?.into_iter().find(|c| c.class == CycleClass::Indifferent).ok_or("no cycle")?;
    let vals: Vec<C64> = cyc.points.iter().map(|&z| residue_index_contour(&m, 3, z, None).map(|i| i.value)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let spread = vals.iter().map(|v| (v - vals[0]).norm()).fold(0.0, f64::max);
    parts.push(at_most("index spread along cycle", spread, 1e-9));
    // anti-multiplier law on random tricorn cycles
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut law: f64 = 0.0;
    for _ in 0..20 {
        let c = c64(rng.random_range(-1.5..0.5), rng.random_range(-1.0..1.0));
        for k in 1..=3 {
            for cy in find_cycles(&MapDescriptor::Anti(AntiPolyMap::new(2, c)), k).map_err(|e| e.to_string())? {
                if let Some(l) = cy.anti_multiplier {
                    let want = l.norm_sqr();
                    law = law.max((cy.sq_multiplier - c64(want, 0.0)).norm() / want.max(1.0));
                }
            }
        }
    }
    parts.push(at_most("relative |sq_multiplier − |λ|²|", law, 1e-10));
    // continuation residuals and end growth along the arcs
    let arcs = suite.arcs()?;
    let cont = arcs.iter().flat_map(|a| a.samples.iter().map(|s| s.locus.residual)).fold(0.0, f64::max);
    parts.push(at_most("arc continuation residual", cont, 1e-9));
    let growth = index_function(&arcs[0]).end_growth;
    parts.push(if growth[0] && growth[1] { Ok("index grows at both ends of the main arc".into()) } else { Err(format!("end growth {growth:?}")) });
    // straightening injectivity spot check
    let c0 = newton_center(tricorn(), 3, Param::new(-1.75, 0.0)).ok_or("no center")?.parameter;
    let w = build_window(tricorn(), c0, 3).map_err(|e| e.to_string())?;
    let mut images: Vec<Param> = Vec::new();
    let mut worst: f64 = 0.0;
    let mut mult: f64 = 0.0;
    for _ in 0..50 {
        let r = 0.0015 * rng.random::<f64>().sqrt();
        let t = rng.random::<f64>();
        let p = Param::from_c64(c0.as_c64() + cis_turns(t) * r);
        let s = straighten(&w, p, None).map_err(|e| e.to_string())?;
        worst = worst.max(s.residual);
        if let (Some(a), Some(b)) = (s.source_multiplier, s.image_multiplier) {
            mult = mult.max((a - b).abs());
        }
        images.push(s.image);
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..images.len() {
        for j in 0..i {
            min_gap = min_gap.min(images[i].dist(images[j]));
        }
    }
    parts.push(at_most("straightening residual", worst, 1e-6));
    parts.push(at_most("multiplier modulus mismatch", mult, 1e-6));
    parts.push(if min_gap > 1e-9 { Ok(format!("50 distinct images (min gap {min_gap:.1e})")) } else { Err(format!("images collide (gap {min_gap:.1e})")) });
    all(parts)
}

/// Titles of the criteria, in order.
pub const TITLES: [&str; 12] = [
    "index of the second iterate at c = 1/4",
    "period-3 parabolic index of z² − 7/4",
    "real cubic indices",
    "critical Ecalle heights of the three maps",
    "cubic multiplier −1 curve",
    "period-3 center counts",
    "parameter-plane symmetry",
    "Ecalle–Koenigs limit on the θ = 0 ray",
    "internal-ray landing points",
    "horn-map equivariance at c = 1/4",
    "discontinuity ledger",
    "property suites",
];

pub fn run_one(id: u32, suite: &mut Suite) -> CriterionResult {
    let t = Instant::now();
    let r = match id {
        1 => c1_quarter_index(),
        2 => c2_airplane_index(),
        3 => c3_cubic_index(),
        4 => c4_heights(suite),
        5 => c5_cubic_curve(),
        6 => c6_centers(),
        7 => c7_symmetry(),
        8 => c8_ecalle_koenigs(),
        9 => c9_landing(),
        10 => c10_horn(suite),
        11 => c11_ledger(suite),
        12 => c12_properties(suite),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, title: TITLES.get(id as usize - 1).copied().unwrap_or("?"), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

pub fn run_all() -> Vec<CriterionResult> {
    let mut suite = Suite::default();
    (1..=12).map(|id| run_one(id, &mut suite)).collect()
}

pub fn line(r: &CriterionResult) -> String {
    format!(
        "criterion {:>2} {} {:<44} {:>7.2}s  {}",
        r.id,
        if r.passed { "PASS" } else { "FAIL" },
        r.title,
        r.seconds,
        r.detail
    )
}

pub fn table(results: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in results {
        let _ = writeln!(s, "{}", line(r));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "{passed}/{} criteria passed", results.len());
    s
}
