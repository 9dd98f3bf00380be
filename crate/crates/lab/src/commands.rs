//! Command implementations over a merged [`Settings`] map.

use std::time::Duration;

use multicorn_core::arcs::{bifurcation_threshold, build_arc, index_function, locate_height, ArcConfig, ArcEnd, ParabolicArc};
use multicorn_core::fatou::{
    attracting_cycle_of, build_fatou, characteristic_point, critical_ecalle_height, critical_parabolic_cycle, FatouConfig,
    FrameKind, HornBand, HornSampler,
};
use multicorn_core::orbits::{
    contour_index, enumerate_centers, newton_center, trace_indifference_locus, ContourConfig, LocusConfig, LocusFraming,
    Precision, SearchWindow,
};
use multicorn_core::raster::{Coloring, Plane, RasterJob, Window};
use multicorn_core::renorm::{baby_job, build_window, straighten, MatchedInvariant};
use multicorn_core::scalar::{c64, Param, C64};
use multicorn_core::{Dynamics, Family};
use serde_json::{json, Value};

use crate::config::Settings;
use crate::render::{self, RenderOptions};
use crate::{acceptance, formats, LabError};

/// Files to write (name, bytes) and text for standard output.
#[derive(Debug, Default)]
pub struct Output {
    pub files: Vec<(String, Vec<u8>)>,
    pub stdout: String,
    /// Set when the command ran to completion but its verdict is negative
    /// (failed acceptance criteria); the files are still written.
    pub failure: Option<String>,
}

pub struct CommandSpec {
    pub name: &'static str,
    pub keys: &'static [&'static str],
    pub defaults: &'static [(&'static str, &'static str)],
}

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "render",
        keys: &[
            "family", "degree", "half_return", "center", "width", "window", "res", "height", "max_iter", "coloring", "max_period",
            "julia", "baby", "period", "budget_secs", "csv",
        ],
        defaults: &[
            ("family", "tricorn"),
            ("center", "0"),
            ("width", "4"),
            ("res", "512"),
            ("max_iter", "256"),
            ("coloring", "binary"),
            ("max_period", "16"),
            ("baby", "false"),
            ("csv", "false"),
        ],
    },
    CommandSpec {
        name: "centers",
        keys: &["family", "degree", "half_return", "period", "radius", "grid"],
        defaults: &[("family", "tricorn"), ("period", "3"), ("radius", "2"), ("grid", "72")],
    },
    CommandSpec {
        name: "arc",
        keys: &["family", "degree", "half_return", "c", "period", "max_height"],
        defaults: &[("family", "tricorn"), ("c", "0.25"), ("period", "1"), ("half_return", "2"), ("max_height", "3")],
    },
    CommandSpec {
        name: "index",
        keys: &["family", "degree", "half_return", "c", "period"],
        defaults: &[("family", "tricorn"), ("c", "0.25"), ("period", "1"), ("half_return", "2"), ("precision", "double-double")],
    },
    CommandSpec {
        name: "ecalle",
        keys: &["family", "degree", "half_return", "c", "period"],
        defaults: &[("family", "tricorn"), ("c", "0.25"), ("period", "1"), ("half_return", "2")],
    },
    CommandSpec {
        name: "straighten",
        keys: &["family", "degree", "half_return", "center", "period", "c", "marking"],
        defaults: &[("family", "tricorn"), ("center", "-1.754878"), ("period", "3"), ("c", "-1.75"), ("half_return", "1")],
    },
    CommandSpec {
        name: "horn",
        keys: &["family", "degree", "half_return", "c", "period", "band_im", "band_count"],
        defaults: &[("family", "tricorn"), ("c", "0.25"), ("period", "1"), ("half_return", "2"), ("band_im", "1.5"), ("band_count", "10")],
    },
    CommandSpec { name: "report", keys: &["suite"], defaults: &[("suite", "acceptance")] },
];

pub fn spec(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

fn get<'a>(s: &'a Settings, k: &str) -> Result<&'a str, LabError> {
    s.get(k).map(String::as_str).ok_or_else(|| LabError::Config(format!("missing `{k}`")))
}

fn num<T: std::str::FromStr>(s: &Settings, k: &str) -> Result<T, LabError> {
    let v = get(s, k)?;
    v.parse().map_err(|_| LabError::Config(format!("`{k}`: cannot parse {v:?}")))
}

fn opt_num<T: std::str::FromStr>(s: &Settings, k: &str) -> Result<Option<T>, LabError> {
    s.get(k).map(|_| num(s, k)).transpose()
}

fn flag(s: &Settings, k: &str) -> Result<bool, LabError> {
    match s.get(k).map(String::as_str) {
        None | Some("false") | Some("0") | Some("no") => Ok(false),
        Some("true") | Some("1") | Some("yes") | Some("") => Ok(true),
        Some(v) => Err(LabError::Config(format!("`{k}`: expected true/false, got {v:?}"))),
    }
}

/// `re` or `re,im`.
pub fn parse_complex(v: &str) -> Result<C64, LabError> {
    let bad = || LabError::Config(format!("cannot parse {v:?} as `re` or `re,im`"));
    let mut it = v.split(',').map(|t| t.trim().parse::<f64>());
    let re = it.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match it.next() {
        Some(x) => x.map_err(|_| bad())?,
        None => 0.0,
    };
    if it.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(c64(re, im))
}

fn param(s: &Settings, k: &str) -> Result<Param, LabError> {
    Ok(Param::from_c64(parse_complex(get(s, k)?)?))
}

/// Family for the dynamical commands: `cubic` means the antiholomorphic
/// return `conj ∘ g^{∘n}` with `n = half_return`.
fn family(s: &Settings, anti_cubic: bool) -> Result<Family, LabError> {
    let degree = || -> Result<u32, LabError> {
        let d: u32 = opt_num(s, "degree")?.unwrap_or(2);
        if d < 2 {
            return Err(LabError::Config("degree must be at least 2".into()));
        }
        Ok(d)
    };
    match get(s, "family")? {
        "tricorn" => Ok(Family::Multicorn { degree: 2 }),
        "multicorn" => Ok(Family::Multicorn { degree: degree()? }),
        "mandelbrot" => Ok(Family::Multibrot { degree: 2 }),
        "multibrot" => Ok(Family::Multibrot { degree: degree()? }),
        "cubic" if anti_cubic => {
            let n: u32 = opt_num(s, "half_return")?.unwrap_or(1);
            if n == 0 {
                return Err(LabError::Config("half_return must be at least 1".into()));
            }
            Ok(Family::RealCubicAnti { half_return: n })
        }
        "cubic" => Ok(Family::RealCubic),
        f => Err(LabError::Config(format!("unknown family {f:?}"))),
    }
}

fn period(s: &Settings) -> Result<u32, LabError> {
    let k: u32 = num(s, "period")?;
    if k == 0 {
        return Err(LabError::Config("period must be at least 1".into()));
    }
    Ok(k)
}

fn pair(z: C64) -> Value {
    json!([z.re, z.im])
}

fn json_out(name: &str, v: &Value) -> Output {
    let text = serde_json::to_string_pretty(v).expect("json") + "\n";
    Output { files: vec![(format!("{name}.json"), text.clone().into_bytes())], stdout: text, failure: None }
}

pub fn run(command: &str, s: &Settings) -> Result<Output, LabError> {
    match command {
        "render" => cmd_render(s),
        "centers" => cmd_centers(s),
        "arc" => cmd_arc(s),
        "index" => cmd_index(s),
        "ecalle" => cmd_ecalle(s),
        "straighten" => cmd_straighten(s),
        "horn" => cmd_horn(s),
        "report" => cmd_report(s),
        c => Err(LabError::Config(format!("unknown command {c:?}"))),
    }
}

fn render_options(s: &Settings) -> Result<RenderOptions, LabError> {
    let threads: Option<usize> = opt_num(s, "threads")?;
    let budget: Option<f64> = opt_num(s, "budget_secs")?;
    if budget.is_some_and(|b| !(b > 0.0)) {
        return Err(LabError::Config("budget_secs must be positive".into()));
    }
    Ok(RenderOptions { threads, budget: budget.map(Duration::from_secs_f64) })
}

fn cmd_render(s: &Settings) -> Result<Output, LabError> {
    let opts = render_options(s)?;
    let res: u32 = num(s, "res")?;
    let max_iter: u32 = num(s, "max_iter")?;
    let coloring = match get(s, "coloring")? {
        "binary" => Coloring::Binary,
        "smooth" | "smooth_green" => Coloring::SmoothGreen,
        "period" | "period_tint" => Coloring::PeriodTint,
        c => return Err(LabError::Config(format!("unknown coloring {c:?}"))),
    };
    let result = if flag(s, "baby")? {
        let fam = family(s, true)?;
        let k = period(s)?;
        let seed = param(s, "center")?;
        let hit = newton_center(fam, k, seed).ok_or_else(|| LabError::Numeric("no center near the given seed".into()))?;
        let window = build_window(fam, hit.parameter, k)?;
        let rows: u32 = opt_num(s, "height")?.unwrap_or(res);
        let mut job = baby_job(&window, res, rows);
        job.coloring = Coloring::Binary;
        render::render_baby(&window, &job, &opts)?
    } else {
        let fam = family(s, false)?;
        let plane = match (s.get("julia"), fam) {
            (Some(c), f) => Plane::Dynamical(f.descriptor(Param::from_c64(parse_complex(c)?))),
            (None, Family::Multicorn { degree }) => Plane::ParameterAnti { degree },
            (None, Family::Multibrot { degree }) => Plane::ParameterMultibrot { degree },
            (None, _) => Plane::ParameterCubic,
        };
        let (window, rows) = match s.get("window") {
            Some(w) => {
                let v: Vec<f64> = w
                    .split(':')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| LabError::Config(format!("window {w:?}: expected x0:x1:y0:y1")))?;
                if v.len() != 4 || !(v[1] > v[0]) || !(v[3] > v[2]) {
                    return Err(LabError::Config(format!("window {w:?}: expected x0:x1:y0:y1 with x0 < x1, y0 < y1")));
                }
                let rows = ((res as f64) * (v[3] - v[2]) / (v[1] - v[0])).round().max(1.0) as u32;
                (Window { center: c64(0.5 * (v[0] + v[1]), 0.5 * (v[2] + v[3])), width: v[1] - v[0] }, rows)
            }
            None => (Window { center: parse_complex(get(s, "center")?)?, width: num(s, "width")? }, opt_num(s, "height")?.unwrap_or(res)),
        };
        let mut job = RasterJob::new(plane, window, res, rows, max_iter, coloring);
        job.max_period = num(s, "max_period")?;
        render::render(&job, &opts)?
    };
    let mut out = Output::default();
    out.files.push(("render.ppm".into(), formats::ppm_bytes(&result)));
    if flag(s, "csv")? {
        out.files.push(("render.csv".into(), formats::csv_string(&result).into_bytes()));
    }
    let members = result.pixels.iter().filter(|p| p.is_member()).count();
    out.stdout = format!(
        "{}x{} pixels, {} members, {:.3} s\n",
        result.job.width, result.job.height, members, result.elapsed_secs
    );
    Ok(out)
}

fn cmd_centers(s: &Settings) -> Result<Output, LabError> {
    let fam = family(s, true)?;
    let k = period(s)?;
    let window = SearchWindow { center: Param::default(), radius: num(s, "radius")?, grid: num(s, "grid")? };
    let hits = enumerate_centers(fam, k, &window);
    let mut csv = String::from("x,y,residual\n");
    for h in &hits {
        csv.push_str(&format!("{},{},{}\n", h.parameter.x, h.parameter.y, h.residual));
    }
    let v = json!({
        "period": k,
        "count": hits.len(),
        "centers": hits.iter().map(|h| json!({"c": [h.parameter.x, h.parameter.y], "residual": h.residual})).collect::<Vec<_>>(),
    });
    let mut out = json_out("centers", &v);
    out.files.push(("centers.csv".into(), csv.into_bytes()));
    Ok(out)
}

/// The parabolic cycle attracting the critical orbit, and its
/// characteristic point.
fn parabolic_point(dy: &Dynamics, k: u32) -> Result<(multicorn_core::orbits::Cycle, C64), LabError> {
    let cyc = critical_parabolic_cycle(dy, k).ok_or_else(|| LabError::Numeric(format!("no parabolic cycle of period {k} attracts the critical orbit")))?;
    let i = characteristic_point(dy, &cyc.points).unwrap_or(0);
    let z = cyc.points[i];
    Ok((cyc, z))
}

pub fn arc_through(fam: Family, p: Param, k: u32, cfg: &ArcConfig) -> Result<ParabolicArc, LabError> {
    let dy = fam.dynamics(p);
    let (_, z) = parabolic_point(&dy, k)?;
    let lcfg = LocusConfig { max_step: 0.01, ..LocusConfig::default() };
    let skel = trace_indifference_locus(fam, k, (p, z), LocusFraming::Anti, &lcfg)?;
    Ok(build_arc(&skel, cfg)?)
}

fn cmd_arc(s: &Settings) -> Result<Output, LabError> {
    let fam = family(s, true)?;
    let k = period(s)?;
    let cfg = ArcConfig { max_height: num(s, "max_height")?, ..ArcConfig::default() };
    let arc = arc_through(fam, param(s, "c")?, k, &cfg)?;
    let tab = index_function(&arc);
    let mut csv = String::from("x,y,height,index\n");
    for smp in &arc.samples {
        csv.push_str(&format!("{},{},{},{}\n", smp.param.x, smp.param.y, smp.height, smp.index));
    }
    let zero = locate_height(&arc, 0.0, &cfg).ok();
    let th = |e| bifurcation_threshold(&arc, e, &cfg).ok().map(|t| json!({"height": t.height, "c": [t.sample.param.x, t.sample.param.y]}));
    let v = json!({
        "samples": arc.samples.len(),
        "height_range": [tab.heights.first(), tab.heights.last()],
        "tau_at_zero": zero.map(|z| z.index),
        "c_at_zero": zero.map(|z| [z.param.x, z.param.y]),
        "threshold_plus": th(ArcEnd::Plus),
        "threshold_minus": th(ArcEnd::Minus),
        "ends_dominate": tab.ends_dominate,
        "cusp_ends": arc.cusp_flags,
    });
    let mut out = json_out("arc", &v);
    out.files.push(("arc.csv".into(), csv.into_bytes()));
    Ok(out)
}

fn cmd_index(s: &Settings) -> Result<Output, LabError> {
    let fam = family(s, true)?;
    let k = period(s)?;
    let dy = fam.dynamics(param(s, "c")?);
    let precision = match get(s, "precision")? {
        "double" => Precision::Double,
        "double-double" => Precision::DoubleDouble,
        p => return Err(LabError::Config(format!("unknown precision {p:?}"))),
    };
    // the parabolic cycle if the critical orbit is attracted to one, else
    // the attracting cycle
    let (z, parabolic) = match parabolic_point(&dy, k) {
        Ok((_, z)) => (z, true),
        Err(_) => (attracting_cycle_of(&dy, k, None)?, false),
    };
    let g = dy.iterate(k).holomorphic_power();
    let idx = contour_index(&g, z, None, &ContourConfig { precision, ..ContourConfig::default() })?;
    let v = json!({
        "tau": idx.value.re,
        "tau_imag": idx.value.im,
        "point": pair(z),
        "parabolic": parabolic,
        "residu_iteratif": idx.residu_iteratif.map(|r| r.re),
    });
    Ok(json_out("index", &v))
}

fn cmd_ecalle(s: &Settings) -> Result<Output, LabError> {
    let fam = family(s, true)?;
    let k = period(s)?;
    let dy = fam.dynamics(param(s, "c")?);
    let (cyc, _) = parabolic_point(&dy, k)?;
    let frame = build_fatou(&dy, &cyc, FrameKind::Attracting, &FatouConfig::default())?;
    let h = critical_ecalle_height(&dy, &frame)?;
    let v = json!({
        "h": h,
        "point": pair(frame.parabolic_point),
        "beta": frame.beta.map(pair),
        "abel_residual": frame.report.abel_max,
        "equator_residual": frame.report.equator_max,
        "truncation": frame.truncation,
    });
    Ok(json_out("ecalle", &v))
}

fn cmd_straighten(s: &Settings) -> Result<Output, LabError> {
    let fam = family(s, true)?;
    let k = period(s)?;
    let hit = newton_center(fam, k, param(s, "center")?).ok_or_else(|| LabError::Numeric("no center near the given seed".into()))?;
    let window = build_window(fam, hit.parameter, k)?;
    let marking: Option<u32> = opt_num(s, "marking")?;
    let r = straighten(&window, param(s, "c")?, marking)?;
    let inv = match r.invariant {
        MatchedInvariant::KoenigsRatio => "koenigs_ratio",
        MatchedInvariant::EcalleHeight => "ecalle_height",
        MatchedInvariant::Multiplier => "multiplier",
    };
    let v = json!({
        "source": [r.source.x, r.source.y],
        "image": [r.image.x, r.image.y],
        "window_center": [window.center.x, window.center.y],
        "matched_invariant": inv,
        "source_value": pair(r.source_value),
        "image_value": pair(r.image_value),
        "residual": r.residual,
        "source_index": r.source_index,
        "image_index": r.image_index,
        "source_multiplier": r.source_multiplier,
        "image_multiplier": r.image_multiplier,
        "branch": r.branch,
    });
    Ok(json_out("straighten", &v))
}

fn cmd_horn(s: &Settings) -> Result<Output, LabError> {
    let fam = family(s, true)?;
    let k = period(s)?;
    let dy = fam.dynamics(param(s, "c")?);
    let (cyc, _) = parabolic_point(&dy, k)?;
    let cfg = FatouConfig::default();
    let att = build_fatou(&dy, &cyc, FrameKind::Attracting, &cfg)?;
    let rep = build_fatou(&dy, &cyc, FrameKind::Repelling, &cfg)?;
    let band = HornBand { im: num(s, "band_im")?, count: num(s, "band_count")?, ..HornBand::default() };
    let horn = HornSampler::new(att, rep, band);
    let samples = horn.samples()?;
    let v = json!({
        "translation_residual": horn.shift_residual(1.0)?,
        "half_translation_residual": horn.shift_residual(0.5)?,
        "oddness_residual": horn.oddness_residual()?,
        "band": samples.iter().map(|(a, b)| json!({"zeta": pair(*a), "horn": pair(*b)})).collect::<Vec<_>>(),
    });
    Ok(json_out("horn", &v))
}

fn cmd_report(s: &Settings) -> Result<Output, LabError> {
    match get(s, "suite")? {
        "acceptance" => {}
        x => return Err(LabError::Config(format!("unknown suite {x:?}"))),
    }
    let results = acceptance::run_all();
    let table = acceptance::table(&results);
    let v = json!(results
        .iter()
        .map(|r| json!({"id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}))
        .collect::<Vec<_>>());
    let text = serde_json::to_string_pretty(&v).expect("json") + "\n";
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
    let failure = (!failed.is_empty()).then(|| format!("failed criteria: {}", failed.join(", ")));
    Ok(Output { files: vec![("report.json".into(), text.into_bytes())], stdout: table, failure })
}
