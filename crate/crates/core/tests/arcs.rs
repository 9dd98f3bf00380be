use multicorn_core::arcs::*;
use multicorn_core::fatou::critical_parabolic_cycle;
use multicorn_core::orbits::{trace_indifference_locus, LocusConfig, LocusFraming};
use multicorn_core::scalar::{c64, Param};
use multicorn_core::Family;

fn arc_through(family: Family, p: Param, period: u32) -> ParabolicArc {
    let dy = family.dynamics(p);
    let cyc = critical_parabolic_cycle(&dy, period).expect("parabolic cycle");
    let lcfg = LocusConfig { max_step: 0.01, ..LocusConfig::default() };
    let skel = trace_indifference_locus(family, period, (p, cyc.points[0]), LocusFraming::Anti, &lcfg).unwrap();
    eprintln!("skeleton {} samples, ends {:?}", skel.samples.len(), skel.ends);
    build_arc(&skel, &ArcConfig::default()).unwrap()
}

#[test]
fn main_arc_height_zero_index_and_threshold() {
    let t0 = std::time::Instant::now();
    let fam = Family::Multicorn { degree: 2 };
    let arc = arc_through(fam, Param::new(0.25, 0.0), 1);
    let cfg = ArcConfig::default();
    let tab = index_function(&arc);
    eprintln!("{} samples h∈[{}, {}] ends {:?} cusps {:?} {:?}", arc.samples.len(), tab.heights[0], tab.heights.last().unwrap(), tab.end_growth, arc.cusp_flags, t0.elapsed());
    let z = locate_height(&arc, 0.0, &cfg).unwrap();
    assert!(z.param.dist(Param::new(0.25, 0.0)) <= 1e-6, "{:?}", z.param);
    assert!((z.index - 0.5).abs() <= 1e-8, "{}", z.index);
    assert!(tab.max_imag <= 1e-8);
    assert!(arc.samples.iter().all(|s| s.multiplier_residual <= 1e-9));
    assert!(tab.end_growth[0] && tab.end_growth[1]);
    for h in [0.3, 1.0, 2.0] {
        let a = locate_height(&arc, h, &cfg).unwrap();
        let b = locate_height(&arc, -h, &cfg).unwrap();
        assert!(a.param.dist(Param::new(b.param.x, -b.param.y)) <= 1e-8, "{:?} {:?}", a.param, b.param);
    }
    let plus = bifurcation_threshold(&arc, ArcEnd::Plus, &cfg).unwrap();
    let minus = bifurcation_threshold(&arc, ArcEnd::Minus, &cfg).unwrap();
    eprintln!("h0 = {} / {} at {:?} checked {}", plus.height, minus.height, plus.sample.param, plus.checked);
    assert!(plus.height > 0.0);
    assert!((plus.sample.index - 1.0).abs() <= 1e-6);
    assert!(plus.monotone_above && plus.checked == 10);
    assert!((plus.height + minus.height).abs() <= 1e-6);
    // deltoid oracle: index 1/(2cos²(3t/2)) = 1 at t = π/6
    let t = std::f64::consts::PI / 6.0;
    let c = c64(t.cos() / 2.0, t.sin() / 2.0) - c64((2.0 * t).cos() / 4.0, -(2.0 * t).sin() / 4.0);
    let d = plus.sample.param.dist(Param::from_c64(c)).min(plus.sample.param.dist(Param::new(c.re, -c.im)));
    assert!(d <= 1e-6, "{:?} vs {c}", plus.sample.param);
    eprintln!("total {:?}", t0.elapsed());
}

#[test]
fn index_ledger_across_arcs() {
    let t0 = std::time::Instant::now();
    let cfg = ArcConfig::default();
    let main = arc_through(Family::Multicorn { degree: 2 }, Param::new(0.25, 0.0), 1);
    let p3 = arc_through(Family::Multicorn { degree: 2 }, Param::new(-1.75, 0.0), 3);
    let a = (8.0f64 / 9.0).powf(0.25);
    let cubic = arc_through(Family::RealCubicAnti { half_return: 2 }, Param::new(a, 0.0), 1);
    eprintln!("built {:?}", t0.elapsed());
    for arc in [&p3, &cubic] {
        let t = index_function(arc);
        eprintln!("{} samples h∈[{}, {}] growth {:?} cusps {:?} first {:?} last {:?}", arc.samples.len(), t.heights[0], t.heights.last().unwrap(), t.end_growth, arc.cusp_flags, arc.samples[0].param, arc.samples.last().unwrap().param);
    }
    let z3 = locate_height(&p3, 0.0, &cfg).unwrap();
    assert!(z3.param.dist(Param::new(-1.75, 0.0)) <= 1e-6, "{:?}", z3.param);
    assert!((z3.index - 47.0 / 98.0).abs() <= 1e-8, "{}", z3.index);
    let zc = locate_height(&cubic, 0.0, &cfg).unwrap();
    assert!(zc.param.dist(Param::new(a, 0.0)) <= 1e-6, "{:?}", zc.param);
    assert!((zc.index - 35.0 / 72.0).abs() <= 1e-8, "{}", zc.index);
    let led = discontinuity_ledger(&[(&main, &p3), (&main, &cubic), (&main, &main)], &cfg).unwrap();
    assert!((led[0].difference - 1.0 / 49.0).abs() <= 1e-8 && led[0].distinct);
    assert!((led[1].difference - 1.0 / 72.0).abs() <= 1e-8 && led[1].distinct);
    assert!(led[2].difference == 0.0 && !led[2].distinct);
    eprintln!("total {:?}", t0.elapsed());
}

#[test]
fn root_and_coroot_classification() {
    let cfg = ArcConfig::default();
    let rays = multicorn_core::maps::RayConfig::default();
    let t0 = std::time::Instant::now();
    let main = arc_through(Family::Multicorn { degree: 2 }, Param::new(0.25, 0.0), 1);
    let z = locate_height(&main, 0.0, &cfg).unwrap();
    assert_eq!(classify_arc_type(&main, &z, &rays), ArcType::Coroot);
    let p3 = arc_through(Family::Multicorn { degree: 2 }, Param::new(-1.75, 0.0), 3);
    let z = locate_height(&p3, 0.0, &cfg).unwrap();
    assert_eq!(classify_arc_type(&p3, &z, &rays), ArcType::Root);
    eprintln!("classify {:?}", t0.elapsed());
}
