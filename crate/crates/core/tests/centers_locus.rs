use multicorn_core::orbits::{
    enumerate_centers, newton_center, trace_indifference_locus, LocusConfig, LocusFraming, SearchWindow,
};
use multicorn_core::scalar::{cis_turns, Param, C64};
use multicorn_core::Family;

/// Real root of c³ + 2c² + c + 1 by bisection on a sign change.
fn airplane_center_oracle() -> f64 {
    let p = |c: f64| ((c + 2.0) * c + 1.0) * c + 1.0;
    let (mut lo, mut hi) = (-2.0, -1.5);
    assert!(p(lo) < 0.0 && p(hi) > 0.0);
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

#[test]
fn tricorn_period_three_centers() {
    let fam = Family::Multicorn { degree: 2 };
    let hits = enumerate_centers(fam, 3, &SearchWindow::disk(2.0));
    assert_eq!(hits.len(), 3);
    let oracle = airplane_center_oracle();
    let real = hits.iter().find(|h| h.parameter.y.abs() < 1e-12).unwrap();
    assert!((real.parameter.x - oracle).abs() < 1e-10);
    assert!(real.residual <= 1e-10);
    // closed under rotation by e^{2πi/3}
    for h in &hits {
        let r = h.parameter.as_c64() * cis_turns(1.0 / 3.0);
        assert!(hits.iter().any(|k| (k.parameter.as_c64() - r).norm() < 1e-9));
    }
}

#[test]
fn multicorn_three_period_three_centers() {
    let hits = enumerate_centers(Family::Multicorn { degree: 3 }, 3, &SearchWindow::disk(2.0));
    assert_eq!(hits.len(), 8);
}

#[test]
fn period_one_center_and_seeded_airplane() {
    let hits = enumerate_centers(Family::Multicorn { degree: 2 }, 1, &SearchWindow::disk(2.0));
    assert_eq!(hits.len(), 1);
    assert!(hits[0].parameter.as_c64().norm() < 1e-12);
    let h = newton_center(Family::Multicorn { degree: 2 }, 3, Param::new(-1.7, 0.0)).unwrap();
    assert!((h.parameter.x + 1.754877666).abs() < 1e-9);
}

#[test]
fn cubic_multiplier_minus_one_curve() {
    let a0 = 1.0 / 3f64.sqrt();
    let cfg = LocusConfig { max_samples: 100, stop_at_cusps: false, max_step: 0.01, ..Default::default() };
    let sk = trace_indifference_locus(
        Family::RealCubic,
        1,
        (Param::new(a0, 0.0), C64::default()),
        LocusFraming::Holomorphic,
        &cfg,
    )
    .unwrap();
    assert!(sk.samples.len() >= 200);
    for s in &sk.samples {
        let (a, b) = (s.param.x, s.param.y);
        let q = 3.0 * a * a;
        let f = 4.0 * (q - 1.0) * (q + 2.0) * (q + 2.0) + 27.0 * b * b;
        assert!(f.abs() <= 1e-9, "{s:?} {f}");
        assert!(s.residual <= 1e-9);
    }
}
