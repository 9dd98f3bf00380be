use multicorn_core::orbits::newton_center;
use multicorn_core::raster::Sample;
use multicorn_core::renorm::*;
use multicorn_core::scalar::Param;
use multicorn_core::Family;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRICORN: Family = Family::Multicorn { degree: 2 };

fn airplane_window() -> RenormWindow {
    let c0 = newton_center(TRICORN, 3, Param::new(-1.75, 0.0)).expect("center");
    assert!(c0.residual < 1e-12);
    build_window(TRICORN, c0.parameter, 3).expect("window")
}

fn cubic_window() -> RenormWindow {
    build_window(Family::RealCubicAnti { half_return: 1 }, Param::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), 1).expect("cubic window")
}

#[test]
fn windows_nest_at_their_centers() {
    let w = airplane_window();
    eprintln!("{w:?}");
    assert_eq!(w.local_degree, 2);
    assert!(w.margin > 0.0);
    assert!(baby_membership(&w, w.center).unwrap());
    assert!(baby_membership(&w, Param::new(-1.75, 0.0)).unwrap());
    let c = cubic_window();
    eprintln!("{c:?}");
    assert_eq!(c.local_degree, 2);
    assert!(c.anti);
    assert!(baby_membership(&c, c.center).unwrap());
    assert_eq!(build_window(TRICORN, Param::default(), 1), Err(RenormError::PeriodOne));
}

#[test]
fn far_parameters_leave_the_trap() {
    let w = airplane_window();
    let far = Param::new(w.center.x + 0.8 * w.box_half_width, 0.6 * w.box_half_width);
    match baby_membership(&w, far) {
        Ok(m) => assert!(!m),
        Err(e) => assert!(matches!(e, RenormError::WindowInvalid { .. })),
    }
    let job = baby_job(&w, 1, 1);
    assert!(render_baby(&w, &job).pixels[0].is_member());
    let job = baby_job(&w, 48, 48);
    let r = render_baby(&w, &job);
    let members = r.pixels.iter().filter(|s| s.is_member()).count();
    let invalid = r.pixels.iter().filter(|s| matches!(s, Sample::Invalid)).count();
    for row in 0..48 {
        let line: String = r.pixels[row * 48..(row + 1) * 48]
            .iter()
            .map(|s| match s { Sample::Bounded { .. } => '#', Sample::Invalid => 'x', _ => '.' })
            .collect();
        eprintln!("{line}");
    }
    eprintln!("members {members} invalid {invalid}");
}

#[test]
fn straightening_centers_and_roots() {
    let w = airplane_window();
    let r = straighten(&w, w.center, None).unwrap();
    assert_eq!(r.image, Param::default());
    assert_eq!(r.residual, 0.0);
    let t = std::time::Instant::now();
    let r = straighten(&w, Param::new(-1.75, 0.0), None).unwrap();
    eprintln!("{r:?} {:?}", t.elapsed());
    assert_eq!(r.invariant, MatchedInvariant::EcalleHeight);
    assert!(r.image.dist(Param::new(0.25, 0.0)) <= 1e-6);
    assert!((r.source_index.unwrap() - 47.0 / 98.0).abs() <= 1e-8);
    assert!((r.image_index.unwrap() - 0.5).abs() <= 1e-8);
    let p = Param::new(w.center.x + 0.002, 0.0005);
    let t = std::time::Instant::now();
    let r = straighten(&w, p, None).unwrap();
    eprintln!("{r:?} {:?}", t.elapsed());
}

fn verdict(w: &RenormWindow, p: Param) -> Option<bool> {
    baby_membership(w, p).ok()
}

#[test]
fn baby_sets_respect_the_family_reflection() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for w in [airplane_window(), cubic_window()] {
        let mut members = 0;
        for _ in 0..10_000 {
            let p = Param::new(w.center.x + w.box_half_width * (2.0 * rng.random::<f64>() - 1.0), w.box_half_width * (2.0 * rng.random::<f64>() - 1.0));
            let a = verdict(&w, p);
            assert_eq!(a, verdict(&w, Param::new(p.x, -p.y)), "{p:?}");
            members += (a == Some(true)) as usize;
        }
        eprintln!("{members} members");
        assert!(members > 50);
    }
}

#[test]
fn cubic_baby_render() {
    let w = cubic_window();
    let r = render_baby(&w, &baby_job(&w, 48, 32));
    for row in 0..32 {
        let line: String = r.pixels[row * 48..(row + 1) * 48]
            .iter()
            .map(|s| match s { Sample::Bounded { .. } => '#', Sample::Invalid => 'x', _ => '.' })
            .collect();
        eprintln!("{line}");
    }
    for row in 0..16 {
        for col in 0..48 {
            assert_eq!(r.pixels[row * 48 + col], r.pixels[(31 - row) * 48 + col]);
        }
    }
}

#[test]
fn straightening_is_injective_and_keeps_multiplier_moduli() {
    let w = airplane_window();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut images = Vec::new();
    while images.len() < 50 {
        let r = 0.0015 * rng.random::<f64>().sqrt();
        let t = std::f64::consts::TAU * rng.random::<f64>();
        let p = Param::new(w.center.x + r * t.cos(), r * t.sin());
        let s = straighten(&w, p, None).unwrap();
        assert_eq!(s.invariant, MatchedInvariant::KoenigsRatio);
        assert!(s.residual < 1e-6, "{s:?}");
        assert!((s.source_multiplier.unwrap() - s.image_multiplier.unwrap()).abs() < 1e-6);
        images.push(s.image);
    }
    for i in 0..images.len() {
        for j in 0..i {
            assert!(images[i].dist(images[j]) > 1e-9);
        }
    }
}

#[test]
fn marking_is_required_off_the_real_axis() {
    let c0 = newton_center(TRICORN, 3, Param::new(0.877, 1.52)).expect("center");
    eprintln!("{c0:?}");
    let w = build_window(TRICORN, c0.parameter, 3).unwrap();
    let p = Param::new(w.center.x + 1e-4, w.center.y);
    assert_eq!(straighten(&w, p, None), Err(RenormError::BranchAmbiguous));
    let a = straighten(&w, p, Some(0)).unwrap();
    let b = straighten(&w, p, Some(1)).unwrap();
    assert!(a.residual < 1e-6 && b.residual < 1e-6);
    // markings differ by the model's rotational symmetry
    eprintln!("{:?} {:?}", a.image, b.image);
    assert!(a.image.dist(b.image) > 1e-6);
    let near = |k: f64| (a.image.as_c64() * multicorn_core::scalar::cis_turns(k / 3.0) - b.image.as_c64()).norm() < 1e-6;
    assert!(near(1.0) || near(2.0));
}
