use multicorn_core::fatou::*;
use multicorn_core::orbits::Cycle;
use multicorn_core::scalar::{c64, Param};
use multicorn_core::{Dynamics, Family};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tricorn(c: f64) -> Dynamics {
    Family::Multicorn { degree: 2 }.dynamics(Param::new(c, 0.0))
}

fn parabolic(dy: &Dynamics, period: u32) -> Cycle {
    critical_parabolic_cycle(dy, period).expect("parabolic cycle")
}

fn check_frame(dy: &Dynamics, period: u32) -> FatouFrame {
    let cyc = parabolic(dy, period);
    let f = build_fatou(dy, &cyc, FrameKind::Attracting, &FatouConfig::default()).unwrap();
    let beta = f.beta.unwrap();
    eprintln!("{:?} beta={beta} report={:?} N={}", f.parabolic_point, f.report, f.truncation);
    assert!((beta.re - 0.5).abs() <= 1e-8, "{beta}");
    assert!(f.report.abel_max <= 1e-8);
    assert!(f.report.equator_max <= 1e-7);
    assert!(f.equator_shift.re == 0.0);
    let r = f.abel_residual().unwrap();
    assert!(r <= 1e-8, "{r}");
    f
}

#[test]
fn root_of_main_arc_has_height_zero() {
    let dy = tricorn(0.25);
    let f = check_frame(&dy, 1);
    assert!((f.parabolic_point - c64(0.5, 0.0)).norm() < 1e-8);
    let h = critical_ecalle_height(&dy, &f).unwrap();
    assert!(h.abs() <= 1e-6, "{h}");
    let h1 = critical_height_from(&dy, &f, 1).unwrap();
    let h5 = critical_height_from(&dy, &f, 5).unwrap();
    assert!((h1 - h).abs() <= 1e-7 && (h5 - h).abs() <= 1e-7);
    let rep = build_fatou(&dy, &parabolic(&dy, 1), FrameKind::Repelling, &FatouConfig::default()).unwrap();
    assert!(rep.report.abel_max <= 1e-8, "{:?}", rep.report);
    assert!((rep.beta.unwrap().re - 0.5).abs() <= 1e-8);
}

#[test]
fn airplane_root_has_height_zero() {
    let dy = tricorn(-1.75);
    let f = check_frame(&dy, 3);
    let h = critical_ecalle_height(&dy, &f).unwrap();
    assert!(h.abs() <= 1e-6, "{h}");
    let h1 = critical_height_from(&dy, &f, 1).unwrap();
    assert!((h1 - h).abs() <= 1e-7);
}

#[test]
fn cubic_height_zero_map() {
    let a = (8.0f64 / 9.0).powf(0.25);
    let dy = Family::RealCubicAnti { half_return: 2 }.dynamics(Param::new(a, 0.0));
    let f = check_frame(&dy, 1);
    assert!((f.parabolic_point - c64(0.0, 0.946877)).norm() < 1e-5, "{}", f.parabolic_point);
    let h = critical_ecalle_height(&dy, &f).unwrap();
    assert!(h.abs() <= 1e-6, "{h}");
}

#[test]
fn off_root_arc_point_has_nonzero_height() {
    // deltoid boundary point c(t) = e^{it}/2 − e^{−2it}/4 at t = 0.3
    let t: f64 = 0.3;
    let c = c64(t.cos() / 2.0, t.sin() / 2.0) - c64((2.0 * t).cos() / 4.0, -(2.0 * t).sin() / 4.0);
    let dy = Family::Multicorn { degree: 2 }.dynamics(Param::from_c64(c));
    let z = c64((t / 2.0).cos(), (t / 2.0).sin()) * 0.5;
    let z = c64(z.re, -z.im);
    let f = build_fatou_at(&dy, z, 1, FrameKind::Attracting, &FatouConfig::default());
    let f = match f {
        Ok(f) => f,
        Err(_) => build_fatou_at(&dy, z.conj(), 1, FrameKind::Attracting, &FatouConfig::default()).unwrap(),
    };
    let h = critical_ecalle_height(&dy, &f).unwrap();
    eprintln!("h(t=0.3) = {h}");
    assert!(h.abs() > 1e-3);
    assert!(f.report.equator_max <= 1e-7);
}

fn main_component() -> Component {
    Component { family: Family::Multicorn { degree: 2 }, center: Param::new(0.0, 0.0), period: 1 }
}

#[test]
fn koenigs_ratio_modulus_law_and_real_symmetry() {
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x2545_f491);
    let mut next = || rng.random::<f64>();
    for _ in 0..100 {
        let r = 0.22 * next().sqrt();
        let t = next();
        let p = Param::from_c64(multicorn_core::scalar::cis_turns(t) * r);
        let dy = Family::Multicorn { degree: 2 }.dynamics(p);
        let z = attracting_cycle_of(&dy, 1, None).unwrap();
        let frame = build_koenigs(&dy, z, 1, &KoenigsConfig::default()).unwrap();
        assert!(frame.validation <= 1e-9, "{}", frame.validation);
        let cyc = multicorn_core::orbits::cycle_through(&dy, z, 1);
        let rho = koenigs_ratio(&dy, &cyc).unwrap();
        worst = worst.max((rho.norm() - frame.multiplier.norm()).abs());
    }
    assert!(worst <= 1e-9, "{worst}");
    for c in [0.1, -0.15, 0.2] {
        let dy = tricorn(c);
        let z = attracting_cycle_of(&dy, 1, None).unwrap();
        let rho = koenigs_ratio(&dy, &multicorn_core::orbits::cycle_through(&dy, z, 1)).unwrap();
        assert!(rho.im.abs() <= 1e-12 * rho.norm().max(1e-300), "{rho}");
    }
    let dy = tricorn(0.0);
    let rho = koenigs_ratio(&dy, &multicorn_core::orbits::cycle_through(&dy, c64(0.0, 0.0), 1)).unwrap();
    assert_eq!(rho, c64(0.0, 0.0));
}

#[test]
fn internal_rays_land_at_height_zero_parameters() {
    let cfg = InternalRayConfig::default();
    let ray = trace_internal_ray(&main_component(), 0.0, Param::new(0.05, 0.0), &cfg).unwrap();
    eprintln!("main landing {:?} res {} cusp {}", ray.landing, ray.landing_residual, ray.cusp);
    assert!(ray.landing.dist(Param::new(0.25, 0.0)) <= 1e-6);
    assert!(!ray.cusp);
    let last = *ray.values.last().unwrap();
    assert!((last.norm() - 0.999).abs() < 1e-9);
    let q = ecalle_koenigs_limit(last);
    assert!((q - c64(0.5, 0.0)).norm() <= 1e-3, "{q}");

    let center = -1.7548776662466927;
    let comp = Component { family: Family::Multicorn { degree: 2 }, center: Param::new(center, 0.0), period: 3 };
    let mut landed = None;
    for off in [1e-3, -1e-3] {
        if let Ok(r) = trace_internal_ray(&comp, 0.0, Param::new(center + off, 0.0), &cfg) {
            eprintln!("p3 off {off}: {:?} res {} cusp {}", r.landing, r.landing_residual, r.cusp);
            if r.landing.dist(Param::new(-1.75, 0.0)) <= 1e-6 {
                landed = Some(r);
            }
        }
    }
    assert!(landed.is_some());
}

#[test]
fn internal_ray_of_angle_one_third_lands_at_a_cusp() {
    let cfg = InternalRayConfig::default();
    // ρ_H ≈ 2|c|·e^{3i·arg c} near the center; pick the branch through arg c = 2π/9
    let seed = Param::from_c64(multicorn_core::scalar::cis_turns(1.0 / 9.0) * 0.05);
    let ray = trace_internal_ray(&main_component(), 1.0 / 3.0, seed, &cfg).unwrap();
    eprintln!("1/3 landing {:?} res {} cusp {}", ray.landing, ray.landing_residual, ray.cusp);
    assert!(ray.cusp);
}

#[test]
fn horn_map_equivariance_at_the_main_root() {
    let dy = tricorn(0.25);
    let cyc = parabolic(&dy, 1);
    let cfg = FatouConfig::default();
    let att = build_fatou(&dy, &cyc, FrameKind::Attracting, &cfg).unwrap();
    let rep = build_fatou(&dy, &cyc, FrameKind::Repelling, &cfg).unwrap();
    let horn = HornSampler::new(att, rep, HornBand::default());
    let one = horn.shift_residual(1.0).unwrap();
    let half = horn.shift_residual(0.5).unwrap();
    let odd = horn.oddness_residual().unwrap();
    let eta = horn.asymptotic_offset(4.0).unwrap();
    eprintln!("horn one {one:e} half {half:e} odd {odd:e} eta {eta}");
    assert!(one <= 1e-6);
    assert!(half <= 1e-5);
    assert!(odd <= 1e-5);
}
