//! Residue indices of the three parabolic examples, by contour quadrature
//! and by the fixed-point formula.

use multicorn_core::maps::{AntiPolyMap, MapDescriptor, MultibrotMap, RealCubicMap};
use multicorn_core::orbits::{
    contour_index, find_cycles, iterate_index, residue_index_by_formula, residue_index_contour, symmetric_pair,
    ContourConfig, CycleClass, IndexContext, IndexMethod, Precision,
};
use multicorn_core::poly::{Chain, Poly, Step};
use multicorn_core::scalar::{c64, C64};

fn cubic_a() -> f64 {
    (8.0f64 / 9.0).powf(0.25)
}

/// `−g∘g` for `g(z) = −z³ − 2√2 z`.
fn minus_g2() -> Chain {
    let g = RealCubicMap::new(cubic_a(), 0.0).chain().repeat(2);
    g.then(&Chain::new(vec![Step::Poly(Poly::new(vec![C64::default(), c64(-1.0, 0.0)]))]))
}

#[test]
fn quarter_second_iterate_index_is_one_half() {
    let m = MapDescriptor::Anti(AntiPolyMap::new(2, c64(0.25, 0.0)));
    let idx = residue_index_contour(&m, 2, c64(0.5, 0.0), None).unwrap();
    assert!((idx.value - 0.5).norm() <= 1e-8, "{idx:?}");
    assert_eq!(idx.method, IndexMethod::Contour);
    // résidu itératif 1 − ι
    assert!((idx.residu_iteratif.unwrap() - 0.5).norm() < 1e-8);
}

#[test]
fn airplane_third_iterate_index() {
    let m = MapDescriptor::Multibrot(MultibrotMap::new(2, c64(-1.75, 0.0)));
    let cycles = find_cycles(&m, 3).unwrap();
    let par: Vec<_> = cycles.iter().filter(|c| c.class == CycleClass::Indifferent).collect();
    assert_eq!(par.len(), 1);
    let cyc = par[0];
    // every point of the parabolic cycle has the same index
    for &z in &cyc.points {
        let idx = residue_index_contour(&m, 3, z, None).unwrap();
        assert!((idx.value - (-2.0 / 49.0)).norm() <= 1e-8, "{z} {idx:?}");
        assert!((iterate_index(idx.value, 2) - 47.0 / 98.0).norm() <= 1e-8);
    }
    let simple = symmetric_pair(c64(2.0, 0.0), c64(-7.0, 0.0), 3).to_vec();
    let ctx = IndexContext::FixedPointTheorem { degree: 8, simple_multipliers: simple, parabolic_count: 3, multiplicity: 2 };
    let xi = residue_index_by_formula(cyc, &ctx, 1).unwrap();
    assert!((xi.value - (-2.0 / 49.0)).norm() <= 1e-12);
    let tau = residue_index_by_formula(cyc, &ctx, 2).unwrap();
    assert!((tau.value - 47.0 / 98.0).norm() <= 1e-12);
}

#[test]
fn real_cubic_indices() {
    let h = minus_g2();
    // exactly: g(0) = 0, so (−g∘g)'(0) = −g'(0)² = −9a⁴ with a⁴ = 8/9
    let (num, den) = (8i64, 9i64);
    assert_eq!(-9 * num % den, 0);
    assert_eq!(-9 * num / den, -8);
    let d0 = h.eval_d(C64::default()).deriv;
    assert!((d0 - c64(-8.0, 0.0)).norm() <= 8.0 * 4.0 * f64::EPSILON, "{d0}");
    let cfg = ContourConfig::default();
    let mut points = Vec::new();
    for y in [0.946_877_f64, 1.829_225] {
        for s in [1.0, -1.0] {
            points.push(c64(0.0, s * y));
        }
    }
    for z in points {
        let z = multicorn_core::orbits::cycle_through(&MapDescriptor::Cubic(RealCubicMap::new(cubic_a(), 0.0)).dynamics(), z, 4)
            .points[0];
        let idx = contour_index(&h, z, None, &cfg).unwrap();
        assert!((idx.value - (-1.0 / 36.0)).norm() <= 1e-8, "{z} {idx:?}");
        let g4 = RealCubicMap::new(cubic_a(), 0.0).chain().repeat(4);
        let idx4 = contour_index(&g4, z, None, &cfg).unwrap();
        assert!((idx4.value - 35.0 / 72.0).norm() <= 1e-8, "{z} {idx4:?}");
    }
}

#[test]
fn double_and_double_double_agree() {
    let h = minus_g2();
    let z = c64(0.0, 0.946_877);
    let dy = MapDescriptor::Cubic(RealCubicMap::new(cubic_a(), 0.0)).dynamics();
    let z = multicorn_core::orbits::cycle_through(&dy, z, 4).points[0];
    let a = contour_index(&h, z, None, &ContourConfig { precision: Precision::Double, ..Default::default() }).unwrap();
    let b = contour_index(&h, z, None, &ContourConfig::default()).unwrap();
    assert!((a.value - b.value).norm() < 1e-9);
}
