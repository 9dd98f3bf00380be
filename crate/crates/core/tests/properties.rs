use multicorn_core::maps::{AntiPolyMap, MapDescriptor, MultibrotMap};
use multicorn_core::orbits::{find_cycles, residue_index_contour};
use multicorn_core::raster::{membership, sample_point, Coloring, Plane, Sample};
use multicorn_core::scalar::{c64, cis_turns, C64};
use proptest::prelude::*;

fn point(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(x, y)| c64(x, y))
}

fn potential(map: MapDescriptor, z: C64) -> Option<f64> {
    match sample_point(&Plane::Dynamical(map), z, 500, Coloring::SmoothGreen, 1) {
        Sample::Escaped { potential, .. } => Some(potential),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multicorn_membership_is_symmetric(c in point(2.0), d in 2u32..5) {
        let plane = Plane::ParameterAnti { degree: d };
        let m = membership(&plane, c, 150);
        prop_assert_eq!(m, membership(&plane, c.conj(), 150));
        prop_assert_eq!(m, membership(&plane, c * cis_turns(1.0 / (d + 1) as f64), 150));
    }

    #[test]
    fn green_function_scales_by_the_degree(c in point(1.0), z in point(3.0), d in 2u32..4) {
        let map = MapDescriptor::Anti(AntiPolyMap::new(d, c));
        if let (Some(g0), Some(g1)) = (potential(map, z), potential(map, map.eval(z))) {
            prop_assume!(g0 > 1e-3);
            prop_assert!((g1 - d as f64 * g0).abs() <= 1e-6 * g1, "{} vs {}", g1, d as f64 * g0);
        }
    }

    #[test]
    fn squared_return_multiplier_is_the_anti_multiplier_modulus_squared(c in point(1.2), k in 1u32..4) {
        let cycles = find_cycles(&MapDescriptor::Anti(AntiPolyMap::new(2, c)), k).unwrap();
        for cy in cycles {
            if let Some(l) = cy.anti_multiplier {
                let want = l.norm_sqr();
                prop_assert!((cy.sq_multiplier - want).norm() <= 1e-9 * want.max(1.0), "{:?} vs {}", cy.sq_multiplier, want);
            }
        }
    }

    #[test]
    fn contour_index_matches_the_multiplier(c in point(1.5)) {
        let map = MapDescriptor::Multibrot(MultibrotMap::new(2, c));
        let cycles = find_cycles(&map, 1).unwrap();
        // keep the two fixed points apart and away from parabolic
        prop_assume!(cycles.len() == 2 && (cycles[0].points[0] - cycles[1].points[0]).norm() > 0.3);
        for cy in &cycles {
            let rho = cy.sq_multiplier;
            prop_assume!((rho - 1.0).norm() > 0.1);
            let idx = residue_index_contour(&map, 1, cy.points[0], None).unwrap();
            let want = C64::new(1.0, 0.0) / (C64::new(1.0, 0.0) - rho);
            prop_assert!((idx.value - want).norm() <= 1e-8 * want.norm().max(1.0), "{:?} vs {}", idx.value, want);
        }
    }
}
