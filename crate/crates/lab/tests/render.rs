use multicorn_core::maps::{AntiPolyMap, MapDescriptor};
use multicorn_core::raster::{Coloring, Plane, RasterJob, Window};
use multicorn_core::scalar::{c64, cis_turns, C64};
use multicorn_lab::formats::{ppm_bytes, scalar};
use multicorn_lab::render::{render, RenderOptions};

fn tricorn_job(res: u32, coloring: Coloring) -> RasterJob {
    RasterJob::new(Plane::ParameterAnti { degree: 2 }, Window { center: C64::default(), width: 4.0 }, res, res, 128, coloring)
}

fn opts(threads: usize) -> RenderOptions {
    RenderOptions { threads: Some(threads), budget: None }
}

#[test]
fn thread_count_does_not_change_pixels() {
    for coloring in [Coloring::Binary, Coloring::SmoothGreen, Coloring::PeriodTint] {
        let job = tricorn_job(96, coloring);
        let one = render(&job, &opts(1)).unwrap();
        let many = render(&job, &opts(7)).unwrap();
        assert_eq!(one.pixels.len(), 96 * 96);
        let bits = |r: &multicorn_core::raster::RasterResult| -> Vec<u64> { r.pixels.iter().map(|p| scalar(p, coloring).to_bits()).collect() };
        assert_eq!(bits(&one), bits(&many));
        assert_eq!(ppm_bytes(&one), ppm_bytes(&many));
    }
}

#[test]
fn tricorn_image_has_threefold_symmetry() {
    // even, so no pixel row sits on the real axis: the real slice [−2, 1/4]
    // is a set of measure zero whose rotated copies miss every pixel center
    let n = 120;
    let job = tricorn_job(n, Coloring::Binary);
    let img = render(&job, &opts(4)).unwrap();
    let px = 4.0 / n as f64;
    let at = |z: C64| -> Option<bool> {
        let col = ((z.re + 2.0) / px).floor();
        let row = ((2.0 - z.im) / px).floor();
        if col < 0.0 || row < 0.0 || col >= n as f64 || row >= n as f64 {
            return None;
        }
        Some(img.pixels[row as usize * n as usize + col as usize].is_member())
    };
    let mut mismatched = 0;
    let mut members = 0;
    for row in 0..n {
        for col in 0..n {
            let z = job.pixel_point(row, col);
            let m = img.pixels[(row * n + col) as usize].is_member();
            members += m as usize;
            let w = z * cis_turns(1.0 / 3.0);
            // the rotated pixel center lands somewhere inside a pixel; accept
            // agreement with any pixel within one step of it
            let near: Vec<bool> = (-1..=1)
                .flat_map(|i| (-1..=1).map(move |j| c64(i as f64 * px, j as f64 * px)))
                .filter_map(|d| at(w + d))
                .collect();
            if !near.is_empty() && !near.contains(&m) {
                mismatched += 1;
            }
        }
    }
    assert!(members > 100);
    assert_eq!(mismatched, 0);
}

#[test]
fn julia_set_of_zero_is_the_unit_disk() {
    let n = 101;
    let job = RasterJob::new(
        Plane::Dynamical(MapDescriptor::Anti(AntiPolyMap::new(2, C64::default()))),
        Window { center: C64::default(), width: 3.0 },
        n,
        n,
        200,
        Coloring::Binary,
    );
    let img = render(&job, &opts(3)).unwrap();
    let px = 3.0 / n as f64;
    for row in 0..n {
        for col in 0..n {
            let z = job.pixel_point(row, col);
            let m = img.pixels[(row * n + col) as usize].is_member();
            if (z.norm() - 1.0).abs() > px {
                assert_eq!(m, z.norm() < 1.0, "{z}");
            }
        }
    }
}

#[test]
fn ppm_header_and_size() {
    let job = RasterJob::new(Plane::ParameterAnti { degree: 2 }, Window { center: C64::default(), width: 4.0 }, 5, 3, 20, Coloring::Binary);
    let img = render(&job, &opts(2)).unwrap();
    let bytes = ppm_bytes(&img);
    assert!(bytes.starts_with(b"P6\n5 3\n255\n"));
    assert_eq!(bytes.len(), 11 + 5 * 3 * 3);
}

#[test]
fn zero_threads_is_a_configuration_error() {
    let job = tricorn_job(4, Coloring::Binary);
    let e = render(&job, &opts(0)).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}
