//! Row-parallel rendering with deterministic assembly and an optional
//! wall-clock budget.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use multicorn_core::raster::{self, RasterJob, RasterResult, Sample};
use multicorn_core::renorm::{self, RenormWindow};
use rayon::prelude::*;

use crate::LabError;

/// Environment variable consulted when no worker count is given.
pub const THREADS_ENV: &str = "MULTICORN_LAB_THREADS";

#[derive(Clone, Copy, Debug, Default)]
pub struct RenderOptions {
    /// Worker count; `None` falls back to [`THREADS_ENV`], then to rayon's default.
    pub threads: Option<usize>,
    pub budget: Option<Duration>,
}

pub fn resolve_threads(explicit: Option<usize>) -> Result<usize, LabError> {
    if let Some(n) = explicit {
        return if n == 0 { Err(LabError::Config("threads must be at least 1".into())) } else { Ok(n) };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(LabError::Config(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(rayon::current_num_threads()),
    }
}

fn run_rows<F>(job: &RasterJob, opts: &RenderOptions, row: F) -> Result<RasterResult, LabError>
where
    F: Fn(u32) -> Vec<Sample> + Sync,
{
    job.validate()?;
    let threads = resolve_threads(opts.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let over = AtomicBool::new(false);
    let rows: Vec<Option<Vec<Sample>>> = pool.install(|| {
        (0..job.height)
            .into_par_iter()
            .map(|r| {
                if let Some(b) = opts.budget {
                    if over.load(Ordering::Relaxed) || start.elapsed() > b {
                        over.store(true, Ordering::Relaxed);
                        return None;
                    }
                }
                Some(row(r))
            })
            .collect()
    });
    let elapsed = start.elapsed();
    if over.load(Ordering::Relaxed) {
        return Err(LabError::BudgetExceeded { elapsed_secs: elapsed.as_secs_f64() });
    }
    let pixels = rows.into_iter().flatten().flatten().collect();
    Ok(RasterResult { job: *job, pixels, elapsed_secs: elapsed.as_secs_f64() })
}

/// Render a parameter or dynamical plane.
pub fn render(job: &RasterJob, opts: &RenderOptions) -> Result<RasterResult, LabError> {
    run_rows(job, opts, |r| raster::render_row(job, r))
}

/// Render the baby set of a renormalization window over `job`'s box.
pub fn render_baby(window: &RenormWindow, job: &RasterJob, opts: &RenderOptions) -> Result<RasterResult, LabError> {
    run_rows(job, opts, |r| renorm::render_baby_row(window, job, r))
}
