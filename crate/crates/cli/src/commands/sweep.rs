use std::path::PathBuf;

use bicons_core::{k_of_f, FamilyParams};
use rayon::prelude::*;

use crate::config::{require, resolve, Config};
use crate::error::{CliError, CliResult};
use crate::logging;
use crate::output;

pub const HEADER: &str = "c,C,f_max,K_min";

#[derive(clap::Args)]
pub struct Args {
    /// Smallest c grid value
    #[arg(long = "c-min", allow_negative_numbers = true)]
    c_min: Option<f64>,

    /// Largest c grid value
    #[arg(long = "c-max", allow_negative_numbers = true)]
    c_max: Option<f64>,

    /// Number of c grid points (>= 1)
    #[arg(long = "c-steps")]
    c_steps: Option<usize>,

    /// Smallest C grid value
    #[arg(long = "C-min", allow_negative_numbers = true)]
    big_c_min: Option<f64>,

    /// Largest C grid value
    #[arg(long = "C-max", allow_negative_numbers = true)]
    big_c_max: Option<f64>,

    /// Number of C grid points (>= 1)
    #[arg(long = "C-steps")]
    big_c_steps: Option<usize>,

    /// Output CSV path (written atomically)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

pub fn run(args: Args, cfg: &Config) -> CliResult<u8> {
    let c_min = require(resolve(args.c_min, cfg.f64("c-min")), "c-min")?;
    let c_max = require(resolve(args.c_max, cfg.f64("c-max")), "c-max")?;
    let c_steps = require(resolve(args.c_steps, cfg.usize("c-steps")), "c-steps")?;
    let b_min = require(resolve(args.big_c_min, cfg.f64("C-min")), "C-min")?;
    let b_max = require(resolve(args.big_c_max, cfg.f64("C-max")), "C-max")?;
    let b_steps = require(resolve(args.big_c_steps, cfg.usize("C-steps")), "C-steps")?;
    let out = require(resolve(args.out, cfg.string("out").map(PathBuf::from)), "out")?;

    let c_values = linspace(c_min, c_max, c_steps);
    let b_values = linspace(b_min, b_max, b_steps);
    if c_values.is_empty() || b_values.is_empty() {
        return Err(CliError::usage("empty grid: both step counts must be >= 1"));
    }
    if let Some(zero) = c_values.iter().find(|c| **c == 0.0) {
        return Err(CliError::usage(format!("grid contains c = {zero}; c must be nonzero")));
    }

    let mut points = Vec::with_capacity(c_values.len() * b_values.len());
    for &c in &c_values {
        for &b in &b_values {
            points.push((c, b));
        }
    }
    // Independent per-point work; collect preserves input order.
    let rows: Vec<[f64; 4]> = points
        .par_iter()
        .map(|&(c, b)| -> CliResult<[f64; 4]> {
            let params = FamilyParams::new(c, b)?;
            let f_max = params.f_max()?;
            let k_min = k_of_f(f_max, c)?;
            Ok([c, b, f_max, k_min])
        })
        .collect::<CliResult<Vec<_>>>()?;

    // Already generated in lexicographic (c, C) order; the sort states the
    // output contract rather than trusting construction order.
    let mut rows = rows;
    rows.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .expect("finite grid values")
            .then(a[1].partial_cmp(&b[1]).expect("finite grid values"))
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.to_vec()).collect();
    output::write_atomic(&out, &output::csv_document(HEADER, &rows, &[]))?;
    logging::info(format!("wrote {} ({} grid points)", out.display(), rows.len()));
    Ok(0)
}
