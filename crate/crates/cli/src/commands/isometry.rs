use bicons_core::isometry::classify;
use bicons_core::FamilyParams;

use crate::config::{require, resolve, Config};
use crate::error::CliResult;
use crate::logging;

#[derive(clap::Args)]
pub struct Args {
    /// First member: parameter c
    #[arg(long = "c1", allow_negative_numbers = true)]
    c1: Option<f64>,

    /// First member: parameter C
    #[arg(long = "C1", allow_negative_numbers = true)]
    big_c1: Option<f64>,

    /// Second member: parameter c
    #[arg(long = "c2", allow_negative_numbers = true)]
    c2: Option<f64>,

    /// Second member: parameter C
    #[arg(long = "C2", allow_negative_numbers = true)]
    big_c2: Option<f64>,
}

pub fn run(args: Args, cfg: &Config) -> CliResult<u8> {
    let c1 = require(resolve(args.c1, cfg.f64("c1")), "c1")?;
    let big_c1 = require(resolve(args.big_c1, cfg.f64("C1")), "C1")?;
    let c2 = require(resolve(args.c2, cfg.f64("c2")), "c2")?;
    let big_c2 = require(resolve(args.big_c2, cfg.f64("C2")), "C2")?;
    let first = FamilyParams::new(c1, big_c1)?;
    let second = FamilyParams::new(c2, big_c2)?;

    let verdict = classify(&first, &second);
    logging::debug(format!(
        "canonical pairs: ({}, {}) vs ({}, {})",
        first.c(),
        first.big_c(),
        second.c(),
        second.big_c()
    ));
    if verdict.isometric {
        crate::output::print_line("ISOMETRIC (v -> ±v + b)");
        Ok(0)
    } else {
        crate::output::print_line("NOT ISOMETRIC");
        Ok(1)
    }
}
