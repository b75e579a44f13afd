pub mod family_info;
pub mod isometry;
pub mod plot;
pub mod solve_f;
pub mod solve_kappa;
pub mod sweep;
pub mod verify;

use bicons_core::FamilyParams;

use crate::config::{require, resolve, Config};
use crate::error::CliResult;

/// Builds family parameters from a (flag, config) pair for `--c`/`--C`.
/// Validation errors from the core map to exit code 2.
pub fn params_from(
    c_flag: Option<f64>,
    big_c_flag: Option<f64>,
    cfg: &Config,
) -> CliResult<FamilyParams> {
    let c = require(resolve(c_flag, cfg.f64("c")), "c")?;
    let big_c = require(resolve(big_c_flag, cfg.f64("C")), "C")?;
    Ok(FamilyParams::new(c, big_c)?)
}
