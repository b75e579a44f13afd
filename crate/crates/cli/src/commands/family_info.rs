use bicons_core::k_of_f;

use crate::config::Config;
use crate::error::CliResult;
use crate::logging;
use crate::output::print_line;

#[derive(clap::Args)]
pub struct Args {
    /// Family parameter c (nonzero; the sign is quotiented away)
    #[arg(long = "c", allow_negative_numbers = true)]
    c: Option<f64>,

    /// Family parameter C
    #[arg(long = "C", allow_negative_numbers = true)]
    big_c: Option<f64>,
}

pub fn run(args: Args, cfg: &Config) -> CliResult<u8> {
    let params = super::params_from(args.c, args.big_c, cfg)?;
    logging::debug(format!(
        "canonical parameters: c = {}, C = {}",
        params.c(),
        params.big_c()
    ));
    let domain = params.admissible_domain()?;
    let k_top = k_of_f(domain.f_hi, params.c())?;

    if params.c_was_negative() {
        print_line(format!(
            "c = {} (canonicalized from {}; members with c and -c are isometric), C = {}",
            params.c(),
            -params.c(),
            params.big_c()
        ));
    } else {
        print_line(format!("c = {}, C = {}", params.c(), params.big_c()));
    }
    print_line(format!("f_max = {}", domain.f_hi));
    print_line(format!(
        "admissible domain: {} < f < {} (width positive: {})",
        domain.f_lo, domain.f_hi, domain.width_positive
    ));
    // K = -1 - 3f^2 - c^2 f^3 decreases in f: the infimum sits at f_max and
    // the supremum -1 is approached (never attained) as f -> 0+.
    print_line(format!("K range: {k_top} <= K < -1"));
    Ok(0)
}
