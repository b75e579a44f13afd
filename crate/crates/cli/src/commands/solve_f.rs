use std::path::PathBuf;

use bicons_core::geometry::{gauss_curvature_analytic, level_curve_curvature};
use bicons_core::{first_integral_c, integrate_f_ode, Error, FProfile};

use crate::config::{require, resolve, Config};
use crate::error::{CliError, CliResult};
use crate::logging;
use crate::output;

pub const HEADER: &str = "u,f,f_prime,f_double_prime,K,kappa,first_integral_C";

#[derive(clap::Args)]
pub struct Args {
    /// Family parameter c (nonzero)
    #[arg(long = "c", allow_negative_numbers = true)]
    c: Option<f64>,

    /// Family parameter C
    #[arg(long = "C", allow_negative_numbers = true)]
    big_c: Option<f64>,

    /// Initial profile value f(0), inside the admissible domain
    #[arg(long, allow_negative_numbers = true)]
    f0: Option<f64>,

    /// Signed integration span (negative integrates backward; 0 emits one row)
    #[arg(long = "u-span", allow_negative_numbers = true)]
    u_span: Option<f64>,

    /// Integration tolerance (rtol = atol)
    #[arg(long)]
    tol: Option<f64>,

    /// Output CSV path (written atomically)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn profile_csv(profile: &FProfile) -> CliResult<String> {
    let c = profile.params.c();
    let mut rows = Vec::with_capacity(profile.samples.len());
    for s in &profile.samples {
        let k = gauss_curvature_analytic(s.f, s.f_prime, s.f_double_prime)?;
        let kappa = level_curve_curvature(s.f, s.f_prime)?;
        let big_c = first_integral_c(s.f, s.f_prime, c)?;
        rows.push(vec![s.u, s.f, s.f_prime, s.f_double_prime, k, kappa, big_c]);
    }
    let mut footer = Vec::new();
    if profile.stopped_by_event {
        footer.push("stopped by event before the requested span".to_owned());
    }
    Ok(output::csv_document(HEADER, &rows, &footer))
}

pub fn run(args: Args, cfg: &Config) -> CliResult<u8> {
    let params = super::params_from(args.c, args.big_c, cfg)?;
    let f0 = require(resolve(args.f0, cfg.f64("f0")), "f0")?;
    let u_span = require(resolve(args.u_span, cfg.f64("u-span")), "u-span")?;
    let tol = resolve(args.tol, cfg.f64("tol")).unwrap_or(1e-10);
    let out = require(resolve(args.out, cfg.string("out").map(PathBuf::from)), "out")?;

    match integrate_f_ode(params, f0, u_span, tol) {
        Ok(profile) => {
            logging::debug(format!(
                "accepted {} steps, first-integral drift {:e}, constraint residual {:e}",
                profile.steps, profile.first_integral_drift, profile.constraint_residual
            ));
            output::write_atomic(&out, &profile_csv(&profile)?)?;
            logging::info(format!(
                "wrote {} ({} rows{})",
                out.display(),
                profile.samples.len(),
                if profile.stopped_by_event { ", stopped by event" } else { "" }
            ));
            Ok(0)
        }
        // Keep whatever the integrator accepted: a truncated trace is far
        // more useful for diagnosis than an empty file.
        Err(Error::FIntegration { reason, u, partial }) => {
            output::write_atomic(&out, &profile_csv(&partial)?)?;
            Err(CliError::numeric(format!(
                "profile integration failed at u = {u}: {reason} (partial output in {})",
                out.display()
            )))
        }
        Err(e) => Err(e.into()),
    }
}
