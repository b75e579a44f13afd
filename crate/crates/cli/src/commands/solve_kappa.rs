use std::path::PathBuf;

use bicons_core::characterize::{frak_a, frak_b, k_from_kappa, recover_params, KappaState};
use bicons_core::{integrate_kappa_ode, Error, KappaProfile};

use crate::config::{require, resolve, Config};
use crate::error::{CliError, CliResult};
use crate::logging;
use crate::output;

pub const HEADER: &str = "u,kappa,kappa_p,kappa_pp,kappa_ppp,frakA,frakB,K";

#[derive(clap::Args)]
pub struct Args {
    /// Initial level-curve curvature kappa(0) > 0
    #[arg(long, allow_negative_numbers = true)]
    kappa0: Option<f64>,

    /// Initial kappa'(0)
    #[arg(long = "kappa0-p", allow_negative_numbers = true)]
    kappa0_p: Option<f64>,

    /// Initial kappa''(0)
    #[arg(long = "kappa0-pp", allow_negative_numbers = true)]
    kappa0_pp: Option<f64>,

    /// Signed integration span
    #[arg(long = "u-span", allow_negative_numbers = true)]
    u_span: Option<f64>,

    /// Integration tolerance (rtol = atol)
    #[arg(long)]
    tol: Option<f64>,

    /// Output CSV path (written atomically)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn kappa_csv(profile: &KappaProfile) -> CliResult<String> {
    let mut rows = Vec::with_capacity(profile.samples.len());
    for s in &profile.samples {
        let state = KappaState::from(s);
        let a = frak_a(&state)?;
        let b = frak_b(&state)?;
        let k = k_from_kappa(s.kappa, s.kappa_p);
        rows.push(vec![s.u, s.kappa, s.kappa_p, s.kappa_pp, s.kappa_ppp, a, b, k]);
    }
    let mut footer = Vec::new();
    match recover_params(profile) {
        Ok(rec) => {
            footer.push(format!("recovered c_squared = {}", rec.c_squared));
            footer.push(format!("recovered C = {}", rec.big_c));
            for e in rec.report.entries() {
                footer.push(format!(
                    "{} = {:e} (tolerance {:e}, {})",
                    e.name,
                    e.value,
                    e.tolerance,
                    if e.pass { "pass" } else { "FAIL" }
                ));
            }
        }
        Err(e) => footer.push(format!("parameter recovery failed: {e}")),
    }
    if let Some(name) = profile.stopping_condition {
        footer.push(format!("stopped by event: {name}"));
    }
    Ok(output::csv_document(HEADER, &rows, &footer))
}

pub fn run(args: Args, cfg: &Config) -> CliResult<u8> {
    let kappa0 = require(resolve(args.kappa0, cfg.f64("kappa0")), "kappa0")?;
    let kappa0_p = require(resolve(args.kappa0_p, cfg.f64("kappa0-p")), "kappa0-p")?;
    let kappa0_pp = require(resolve(args.kappa0_pp, cfg.f64("kappa0-pp")), "kappa0-pp")?;
    let u_span = require(resolve(args.u_span, cfg.f64("u-span")), "u-span")?;
    let tol = resolve(args.tol, cfg.f64("tol")).unwrap_or(1e-10);
    let out = require(resolve(args.out, cfg.string("out").map(PathBuf::from)), "out")?;

    match integrate_kappa_ode(kappa0, kappa0_p, kappa0_pp, u_span, tol) {
        Ok(profile) => {
            logging::debug(format!("accepted {} steps", profile.steps));
            output::write_atomic(&out, &kappa_csv(&profile)?)?;
            logging::info(format!(
                "wrote {} ({} rows{})",
                out.display(),
                profile.samples.len(),
                profile
                    .stopping_condition
                    .map(|nm| format!(", stopped where {nm} failed"))
                    .unwrap_or_default()
            ));
            Ok(0)
        }
        Err(Error::KappaIntegration { reason, u, partial }) => {
            output::write_atomic(&out, &kappa_csv(&partial)?)?;
            Err(CliError::numeric(format!(
                "curvature integration failed at u = {u}: {reason} (partial output in {})",
                out.display()
            )))
        }
        Err(e) => Err(e.into()),
    }
}
