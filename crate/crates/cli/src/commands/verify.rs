use std::path::PathBuf;

use bicons_core::characterize::{condition_margins, kappa_chain_from_f, kappa_ode_residual};
use bicons_core::extrinsic::{build_frame, pde_residual, residuals_from_frame};
use bicons_core::geometry::{
    circle_check, gauss_curvature_analytic, gauss_curvature_fd, geodesic_curvature_v_curve,
    level_curve_curvature, Chart, ChartData,
};
use bicons_core::{integrate_f_ode, k_of_f, FProfile, FSample};

use crate::config::{require, resolve, Config};
use crate::error::{CliError, CliResult};
use crate::logging;
use crate::output;

#[derive(clap::Args)]
pub struct Args {
    /// Family parameter c (nonzero)
    #[arg(long = "c", allow_negative_numbers = true)]
    c: Option<f64>,

    /// Family parameter C
    #[arg(long = "C", allow_negative_numbers = true)]
    big_c: Option<f64>,

    /// Profile seed f(0), inside the admissible domain
    #[arg(long, allow_negative_numbers = true)]
    f0: Option<f64>,

    /// Number of profile states the battery is evaluated on
    #[arg(long = "n-samples")]
    n_samples: Option<usize>,

    /// Integration tolerance (rtol = atol)
    #[arg(long)]
    tol: Option<f64>,

    /// Optional path for the JSON report (also printed to stdout)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Fault injection: NAME in {gauss, pde, circle} and a relative size,
    /// e.g. --perturb gauss 1e-3. The named check must then fail (exit 1).
    #[arg(long, num_args = 2, value_names = ["NAME", "EPS"])]
    perturb: Option<Vec<String>>,
}

struct Perturbation {
    name: String,
    eps: f64,
}

fn parse_perturb(pair: Option<(String, String)>) -> CliResult<Option<Perturbation>> {
    let Some((name, eps)) = pair else { return Ok(None) };
    let eps: f64 = eps
        .parse()
        .map_err(|_| CliError::usage(format!("perturbation size {eps:?} is not a number")))?;
    if !matches!(name.as_str(), "gauss" | "pde" | "circle") {
        return Err(CliError::usage(format!(
            "unknown perturbation {name:?}; supported: gauss, pde, circle"
        )));
    }
    Ok(Some(Perturbation { name, eps }))
}

/// Evenly spaced subsample of the profile's accepted states.
fn subsample(profile: &FProfile, n: usize) -> Vec<FSample> {
    let m = profile.samples.len();
    if n == 0 || m <= n {
        return profile.samples.clone();
    }
    (0..n)
        .map(|i| profile.samples[i * (m - 1) / (n - 1)])
        .collect()
}

/// Geodesic curvature statistics of the v-circle through u0, measured by
/// metric differencing. `eps` adds a v-dependent term to g22, the honest
/// negative control (a v-independent rescaling would be invisible to any
/// intrinsic check).
fn circle_stats(profile: &FProfile, u0: f64, eps: f64) -> CliResult<(f64, f64)> {
    if eps == 0.0 {
        let rep = circle_check(profile, u0)?;
        let dev = rep.get("geodesic_curvature_deviation").expect("entry").value;
        let var = rep.get("geodesic_curvature_variation").expect("entry").value;
        return Ok((dev, var));
    }
    const N: usize = 32;
    const H: f64 = 1e-5;
    let s = profile.state_at(u0)?;
    let expected = level_curve_curvature(s.f, s.f_prime)?;
    let metric = |u: f64, v: f64| {
        let g = profile.f_at(u).map(|f| f.powf(-1.5)).unwrap_or(f64::NAN);
        (1.0, g + eps * v.sin())
    };
    let mut dev: f64 = 0.0;
    let mut kg_min = f64::INFINITY;
    let mut kg_max = f64::NEG_INFINITY;
    for j in 0..N {
        let v = 2.0 * std::f64::consts::PI * j as f64 / N as f64;
        let kg = geodesic_curvature_v_curve(&metric, u0, v, H)?;
        dev = dev.max((kg - expected).abs());
        kg_min = kg_min.min(kg);
        kg_max = kg_max.max(kg);
    }
    Ok((dev, kg_max - kg_min))
}

pub fn run(args: Args, cfg: &Config) -> CliResult<u8> {
    let params = super::params_from(args.c, args.big_c, cfg)?;
    let f0 = require(resolve(args.f0, cfg.f64("f0")), "f0")?;
    let n_samples = resolve(args.n_samples, cfg.usize("n-samples")).unwrap_or(64);
    // The battery tolerances (1e-10 on the PDE, 1e-9 on chart agreement)
    // presume states resolved beyond them; 1e-10 integration leaves ~2e-9
    // of state error and fails both, so verify defaults tighter than the
    // solvers do.
    let tol = resolve(args.tol, cfg.f64("tol")).unwrap_or(1e-11);
    let out = resolve(args.out, cfg.string("out").map(PathBuf::from));
    let perturb = parse_perturb(match args.perturb.as_deref() {
        Some([name, eps]) => Some((name.clone(), eps.clone())),
        Some(_) => return Err(CliError::usage("--perturb takes NAME and EPS")),
        None => cfg.string_pair("perturb"),
    })?;

    let c = params.c();
    let big_c = params.big_c();
    let gauss_eps = perturb.as_ref().filter(|p| p.name == "gauss").map_or(0.0, |p| p.eps);
    let pde_eps = perturb.as_ref().filter(|p| p.name == "pde").map_or(0.0, |p| p.eps);
    let circle_eps = perturb.as_ref().filter(|p| p.name == "circle").map_or(0.0, |p| p.eps);

    // One event-bounded trace each way from the seed; the forward leg stops
    // at the turning layer, the backward leg either covers a unit of arc or
    // stops at the f-floor.
    let back = integrate_f_ode(params, f0, -1.0, tol)?;
    let fwd = integrate_f_ode(params, f0, 10.0, tol)?;
    let profile = FProfile::stitch(&back, &fwd)?;
    let states = subsample(&profile, n_samples);
    logging::debug(format!(
        "battery over {} states, u in [{}, {}]",
        states.len(),
        profile.u_range().0,
        profile.u_range().1
    ));

    let mut gauss: f64 = 0.0;
    let mut codazzi_e3: f64 = 0.0;
    let mut codazzi_e4: f64 = 0.0;
    let mut ricci: f64 = 0.0;
    let mut bicons: f64 = 0.0;
    let mut pde: f64 = 0.0;
    let mut chain: f64 = 0.0;
    let mut chart: f64 = 0.0;
    let mut violation: f64 = 0.0;
    for s in &states {
        let (mut ops, _) = build_frame(s.f, c)?;
        ops.a3[0][0] *= 1.0 + gauss_eps;
        let rep = residuals_from_frame(&ops, s.f_prime)?;
        gauss = gauss.max(rep.get("gauss").expect("entry").value.abs());
        codazzi_e3 = codazzi_e3.max(rep.get("codazzi_e3").expect("entry").value.abs());
        codazzi_e4 = codazzi_e4.max(rep.get("codazzi_e4").expect("entry").value.abs());
        ricci = ricci.max(rep.get("ricci").expect("entry").value.abs());
        bicons = bicons.max(rep.get("biconservativity").expect("entry").value.abs());

        // grad f = f' E1, positive-Laplacian convention
        let lap = (-s.f_double_prime + 0.75 * s.f_prime * s.f_prime / s.f) * (1.0 + pde_eps);
        pde = pde.max(pde_residual(s.f, s.f_prime, lap, c)?.abs());

        let state = kappa_chain_from_f(s.f, s.f_prime, c, big_c)?;
        chain = chain.max(kappa_ode_residual(&state)?.scaled.abs());
        for m in condition_margins(state.kappa, state.kappa_p, state.kappa_pp) {
            violation = violation.max(-m);
        }

        let k_route = gauss_curvature_analytic(s.f, s.f_prime, s.f_double_prime)?;
        chart = chart.max((k_route - k_of_f(s.f, c)?).abs());
    }
    violation = violation.max(0.0);

    // FD curvature and circle probes need stencil room inside the u-range;
    // the 4h inset keeps the outermost +-2h stencil strictly interior even
    // after roundoff in the probe positions.
    let (u_lo, u_hi) = profile.u_range();
    let h = 5e-4;
    let probes: Vec<f64> = (0..7)
        .map(|i| u_lo + 4.0 * h + (u_hi - u_lo - 8.0 * h) * i as f64 / 6.0)
        .collect();
    let data = ChartData::U(&profile);
    let mut chart_fd: f64 = 0.0;
    for &u in &probes {
        let s = profile.state_at(u)?;
        let k_ref = gauss_curvature_analytic(s.f, s.f_prime, s.f_double_prime)?;
        chart_fd = chart_fd.max((gauss_curvature_fd(Chart::U, (u, 0.0), &data, h)? - k_ref).abs());
    }
    let mut circle_dev: f64 = 0.0;
    let mut circle_var: f64 = 0.0;
    for &u in &[probes[1], probes[3], probes[5]] {
        let (dev, var) = circle_stats(&profile, u, circle_eps)?;
        circle_dev = circle_dev.max(dev);
        circle_var = circle_var.max(var);
    }

    let entry = |max_abs: f64, tolerance: f64| {
        serde_json::json!({
            "max_abs": max_abs,
            "tolerance": tolerance,
            "pass": max_abs.is_finite() && max_abs <= tolerance,
        })
    };
    // serde_json maps are BTree-backed, so keys serialize sorted.
    let report = serde_json::json!({
        "gauss": entry(gauss, 1e-12),
        "codazzi_e3": entry(codazzi_e3, 1e-12),
        "codazzi_e4": entry(codazzi_e4, 1e-12),
        "ricci": entry(ricci, 1e-12),
        "biconservativity": entry(bicons, 1e-12),
        "pde": entry(pde, 1e-10),
        "kappa_chain": entry(chain, 1e-8),
        "conditions_violation": entry(violation, 0.0),
        "chart_agreement": entry(chart, 1e-9),
        "chart_agreement_fd": entry(chart_fd, 1e-5),
        "circle_geodesic_deviation": entry(circle_dev, 1e-9),
        "circle_geodesic_variation": entry(circle_var, 1e-12),
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes"));
    output::print_text(&text);
    if let Some(path) = out {
        output::write_atomic(&path, &text)?;
        logging::info(format!("wrote {}", path.display()));
    }

    let all_pass = report
        .as_object()
        .expect("object")
        .values()
        .all(|e| e["pass"].as_bool() == Some(true));
    Ok(if all_pass { 0 } else { 1 })
}
