//! Intrinsic geometry of the profile metrics in three coordinate charts,
//! plus finite-difference cross-checks that treat the metric as a black box.
//!
//! All three charts carry diagonal metrics whose components depend only on
//! the first coordinate:
//!   U:     du^2 + f(u)^(-3/2) dv^2          (needs an f-profile)
//!   F:     df^2 / P(f) + f^(-3/2) dv^2      (needs only the parameters)
//!   Kappa: du^2 + exp(-2 int_0^u kappa) dv^2 (needs a kappa-profile)

use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::odeflow::{FProfile, KappaProfile};
use crate::report::ResidualReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    U,
    F,
    Kappa,
}

/// Backing data for a chart; the variant must match the chart passed
/// alongside it.
#[derive(Debug, Clone, Copy)]
pub enum ChartData<'a> {
    U(&'a FProfile),
    F(&'a FamilyParams),
    Kappa(&'a KappaProfile),
}

#[derive(Debug, Clone, Copy)]
pub struct MetricComponents {
    pub chart: Chart,
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

/// The six independent Christoffel symbols in a 2d chart with coordinates
/// (x, y), where x is u or f and y is v.
#[derive(Debug, Clone, Copy)]
pub struct ChristoffelSymbols {
    pub chart: Chart,
    pub x_xx: f64,
    pub x_xy: f64,
    pub x_yy: f64,
    pub y_xx: f64,
    pub y_xy: f64,
    pub y_yy: f64,
}

fn check_pair(chart: Chart, data: &ChartData) -> Result<()> {
    let ok = matches!(
        (chart, data),
        (Chart::U, ChartData::U(_)) | (Chart::F, ChartData::F(_)) | (Chart::Kappa, ChartData::Kappa(_))
    );
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "chart {chart:?} does not match the supplied data variant"
        )))
    }
}

/// Metric components (E, 0, G) at x = first coordinate of `point`; the
/// second coordinate is accepted for interface uniformity but never enters.
fn metric_xx(chart: Chart, x: f64, data: &ChartData) -> Result<(f64, f64)> {
    match (chart, data) {
        (Chart::U, ChartData::U(profile)) => {
            let f = profile.f_at(x)?;
            Ok((1.0, f.powf(-1.5)))
        }
        (Chart::F, ChartData::F(params)) => {
            let p = params.potential_p(x)?;
            if !(p > 0.0) {
                return Err(Error::Domain(format!(
                    "metric degenerate: P(f) = {p:e} <= 0 at f = {x}"
                )));
            }
            Ok((1.0 / p, x.powf(-1.5)))
        }
        (Chart::Kappa, ChartData::Kappa(profile)) => {
            let j = profile.kappa_integral_from_zero(x)?;
            Ok((1.0, (-2.0 * j).exp()))
        }
        _ => Err(Error::Precondition(format!(
            "chart {chart:?} does not match the supplied data variant"
        ))),
    }
}

pub fn metric_at(chart: Chart, point: (f64, f64), data: &ChartData) -> Result<MetricComponents> {
    check_pair(chart, data)?;
    let (g11, g22) = metric_xx(chart, point.0, data)?;
    Ok(MetricComponents {
        chart,
        g11,
        g12: 0.0,
        g22,
    })
}

pub fn christoffel(chart: Chart, point: (f64, f64), data: &ChartData) -> Result<ChristoffelSymbols> {
    check_pair(chart, data)?;
    let x = point.0;
    let (x_xx, x_yy, y_xy) = match (chart, data) {
        (Chart::U, ChartData::U(profile)) => {
            let s = profile.state_at(x)?;
            let r = 0.75 * s.f_prime / s.f;
            (0.0, 0.75 * s.f_prime * s.f.powf(-2.5), -r)
        }
        (Chart::F, ChartData::F(params)) => {
            let p = params.potential_p(x)?;
            if !(p > 0.0) {
                return Err(Error::Domain(format!(
                    "metric degenerate: P(f) = {p:e} <= 0 at f = {x}"
                )));
            }
            let pp = params.potential_p_prime_unchecked(x);
            (-pp / (2.0 * p), 0.75 * p * x.powf(-2.5), -0.75 / x)
        }
        (Chart::Kappa, ChartData::Kappa(profile)) => {
            let kappa = profile.kappa_at(x)?;
            let j = profile.kappa_integral_from_zero(x)?;
            (0.0, kappa * (-2.0 * j).exp(), -kappa)
        }
        _ => unreachable!("variant checked above"),
    };
    Ok(ChristoffelSymbols {
        chart,
        x_xx,
        x_xy: 0.0,
        x_yy,
        y_xx: 0.0,
        y_xy,
        y_yy: 0.0,
    })
}

/// K = (12 f f'' - 21 f'^2) / (16 f^2), the closed form of the Gauss
/// curvature of du^2 + f^(-3/2) dv^2.
pub fn gauss_curvature_analytic(f: f64, f_prime: f64, f_double_prime: f64) -> Result<f64> {
    if !(f > 0.0) {
        return Err(Error::Domain(format!(
            "curvature requires f > 0, got f = {f}"
        )));
    }
    Ok((12.0 * f * f_double_prime - 21.0 * f_prime * f_prime) / (16.0 * f * f))
}

/// Gauss curvature by pure metric sampling: for a diagonal metric whose
/// components depend on x only,
///   K = -1/(2 sqrt(EG)) d/dx ( G_x / sqrt(EG) ),
/// realized as nested central differences on a +-2h stencil.
pub fn gauss_curvature_fd(chart: Chart, point: (f64, f64), data: &ChartData, h: f64) -> Result<f64> {
    check_pair(chart, data)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Precondition(format!("step must be positive, got {h}")));
    }
    let x = point.0;
    // fail fast with one message if the stencil leaves the chart domain
    let domain_ok = match (chart, data) {
        (Chart::U, ChartData::U(profile)) => {
            let (lo, hi) = profile.u_range();
            x - 2.0 * h >= lo && x + 2.0 * h <= hi
        }
        (Chart::F, ChartData::F(params)) => {
            x - 2.0 * h > 0.0 && params.potential_p_unchecked(x + 2.0 * h) > 0.0
        }
        (Chart::Kappa, ChartData::Kappa(profile)) => {
            let (lo, hi) = profile.u_range();
            x - 2.0 * h >= lo && x + 2.0 * h <= hi
        }
        _ => unreachable!("variant checked above"),
    };
    if !domain_ok {
        return Err(Error::Precondition(format!(
            "FD stencil [{} , {}] leaves the chart domain",
            x - 2.0 * h,
            x + 2.0 * h
        )));
    }
    let m = |xi: f64| metric_xx(chart, xi, data);
    let phi = |xi: f64| -> Result<f64> {
        let (e, g) = m(xi)?;
        let (_, gp) = m(xi + h)?;
        let (_, gm) = m(xi - h)?;
        Ok((gp - gm) / (2.0 * h) / (e * g).sqrt())
    };
    let (e0, g0) = m(x)?;
    Ok(-(phi(x + h)? - phi(x - h)?) / (2.0 * h) / (2.0 * (e0 * g0).sqrt()))
}

/// Geodesic curvature of the curves {f = const} (equivalently {u = const},
/// the level curves of K): kappa = (3/4) f'/f.
pub fn level_curve_curvature(f: f64, f_prime: f64) -> Result<f64> {
    if !(f > 0.0) {
        return Err(Error::Domain(format!(
            "level curve curvature requires f > 0, got f = {f}"
        )));
    }
    if !(f_prime > 0.0) {
        return Err(Error::Domain(format!(
            "level curve curvature requires f' > 0, got f' = {f_prime}"
        )));
    }
    Ok(0.75 * f_prime / f)
}

/// Recover kappa from curvature data alone:
/// kappa = -(1/4) |grad K| / (K + f^2 + 1). The denominator is negative on
/// every admissible state (it equals -2f^2 - c^2 f^3); a nonnegative value
/// means the inputs do not come from one surface of the family.
pub fn kappa_from_k(k: f64, grad_k_norm: f64, f: f64) -> Result<f64> {
    let denom = k + f * f + 1.0;
    if !(denom < 0.0) {
        return Err(Error::Inconsistent(format!(
            "K + f^2 + 1 = {denom:e} must be negative for family data"
        )));
    }
    Ok(-0.25 * grad_k_norm / denom)
}

/// Geodesic curvature of the parametrized curve v -> (u0, v) at v, computed
/// from metric evaluations only (central differences with step h), with the
/// normal oriented along +d/du. Works for any diagonal metric (E, G) given
/// as a closure; no v-independence is assumed: the acceleration is projected
/// onto the unit normal, and since g12 = 0 the tangential Christoffel terms
/// never enter the projection.
pub fn geodesic_curvature_v_curve(
    g: &impl Fn(f64, f64) -> (f64, f64),
    u0: f64,
    v: f64,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Precondition(format!("step must be positive, got {h}")));
    }
    let (e, g0) = g(u0, v);
    let (_, gp) = g(u0 + h, v);
    let (_, gm) = g(u0 - h, v);
    if !(e > 0.0 && g0 > 0.0 && gp > 0.0 && gm > 0.0) {
        return Err(Error::Domain(
            "metric must be positive definite on the stencil".into(),
        ));
    }
    // <nabla_T T, N> with T = dv/sqrt(G), N = du/sqrt(E):
    // kappa_g = -G_u / (2 sqrt(E) G)
    let gu = (gp - gm) / (2.0 * h);
    Ok(-gu / (2.0 * e.sqrt() * g0))
}

/// "Circles look like circles": sample the v-curve through u0 at 32 points,
/// measure its geodesic curvature by pure metric differencing, and compare
/// with the closed form (3/4) f'/f. Reported entries:
/// geodesic_curvature_deviation (max |measured - closed form|, tol 1e-9) and
/// geodesic_curvature_variation (max - min over the samples, tol 1e-12).
pub fn circle_check(profile: &FProfile, u0: f64) -> Result<ResidualReport> {
    const N: usize = 32;
    const H: f64 = 1e-5;
    let (lo, hi) = profile.u_range();
    if !(u0 - H >= lo && u0 + H <= hi) {
        return Err(Error::Precondition(format!(
            "u0 = {u0} is closer than {H} to the profile boundary [{lo}, {hi}]"
        )));
    }
    let s = profile.state_at(u0)?;
    let expected = level_curve_curvature(s.f, s.f_prime)?;
    let metric = |u: f64, _v: f64| -> (f64, f64) {
        // u stays within [u0 - H, u0 + H], checked above
        (1.0, profile.f_at(u).map(|f| f.powf(-1.5)).unwrap_or(f64::NAN))
    };
    let mut max_dev: f64 = 0.0;
    let mut kg_min = f64::INFINITY;
    let mut kg_max = f64::NEG_INFINITY;
    for j in 0..N {
        let v = 2.0 * std::f64::consts::PI * j as f64 / N as f64;
        let kg = geodesic_curvature_v_curve(&metric, u0, v, H)?;
        max_dev = max_dev.max((kg - expected).abs());
        kg_min = kg_min.min(kg);
        kg_max = kg_max.max(kg);
    }
    let mut report = ResidualReport::new();
    report.push_residual("geodesic_curvature_deviation", max_dev, 1e-9);
    report.push_residual("geodesic_curvature_variation", kg_max - kg_min, 1e-12);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::k_of_f;
    use crate::odeflow::{integrate_f_ode, integrate_kappa_ode, FProfile, KappaProfile};

    const BIG_C: f64 = 80.0 / 9.0;

    fn params() -> FamilyParams {
        FamilyParams::new(1.0, BIG_C).unwrap()
    }

    fn f_profile() -> FProfile {
        let back = integrate_f_ode(params(), 1.0, -0.5, 1e-11).unwrap();
        let fwd = integrate_f_ode(params(), 1.0, 0.5, 1e-11).unwrap();
        FProfile::stitch(&back, &fwd).unwrap()
    }

    #[test]
    fn metric_components_at_the_reference_point() {
        let prof = f_profile();
        let m = metric_at(Chart::U, (0.0, 0.3), &ChartData::U(&prof)).unwrap();
        assert!((m.g11 - 1.0).abs() < 1e-14);
        assert!((m.g22 - 1.0).abs() < 1e-9);
        assert_eq!(m.g12, 0.0);

        let p = params();
        let m = metric_at(Chart::F, (1.0, 0.0), &ChartData::F(&p)).unwrap();
        assert!((m.g11 - 9.0 / 16.0).abs() < 1e-14);
        assert!((m.g22 - 1.0).abs() < 1e-14);

        let kprof = integrate_kappa_ode(1.0, -4.0, -20.0, -0.5, 1e-11).unwrap();
        let m = metric_at(Chart::Kappa, (0.0, 0.0), &ChartData::Kappa(&kprof)).unwrap();
        assert!((m.g11 - 1.0).abs() < 1e-14);
        assert!((m.g22 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chart_data_mismatch_is_rejected() {
        let p = params();
        assert!(matches!(
            metric_at(Chart::U, (0.0, 0.0), &ChartData::F(&p)),
            Err(crate::error::Error::Precondition(_))
        ));
        assert!(christoffel(Chart::Kappa, (0.0, 0.0), &ChartData::F(&p)).is_err());
        assert!(gauss_curvature_fd(Chart::F, (1.0, 0.0), &ChartData::F(&p), -1e-3).is_err());
    }

    #[test]
    fn christoffel_reference_values() {
        let prof = f_profile();
        let ch = christoffel(Chart::U, (0.0, 0.0), &ChartData::U(&prof)).unwrap();
        assert!((ch.x_yy - 1.0).abs() < 1e-9, "Gamma^u_vv = {}", ch.x_yy);
        assert!((ch.y_xy + 1.0).abs() < 1e-9, "Gamma^v_uv = {}", ch.y_xy);
        assert_eq!(ch.x_xx, 0.0);

        let p = params();
        let ch = christoffel(Chart::F, (1.0, 0.0), &ChartData::F(&p)).unwrap();
        assert!((ch.x_xx - 2.0).abs() < 1e-13, "Gamma^f_ff = {}", ch.x_xx);
        assert!((ch.x_yy - 4.0 / 3.0).abs() < 1e-13, "Gamma^f_vv = {}", ch.x_yy);
        assert!((ch.y_xy + 0.75).abs() < 1e-13, "Gamma^v_fv = {}", ch.y_xy);

        let kprof = integrate_kappa_ode(1.0, -4.0, -20.0, -0.5, 1e-11).unwrap();
        let ch = christoffel(Chart::Kappa, (0.0, 0.0), &ChartData::Kappa(&kprof)).unwrap();
        assert!((ch.x_yy - 1.0).abs() < 1e-11);
        assert!((ch.y_xy + 1.0).abs() < 1e-11);
    }

    #[test]
    fn christoffel_matches_the_fd_oracle_in_every_chart() {
        // for a diagonal metric depending on x only:
        // G^x_xx = E_x/(2E), G^x_yy = -G_x/(2E), G^y_xy = G_x/(2G)
        let h = 1e-4;
        let prof = f_profile();
        let p = params();
        let kprof = integrate_kappa_ode(1.0, -4.0, -20.0, -0.5, 1e-11).unwrap();
        let cases: [(Chart, ChartData, f64); 3] = [
            (Chart::U, ChartData::U(&prof), 0.1),
            (Chart::F, ChartData::F(&p), 0.9),
            (Chart::Kappa, ChartData::Kappa(&kprof), -0.1),
        ];
        for (chart, data, x) in cases {
            let ch = christoffel(chart, (x, 0.0), &data).unwrap();
            let (e0, g0) = metric_xx(chart, x, &data).unwrap();
            let (ep, gp) = metric_xx(chart, x + h, &data).unwrap();
            let (em, gm) = metric_xx(chart, x - h, &data).unwrap();
            let ex = (ep - em) / (2.0 * h);
            let gx = (gp - gm) / (2.0 * h);
            assert!((ch.x_xx - ex / (2.0 * e0)).abs() < 1e-6, "{chart:?} x_xx");
            assert!((ch.x_yy + gx / (2.0 * e0)).abs() < 1e-6, "{chart:?} x_yy");
            assert!((ch.y_xy - gx / (2.0 * g0)).abs() < 1e-6, "{chart:?} y_xy");
            assert_eq!(ch.x_xy, 0.0);
            assert_eq!(ch.y_xx, 0.0);
            assert_eq!(ch.y_yy, 0.0);
        }
    }

    #[test]
    fn analytic_curvature_values() {
        let k = gauss_curvature_analytic(1.0, 4.0 / 3.0, -32.0 / 9.0).unwrap();
        assert!((k + 5.0).abs() < 1e-12);
        assert_eq!(gauss_curvature_analytic(1.0, 0.0, 0.0).unwrap(), 0.0);
        assert!(gauss_curvature_analytic(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn analytic_curvature_agrees_with_the_cubic_along_a_profile() {
        let prof = f_profile();
        for s in &prof.samples {
            let ka = gauss_curvature_analytic(s.f, s.f_prime, s.f_double_prime).unwrap();
            let kc = k_of_f(s.f, prof.params.c()).unwrap();
            assert!((ka - kc).abs() < 1e-9, "u = {}: {ka} vs {kc}", s.u);
        }
    }

    #[test]
    fn fd_curvature_agrees_in_all_three_charts() {
        let h = 1e-3;
        let prof = f_profile();
        let k = gauss_curvature_fd(Chart::U, (0.0, 0.0), &ChartData::U(&prof), h).unwrap();
        assert!((k + 5.0).abs() < 1e-4, "U chart: {k}");

        let p = params();
        let k = gauss_curvature_fd(Chart::F, (1.0, 0.0), &ChartData::F(&p), h).unwrap();
        assert!((k + 5.0).abs() < 1e-4, "F chart: {k}");

        let back = integrate_kappa_ode(1.0, -4.0, -20.0, -0.5, 1e-11).unwrap();
        let fwd = integrate_kappa_ode(1.0, -4.0, -20.0, 0.1, 1e-11).unwrap();
        let kprof = KappaProfile::stitch(&back, &fwd).unwrap();
        let k = gauss_curvature_fd(Chart::Kappa, (0.0, 0.0), &ChartData::Kappa(&kprof), h).unwrap();
        assert!((k + 5.0).abs() < 1e-4, "Kappa chart: {k}");
    }

    #[test]
    fn fd_curvature_error_scales_at_second_order() {
        let p = params();
        let data = ChartData::F(&p);
        let exact = k_of_f(0.9, 1.0).unwrap();
        let err = |h: f64| {
            (gauss_curvature_fd(Chart::F, (0.9, 0.0), &data, h).unwrap() - exact).abs()
        };
        let ratio = err(2e-3) / err(1e-3);
        assert!((3.0..5.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn fd_stencil_domain_is_enforced() {
        let p = params();
        // f - 2h <= 0
        assert!(gauss_curvature_fd(Chart::F, (1e-4, 0.0), &ChartData::F(&p), 1e-3).is_err());
        // P(f + 2h) <= 0 near f_max
        let fm = p.f_max().unwrap();
        assert!(gauss_curvature_fd(Chart::F, (fm - 1e-4, 0.0), &ChartData::F(&p), 1e-3).is_err());
        let prof = f_profile();
        let (lo, _) = prof.u_range();
        assert!(gauss_curvature_fd(Chart::U, (lo + 1e-4, 0.0), &ChartData::U(&prof), 1e-3).is_err());
    }

    #[test]
    fn level_curve_curvature_values_and_domain() {
        assert!((level_curve_curvature(1.0, 4.0 / 3.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(level_curve_curvature(1.0, 0.0).is_err());
        assert!(level_curve_curvature(0.0, 1.0).is_err());
    }

    #[test]
    fn kappa_recovered_from_curvature_data() {
        // at the reference point |grad K| = 12, K = -5, f = 1
        let k = kappa_from_k(-5.0, 12.0, 1.0).unwrap();
        assert!((k - 1.0).abs() < 1e-14);
        assert!(matches!(
            kappa_from_k(0.0, 1.0, 1.0),
            Err(crate::error::Error::Inconsistent(_))
        ));
    }

    #[test]
    fn circles_pass_and_match_both_closed_forms() {
        let prof = f_profile();
        let report = circle_check(&prof, 0.0).unwrap();
        assert!(report.all_pass(), "{report}");
        // closed form route agreement at the same point
        let s = prof.state_at(0.0).unwrap();
        let kg = level_curve_curvature(s.f, s.f_prime).unwrap();
        let via_k = kappa_from_k(
            gauss_curvature_analytic(s.f, s.f_prime, s.f_double_prime).unwrap(),
            (6.0 * s.f + 3.0 * s.f * s.f) * s.f_prime,
            s.f,
        )
        .unwrap();
        assert!((kg - via_k).abs() < 1e-9);
    }

    #[test]
    fn circle_check_requires_interior_points() {
        let prof = f_profile();
        let (lo, _) = prof.u_range();
        assert!(circle_check(&prof, lo).is_err());
    }

    #[test]
    fn additive_asymmetry_is_detected_but_conformal_scaling_is_not() {
        let prof = f_profile();
        let s = prof.state_at(0.0).unwrap();
        let expected = level_curve_curvature(s.f, s.f_prime).unwrap();
        let h = 1e-5;
        // additive v-dependent bump: geodesic curvature varies around the circle
        let additive = |u: f64, v: f64| -> (f64, f64) {
            (1.0, prof.f_at(u).unwrap().powf(-1.5) + 1e-3 * v.sin())
        };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..32 {
            let v = 2.0 * std::f64::consts::PI * j as f64 / 32.0;
            let kg = geodesic_curvature_v_curve(&additive, 0.0, v, h).unwrap();
            lo = lo.min(kg);
            hi = hi.max(kg);
        }
        assert!(hi - lo > 1e-5, "additive control must vary: {}", hi - lo);
        assert!((hi - expected).abs() > 1e-9 || (lo - expected).abs() > 1e-9);
        // multiplicative v-dependent factor: provably invariant, the
        // u-derivative of log G and hence kappa_g is unchanged
        let multiplicative = |u: f64, v: f64| -> (f64, f64) {
            (1.0, prof.f_at(u).unwrap().powf(-1.5) * (1.0 + 1e-3 * v.sin()))
        };
        for j in 0..32 {
            let v = 2.0 * std::f64::consts::PI * j as f64 / 32.0;
            let kg = geodesic_curvature_v_curve(&multiplicative, 0.0, v, h).unwrap();
            assert!((kg - expected).abs() < 1e-8, "conformal factor changed kappa_g");
        }
    }
}
