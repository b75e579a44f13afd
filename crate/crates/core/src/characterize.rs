//! The chain linking the f-description to the kappa-description.
//!
//! From a constrained state (f, f') the geodesic curvature of the curvature
//! level curve and its u-derivatives follow by closed-form substitution
//! (kappa = (3/4) f'/f, higher derivatives via the ODE and its derivatives;
//! no numerical differentiation anywhere). In the opposite direction, the
//! two combinations frak_a and frak_b recover c^2 and f^2 from a kappa
//! state, so a whole kappa-profile determines the family member that
//! produced it.

use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::odeflow::{first_integral_c, KappaProfile, KappaSample};
use crate::report::ResidualReport;

/// A pointwise kappa-state; kappa_ppp is carried only when the producing
/// computation supplies it (the chain does, plain condition checks do not
/// need it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaState {
    pub kappa: f64,
    pub kappa_p: f64,
    pub kappa_pp: f64,
    pub kappa_ppp: Option<f64>,
}

impl From<&KappaSample> for KappaState {
    fn from(s: &KappaSample) -> Self {
        KappaState {
            kappa: s.kappa,
            kappa_p: s.kappa_p,
            kappa_pp: s.kappa_pp,
            kappa_ppp: Some(s.kappa_ppp),
        }
    }
}

/// Names of the four strict admissibility inequalities, in the order used
/// by `condition_margins`.
pub const MARGIN_NAMES: [&str; 4] = [
    "kappa > 0",
    "kappa_p < kappa^2 - 1",
    "kappa_pp > 2 kappa (3 kappa_p - 2 kappa^2 + 2)",
    "kappa_pp < (2/3) kappa (7 kappa_p - 4 kappa^2 + 4)",
];

/// Signed margins of the four inequalities; the state is admissible iff all
/// four are strictly positive.
pub fn condition_margins(kappa: f64, kappa_p: f64, kappa_pp: f64) -> [f64; 4] {
    let k = kappa;
    [
        k,
        k * k - 1.0 - kappa_p,
        kappa_pp - 2.0 * k * (3.0 * kappa_p - 2.0 * k * k + 2.0),
        (2.0 / 3.0) * k * (7.0 * kappa_p - 4.0 * k * k + 4.0) - kappa_pp,
    ]
}

/// Exact closed-form kappa-chain at a constrained profile state. The state
/// must satisfy the first integral of (c, C) to 1e-8 relative; f'' comes
/// from the ODE, f''' and f'''' from its u-derivatives.
pub fn kappa_chain_from_f(f: f64, f_prime: f64, c: f64, big_c: f64) -> Result<KappaState> {
    let params = FamilyParams::new(c, big_c)?;
    let p = params.potential_p(f)?;
    if !(f_prime > 0.0) {
        return Err(Error::Domain(format!(
            "chain requires f' > 0, got f' = {f_prime}"
        )));
    }
    let res = (f_prime * f_prime - p).abs();
    if res > 1e-8 * p.max(1.0) {
        return Err(Error::Inconsistent(format!(
            "(f, f') violates the first integral: |f'^2 - P(f)| = {res:e} at f = {f}"
        )));
    }
    let fp = f_prime;
    let fpp = params.potential_p_prime_unchecked(f) / 2.0;
    let fppp = params.potential_p_second_unchecked(f) * fp / 2.0;
    let fpppp =
        (params.potential_p_third_unchecked(f) * fp * fp + params.potential_p_second_unchecked(f) * fpp)
            / 2.0;
    let r = fp / f;
    let kappa = 0.75 * r;
    let kappa_p = 0.75 * (fpp / f - r * r);
    let kappa_pp = 0.75 * (fppp / f - 3.0 * fp * fpp / (f * f) + 2.0 * r * r * r);
    let kappa_ppp = 0.75
        * (fpppp / f - 4.0 * fp * fppp / (f * f) - 3.0 * fpp * fpp / (f * f)
            + 12.0 * fp * fp * fpp / (f * f * f)
            - 6.0 * r * r * r * r);
    Ok(KappaState {
        kappa,
        kappa_p,
        kappa_pp,
        kappa_ppp: Some(kappa_ppp),
    })
}

/// Residual of the third-order ODE, raw and scaled by max(1, 32 kappa^5).
#[derive(Debug, Clone, Copy)]
pub struct OdeResidual {
    pub raw: f64,
    pub scaled: f64,
}

/// 3 k k''' - 26 k^2 k'' - 3 k' k'' + 72 k^3 k' + 32 k^3 - 32 k^5 at the
/// state; zero exactly on solutions. Requires kappa_ppp to be present.
pub fn kappa_ode_residual(state: &KappaState) -> Result<OdeResidual> {
    if !(state.kappa > 0.0) {
        return Err(Error::Domain(format!(
            "residual requires kappa > 0, got {}",
            state.kappa
        )));
    }
    let kppp = state.kappa_ppp.ok_or_else(|| {
        Error::Precondition("kappa_ppp is required for the ODE residual".into())
    })?;
    let k = state.kappa;
    let kp = state.kappa_p;
    let kpp = state.kappa_pp;
    let raw = 3.0 * k * kppp - 26.0 * k * k * kpp - 3.0 * kp * kpp + 72.0 * k * k * k * kp
        + 32.0 * k * k * k
        - 32.0 * k.powi(5);
    Ok(OdeResidual {
        raw,
        scaled: raw / (32.0 * k.powi(5)).max(1.0),
    })
}

/// frak_a = 2 sqrt(k) (-3 k'' + 14 k k' + 8 k - 8 k^3) / (k'' - 6 k k' - 4 k + 4 k^3)^(3/2).
/// Constant along admissible kappa-solutions, where it equals c^2.
pub fn frak_a(state: &KappaState) -> Result<f64> {
    let m = condition_margins(state.kappa, state.kappa_p, state.kappa_pp);
    // sqrt(k), the denominator base (lower bound) and the numerator factor
    // (3x the upper-bound margin) must all be positive
    for j in [0, 2, 3] {
        if !(m[j] > 0.0) {
            return Err(Error::Precondition(format!(
                "inadmissible state for frak_a: {} violated (margin {:e})",
                MARGIN_NAMES[j], m[j]
            )));
        }
    }
    let numerator = 3.0 * m[3]; // = -3 k'' + 14 k k' + 8 k - 8 k^3
    let denominator = m[2]; // = k'' - 6 k k' - 4 k + 4 k^3
    Ok(2.0 * state.kappa.sqrt() * numerator / denominator.powf(1.5))
}

/// frak_b = (k'' - 6 k k' - 4 k + 4 k^3) / (4 k); equals f^2 along
/// admissible kappa-solutions, so sqrt reconstructs the mean curvature.
pub fn frak_b(state: &KappaState) -> Result<f64> {
    let m = condition_margins(state.kappa, state.kappa_p, state.kappa_pp);
    for j in [0, 2] {
        if !(m[j] > 0.0) {
            return Err(Error::Precondition(format!(
                "inadmissible state for frak_b: {} violated (margin {:e})",
                MARGIN_NAMES[j], m[j]
            )));
        }
    }
    Ok(m[2] / (4.0 * state.kappa))
}

/// Gauss curvature from the kappa-state: K = kappa' - kappa^2.
pub fn k_from_kappa(kappa: f64, kappa_p: f64) -> f64 {
    kappa_p - kappa * kappa
}

/// Signed-margin report of the three conditions (four inequalities), plus
/// the implied bound kappa'' window top < 2 kappa kappa', which follows
/// algebraically from the slope condition:
/// 2 k k' - (2/3) k (7 k' - 4 k^2 + 4) = (8 k / 3)(k^2 - 1 - k').
pub fn conditions_check(state: &KappaState) -> ResidualReport {
    let m = condition_margins(state.kappa, state.kappa_p, state.kappa_pp);
    let mut report = ResidualReport::new();
    report.push_margin("kappa_positive", m[0], 0.0);
    report.push_margin("slope_condition", m[1], 0.0);
    report.push_margin("kappa_pp_lower_bound", m[2], 0.0);
    report.push_margin("kappa_pp_upper_bound", m[3], 0.0);
    let upper_bound = (2.0 / 3.0)
        * state.kappa
        * (7.0 * state.kappa_p - 4.0 * state.kappa * state.kappa + 4.0);
    report.push_margin(
        "upper_bound_below_2kkp",
        2.0 * state.kappa * state.kappa_p - upper_bound,
        0.0,
    );
    report
}

/// Family member recovered from a kappa-profile, with constancy deviations.
#[derive(Debug, Clone)]
pub struct RecoveredParams {
    pub c_squared: f64,
    pub big_c: f64,
    pub params: FamilyParams,
    pub report: ResidualReport,
}

/// Recover (c^2, C) from a kappa-profile: c^2 as the sample mean of frak_a,
/// C as the sample mean of the first integral evaluated on the
/// reconstructed states f = sqrt(frak_b), f' = (4/3) kappa f. The report
/// carries the max relative deviations of both means.
pub fn recover_params(profile: &KappaProfile) -> Result<RecoveredParams> {
    let mut a_values = Vec::with_capacity(profile.samples.len());
    let mut b_values = Vec::with_capacity(profile.samples.len());
    for s in &profile.samples {
        let state = KappaState::from(s);
        match (frak_a(&state), frak_b(&state)) {
            (Ok(a), Ok(b)) => {
                a_values.push(a);
                b_values.push((s.kappa, b));
            }
            // inadmissible tail: truncate rather than fail
            _ => break,
        }
    }
    if a_values.is_empty() {
        return Err(Error::EmptyRange(
            "no admissible samples to recover parameters from".into(),
        ));
    }
    let c_squared = a_values.iter().sum::<f64>() / a_values.len() as f64;
    if !(c_squared > 0.0) {
        return Err(Error::Inconsistent(format!(
            "recovered c^2 = {c_squared} is not positive"
        )));
    }
    let c = c_squared.sqrt();
    let mut c_values = Vec::with_capacity(b_values.len());
    for (kappa, b) in &b_values {
        let f = b.sqrt();
        let f_prime = (4.0 / 3.0) * kappa * f;
        c_values.push(first_integral_c(f, f_prime, c)?);
    }
    let big_c = c_values.iter().sum::<f64>() / c_values.len() as f64;
    let a_dev = a_values
        .iter()
        .map(|a| (a - c_squared).abs())
        .fold(0.0, f64::max)
        / c_squared.abs().max(1.0);
    let c_dev = c_values
        .iter()
        .map(|v| (v - big_c).abs())
        .fold(0.0, f64::max)
        / big_c.abs().max(1.0);
    let mut report = ResidualReport::new();
    report.push_residual("c_squared_deviation", a_dev, 1e-6);
    report.push_residual("C_deviation", c_dev, 1e-6);
    Ok(RecoveredParams {
        c_squared,
        big_c,
        params: FamilyParams::new(c, big_c)?,
        report,
    })
}

/// The four scalar coefficients of the Levi-Civita connection in the
/// orthonormal frame E1 = d/du, E2 = f^(3/4) d/dv:
/// nabla_{E1}E1 = 0, nabla_{E1}E2 = 0, nabla_{E2}E1 = e2_e1 * E2,
/// nabla_{E2}E2 = e2_e2 * E1. Equivalently the connection form satisfies
/// w12(E1) = 0, w12(E2) = (3/4) f'/f.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameConnection {
    pub e1_e1: f64,
    pub e1_e2: f64,
    pub e2_e1: f64,
    pub e2_e2: f64,
}

pub fn connection_coefficients(f: f64, f_prime: f64) -> Result<FrameConnection> {
    if !(f > 0.0) {
        return Err(Error::Domain(format!(
            "connection requires f > 0, got f = {f}"
        )));
    }
    let w = 0.75 * f_prime / f;
    Ok(FrameConnection {
        e1_e1: 0.0,
        e1_e2: 0.0,
        e2_e1: -w,
        e2_e2: w,
    })
}
