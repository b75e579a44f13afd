//! Initial-value integration of the profile ODEs.
//!
//! Two flows live here: the second-order flow for the mean-curvature profile
//! f(u), driven by f'' = P'(f)/2 with the first-order constraint f'^2 = P(f)
//! as a conserved quantity, and the third-order flow for the geodesic
//! curvature kappa(u) of the curvature level curves. Both are integrated
//! with the embedded 5(4) pair and stopped by event detection: the f-flow
//! when P(f) falls below 1e-10 of its initial value or f' turns negative
//! (turning point near f_max), the kappa-flow when any admissibility margin
//! reaches zero. Event locations are refined by bisection on the dense
//! output to 1e-10 in u, and the recorded end sample is the last state on
//! the admissible side.
//!
//! Conditioning note: the recovered constant C divides by f^(7/2), so its
//! drift is only meaningful where f is not many orders below its starting
//! value; the constraint residual |f'^2 - P(f)| / max(1, P(f)) is the
//! well-conditioned form of the same statement and is what the profile
//! invariant enforces.

use crate::characterize::{condition_margins, MARGIN_NAMES};
use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::interp::Segment;
use crate::quad;
use crate::rk;

const TOL_MIN: f64 = 1e-14;
const TOL_MAX: f64 = 1e-4;
/// Events are located to this absolute accuracy in u.
const EVENT_U_TOL: f64 = 1e-10;
/// Step cap keeping the per-segment interpolant accurate enough for
/// finite-difference curvature work downstream.
const H_MAX_F: f64 = 0.02;
const H_MAX_KAPPA: f64 = 0.02;
const MAX_STEPS: usize = 1_000_000;

fn check_tol(tol: f64) -> Result<()> {
    if !(TOL_MIN..=TOL_MAX).contains(&tol) {
        return Err(Error::Precondition(format!(
            "tolerance must lie in [{TOL_MIN:e}, {TOL_MAX:e}], got {tol:e}"
        )));
    }
    Ok(())
}

/// Constraint-residual bound a finished profile must satisfy,
/// |f'^2 - P(f)| <= fi_tolerance(tol) * max(1, P(f)).
fn fi_tolerance(tol: f64) -> f64 {
    (1e3 * tol).max(1e-12)
}

/// One accepted state of the f-flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSample {
    pub u: f64,
    pub f: f64,
    pub f_prime: f64,
    pub f_double_prime: f64,
}

/// A sampled solution of the f-ODE, u strictly increasing.
#[derive(Debug, Clone)]
pub struct FProfile {
    pub params: FamilyParams,
    /// integration tolerance (rtol = atol) used to produce the samples
    pub tol: f64,
    pub samples: Vec<FSample>,
    /// max over samples of |C(f, f') - C| / max(1, |C|)
    pub first_integral_drift: f64,
    /// max over samples of |f'^2 - P(f)| / max(1, P(f))
    pub constraint_residual: f64,
    /// accepted integrator steps
    pub steps: usize,
    pub stopped_by_event: bool,
}

impl FProfile {
    pub fn u_range(&self) -> (f64, f64) {
        (
            self.samples.first().expect("profile is never empty").u,
            self.samples.last().expect("profile is never empty").u,
        )
    }

    fn segment_index(&self, u: f64) -> Result<usize> {
        let (lo, hi) = self.u_range();
        if !(u >= lo && u <= hi) {
            return Err(Error::Domain(format!(
                "u = {u} outside the sampled range [{lo}, {hi}]"
            )));
        }
        if self.samples.len() == 1 {
            return Err(Error::Domain(
                "single-sample profile supports evaluation only at its sample point".into(),
            ));
        }
        let idx = self.samples.partition_point(|s| s.u <= u);
        Ok(idx.clamp(1, self.samples.len() - 1) - 1)
    }

    /// Interpolated f at u (quintic segment matching f, f', f'' at the
    /// bracketing samples).
    pub fn f_at(&self, u: f64) -> Result<f64> {
        if self.samples.len() == 1 {
            let s = self.samples[0];
            if (u - s.u).abs() <= f64::EPSILON * s.u.abs().max(1.0) {
                return Ok(s.f);
            }
        }
        let i = self.segment_index(u)?;
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let seg = Segment::from_endpoint_data(
            a.u,
            b.u,
            a.f,
            a.f_prime,
            a.f_double_prime,
            b.f,
            b.f_prime,
            b.f_double_prime,
        );
        // keep the interpolant inside the segment's f-range so P stays >= 0
        Ok(seg.eval(u).clamp(a.f.min(b.f), a.f.max(b.f)))
    }

    /// Full state at u: f interpolated, f' and f'' re-evaluated from the
    /// first integral and the ODE, so the triple sits on the constraint
    /// manifold exactly. Valid because every profile lives on the f' > 0
    /// branch (integration starts there and stops at the turning point).
    pub fn state_at(&self, u: f64) -> Result<FSample> {
        if self.samples.len() == 1 {
            let s = self.samples[0];
            if (u - s.u).abs() <= f64::EPSILON * s.u.abs().max(1.0) {
                return Ok(s);
            }
        }
        let f = self.f_at(u)?;
        let p = self.params.potential_p_unchecked(f).max(0.0);
        Ok(FSample {
            u,
            f,
            f_prime: p.sqrt(),
            f_double_prime: self.params.potential_p_prime_unchecked(f) / 2.0,
        })
    }

    /// Join a backward-run profile to a forward-run one sharing the u = 0
    /// initial sample.
    pub fn stitch(backward: &FProfile, forward: &FProfile) -> Result<FProfile> {
        if backward.params != forward.params {
            return Err(Error::Precondition(
                "cannot stitch profiles of different family members".into(),
            ));
        }
        if backward.tol != forward.tol {
            return Err(Error::Precondition(
                "cannot stitch profiles integrated at different tolerances".into(),
            ));
        }
        let join = backward.samples.last().expect("profile is never empty");
        let start = forward.samples.first().expect("profile is never empty");
        if join.u.abs() > 1e-12 || start.u.abs() > 1e-12 || (join.f - start.f).abs() > 1e-9 {
            return Err(Error::Precondition(format!(
                "profiles do not share the initial sample: backward ends at (u={}, f={}), forward starts at (u={}, f={})",
                join.u, join.f, start.u, start.f
            )));
        }
        let mut samples = backward.samples.clone();
        samples.extend_from_slice(&forward.samples[1..]);
        Ok(FProfile {
            params: forward.params,
            tol: forward.tol,
            samples,
            first_integral_drift: backward
                .first_integral_drift
                .max(forward.first_integral_drift),
            constraint_residual: backward
                .constraint_residual
                .max(forward.constraint_residual),
            steps: backward.steps + forward.steps,
            stopped_by_event: backward.stopped_by_event || forward.stopped_by_event,
        })
    }
}

/// The first-integral constant implied by a state:
/// C = [f'^2 - (16/9) f^2 + 16 f^4 + (16/9) c^2 f^5] / (2 f^(7/2)).
pub fn first_integral_c(f: f64, f_prime: f64, c: f64) -> Result<f64> {
    if !(f > 0.0) {
        return Err(Error::Domain(format!(
            "first integral requires f > 0, got f = {f}"
        )));
    }
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Domain(format!(
            "c must be nonzero and finite, got {c}"
        )));
    }
    let c2 = c * c;
    Ok(
        (f_prime * f_prime - (16.0 / 9.0) * f * f
            + 16.0 * f.powi(4)
            + (16.0 / 9.0) * c2 * f.powi(5))
            / (2.0 * f.powf(3.5)),
    )
}

/// Integrate the f-flow from f(0) = f0, f'(0) = +sqrt(P(f0)) over the
/// signed span `u_span` (negative integrates backward). Stops early at the
/// P-threshold or turning-point event. Samples are stored with u ascending
/// regardless of direction.
pub fn integrate_f_ode(
    params: FamilyParams,
    f0: f64,
    u_span: f64,
    tol: f64,
) -> Result<FProfile> {
    check_tol(tol)?;
    if !u_span.is_finite() {
        return Err(Error::Precondition(format!(
            "u_span must be finite, got {u_span}"
        )));
    }
    let p0 = params.potential_p(f0)?;
    if p0 <= 0.0 {
        return Err(Error::Domain(format!(
            "f0 = {f0} is outside the admissible domain (P(f0) = {p0:e} <= 0)"
        )));
    }
    let fp0 = p0.sqrt();
    let start = FSample {
        u: 0.0,
        f: f0,
        f_prime: fp0,
        f_double_prime: params.potential_p_prime_unchecked(f0) / 2.0,
    };
    let mut samples = vec![start];
    let mut steps = 0;
    let mut stopped_by_event = false;

    if u_span != 0.0 {
        let threshold = 1e-10 * p0;
        let rhs = move |_: f64, y: &[f64; 2]| {
            [y[1], params.potential_p_prime_unchecked(y[0]) / 2.0]
        };
        let admissible =
            |y: &[f64; 2]| y[0] > 0.0 && y[1] > 0.0 && params.potential_p_unchecked(y[0]) > threshold;
        let mut it = rk::Integrator::new(
            rhs,
            0.0,
            [f0, fp0],
            u_span,
            rk::Options {
                rtol: tol,
                atol: tol,
                h_max: H_MAX_F,
                max_steps: MAX_STEPS,
            },
        );
        let direction = u_span.signum();
        loop {
            let step = match it.step(Some(u_span)) {
                Ok(s) => s,
                Err(Error::Divergent(reason)) => {
                    let u = it.u;
                    return Err(Error::FIntegration {
                        reason,
                        u,
                        partial: Box::new(finish_f_profile(
                            params, tol, samples, it.accepted, true,
                        )?),
                    });
                }
                Err(e) => return Err(e),
            };
            if !admissible(&step.y1) {
                // earliest admissibility loss inside [u0, u1]
                let mut lo = step.u0;
                let mut hi = step.u1;
                while (hi - lo).abs() > EVENT_U_TOL {
                    let mid = 0.5 * (lo + hi);
                    if admissible(&step.eval(mid)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let last_u = samples.last().expect("nonempty").u;
                if (lo - last_u) * direction > 1e-12 {
                    let y = step.eval(lo);
                    let dy = rhs(lo, &y);
                    samples.push(FSample {
                        u: lo,
                        f: y[0],
                        f_prime: y[1],
                        f_double_prime: dy[1],
                    });
                }
                steps = it.accepted;
                stopped_by_event = true;
                break;
            }
            samples.push(FSample {
                u: step.u1,
                f: step.y1[0],
                f_prime: step.y1[1],
                f_double_prime: step.dy1[1],
            });
            if (step.u1 - u_span) * direction >= 0.0 {
                steps = it.accepted;
                break;
            }
        }
        if direction < 0.0 {
            samples.reverse();
        }
    }

    finish_f_profile(params, tol, samples, steps, stopped_by_event)
}

fn finish_f_profile(
    params: FamilyParams,
    tol: f64,
    samples: Vec<FSample>,
    steps: usize,
    stopped_by_event: bool,
) -> Result<FProfile> {
    let big_c = params.big_c();
    let mut drift: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for s in &samples {
        let c_rec = first_integral_c(s.f, s.f_prime, params.c())?;
        drift = drift.max((c_rec - big_c).abs() / big_c.abs().max(1.0));
        let p = params.potential_p_unchecked(s.f);
        residual = residual.max((s.f_prime * s.f_prime - p).abs() / p.max(1.0));
    }
    let profile = FProfile {
        params,
        tol,
        samples,
        first_integral_drift: drift,
        constraint_residual: residual,
        steps,
        stopped_by_event,
    };
    if residual > fi_tolerance(tol) {
        let u = profile.u_range().1;
        return Err(Error::FIntegration {
            reason: format!(
                "constraint residual {residual:e} exceeds {:e}",
                fi_tolerance(tol)
            ),
            u,
            partial: Box::new(profile),
        });
    }
    Ok(profile)
}

/// Quadrature form of the u-coordinate: u(f_hi) - u(f_lo) = int df / sqrt(P).
///
/// The last 5% of the domain before f_max is computed in the variable
/// t = sqrt(f_max - f), which removes the square-root endpoint singularity
/// (the transformed integrand tends to 2/sqrt(-P'(f_max))) and keeps the
/// plain integrand 1/sqrt(P) well away from its blow-up.
pub fn u_of_f_quadrature(params: FamilyParams, f_lo: f64, f_hi: f64) -> Result<f64> {
    if !(f_lo > 0.0) || !(f_hi > 0.0) {
        return Err(Error::Domain(format!(
            "bounds must be positive, got f_lo = {f_lo}, f_hi = {f_hi}"
        )));
    }
    if f_lo < 1e-8 {
        return Err(Error::Divergent(format!(
            "u(f) diverges as f tends to 0 (integrand ~ 3/(4f)); f_lo = {f_lo} is below 1e-8"
        )));
    }
    if f_lo > f_hi {
        return Err(Error::EmptyRange(format!(
            "f_lo = {f_lo} exceeds f_hi = {f_hi}"
        )));
    }
    if f_lo == f_hi {
        return Ok(0.0);
    }
    let f_max = params.f_max()?;
    if f_hi > f_max * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "f_hi = {f_hi} lies beyond f_max = {f_max}"
        )));
    }
    let f_hi = f_hi.min(f_max);
    let cut = f_max * 0.95;
    let plain = |f: f64| 1.0 / params.potential_p_unchecked(f).sqrt();
    let mut total = 0.0;
    let accumulate = |r: quad::QuadResult| -> Result<f64> {
        if !r.converged {
            return Err(Error::Quadrature(format!(
                "quadrature stalled at error estimate {:e} after {} evaluations",
                r.error, r.evaluations
            )));
        }
        Ok(r.value)
    };
    if f_hi <= cut {
        total += accumulate(quad::integrate(plain, f_lo, f_hi, 1e-13, 1e-12, 4000))?;
    } else {
        if f_lo < cut {
            total += accumulate(quad::integrate(plain, f_lo, cut, 1e-13, 1e-12, 4000))?;
        }
        let a = f_lo.max(cut);
        let t_a = (f_max - a).max(0.0).sqrt();
        let t_b = (f_max - f_hi).max(0.0).sqrt();
        let subst = |t: f64| 2.0 * t / params.potential_p_unchecked(f_max - t * t).sqrt();
        total += accumulate(quad::integrate(subst, t_b, t_a, 1e-13, 1e-12, 4000))?;
    }
    Ok(total)
}

/// Per-sample admissibility flags for the three strict conditions on
/// (kappa', kappa'') — the slope bound and the two-sided kappa'' window.
/// Positivity of kappa itself is a type invariant of the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionFlags {
    pub slope: bool,
    pub lower: bool,
    pub upper: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.slope && self.lower && self.upper
    }

    fn from_margins(m: &[f64; 4]) -> Self {
        ConditionFlags {
            slope: m[1] > 0.0,
            lower: m[2] > 0.0,
            upper: m[3] > 0.0,
        }
    }
}

/// One accepted state of the kappa-flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaSample {
    pub u: f64,
    pub kappa: f64,
    pub kappa_p: f64,
    pub kappa_pp: f64,
    pub kappa_ppp: f64,
    pub flags: ConditionFlags,
}

/// A sampled solution of the kappa-ODE, u strictly increasing, kappa > 0
/// and all condition flags true at every sample.
#[derive(Debug, Clone)]
pub struct KappaProfile {
    pub tol: f64,
    pub samples: Vec<KappaSample>,
    pub steps: usize,
    pub stopped_by_event: bool,
    /// name of the first inequality that failed when an event stopped the run
    pub stopping_condition: Option<&'static str>,
}

/// kappa''' isolated from the third-order ODE
/// 3 k k''' - 26 k^2 k'' - 3 k' k'' + 72 k^3 k' + 32 k^3 - 32 k^5 = 0.
pub(crate) fn kappa_ppp_solved(k: f64, kp: f64, kpp: f64) -> f64 {
    (26.0 * k * k * kpp + 3.0 * kp * kpp - 72.0 * k * k * k * kp - 32.0 * k * k * k
        + 32.0 * k.powi(5))
        / (3.0 * k)
}

impl KappaProfile {
    /// Build a profile from externally supplied samples, revalidating the
    /// ordering and the strict admissibility of every state. Condition
    /// flags are recomputed, not trusted.
    pub fn from_samples(samples: Vec<KappaSample>, tol: f64) -> Result<KappaProfile> {
        if samples.is_empty() {
            return Err(Error::EmptyRange("no samples supplied".into()));
        }
        let mut out = Vec::with_capacity(samples.len());
        for (i, s) in samples.iter().enumerate() {
            if i > 0 && s.u <= samples[i - 1].u {
                return Err(Error::Precondition(format!(
                    "sample u-values must be strictly increasing (violated at index {i})"
                )));
            }
            let m = condition_margins(s.kappa, s.kappa_p, s.kappa_pp);
            for (j, name) in MARGIN_NAMES.iter().enumerate() {
                if !(m[j] > 0.0) {
                    return Err(Error::Precondition(format!(
                        "sample {i} is inadmissible: {name} violated (margin {:e})",
                        m[j]
                    )));
                }
            }
            out.push(KappaSample {
                flags: ConditionFlags::from_margins(&m),
                ..*s
            });
        }
        Ok(KappaProfile {
            tol,
            samples: out,
            steps: 0,
            stopped_by_event: false,
            stopping_condition: None,
        })
    }

    pub fn u_range(&self) -> (f64, f64) {
        (
            self.samples.first().expect("profile is never empty").u,
            self.samples.last().expect("profile is never empty").u,
        )
    }

    fn segment(&self, u: f64) -> Result<(usize, Segment)> {
        let (lo, hi) = self.u_range();
        if !(u >= lo && u <= hi) {
            return Err(Error::Domain(format!(
                "u = {u} outside the sampled range [{lo}, {hi}]"
            )));
        }
        if self.samples.len() == 1 {
            return Err(Error::Domain(
                "single-sample profile supports evaluation only at its sample point".into(),
            ));
        }
        let idx = self.samples.partition_point(|s| s.u <= u);
        let i = idx.clamp(1, self.samples.len() - 1) - 1;
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        Ok((
            i,
            Segment::from_endpoint_data(
                a.u, b.u, a.kappa, a.kappa_p, a.kappa_pp, b.kappa, b.kappa_p, b.kappa_pp,
            ),
        ))
    }

    pub fn kappa_at(&self, u: f64) -> Result<f64> {
        if self.samples.len() == 1 {
            let s = self.samples[0];
            if (u - s.u).abs() <= f64::EPSILON * s.u.abs().max(1.0) {
                return Ok(s.kappa);
            }
        }
        Ok(self.segment(u)?.1.eval(u))
    }

    /// Interpolated state at u; kappa''' is re-evaluated from the ODE.
    pub fn state_at(&self, u: f64) -> Result<KappaSample> {
        if self.samples.len() == 1 {
            let s = self.samples[0];
            if (u - s.u).abs() <= f64::EPSILON * s.u.abs().max(1.0) {
                return Ok(s);
            }
        }
        let (_, seg) = self.segment(u)?;
        let k = seg.eval(u);
        if !(k > 0.0) {
            return Err(Error::Domain(format!(
                "interpolated kappa is non-positive at u = {u}"
            )));
        }
        let kp = seg.deriv1(u);
        let kpp = seg.deriv2(u);
        let m = condition_margins(k, kp, kpp);
        Ok(KappaSample {
            u,
            kappa: k,
            kappa_p: kp,
            kappa_pp: kpp,
            kappa_ppp: kappa_ppp_solved(k, kp, kpp),
            flags: ConditionFlags::from_margins(&m),
        })
    }

    /// Exact integral of the per-segment interpolant: int_0^u kappa ds.
    /// Requires both 0 and u to lie in the sampled range.
    pub fn kappa_integral_from_zero(&self, u: f64) -> Result<f64> {
        let cumulative = |x: f64| -> Result<f64> {
            let (i, seg) = self.segment(x)?;
            let mut total = 0.0;
            for j in 0..i {
                let (a, b) = (self.samples[j], self.samples[j + 1]);
                total += Segment::from_endpoint_data(
                    a.u, b.u, a.kappa, a.kappa_p, a.kappa_pp, b.kappa, b.kappa_p, b.kappa_pp,
                )
                .integral_full();
            }
            Ok(total + seg.integral_to(x))
        };
        Ok(cumulative(u)? - cumulative(0.0)?)
    }

    /// Join a backward-run profile to a forward-run one sharing u = 0.
    pub fn stitch(backward: &KappaProfile, forward: &KappaProfile) -> Result<KappaProfile> {
        if backward.tol != forward.tol {
            return Err(Error::Precondition(
                "cannot stitch profiles integrated at different tolerances".into(),
            ));
        }
        let join = backward.samples.last().expect("profile is never empty");
        let start = forward.samples.first().expect("profile is never empty");
        if join.u.abs() > 1e-12
            || start.u.abs() > 1e-12
            || (join.kappa - start.kappa).abs() > 1e-9
        {
            return Err(Error::Precondition(
                "profiles do not share the initial sample at u = 0".into(),
            ));
        }
        let mut samples = backward.samples.clone();
        samples.extend_from_slice(&forward.samples[1..]);
        Ok(KappaProfile {
            tol: forward.tol,
            samples,
            steps: backward.steps + forward.steps,
            stopped_by_event: backward.stopped_by_event || forward.stopped_by_event,
            stopping_condition: forward.stopping_condition.or(backward.stopping_condition),
        })
    }
}

/// Integrate the kappa-flow from an admissible initial triple at u = 0 over
/// the signed span `u_span`. The three strict conditions are monitored per
/// step; the run halts at the earliest point where any of them (or kappa > 0)
/// fails, keeping the last admissible state.
pub fn integrate_kappa_ode(
    kappa0: f64,
    kappa0_p: f64,
    kappa0_pp: f64,
    u_span: f64,
    tol: f64,
) -> Result<KappaProfile> {
    check_tol(tol)?;
    if !u_span.is_finite() {
        return Err(Error::Precondition(format!(
            "u_span must be finite, got {u_span}"
        )));
    }
    let m0 = condition_margins(kappa0, kappa0_p, kappa0_pp);
    for (j, name) in MARGIN_NAMES.iter().enumerate() {
        if !(m0[j] > 0.0) {
            return Err(Error::Precondition(format!(
                "inadmissible initial state: {name} violated (margin {:e})",
                m0[j]
            )));
        }
    }
    let start = KappaSample {
        u: 0.0,
        kappa: kappa0,
        kappa_p: kappa0_p,
        kappa_pp: kappa0_pp,
        kappa_ppp: kappa_ppp_solved(kappa0, kappa0_p, kappa0_pp),
        flags: ConditionFlags::from_margins(&m0),
    };
    let mut samples = vec![start];
    let mut steps = 0;
    let mut stopped_by_event = false;
    let mut stopping_condition = None;

    if u_span != 0.0 {
        let rhs =
            |_: f64, y: &[f64; 3]| [y[1], y[2], kappa_ppp_solved(y[0], y[1], y[2])];
        let admissible = |y: &[f64; 3]| {
            let m = condition_margins(y[0], y[1], y[2]);
            m.iter().all(|v| *v > 0.0)
        };
        let first_violation = |y: &[f64; 3]| -> &'static str {
            let m = condition_margins(y[0], y[1], y[2]);
            for (j, name) in MARGIN_NAMES.iter().enumerate() {
                if !(m[j] > 0.0) {
                    return name;
                }
            }
            MARGIN_NAMES[0]
        };
        let mut it = rk::Integrator::new(
            rhs,
            0.0,
            [kappa0, kappa0_p, kappa0_pp],
            u_span,
            rk::Options {
                rtol: tol,
                atol: tol,
                h_max: H_MAX_KAPPA,
                max_steps: MAX_STEPS,
            },
        );
        let direction = u_span.signum();
        loop {
            let step = match it.step(Some(u_span)) {
                Ok(s) => s,
                Err(Error::Divergent(reason)) => {
                    let u = it.u;
                    if direction < 0.0 {
                        samples.reverse();
                    }
                    return Err(Error::KappaIntegration {
                        reason,
                        u,
                        partial: Box::new(KappaProfile {
                            tol,
                            samples,
                            steps: it.accepted,
                            stopped_by_event: true,
                            stopping_condition: None,
                        }),
                    });
                }
                Err(e) => return Err(e),
            };
            if !admissible(&step.y1) {
                let mut lo = step.u0;
                let mut hi = step.u1;
                while (hi - lo).abs() > EVENT_U_TOL {
                    let mid = 0.5 * (lo + hi);
                    if admissible(&step.eval(mid)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                stopping_condition = Some(first_violation(&step.eval(hi)));
                let last_u = samples.last().expect("nonempty").u;
                if (lo - last_u) * direction > 1e-12 {
                    let y = step.eval(lo);
                    let m = condition_margins(y[0], y[1], y[2]);
                    samples.push(KappaSample {
                        u: lo,
                        kappa: y[0],
                        kappa_p: y[1],
                        kappa_pp: y[2],
                        kappa_ppp: kappa_ppp_solved(y[0], y[1], y[2]),
                        flags: ConditionFlags::from_margins(&m),
                    });
                }
                steps = it.accepted;
                stopped_by_event = true;
                break;
            }
            let m = condition_margins(step.y1[0], step.y1[1], step.y1[2]);
            samples.push(KappaSample {
                u: step.u1,
                kappa: step.y1[0],
                kappa_p: step.y1[1],
                kappa_pp: step.y1[2],
                kappa_ppp: step.dy1[2],
                flags: ConditionFlags::from_margins(&m),
            });
            if (step.u1 - u_span) * direction >= 0.0 {
                steps = it.accepted;
                break;
            }
        }
        if direction < 0.0 {
            samples.reverse();
        }
    }

    Ok(KappaProfile {
        tol,
        samples,
        steps,
        stopped_by_event,
        stopping_condition,
    })
}
