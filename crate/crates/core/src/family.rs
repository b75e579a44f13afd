//! The two-parameter family and its profile potential.
//!
//! Each member is labelled by (c, C) with c != 0. The mean-curvature profile
//! f(u) obeys the first-order constraint
//!
//!   f'^2 = P(f) = (16/9) f^2 - 16 f^4 - (16/9) c^2 f^5 + 2 C f^(7/2),
//!
//! and the Gauss curvature depends on f alone through K = h(f) with
//!
//!   h(x) = -1 - 3 x^2 - c^2 x^3,
//!
//! strictly decreasing, so K is an invertible coordinate on profiles. Only
//! c^2 enters any formula; c and -c label the same member, and `new`
//! canonicalizes the sign while remembering that it did.

use crate::error::{Error, Result};
use crate::rootfind;

/// Family member labelled by (c, C), with c stored canonically positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    c: f64,
    big_c: f64,
    c_was_negative: bool,
}

/// The f-interval on which profiles live: both endpoints exclusive,
/// P > 0 strictly inside and P(f_hi) = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainInterval {
    pub f_lo: f64,
    pub f_hi: f64,
    pub width_positive: bool,
}

impl DomainInterval {
    /// Both endpoints are excluded (f = 0 is singular, P(f_hi) = 0).
    pub fn contains(&self, f: f64) -> bool {
        f > self.f_lo && f < self.f_hi
    }
}

impl FamilyParams {
    pub fn new(c: f64, big_c: f64) -> Result<Self> {
        if !c.is_finite() || !big_c.is_finite() {
            return Err(Error::Domain(format!(
                "family parameters must be finite, got c = {c}, C = {big_c}"
            )));
        }
        if c == 0.0 {
            return Err(Error::Domain("c must be nonzero".into()));
        }
        Ok(FamilyParams {
            c: c.abs(),
            big_c,
            c_was_negative: c < 0.0,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn big_c(&self) -> f64 {
        self.big_c
    }

    pub fn c_squared(&self) -> f64 {
        self.c * self.c
    }

    pub fn c_was_negative(&self) -> bool {
        self.c_was_negative
    }

    /// P(f) without the positivity check on f.
    pub fn potential_p_unchecked(&self, f: f64) -> f64 {
        let c2 = self.c_squared();
        (16.0 / 9.0) * f * f
            - 16.0 * f.powi(4)
            - (16.0 / 9.0) * c2 * f.powi(5)
            + 2.0 * self.big_c * f.powf(3.5)
    }

    /// dP/df without the positivity check on f.
    pub fn potential_p_prime_unchecked(&self, f: f64) -> f64 {
        let c2 = self.c_squared();
        (32.0 / 9.0) * f
            - 64.0 * f.powi(3)
            - (80.0 / 9.0) * c2 * f.powi(4)
            + 7.0 * self.big_c * f.powf(2.5)
    }

    /// d2P/df2; the profile's third u-derivative is f''' = P''(f) f' / 2.
    pub fn potential_p_second_unchecked(&self, f: f64) -> f64 {
        let c2 = self.c_squared();
        32.0 / 9.0
            - 192.0 * f * f
            - (320.0 / 9.0) * c2 * f.powi(3)
            + 17.5 * self.big_c * f.powf(1.5)
    }

    /// d3P/df3, used for the fourth u-derivative of the profile.
    pub fn potential_p_third_unchecked(&self, f: f64) -> f64 {
        let c2 = self.c_squared();
        -384.0 * f - (320.0 / 3.0) * c2 * f * f + 26.25 * self.big_c * f.sqrt()
    }

    pub fn potential_p(&self, f: f64) -> Result<f64> {
        if !(f > 0.0) {
            return Err(Error::Domain(format!(
                "potential requires f > 0, got f = {f}"
            )));
        }
        Ok(self.potential_p_unchecked(f))
    }

    pub fn potential_p_prime(&self, f: f64) -> Result<f64> {
        if !(f > 0.0) {
            return Err(Error::Domain(format!(
                "potential derivative requires f > 0, got f = {f}"
            )));
        }
        Ok(self.potential_p_prime_unchecked(f))
    }

    /// Largest f with P(f) = 0; P > 0 on (0, f_max).
    ///
    /// Substituting s = sqrt(f) gives P = (16/9) s^4 q(s) with
    /// q(s) = 1 + (9/8) C s^3 - 9 s^4 - c^2 s^6. q(0) = 1 and the bracketed
    /// factor of q'(s) = s^2 ((27/8) C - 36 s - 6 c^2 s^3) is strictly
    /// decreasing, so q rises at most once before falling to -inf: exactly
    /// one positive root.
    pub fn f_max(&self) -> Result<f64> {
        let c2 = self.c_squared();
        let big_c = self.big_c;
        let q = |s: f64| 1.0 + 1.125 * big_c * s.powi(3) - 9.0 * s.powi(4) - c2 * s.powi(6);
        let qq = move |s: f64| {
            (
                q(s),
                3.375 * big_c * s * s - 36.0 * s.powi(3) - 6.0 * c2 * s.powi(5),
            )
        };
        let mut hi = 1.0;
        while q(hi) > 0.0 {
            hi *= 2.0;
            if hi > 1e100 {
                return Err(Error::RootFinding(
                    "no sign change found for the potential's positive root".into(),
                ));
            }
        }
        let rough = rootfind::bisect(q, 0.0, hi, 1e-3, 200)?;
        let s = rootfind::newton_bracketed(qq, rough, 0.0, hi, 1e-15, 100)?;
        Ok(s * s)
    }

    /// The admissible f-interval (0, f_max), endpoints excluded.
    pub fn admissible_domain(&self) -> Result<DomainInterval> {
        let f_hi = self.f_max()?;
        Ok(DomainInterval {
            f_lo: 0.0,
            f_hi,
            width_positive: f_hi > 0.0,
        })
    }
}

/// h(x) = -1 - 3 x^2 - c^2 x^3 for x > 0: the curvature as a function of the
/// mean curvature, strictly decreasing onto (-inf, -1).
pub fn curvature_cubic_h(x: f64, c: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "curvature cubic requires x > 0, got {x}"
        )));
    }
    Ok(-1.0 - 3.0 * x * x - c * c * x * x * x)
}

/// Gauss curvature at mean curvature f: K = -1 - 3 f^2 - c^2 f^3 < -1.
pub fn k_of_f(f: f64, c: f64) -> Result<f64> {
    if !(f > 0.0) {
        return Err(Error::Domain(format!(
            "curvature requires f > 0, got f = {f}"
        )));
    }
    Ok(-1.0 - 3.0 * f * f - c * c * f * f * f)
}

/// Solve 1 + K + 3 f^2 + c^2 f^3 = 0 for the unique f > 0. Requires K < -1.
pub fn invert_curvature_cubic(k: f64, c: f64) -> Result<f64> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Domain(format!(
            "c must be nonzero and finite, got {c}"
        )));
    }
    if !(k < -1.0) {
        return Err(Error::Domain(format!(
            "no positive root; hypothesis 1 + K < 0 violated (K = {k})"
        )));
    }
    let c2 = c * c;
    let target = -1.0 - k; // = 3 f^2 + c^2 f^3 > 0
    // c^2 f^3 < target, so the pure-cubic solution bounds f above.
    let seed = (target / c2).cbrt();
    let r_dr = |f: f64| {
        (
            target - 3.0 * f * f - c2 * f * f * f,
            -6.0 * f - 3.0 * c2 * f * f,
        )
    };
    rootfind::newton_bracketed(r_dr, seed, 0.0, seed, 1e-15, 100)
}
