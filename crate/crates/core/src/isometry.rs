//! When are two family members the same surface?
//!
//! Parameters (c, C) and (-c, C) describe congruent immersions, so the
//! canonical representative carries c > 0. `classify` compares canonical
//! parameters exactly; `invariant_match` never looks at parameters at all:
//! it compares the relation K -> kappa, which is a complete isometry
//! invariant of the profile metrics, on a common curvature window. Matching
//! metrics are related by v -> +-v + b (rotation or reflection of the level
//! circles), which is what the witness records.

use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::geometry::{gauss_curvature_analytic, level_curve_curvature};
use crate::odeflow::FProfile;
use crate::rootfind::bisect;

/// The v-isometries identifying two matched metrics: both orientations work
/// and the translation part is free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsometryWitness {
    pub sign_choices: [i8; 2],
    pub v_translation_free: bool,
}

impl IsometryWitness {
    fn full() -> Self {
        IsometryWitness {
            sign_choices: [1, -1],
            v_translation_free: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsometryVerdict {
    pub isometric: bool,
    pub witness: Option<IsometryWitness>,
}

/// Canonical representative of the parameter pair: c replaced by |c|.
/// FamilyParams already stores the canonical sign, so this is idempotent by
/// construction.
pub fn canonical_form(params: &FamilyParams) -> FamilyParams {
    FamilyParams::new(params.c(), params.big_c()).expect("canonical parameters stay valid")
}

/// Exact classification by canonical parameters: isometric iff |c1| == |c2|
/// and C1 == C2.
pub fn classify(params1: &FamilyParams, params2: &FamilyParams) -> IsometryVerdict {
    let a = canonical_form(params1);
    let b = canonical_form(params2);
    let same = a.c() == b.c() && a.big_c() == b.big_c();
    IsometryVerdict {
        isometric: same,
        witness: same.then(IsometryWitness::full),
    }
}

/// K at a profile point, decreasing in u (f increases, K = -1 - 3f^2 - c^2 f^3).
fn k_at(profile: &FProfile, u: f64) -> Result<f64> {
    let s = profile.state_at(u)?;
    gauss_curvature_analytic(s.f, s.f_prime, s.f_double_prime)
}

/// kappa at the unique profile point with K(u) = k_target.
fn kappa_at_curvature(profile: &FProfile, k_target: f64) -> Result<f64> {
    let (lo, hi) = profile.u_range();
    let g = |u: f64| k_target - k_at(profile, u).unwrap_or(f64::NAN);
    let u = bisect(g, lo, hi, 1e-13, 200)?;
    let s = profile.state_at(u)?;
    level_curve_curvature(s.f, s.f_prime)
}

/// Parameter-free isometry test: compare kappa as a function of K on 33
/// points spanning the common curvature range of the two profiles. Profiles
/// whose curvature ranges do not overlap cannot be compared and yield an
/// indeterminacy error rather than a verdict.
pub fn invariant_match(
    prof1: &FProfile,
    prof2: &FProfile,
    tol: f64,
) -> Result<IsometryVerdict> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    const GRID: usize = 33;
    let (lo1, hi1) = prof1.u_range();
    let (lo2, hi2) = prof2.u_range();
    // K decreases along u: the range is [K(hi), K(lo)]
    let range1 = (k_at(prof1, hi1)?, k_at(prof1, lo1)?);
    let range2 = (k_at(prof2, hi2)?, k_at(prof2, lo2)?);
    let k_lo = range1.0.max(range2.0);
    let k_hi = range1.1.min(range2.1);
    if !(k_lo < k_hi) {
        return Err(Error::Indeterminate(format!(
            "curvature ranges [{:.6}, {:.6}] and [{:.6}, {:.6}] do not overlap",
            range1.0, range1.1, range2.0, range2.1
        )));
    }
    let inset = 1e-6 * (k_hi - k_lo);
    let a = k_lo + inset;
    let b = k_hi - inset;
    let mut matched = true;
    for j in 0..GRID {
        let k = a + (b - a) * j as f64 / (GRID - 1) as f64;
        let kappa1 = kappa_at_curvature(prof1, k)?;
        let kappa2 = kappa_at_curvature(prof2, k)?;
        if (kappa1 - kappa2).abs() > tol * kappa1.abs().max(1.0) {
            matched = false;
            break;
        }
    }
    Ok(IsometryVerdict {
        isometric: matched,
        witness: matched.then(IsometryWitness::full),
    })
}
