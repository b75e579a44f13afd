//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Bisection on a sign change of `f` over `[lo, hi]`.
///
/// Stops once the bracket width falls below `rel_tol * max(1, |lo|, |hi|)`
/// or after `max_iter` halvings, and returns the bracket midpoint.
pub(crate) fn bisect(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo.min(hi) && mid < lo.max(hi)) {
            break; // bracket exhausted at machine precision
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= rel_tol * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton iteration confined to a sign-change bracket.
///
/// Falls back to a bisection step whenever the Newton update would leave the
/// bracket or fails to shrink it fast enough, so convergence is guaranteed
/// while retaining the quadratic endgame.
pub(crate) fn newton_bracketed(
    f_df: impl Fn(f64) -> (f64, f64),
    x0: f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (flo, _) = f_df(lo);
    let (fhi, _) = f_df(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    // orient the bracket so f(xl) < 0 < f(xh)
    let (mut xl, mut xh) = if flo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = x0.clamp(lo.min(hi), lo.max(hi));
    let (mut fx, mut dfx) = f_df(x);
    if fx == 0.0 {
        return Ok(x);
    }
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    for _ in 0..max_iter {
        let newton_leaves = ((x - xh) * dfx - fx) * ((x - xl) * dfx - fx) > 0.0;
        let newton_slow = (2.0 * fx).abs() > (dx_old * dfx).abs();
        if newton_leaves || newton_slow || dfx == 0.0 {
            dx_old = dx;
            dx = 0.5 * (xh - xl);
            x = xl + dx;
        } else {
            dx_old = dx;
            dx = fx / dfx;
            x -= dx;
        }
        if dx.abs() <= rel_tol * x.abs().max(1.0) {
            return Ok(x);
        }
        let (nfx, ndfx) = f_df(x);
        fx = nfx;
        dfx = ndfx;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            xl = x;
        } else {
            xh = x;
        }
    }
    Ok(x)
}
