//! Shape operators, second fundamental form and the compatibility equations
//! of the immersed surface.
//!
//! In the adapted normal frame {e3 = H/|H|, e4} the shape operators of a
//! family member are diagonal in the principal frame {E1, E2}:
//!   A3 = diag(-f, 3f),   A4 = diag(lambda, -lambda),  lambda = c f^(3/2),
//! so B(E1,E1) = (-f, lambda), B(E2,E2) = (3f, -lambda), B(E1,E2) = 0 and
//! the mean curvature vector is (f, 0).

use crate::error::{Error, Result};
use crate::report::ResidualReport;

/// Shape operators in the principal frame, stored as 2x2 matrices
/// [[E1E1, E1E2], [E2E1, E2E2]], together with the state that built them.
#[derive(Debug, Clone, Copy)]
pub struct ShapeOperators {
    pub a3: [[f64; 2]; 2],
    pub a4: [[f64; 2]; 2],
    pub f: f64,
    pub c: f64,
}

/// Second fundamental form components; each pair is (e3, e4) coordinates.
#[derive(Debug, Clone, Copy)]
pub struct SecondFundamental {
    pub b11: (f64, f64),
    pub b12: (f64, f64),
    pub b22: (f64, f64),
}

impl SecondFundamental {
    /// Mean curvature vector (1/2) trace B in (e3, e4) coordinates.
    pub fn mean_curvature(&self) -> (f64, f64) {
        (
            0.5 * (self.b11.0 + self.b22.0),
            0.5 * (self.b11.1 + self.b22.1),
        )
    }
}

/// Build the adapted frame at mean curvature f. c = 0 is allowed here (the
/// degenerate one-normal-direction case probed by the rank test); it is the
/// family itself that requires c != 0.
pub fn build_frame(f: f64, c: f64) -> Result<(ShapeOperators, SecondFundamental)> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::Domain(format!(
            "frame requires finite f > 0, got f = {f}"
        )));
    }
    if !c.is_finite() {
        return Err(Error::Domain(format!("c must be finite, got {c}")));
    }
    let lambda = c * f.powf(1.5);
    let ops = ShapeOperators {
        a3: [[-f, 0.0], [0.0, 3.0 * f]],
        a4: [[lambda, 0.0], [0.0, -lambda]],
        f,
        c,
    };
    let second = SecondFundamental {
        b11: (-f, lambda),
        b12: (0.0, 0.0),
        b22: (3.0 * f, -lambda),
    };
    Ok((ops, second))
}

/// The five compatibility residuals evaluated on an explicit frame, so that
/// perturbed operators register as failures. Entry conventions:
/// - gauss: (-1 + det A3 + det A4) - (-1 - 3f^2 - c^2 f^3)
/// - codazzi_e3 / codazzi_e4: E1(A_22) - w12(E2) (A_22 - A_11), with entry
///   derivatives taken by homogeneity (A3 entries scale like f, A4 entries
///   like f^(3/2))
/// - ricci: largest entry of [A3, A4] (flat normal bundle)
/// - biconservativity: components of A3(grad f) + f grad f, grad f = f' E1
pub fn residuals_from_frame(
    ops: &ShapeOperators,
    f_prime: f64,
    ) -> Result<ResidualReport> {
    let f = ops.f;
    if !(f > 0.0) {
        return Err(Error::Domain(format!(
            "residuals require f > 0, got f = {f}"
        )));
    }
    let c = ops.c;
    let w = 0.75 * f_prime / f; // w12(E2) = (3/4) f'/f
    let det_a3 = ops.a3[0][0] * ops.a3[1][1] - ops.a3[0][1] * ops.a3[1][0];
    let det_a4 = ops.a4[0][0] * ops.a4[1][1] - ops.a4[0][1] * ops.a4[1][0];
    let k_shape = -1.0 + det_a3 + det_a4;
    let k_cubic = -1.0 - 3.0 * f * f - c * c * f * f * f;
    let gauss = k_shape - k_cubic;

    let e1_a3_22 = ops.a3[1][1] * f_prime / f;
    let codazzi_e3 = e1_a3_22 - w * (ops.a3[1][1] - ops.a3[0][0]);
    let e1_a4_22 = 1.5 * ops.a4[1][1] * f_prime / f;
    let codazzi_e4 = e1_a4_22 - w * (ops.a4[1][1] - ops.a4[0][0]);

    let mut ricci: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let comm = ops.a3[i][0] * ops.a4[0][j] + ops.a3[i][1] * ops.a4[1][j]
                - (ops.a4[i][0] * ops.a3[0][j] + ops.a4[i][1] * ops.a3[1][j]);
            ricci = ricci.max(comm.abs());
        }
    }

    let bicons_e1 = f_prime * (ops.a3[0][0] + f);
    let bicons_e2 = f_prime * ops.a3[1][0];
    let biconservativity = bicons_e1.abs().max(bicons_e2.abs());

    let mut report = ResidualReport::new();
    report.push_residual("gauss", gauss, 1e-12);
    report.push_residual("codazzi_e3", codazzi_e3, 1e-12);
    report.push_residual("codazzi_e4", codazzi_e4, 1e-12);
    report.push_residual("ricci", ricci, 1e-12);
    report.push_residual("biconservativity", biconservativity, 1e-12);
    Ok(report)
}

/// Compatibility residuals at the state (f, f'), built from the honest frame.
pub fn fundamental_residuals(f: f64, f_prime: f64, c: f64) -> Result<ResidualReport> {
    let (ops, _) = build_frame(f, c)?;
    residuals_from_frame(&ops, f_prime)
}

/// Determinant of the 2x2 matrix with rows B(E1,E1) and B(E2,E2) in the
/// (e3, e4) coordinates, and the dimension of the first normal space:
/// det = -2 c f^(5/2), so the rank is 2 exactly when c != 0.
pub fn first_normal_rank(f: f64, c: f64) -> Result<(f64, u32)> {
    let (_, second) = build_frame(f, c)?;
    let det = second.b11.0 * second.b22.1 - second.b11.1 * second.b22.0;
    let rank = if det != 0.0 { 2 } else { 1 };
    Ok((det, rank))
}

/// Residual of the scalar PDE satisfied by the mean curvature,
///   f Lap f + |grad f|^2 - (4/3) f^2 - 4 f^4 - (4/3) c^2 f^5 = 0,
/// in the sign convention Lap f = -f'' + (3/4) f'^2 / f (positive Laplacian;
/// at the reference state Lap f = 44/9). The coefficient signs follow from
/// substituting f'' = P'(f)/2 and f'^2 = P(f):
///   -f P'/2 + (7/4) P = (4/3) f^2 + 4 f^4 + (4/3) c^2 f^5 identically.
pub fn pde_residual(f: f64, grad_f_norm: f64, laplacian_f: f64, c: f64) -> Result<f64> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::Domain(format!(
            "PDE residual requires finite f > 0, got f = {f}"
        )));
    }
    if !(grad_f_norm >= 0.0) {
        return Err(Error::Domain(format!(
            "|grad f| must be nonnegative, got {grad_f_norm}"
        )));
    }
    Ok(f * laplacian_f + grad_f_norm * grad_f_norm
        - (4.0 / 3.0) * f * f
        - 4.0 * f.powi(4)
        - (4.0 / 3.0) * c * c * f.powi(5))
}
