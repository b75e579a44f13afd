//! Numerical toolkit for a two-parameter family of abstract surfaces of
//! negative Gauss curvature, the profile flows that generate them, and the
//! intrinsic tests that characterize them.
//!
//! Everything is keyed to a parameter pair `(c, C)` with `c != 0`:
//!
//! * [`family`] holds the potential `P`, the admissible profile domain and
//!   the cubic that links profile values to Gauss curvature.
//! * [`odeflow`] integrates the second-order profile equation and the
//!   third-order level-curvature equation adaptively, with event stops and
//!   conserved-quantity tracking, and reparametrizes profiles by quadrature.
//! * [`geometry`] evaluates metric components, Christoffel symbols and
//!   three independent curvature routes in the three supported charts.
//! * [`characterize`] computes the level-curvature jet, its admissibility
//!   window, the two scalar invariants it determines, and recovers the
//!   parameters from curvature data alone.
//! * [`extrinsic`] builds the shape operators of the associated immersion
//!   and checks the structure-equation residual battery.
//! * [`isometry`] classifies parameter pairs up to isometry and
//!   cross-checks the verdict numerically from profiles.

pub mod characterize;
pub mod error;
pub mod extrinsic;
pub mod family;
pub mod geometry;
pub mod isometry;
pub mod odeflow;
pub mod report;

mod interp;
mod quad;
mod rk;
mod rootfind;

pub use error::{Error, Result};
pub use family::{curvature_cubic_h, invert_curvature_cubic, k_of_f, DomainInterval, FamilyParams};
pub use odeflow::{
    first_integral_c, integrate_f_ode, integrate_kappa_ode, u_of_f_quadrature, ConditionFlags,
    FProfile, FSample, KappaProfile, KappaSample,
};
pub use report::{CheckEntry, CheckKind, ResidualReport};
