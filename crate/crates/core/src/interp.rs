//! Quintic Hermite segments.
//!
//! Each segment matches value, first and second derivative at both endpoints,
//! so data produced by a high-order integrator keeps its smoothness between
//! stored samples and per-segment antiderivatives are available in closed
//! form.

/// One polynomial segment on [u0, u0 + h] in the normalized variable
/// t = (u - u0) / h. Coefficients are for p(t) = sum c[k] t^k; derivatives in
/// u carry the 1/h^k scaling.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    u0: f64,
    h: f64,
    c: [f64; 6],
}

impl Segment {
    /// Build from endpoint data: values y, first derivatives m and second
    /// derivatives s at u0 and u1 = u0 + h.
    #[allow(clippy::too_many_arguments)]
    pub fn from_endpoint_data(
        u0: f64,
        u1: f64,
        y0: f64,
        m0: f64,
        s0: f64,
        y1: f64,
        m1: f64,
        s1: f64,
    ) -> Self {
        let h = u1 - u0;
        let big_m0 = m0 * h;
        let big_m1 = m1 * h;
        let big_s0 = s0 * h * h;
        let big_s1 = s1 * h * h;
        let a = y1 - y0 - big_m0 - 0.5 * big_s0;
        let b = big_m1 - big_m0 - big_s0;
        let d = big_s1 - big_s0;
        Segment {
            u0,
            h,
            c: [
                y0,
                big_m0,
                0.5 * big_s0,
                10.0 * a - 4.0 * b + 0.5 * d,
                -15.0 * a + 7.0 * b - d,
                6.0 * a - 3.0 * b + 0.5 * d,
            ],
        }
    }

    fn t(&self, u: f64) -> f64 {
        (u - self.u0) / self.h
    }

    pub fn eval(&self, u: f64) -> f64 {
        let t = self.t(u);
        let c = &self.c;
        c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))))
    }

    pub fn deriv1(&self, u: f64) -> f64 {
        let t = self.t(u);
        let c = &self.c;
        (c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])))) / self.h
    }

    pub fn deriv2(&self, u: f64) -> f64 {
        let t = self.t(u);
        let c = &self.c;
        (2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]))) / (self.h * self.h)
    }

    /// Exact integral of the segment polynomial over its full span.
    pub fn integral_full(&self) -> f64 {
        let c = &self.c;
        self.h
            * (c[0]
                + c[1] / 2.0
                + c[2] / 3.0
                + c[3] / 4.0
                + c[4] / 5.0
                + c[5] / 6.0)
    }

    /// Exact integral from u0 to u (u inside the segment).
    pub fn integral_to(&self, u: f64) -> f64 {
        let t = self.t(u);
        let c = &self.c;
        self.h
            * t
            * (c[0]
                + t * (c[1] / 2.0
                    + t * (c[2] / 3.0 + t * (c[3] / 4.0 + t * (c[4] / 5.0 + t * c[5] / 6.0)))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(u: f64) -> f64 {
        u.powi(5) - 2.0 * u.powi(3) + u - 3.0
    }
    fn qp(u: f64) -> f64 {
        5.0 * u.powi(4) - 6.0 * u * u + 1.0
    }
    fn qpp(u: f64) -> f64 {
        20.0 * u.powi(3) - 12.0 * u
    }
    fn qint(u: f64) -> f64 {
        u.powi(6) / 6.0 - u.powi(4) / 2.0 + u * u / 2.0 - 3.0 * u
    }

    #[test]
    fn reproduces_a_quintic_exactly() {
        let (u0, u1) = (0.3, 1.1);
        let seg = Segment::from_endpoint_data(
            u0,
            u1,
            q(u0),
            qp(u0),
            qpp(u0),
            q(u1),
            qp(u1),
            qpp(u1),
        );
        for k in 0..=8 {
            let u = u0 + (u1 - u0) * k as f64 / 8.0;
            assert!((seg.eval(u) - q(u)).abs() < 1e-12, "value at {u}");
            assert!((seg.deriv1(u) - qp(u)).abs() < 1e-11, "deriv1 at {u}");
            assert!((seg.deriv2(u) - qpp(u)).abs() < 1e-10, "deriv2 at {u}");
        }
        assert!((seg.integral_full() - (qint(u1) - qint(u0))).abs() < 1e-13);
        let um = 0.5 * (u0 + u1);
        assert!((seg.integral_to(um) - (qint(um) - qint(u0))).abs() < 1e-13);
    }

    #[test]
    fn partial_integral_endpoints() {
        let seg = Segment::from_endpoint_data(0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        assert_eq!(seg.integral_to(0.0), 0.0);
        assert!((seg.integral_to(1.0) - seg.integral_full()).abs() < 1e-15);
    }

    #[test]
    fn negative_span_segment_integrates_with_sign() {
        // descending span: integral over [1.0 -> 0.0] of 1 du = -1
        let seg = Segment::from_endpoint_data(1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        assert!((seg.integral_full() + 1.0).abs() < 1e-15);
    }
}
