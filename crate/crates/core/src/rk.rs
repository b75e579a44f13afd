//! Embedded Dormand-Prince 5(4) integrator with dense output.
//!
//! One accepted step at a time: the driver inspects each `Accepted` record
//! for events before asking for the next step, and the order-4 dense output
//! lets event locations be bisected to far below the step size without
//! re-integrating. Step size selection is the usual PI controller; the first
//! stage is reused from the last stage of the previous step.

use crate::error::{Error, Result};

const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC1: f64 = 0.2;
const FAC2: f64 = 10.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

/// One accepted step [u0, u1] with its dense-output coefficients.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Accepted<const N: usize> {
    pub u0: f64,
    pub u1: f64,
    pub y1: [f64; N],
    /// derivative at u1 (the reused first stage of the next step)
    pub dy1: [f64; N],
    rcont: [[f64; N]; 5],
}

impl<const N: usize> Accepted<N> {
    /// Interpolated state anywhere inside [u0, u1] (order 4).
    pub fn eval(&self, u: f64) -> [f64; N] {
        let theta = (u - self.u0) / (self.u1 - self.u0);
        let th1 = 1.0 - theta;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = self.rcont[0][i]
                + theta
                    * (self.rcont[1][i]
                        + th1
                            * (self.rcont[2][i]
                                + theta * (self.rcont[3][i] + th1 * self.rcont[4][i])));
        }
        out
    }
}

pub(crate) struct Integrator<F, const N: usize>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    rhs: F,
    opts: Options,
    pub u: f64,
    pub y: [f64; N],
    k1: [f64; N],
    h: f64,
    dir: f64,
    facold: f64,
    reject: bool,
    pub accepted: usize,
    pub rejected: usize,
}

impl<F, const N: usize> Integrator<F, N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(rhs: F, u0: f64, y0: [f64; N], direction: f64, opts: Options) -> Self {
        let k1 = rhs(u0, &y0);
        let dir = direction.signum();
        let h = hinit(&rhs, u0, &y0, &k1, dir, &opts);
        Integrator {
            rhs,
            opts,
            u: u0,
            y: y0,
            k1,
            h,
            dir,
            facold: 1e-4,
            reject: false,
            accepted: 0,
            rejected: 0,
        }
    }

    /// Advance by one accepted step. If `end` is given, the step is trimmed
    /// so the trajectory never passes it.
    pub fn step(&mut self, end: Option<f64>) -> Result<Accepted<N>> {
        loop {
            if self.accepted + self.rejected >= self.opts.max_steps {
                return Err(Error::Divergent(format!(
                    "step limit {} reached at u = {:.6e}",
                    self.opts.max_steps, self.u
                )));
            }
            let mut h = self.h;
            if let Some(e) = end {
                if (self.u + 1.01 * h - e) * self.dir > 0.0 {
                    h = e - self.u;
                }
            }
            if (0.1 * h).abs() <= self.u.abs() * f64::EPSILON {
                return Err(Error::Divergent(format!(
                    "step size underflow at u = {:.6e}",
                    self.u
                )));
            }

            let u = self.u;
            let y = &self.y;
            let k1 = self.k1;
            let mut yt = [0.0; N];

            for i in 0..N {
                yt[i] = y[i] + h * A21 * k1[i];
            }
            let k2 = (self.rhs)(u + C2 * h, &yt);
            for i in 0..N {
                yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            let k3 = (self.rhs)(u + C3 * h, &yt);
            for i in 0..N {
                yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            let k4 = (self.rhs)(u + C4 * h, &yt);
            for i in 0..N {
                yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            let k5 = (self.rhs)(u + C5 * h, &yt);
            for i in 0..N {
                yt[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            let k6 = (self.rhs)(u + h, &yt);
            let mut ynew = [0.0; N];
            for i in 0..N {
                ynew[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            let k7 = (self.rhs)(u + h, &ynew);

            let mut err = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(ynew[i].abs());
                err += (e / sc) * (e / sc);
            }
            err = (err / N as f64).sqrt();

            if !err.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
                self.rejected += 1;
                self.reject = true;
                self.h = 0.25 * h;
                continue;
            }

            let fac11 = err.powf(0.2 - BETA * 0.75);
            if err <= 1.0 {
                // accept
                let fac = (fac11 / self.facold.powf(BETA) / SAFE)
                    .clamp(1.0 / FAC2, 1.0 / FAC1);
                let mut hnew = h / fac;
                if hnew.abs() > self.opts.h_max {
                    hnew = self.dir * self.opts.h_max;
                }
                if self.reject {
                    hnew = self.dir * hnew.abs().min(h.abs());
                }
                self.facold = err.max(1e-4);
                self.reject = false;

                let mut rcont = [[0.0; N]; 5];
                for i in 0..N {
                    let ydiff = ynew[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    rcont[0][i] = y[i];
                    rcont[1][i] = ydiff;
                    rcont[2][i] = bspl;
                    rcont[3][i] = ydiff - h * k7[i] - bspl;
                    rcont[4][i] = h
                        * (D1 * k1[i]
                            + D3 * k3[i]
                            + D4 * k4[i]
                            + D5 * k5[i]
                            + D6 * k6[i]
                            + D7 * k7[i]);
                }
                let record = Accepted {
                    u0: u,
                    u1: u + h,
                    y1: ynew,
                    dy1: k7,
                    rcont,
                };
                self.u = u + h;
                self.y = ynew;
                self.k1 = k7;
                self.h = hnew;
                self.accepted += 1;
                return Ok(record);
            }
            // reject
            self.h = h / (fac11 / SAFE).min(1.0 / FAC1);
            self.reject = true;
            self.rejected += 1;
        }
    }
}

/// Starting step size estimate (order 5 formula on the scaled derivatives).
fn hinit<F, const N: usize>(
    rhs: &F,
    u0: f64,
    y0: &[f64; N],
    k1: &[f64; N],
    dir: f64,
    opts: &Options,
) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y0[i].abs();
        dnf += (k1[i] / sc) * (k1[i] / sc);
        dny += (y0[i] / sc) * (y0[i] / sc);
    }
    let mut h0 = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h0 = h0.min(opts.h_max);
    let h0 = dir * h0;

    let mut y1 = [0.0; N];
    for i in 0..N {
        y1[i] = y0[i] + h0 * k1[i];
    }
    let f1 = rhs(u0 + h0, &y1);
    let mut der2 = 0.0;
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y0[i].abs();
        der2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
    }
    let der2 = der2.sqrt() / h0.abs();

    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h0.abs() * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    dir * (100.0 * h0.abs()).min(h1).min(opts.h_max)
}
