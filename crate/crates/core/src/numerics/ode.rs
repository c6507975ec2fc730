//! Embedded Dormand–Prince 5(4) integrator over fixed-size states.
//!
//! The right-hand side returns `None` when a trial stage leaves the region
//! where the system is defined (e.g. beyond a horizon); the step is then
//! rejected and retried with a smaller step instead of aborting.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    pub const fn new(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10, 1e-12)
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
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

// fifth-order weights minus the embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const MAX_STEPS: usize = 2_000_000;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Stateful stepper; one accepted step per call to [`Dopri5::step_toward`].
pub struct Dopri5<const N: usize, F>
where
    F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
{
    rhs: F,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    tol: Tolerance,
    h_max: f64,
    steps: usize,
}

impl<const N: usize, F> Dopri5<N, F>
where
    F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
{
    /// `h0` is a signed initial step guess; its sign fixes the direction.
    pub fn new(mut rhs: F, t0: f64, y0: [f64; N], h0: f64, tol: Tolerance) -> Result<Self> {
        if h0 == 0.0 || !h0.is_finite() {
            return Err(Error::Integration(format!("bad initial step {h0}")));
        }
        let k1 = rhs(t0, &y0).ok_or_else(|| {
            Error::Integration(format!("right-hand side undefined at start t={t0}"))
        })?;
        Ok(Self {
            rhs,
            t: t0,
            y: y0,
            k1,
            h: h0,
            tol,
            h_max: f64::INFINITY,
            steps: 0,
        })
    }

    pub fn with_max_step(mut self, h_max: f64) -> Self {
        self.h_max = h_max.abs();
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Derivative at the current point (first stage of the next step).
    pub fn derivative(&self) -> &[f64; N] {
        &self.k1
    }

    /// Takes one accepted step, never stepping past `t_end`.
    /// Returns `true` once `t_end` has been reached.
    pub fn step_toward(&mut self, t_end: f64) -> Result<bool> {
        let dir = if t_end >= self.t { 1.0 } else { -1.0 };
        if self.t == t_end {
            return Ok(true);
        }
        let mut h = self.h.abs().min(self.h_max) * dir;
        loop {
            if self.steps >= MAX_STEPS {
                return Err(Error::Integration(format!(
                    "step budget exhausted at t={}",
                    self.t
                )));
            }
            let remaining = t_end - self.t;
            let last = h.abs() >= remaining.abs();
            if last {
                h = remaining;
            }
            let min_h = 1e-14 * self.t.abs().max(1e-300);
            if h.abs() < min_h {
                return Err(Error::Integration(format!(
                    "step size underflow at t={}",
                    self.t
                )));
            }
            match self.trial(h) {
                Some((y_new, k7, err)) if err <= 1.0 => {
                    self.steps += 1;
                    self.t = if last { t_end } else { self.t + h };
                    self.y = y_new;
                    self.k1 = k7;
                    let fac = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    // keep the pre-truncation step length for the next call
                    if !last || fac < 1.0 {
                        self.h = (h.abs() * fac).min(self.h_max);
                    }
                    return Ok(last);
                }
                Some((_, _, err)) if err.is_finite() => {
                    self.steps += 1;
                    h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                }
                _ => {
                    self.steps += 1;
                    h *= 0.25;
                }
            }
        }
    }

    fn trial(&mut self, h: f64) -> Option<([f64; N], [f64; N], f64)> {
        let t = self.t;
        let y = &self.y;
        let k1 = self.k1;
        let k2 = (self.rhs)(t + C2 * h, &axpy(y, h, &[(A21, &k1)]))?;
        let k3 = (self.rhs)(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = (self.rhs)(
            t + C4 * h,
            &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )?;
        let k5 = (self.rhs)(
            t + C5 * h,
            &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let k6 = (self.rhs)(
            t + h,
            &axpy(
                y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        )?;
        let y_new = axpy(
            y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        if y_new.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let k7 = (self.rhs)(t + h, &y_new)?;
        let mut acc = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = self.tol.atol + self.tol.rtol * y[i].abs().max(y_new[i].abs());
            acc += (e / scale).powi(2);
        }
        Some((y_new, k7, (acc / N as f64).sqrt()))
    }
}

/// Integrates from `t0` to `t1` and returns the final state.
pub fn integrate<const N: usize, F>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    tol: Tolerance,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
{
    if t0 == t1 {
        return Ok(y0);
    }
    let span = t1 - t0;
    let mut stepper = Dopri5::new(rhs, t0, y0, span * 1e-3, tol)?;
    while !stepper.step_toward(t1)? {}
    Ok(*stepper.y())
}
