//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! The stepper is direction-agnostic and clamps its final step so requested
//! target times are hit exactly rather than interpolated; callers that need
//! arbitrary-time evaluation keep checkpoints and re-integrate the short
//! remainder from the nearest one.

use crate::error::{Error, Result};

/// Tolerances and limits for one integration.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

impl OdeOptions {
    pub fn with_rtol(rtol: f64) -> Self {
        Self {
            rtol,
            atol: rtol * 1e-2,
            ..Self::default()
        }
    }
}

// Dormand-Prince 5(4) tableau.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One in-flight integration. `F: Fn(t, &y) -> Result<[f64; N]>`.
pub struct Stepper<'a, F, const N: usize> {
    rhs: &'a F,
    opts: OdeOptions,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    steps: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        let ch = c * h;
        for i in 0..N {
            out[i] += ch * k[i];
        }
    }
    out
}

impl<'a, F, const N: usize> Stepper<'a, F, N>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    pub fn new(rhs: &'a F, t0: f64, y0: [f64; N], opts: OdeOptions) -> Result<Self> {
        let k1 = rhs(t0, &y0)?;
        Ok(Self {
            rhs,
            opts,
            t: t0,
            y: y0,
            k1,
            h: 0.0,
            steps: 0,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    fn initial_step(&self, dir: f64, span: f64) -> f64 {
        // Crude but deterministic: scale by the current derivative magnitude.
        let sc = |i: usize| self.opts.atol + self.opts.rtol * self.y[i].abs();
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for i in 0..N {
            d0 += (self.y[i] / sc(i)).powi(2);
            d1 += (self.k1[i] / sc(i)).powi(2);
        }
        let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
        let mut h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h = h.min(span.abs() / 10.0).min(self.opts.h_max).max(1e-12);
        dir * h
    }

    /// Advance until `t == target` (exactly), adapting step size.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        if target == self.t {
            return Ok(());
        }
        let dir = (target - self.t).signum();
        if self.h == 0.0 || self.h.signum() != dir {
            self.h = self.initial_step(dir, target - self.t);
        }
        loop {
            let remaining = target - self.t;
            if remaining == 0.0 {
                return Ok(());
            }
            let mut h = self.h;
            let mut last = false;
            if h.abs() >= remaining.abs() {
                h = remaining;
                last = true;
            }
            if h.abs() < 16.0 * f64::EPSILON * self.t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t: self.t });
            }
            self.steps += 1;
            if self.steps > self.opts.max_steps {
                return Err(Error::MaxStepsExceeded {
                    t: self.t,
                    max_steps: self.opts.max_steps,
                });
            }

            let (t, y, k1) = (self.t, &self.y, &self.k1);
            let rhs = self.rhs;
            let k2 = rhs(t + C2 * h, &axpy(y, h, &[(A21, k1)]))?;
            let k3 = rhs(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
            let k4 = rhs(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = rhs(
                t + C5 * h,
                &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = rhs(
                t + h,
                &axpy(
                    y,
                    h,
                    &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let y1 = axpy(
                y,
                h,
                &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let t1 = if last { target } else { t + h };
            let k7 = rhs(t1, &y1)?;

            // Weighted RMS error of the embedded 4th-order difference.
            let mut err: f64 = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = self.opts.atol + self.opts.rtol * self.y[i].abs().max(y1[i].abs());
                err += (e / sc).powi(2);
            }
            err = (err / N as f64).sqrt();

            if err <= 1.0 {
                self.t = t1;
                self.y = y1;
                self.k1 = k7; // FSAL
                let scale = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                self.h = (h * scale).clamp(-self.opts.h_max, self.opts.h_max);
                if self.h == 0.0 {
                    self.h = h;
                }
                if last {
                    return Ok(());
                }
            } else {
                let scale = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                self.h = h * scale;
            }
        }
    }
}

/// Integrate from `t0` to `t1` and return the final state.
pub fn solve_to<F, const N: usize>(
    rhs: &F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: OdeOptions,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut s = Stepper::new(rhs, t0, y0, opts)?;
    s.advance_to(t1)?;
    Ok(s.y)
}

/// Integrate through a monotone sequence of times, calling `sink` at each.
///
/// `times` must move strictly away from `t0` in one direction; the first
/// entry may equal `t0`.
pub fn solve_sampled<F, S, const N: usize>(
    rhs: &F,
    t0: f64,
    y0: [f64; N],
    times: &[f64],
    opts: OdeOptions,
    mut sink: S,
) -> Result<()>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
    S: FnMut(f64, &[f64; N]),
{
    let mut s = Stepper::new(rhs, t0, y0, opts)?;
    for &t in times {
        s.advance_to(t)?;
        sink(t, s.y());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let rhs = |_t: f64, y: &[f64; 1]| Ok([-y[0]]);
        let y = solve_to(&rhs, 0.0, [1.0], 5.0, OdeOptions::default()).unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_two_ways() {
        let rhs = |_t: f64, y: &[f64; 2]| Ok([y[1], -y[0]]);
        let y = solve_to(&rhs, 0.0, [1.0, 0.0], 10.0, OdeOptions::default()).unwrap();
        assert!((y[0] - 10.0f64.cos()).abs() < 1e-9);
        assert!((y[1] + 10.0f64.sin()).abs() < 1e-9);
        // Backward in time from there must return to the start.
        let y0 = solve_to(&rhs, 10.0, y, 0.0, OdeOptions::default()).unwrap();
        assert!((y0[0] - 1.0).abs() < 1e-9);
        assert!(y0[1].abs() < 1e-9);
    }

    #[test]
    fn sampled_times_are_hit_exactly() {
        let rhs = |t: f64, _y: &[f64; 1]| Ok([t.cos()]);
        let times: Vec<f64> = (1..=10).map(|k| 0.3 * k as f64).collect();
        let mut got = Vec::new();
        solve_sampled(&rhs, 0.0, [0.0], &times, OdeOptions::default(), |t, y| {
            got.push((t, y[0]));
        })
        .unwrap();
        for (k, &(t, v)) in got.iter().enumerate() {
            assert_eq!(t, times[k]);
            assert!((v - t.sin()).abs() < 2e-10, "t={t} v={v}");
        }
    }

    #[test]
    fn rhs_error_propagates() {
        let rhs = |t: f64, _y: &[f64; 1]| {
            if t > 0.5 {
                Err(Error::InvalidParameter {
                    name: "t",
                    reason: "poisoned".into(),
                })
            } else {
                Ok([1.0])
            }
        };
        assert!(solve_to(&rhs, 0.0, [0.0], 1.0, OdeOptions::default()).is_err());
    }
}
