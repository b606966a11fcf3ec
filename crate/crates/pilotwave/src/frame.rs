//! Invariant frames: the auxiliary functions g-, g0, g+ and the accumulated
//! phase Theta built from one classical mode. The quadratic form
//! I = (g- p^2 + 2 g0 q p + g+ q^2)/2 is conserved along the classical flow,
//! and its eigenstates furnish exact solutions of the wave equation.

use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::mode::ClassicalMode;
use crate::ode::{self, OdeOptions};
use crate::oscillator::OscillatorModel;
use crate::quad;

/// A classical phase-space sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub t: f64,
    pub q: f64,
    pub p: f64,
}

struct FrameInner {
    mode: ClassicalMode,
    omega_i: f64,
    t0: f64,
    theta: ThetaCache,
}

/// Accumulated-phase cache: Theta at fixed grid times t0 +/- k*cell, filled
/// cell by cell so values never depend on the query order.
struct ThetaCache {
    cell: f64,
    fwd: RwLock<Vec<f64>>,
    bwd: RwLock<Vec<f64>>,
}

const THETA_CELL_TOL: f64 = 1e-12;
const MAX_CELLS: usize = 4_000_000;

/// One Lewis-Riesenfeld-type invariant frame over a classical mode.
///
/// Immutable after construction and cheap to clone; safe to share across
/// tasks (the phase cache is lock-protected).
#[derive(Clone)]
pub struct InvariantFrame {
    inner: Arc<FrameInner>,
}

/// Build a frame from a normalized mode. `omega_i` is the overall scale of
/// the invariant; the guidance field and trajectories do not depend on it.
pub fn build_frame(mode: &ClassicalMode, omega_i: f64, t0: f64) -> Result<InvariantFrame> {
    if !(omega_i > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega_i",
            reason: format!("invariant scale must be positive, got {omega_i}"),
        });
    }
    let model = mode.model();
    let scale = model.omega0().max(model.gamma()).max(1e-2);
    Ok(InvariantFrame {
        inner: Arc::new(FrameInner {
            mode: mode.clone(),
            omega_i,
            t0,
            theta: ThetaCache {
                cell: 0.5 / scale,
                fwd: RwLock::new(vec![0.0]),
                bwd: RwLock::new(vec![0.0]),
            },
        }),
    })
}

impl InvariantFrame {
    pub fn mode(&self) -> &ClassicalMode {
        &self.inner.mode
    }

    pub fn model(&self) -> &OscillatorModel {
        self.inner.mode.model()
    }

    pub fn omega_i(&self) -> f64 {
        self.inner.omega_i
    }

    pub fn t0(&self) -> f64 {
        self.inner.t0
    }

    /// g-(t) = 2 omega_I |f(t)|^2 (always positive).
    pub fn g_minus(&self, t: f64) -> Result<f64> {
        let s = self.inner.mode.eval(t)?;
        Ok(2.0 * self.inner.omega_i * s.f.norm_sqr())
    }

    /// g0(t) = -(M/2) d(g-)/dt, with the derivative taken analytically
    /// through fdot: g0 = -2 M omega_I Re(fdot f*).
    pub fn g_zero(&self, t: f64) -> Result<f64> {
        let s = self.inner.mode.eval(t)?;
        Ok(-2.0 * self.model().mass(t) * self.inner.omega_i * (s.fdot * s.f.conj()).re)
    }

    /// g+(t) = (omega_I^2 + g0^2) / g-.
    pub fn g_plus(&self, t: f64) -> Result<f64> {
        let s = self.inner.mode.eval(t)?;
        let g_minus = 2.0 * self.inner.omega_i * s.f.norm_sqr();
        let g_zero = -2.0 * self.model().mass(t) * self.inner.omega_i * (s.fdot * s.f.conj()).re;
        Ok((self.inner.omega_i * self.inner.omega_i + g_zero * g_zero) / g_minus)
    }

    /// All three auxiliary functions from a single mode evaluation.
    pub fn g_all(&self, t: f64) -> Result<(f64, f64, f64)> {
        let s = self.inner.mode.eval(t)?;
        let wi = self.inner.omega_i;
        let g_minus = 2.0 * wi * s.f.norm_sqr();
        let g_zero = -2.0 * self.model().mass(t) * wi * (s.fdot * s.f.conj()).re;
        let g_plus = (wi * wi + g_zero * g_zero) / g_minus;
        Ok((g_minus, g_zero, g_plus))
    }

    /// Branch-continuous accumulated phase Theta(t, t0) =
    /// integral of dt / (2 M |f|^2), strictly increasing in t.
    pub fn theta(&self, t: f64) -> Result<f64> {
        let t0 = self.inner.t0;
        let cache = &self.inner.theta;
        let integrand = |s: f64| {
            let sample = self.inner.mode.eval(s)?;
            Ok(1.0 / (2.0 * self.model().mass(s) * sample.f.norm_sqr()))
        };
        let (dir, grid) = if t >= t0 {
            (1.0, &cache.fwd)
        } else {
            (-1.0, &cache.bwd)
        };
        let offset = (t - t0) * dir;
        let k = (offset / cache.cell).floor() as usize;
        if k + 1 > MAX_CELLS {
            return Err(Error::InvalidParameter {
                name: "t",
                reason: format!("phase evaluation time {t} too far from t0 = {t0}"),
            });
        }
        if grid.read().expect("theta cache lock poisoned").len() <= k {
            let mut w = grid.write().expect("theta cache lock poisoned");
            while w.len() <= k {
                let i = w.len();
                let t_from = t0 + dir * ((i - 1) as f64) * cache.cell;
                let t_to = t0 + dir * (i as f64) * cache.cell;
                let seg = quad::integrate(&integrand, t_from, t_to, THETA_CELL_TOL)?;
                let prev = w[i - 1];
                w.push(prev + seg);
            }
        }
        let tk = t0 + dir * (k as f64) * cache.cell;
        let base = grid.read().expect("theta cache lock poisoned")[k];
        if t == tk {
            return Ok(base);
        }
        Ok(base + quad::integrate(&integrand, tk, t, THETA_CELL_TOL)?)
    }

    /// Classical value of the invariant at a phase point:
    /// I = (g- p^2 + 2 g0 q p + g+ q^2) / 2, non-negative.
    pub fn invariant_value(&self, point: &PhasePoint) -> Result<f64> {
        let (g_minus, g_zero, g_plus) = self.g_all(point.t)?;
        Ok(0.5 * (g_minus * point.p * point.p
            + 2.0 * g_zero * point.q * point.p
            + g_plus * point.q * point.q))
    }
}

/// Integrate Hamilton's equations qdot = p/M, pdot = -M omega^2 q and return
/// `n_out + 1` uniform samples over [t_start, t_end]. Used to test that the
/// invariant is conserved along the classical flow.
pub fn classical_flow(
    model: &OscillatorModel,
    q0: f64,
    p0: f64,
    t_start: f64,
    t_end: f64,
    n_out: usize,
) -> Result<Vec<PhasePoint>> {
    if n_out == 0 || !(t_end > t_start) {
        return Err(Error::InvalidParameter {
            name: "t_span",
            reason: "need t_end > t_start and at least one output step".into(),
        });
    }
    let m = *model;
    let rhs = move |t: f64, y: &[f64; 2]| {
        Ok([y[1] / m.mass(t), -m.potential_gradient(y[0], t)])
    };
    let dt = (t_end - t_start) / n_out as f64;
    let times: Vec<f64> = (0..=n_out)
        .map(|k| {
            if k == n_out {
                t_end
            } else {
                t_start + dt * k as f64
            }
        })
        .collect();
    let mut out = Vec::with_capacity(times.len());
    ode::solve_sampled(
        &rhs,
        t_start,
        [q0, p0],
        &times,
        OdeOptions::default(),
        |t, y| {
            out.push(PhasePoint {
                t,
                q: y[0],
                p: y[1],
            });
        },
    )?;
    Ok(out)
}
