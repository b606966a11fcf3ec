//! Complex classical mode functions f(t) of the oscillator equation
//! d/dt[M(t) df/dt] + M(t) omega^2(t) f = 0, normalized so the Wronskian
//! i M (fdot f* - f fdot*) equals 1. A mode fixes one quadratic invariant
//! and, through it, a family of exact quantum states.

use std::sync::{Arc, RwLock};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions};
use crate::oscillator::{Family, OscillatorModel};

/// Mode value, derivative and second derivative at one time.
#[derive(Debug, Clone, Copy)]
pub struct ModeSample {
    pub f: C64,
    pub fdot: C64,
    pub fddot: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSource {
    AnalyticStatic,
    AnalyticDamped,
    Numeric,
    Combined,
}

/// Bogoliubov mixing coefficients with |u|^2 - |v|^2 = 1.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovParams {
    u: C64,
    v: C64,
    sigma: f64,
    theta_u: f64,
    theta_v: f64,
}

const UV_DEFECT_TOL: f64 = 1e-9;

impl BogoliubovParams {
    /// Build from the raw coefficients; rejects |u|^2 - |v|^2 away from 1.
    pub fn from_uv(u: C64, v: C64) -> Result<Self> {
        let defect = (u.norm_sqr() - v.norm_sqr() - 1.0).abs();
        if defect > UV_DEFECT_TOL {
            return Err(Error::InvalidParameter {
                name: "u,v",
                reason: format!("|u|^2 - |v|^2 = 1 violated by {defect:.3e}"),
            });
        }
        let sigma = u.norm().max(1.0).acosh();
        let theta_u = if sigma == 0.0 { 0.0 } else { u.arg() };
        let theta_v = if v.norm() == 0.0 { 0.0 } else { v.arg() };
        Ok(Self {
            u,
            v,
            sigma,
            theta_u,
            theta_v,
        })
    }

    /// Build from squeeze parameters: u = cosh(sigma) e^{i theta_u},
    /// v = sinh(sigma) e^{i theta_v}.
    pub fn from_squeeze(sigma: f64, theta_u: f64, theta_v: f64) -> Result<Self> {
        if !(sigma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("squeeze strength must be >= 0, got {sigma}"),
            });
        }
        let u = C64::from_polar(sigma.cosh(), theta_u);
        let v = C64::from_polar(sigma.sinh(), theta_v);
        Ok(Self {
            u,
            v,
            sigma,
            theta_u: if sigma == 0.0 { 0.0 } else { theta_u },
            theta_v: if sigma == 0.0 { 0.0 } else { theta_v },
        })
    }

    pub fn identity() -> Self {
        Self {
            u: C64::new(1.0, 0.0),
            v: C64::new(0.0, 0.0),
            sigma: 0.0,
            theta_u: 0.0,
            theta_v: 0.0,
        }
    }

    /// Composition: applying `self` first and then `next` equals applying
    /// the returned parameters once (2x2 matrix product on (f, f*)).
    pub fn then(&self, next: &BogoliubovParams) -> Result<Self> {
        let u = next.u * self.u + next.v.conj() * self.v;
        let v = next.u.conj() * self.v + next.v * self.u;
        Self::from_uv(u, v)
    }

    pub fn u(&self) -> C64 {
        self.u
    }

    pub fn v(&self) -> C64 {
        self.v
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn theta_u(&self) -> f64 {
        self.theta_u
    }

    pub fn theta_v(&self) -> f64 {
        self.theta_v
    }
}

enum Kind {
    StaticForm,
    DampedForm { big_omega: f64 },
    Numeric(NumericMode),
    Combined { base: ClassicalMode, u: C64, v: C64 },
}

struct Inner {
    model: OscillatorModel,
    t0: f64,
    source: ModeSource,
    kind: Kind,
}

/// A normalized complex classical solution, evaluable at any time.
///
/// Cheap to clone; all variants are immutable after construction (the
/// numeric variant lazily extends an internal checkpoint cache behind a
/// lock, which is safe for concurrent readers).
#[derive(Clone)]
pub struct ClassicalMode {
    inner: Arc<Inner>,
}

/// Numeric integration state: checkpoints every `cell` units of time away
/// from t0; queries re-integrate the short remainder from the nearest one so
/// every evaluation carries full integrator accuracy.
struct NumericMode {
    rtol: f64,
    cell: f64,
    fwd: RwLock<Vec<[f64; 4]>>,
    bwd: RwLock<Vec<[f64; 4]>>,
}

const MAX_CELLS: usize = 4_000_000;

fn mode_rhs(model: OscillatorModel) -> impl Fn(f64, &[f64; 4]) -> Result<[f64; 4]> {
    move |t, y| {
        let m = model.mass(t);
        let mdot = model.mass_dot(t);
        let w = model.omega(t);
        let w2 = w * w;
        // y = [Re f, Im f, Re fdot, Im fdot]
        Ok([
            y[2],
            y[3],
            -(mdot / m) * y[2] - w2 * y[0],
            -(mdot / m) * y[3] - w2 * y[1],
        ])
    }
}

impl NumericMode {
    fn opts(&self) -> OdeOptions {
        OdeOptions::with_rtol(self.rtol)
    }

    fn eval(&self, model: OscillatorModel, t0: f64, t: f64) -> Result<[f64; 4]> {
        let rhs = mode_rhs(model);
        if t >= t0 {
            self.eval_dir(&rhs, t0, t, 1.0, &self.fwd)
        } else {
            self.eval_dir(&rhs, t0, t, -1.0, &self.bwd)
        }
    }

    fn eval_dir<F>(
        &self,
        rhs: &F,
        t0: f64,
        t: f64,
        dir: f64,
        grid: &RwLock<Vec<[f64; 4]>>,
    ) -> Result<[f64; 4]>
    where
        F: Fn(f64, &[f64; 4]) -> Result<[f64; 4]>,
    {
        let offset = (t - t0) * dir;
        let k = (offset / self.cell).floor() as usize;
        if k + 1 > MAX_CELLS {
            return Err(Error::InvalidParameter {
                name: "t",
                reason: format!("evaluation time {t} too far from t0 = {t0}"),
            });
        }
        self.ensure_filled(rhs, t0, dir, k, grid)?;
        let tk = t0 + dir * (k as f64) * self.cell;
        let yk = grid.read().expect("mode cache lock poisoned")[k];
        if t == tk {
            return Ok(yk);
        }
        ode::solve_to(rhs, tk, yk, t, self.opts())
    }

    fn ensure_filled<F>(
        &self,
        rhs: &F,
        t0: f64,
        dir: f64,
        k: usize,
        grid: &RwLock<Vec<[f64; 4]>>,
    ) -> Result<()>
    where
        F: Fn(f64, &[f64; 4]) -> Result<[f64; 4]>,
    {
        if grid.read().expect("mode cache lock poisoned").len() > k {
            return Ok(());
        }
        let mut w = grid.write().expect("mode cache lock poisoned");
        while w.len() <= k {
            let i = w.len();
            let t_from = t0 + dir * ((i - 1) as f64) * self.cell;
            let t_to = t0 + dir * (i as f64) * self.cell;
            let y = ode::solve_to(rhs, t_from, w[i - 1], t_to, self.opts())?;
            w.push(y);
        }
        Ok(())
    }
}

impl ClassicalMode {
    pub fn model(&self) -> &OscillatorModel {
        &self.inner.model
    }

    pub fn t0(&self) -> f64 {
        self.inner.t0
    }

    pub fn source(&self) -> ModeSource {
        self.inner.source
    }

    /// Evaluate f, fdot, fddot at `t`.
    pub fn eval(&self, t: f64) -> Result<ModeSample> {
        match &self.inner.kind {
            Kind::StaticForm => {
                let model = &self.inner.model;
                let w0 = model.omega0();
                let c = 1.0 / (2.0 * model.mass_scale() * w0).sqrt();
                let f = C64::from_polar(c, -w0 * t);
                let lambda = C64::new(0.0, -w0);
                Ok(ModeSample {
                    f,
                    fdot: lambda * f,
                    fddot: lambda * lambda * f,
                })
            }
            Kind::DampedForm { big_omega } => {
                let model = &self.inner.model;
                let gamma = model.gamma();
                let c = 1.0 / (2.0 * model.mass_scale() * big_omega).sqrt();
                let lambda = C64::new(-gamma, -big_omega);
                let f = c * (lambda * t).exp();
                Ok(ModeSample {
                    f,
                    fdot: lambda * f,
                    fddot: lambda * lambda * f,
                })
            }
            Kind::Numeric(num) => {
                let y = num.eval(self.inner.model, self.inner.t0, t)?;
                let f = C64::new(y[0], y[1]);
                let fdot = C64::new(y[2], y[3]);
                let model = &self.inner.model;
                let fddot =
                    -(model.mass_dot(t) / model.mass(t)) * fdot - model.omega(t).powi(2) * f;
                Ok(ModeSample { f, fdot, fddot })
            }
            Kind::Combined { base, u, v } => {
                let s = base.eval(t)?;
                let vc = v.conj();
                Ok(ModeSample {
                    f: u * s.f + vc * s.f.conj(),
                    fdot: u * s.fdot + vc * s.fdot.conj(),
                    fddot: u * s.fddot + vc * s.fddot.conj(),
                })
            }
        }
    }

    /// Wronskian i M (fdot f* - f fdot*); real by construction, 1 for a
    /// normalized mode.
    pub fn wronskian(&self, t: f64) -> Result<f64> {
        let s = self.eval(t)?;
        Ok(-2.0 * self.inner.model.mass(t) * (s.fdot * s.f.conj()).im)
    }
}

/// Closed-form mode for the static and damped families.
pub fn analytic_mode(model: &OscillatorModel, t0: f64) -> Result<ClassicalMode> {
    let kind = match model.family() {
        Family::Static => Kind::StaticForm,
        Family::Damped => {
            let w0 = model.omega0();
            let gamma = model.gamma();
            Kind::DampedForm {
                big_omega: (w0 * w0 - gamma * gamma).sqrt(),
            }
        }
        Family::Custom { .. } => {
            return Err(Error::Unsupported(
                "no closed-form mode for the custom family; use numeric_mode".into(),
            ))
        }
    };
    let source = match model.family() {
        Family::Static => ModeSource::AnalyticStatic,
        _ => ModeSource::AnalyticDamped,
    };
    Ok(ClassicalMode {
        inner: Arc::new(Inner {
            model: *model,
            t0,
            source,
            kind,
        }),
    })
}

/// Instantaneous-vacuum initial data: f0 = 1/sqrt(2 M(t0) omega(t0)),
/// fdot0 = -i omega(t0) f0; satisfies the Wronskian normalization exactly.
pub fn default_initial_mode_data(model: &OscillatorModel, t0: f64) -> Result<(C64, C64)> {
    let w = model.omega(t0);
    if w <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "omega(t0)",
            reason: "no instantaneous frequency scale at t0 (omega = 0)".into(),
        });
    }
    let f0 = C64::new(1.0 / (2.0 * model.mass(t0) * w).sqrt(), 0.0);
    Ok((f0, C64::new(0.0, -w) * f0))
}

/// Numerically integrated mode from explicit initial data.
pub fn numeric_mode(
    model: &OscillatorModel,
    t0: f64,
    f0: C64,
    fdot0: C64,
    rtol: f64,
) -> Result<ClassicalMode> {
    if !(1e-13..=1e-6).contains(&rtol) {
        return Err(Error::InvalidParameter {
            name: "rtol",
            reason: format!("rtol must lie in [1e-13, 1e-6], got {rtol:e}"),
        });
    }
    let w0 = -2.0 * model.mass(t0) * (fdot0 * f0.conj()).im;
    if (w0 - 1.0).abs() > 1e-12 {
        return Err(Error::WronskianViolation {
            got: format!("{w0:.15e}"),
        });
    }
    let scale = model.omega0().max(model.gamma()).max(1e-2);
    let num = NumericMode {
        rtol,
        cell: 0.5 / scale,
        fwd: RwLock::new(vec![[f0.re, f0.im, fdot0.re, fdot0.im]]),
        bwd: RwLock::new(vec![[f0.re, f0.im, fdot0.re, fdot0.im]]),
    };
    Ok(ClassicalMode {
        inner: Arc::new(Inner {
            model: *model,
            t0,
            source: ModeSource::Numeric,
            kind: Kind::Numeric(num),
        }),
    })
}

/// Bogoliubov-combined mode F = u f + v* f*; the Wronskian is preserved
/// because |u|^2 - |v|^2 = 1.
pub fn combine_mode(mode: &ClassicalMode, params: &BogoliubovParams) -> Result<ClassicalMode> {
    let defect = (params.u.norm_sqr() - params.v.norm_sqr() - 1.0).abs();
    if defect > UV_DEFECT_TOL {
        return Err(Error::InvalidParameter {
            name: "params",
            reason: format!("|u|^2 - |v|^2 = 1 violated by {defect:.3e}"),
        });
    }
    let w0 = mode.wronskian(mode.t0())?;
    if (w0 - 1.0).abs() > UV_DEFECT_TOL {
        return Err(Error::WronskianViolation {
            got: format!("{w0:.15e}"),
        });
    }
    Ok(ClassicalMode {
        inner: Arc::new(Inner {
            model: *mode.model(),
            t0: mode.t0(),
            source: ModeSource::Combined,
            kind: Kind::Combined {
                base: mode.clone(),
                u: params.u,
                v: params.v,
            },
        }),
    })
}
