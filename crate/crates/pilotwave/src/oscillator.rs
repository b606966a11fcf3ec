//! Oscillator models: the time profiles M(t), omega(t) and the potential
//! V(q, t) = (1/2) M(t) omega^2(t) q^2 that define the physical system.

use crate::error::{Error, Result};

/// Time-dependence family of a model.
///
/// `Custom` is the closed parametric family
/// M(t) = m e^{2 gamma t} (1 + a sin(nu t)), omega(t) = omega0 (1 + b sin(mu t)),
/// which covers static, damped and periodically driven traps while keeping
/// derivatives exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Static,
    Damped,
    Custom { a: f64, nu: f64, b: f64, mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorModel {
    family: Family,
    m: f64,
    omega0: f64,
    gamma: f64,
}

impl OscillatorModel {
    /// Time-independent oscillator: M(t) = m, omega(t) = omega0.
    pub fn new_static(m: f64, omega0: f64) -> Result<Self> {
        check_scales(m, omega0)?;
        Ok(Self {
            family: Family::Static,
            m,
            omega0,
            gamma: 0.0,
        })
    }

    /// Damped (Caldirola-Kanai) oscillator: M(t) = m e^{2 gamma t},
    /// omega(t) = omega0, restricted to the underdamped regime omega0 > gamma.
    pub fn new_damped(m: f64, omega0: f64, gamma: f64) -> Result<Self> {
        check_scales(m, omega0)?;
        if gamma < 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("damping rate must be >= 0, got {gamma}"),
            });
        }
        if omega0 <= gamma {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!(
                    "damped family requires omega0 > gamma (underdamped), got omega0 = {omega0}, gamma = {gamma}"
                ),
            });
        }
        Ok(Self {
            family: Family::Damped,
            m,
            omega0,
            gamma,
        })
    }

    /// Parametrically driven oscillator; `|a| < 1` keeps M(t) > 0 and
    /// `|b| <= 1` keeps omega(t) >= 0.
    pub fn new_custom(
        m: f64,
        omega0: f64,
        gamma: f64,
        a: f64,
        nu: f64,
        b: f64,
        mu: f64,
    ) -> Result<Self> {
        check_scales(m, omega0)?;
        if gamma < 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("damping rate must be >= 0, got {gamma}"),
            });
        }
        if !(a.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("|a| < 1 required so M(t) stays positive, got {a}"),
            });
        }
        if !(b.abs() <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                reason: format!("|b| <= 1 required so omega(t) stays >= 0, got {b}"),
            });
        }
        Ok(Self {
            family: Family::Custom { a, nu, b, mu },
            m,
            omega0,
            gamma,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Mass scale m.
    pub fn mass_scale(&self) -> f64 {
        self.m
    }

    /// Base frequency omega0.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// M(t).
    pub fn mass(&self, t: f64) -> f64 {
        match self.family {
            Family::Static => self.m,
            Family::Damped => self.m * (2.0 * self.gamma * t).exp(),
            Family::Custom { a, nu, .. } => {
                self.m * (2.0 * self.gamma * t).exp() * (1.0 + a * (nu * t).sin())
            }
        }
    }

    /// dM/dt, exact for every family.
    pub fn mass_dot(&self, t: f64) -> f64 {
        match self.family {
            Family::Static => 0.0,
            Family::Damped => 2.0 * self.gamma * self.mass(t),
            Family::Custom { a, nu, .. } => {
                let envelope = self.m * (2.0 * self.gamma * t).exp();
                envelope
                    * (2.0 * self.gamma * (1.0 + a * (nu * t).sin()) + a * nu * (nu * t).cos())
            }
        }
    }

    /// omega(t).
    pub fn omega(&self, t: f64) -> f64 {
        match self.family {
            Family::Static | Family::Damped => self.omega0,
            Family::Custom { b, mu, .. } => self.omega0 * (1.0 + b * (mu * t).sin()),
        }
    }

    /// V(q, t) = (1/2) M(t) omega^2(t) q^2.
    pub fn potential(&self, q: f64, t: f64) -> f64 {
        let w = self.omega(t);
        0.5 * self.mass(t) * w * w * q * q
    }

    /// dV/dq = M(t) omega^2(t) q.
    pub fn potential_gradient(&self, q: f64, t: f64) -> f64 {
        let w = self.omega(t);
        self.mass(t) * w * w * q
    }
}

fn check_scales(m: f64, omega0: f64) -> Result<()> {
    if !(m > 0.0) {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: format!("mass scale must be positive, got {m}"),
        });
    }
    if !(omega0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega0",
            reason: format!("base frequency must be positive, got {omega0}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_profiles_are_constant() {
        let model = OscillatorModel::new_static(1.0, 1.0).unwrap();
        for t in [-3.0, 0.0, 1.7, 10.0] {
            assert_eq!(model.mass(t), 1.0);
            assert_eq!(model.omega(t), 1.0);
            assert_eq!(model.mass_dot(t), 0.0);
        }
    }

    #[test]
    fn damped_mass_grows_exponentially() {
        let model = OscillatorModel::new_damped(1.0, 1.0, 0.1).unwrap();
        // e^{2*0.1*2} = e^{0.4}
        assert!((model.mass(2.0) - 0.4f64.exp()).abs() < 1e-14);
        assert!((model.mass(2.0) - 1.49182469764127).abs() < 1e-10);
        assert_eq!(model.omega(2.0), 1.0);
    }

    #[test]
    fn overdamped_is_rejected() {
        assert!(OscillatorModel::new_damped(1.0, 0.5, 0.5).is_err());
        assert!(OscillatorModel::new_damped(1.0, 0.5, 0.8).is_err());
        assert!(OscillatorModel::new_damped(1.0, 1.0, 0.99).is_ok());
    }

    #[test]
    fn bad_scales_are_rejected() {
        assert!(OscillatorModel::new_static(0.0, 1.0).is_err());
        assert!(OscillatorModel::new_static(-1.0, 1.0).is_err());
        assert!(OscillatorModel::new_static(1.0, 0.0).is_err());
        assert!(OscillatorModel::new_custom(1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(OscillatorModel::new_custom(1.0, 1.0, 0.0, 0.0, 0.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn mass_dot_matches_finite_difference() {
        let models = [
            OscillatorModel::new_damped(1.3, 2.0, 0.25).unwrap(),
            OscillatorModel::new_custom(0.7, 1.5, 0.05, 0.3, 2.0, 0.2, 3.0).unwrap(),
        ];
        for model in models {
            for t in [0.0, 0.4, 1.1, 2.9] {
                let h = 1e-6;
                let fd = (model.mass(t + h) - model.mass(t - h)) / (2.0 * h);
                let exact = model.mass_dot(t);
                assert!(
                    (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                    "t={t}: fd={fd} exact={exact}"
                );
            }
        }
    }

    #[test]
    fn potential_is_quadratic() {
        let model = OscillatorModel::new_static(2.0, 3.0).unwrap();
        assert!((model.potential(1.5, 0.0) - 0.5 * 2.0 * 9.0 * 2.25).abs() < 1e-14);
        assert!((model.potential_gradient(1.5, 0.0) - 2.0 * 9.0 * 1.5).abs() < 1e-14);
    }
}
