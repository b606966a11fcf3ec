//! Adaptive quadrature (Simpson with Richardson acceptance).

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `a > b` is allowed and flips the sign. The integrand may fail; its error
/// is propagated.
pub fn integrate<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return Ok(-integrate(f, b, a, tol)?);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol.max(1e-15), 0)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH || (b - a) < 16.0 * f64::EPSILON * m.abs().max(1.0) {
        return Err(Error::QuadratureFailure { a, b, tol });
    }
    let half = 0.5 * tol;
    Ok(adaptive(f, a, m, fa, flm, fm, left, half, depth + 1)?
        + adaptive(f, m, b, fm, frm, fb, right, half, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| Ok(3.0 * x * x);
        let v = integrate(&f, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let f = |x: f64| Ok((5.0 * x).cos());
        let v = integrate(&f, 0.0, PI, 1e-12).unwrap();
        assert!((v - (5.0 * PI).sin() / 5.0).abs() < 1e-11);
    }

    #[test]
    fn gaussian_tail() {
        let f = |x: f64| Ok((-x * x).exp());
        let v = integrate(&f, -10.0, 10.0, 1e-12).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let f = |x: f64| Ok(x);
        let v = integrate(&f, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 0.5).abs() < 1e-13);
    }
}
