use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate_semi_infinite, QuadratureResult};

/// Gamma function for positive real arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "gamma is only provided for finite x > 0",
        });
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)` from the integral
/// representation
///
/// ```text
/// U(a, b, z) = 2/Γ(a) ∫₀^∞ exp(-z t²) t^(2a-1) (1 + t²)^(b-a-1) dt
/// ```
///
/// valid for `a > 0`, `z > 0`.
pub fn tricomi_u(a: f64, b: f64, z: f64, rel_tol: f64) -> Result<f64> {
    tricomi_u_quadrature(a, b, z, rel_tol).map(|(value, _)| value)
}

pub(crate) fn tricomi_u_quadrature(
    a: f64,
    b: f64,
    z: f64,
    rel_tol: f64,
) -> Result<(f64, QuadratureResult)> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
            reason: "integral representation requires a > 0",
        });
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "integral representation diverges for z <= 0",
        });
    }
    let power = 2.0 * a - 1.0;
    let shift = b - a - 1.0;
    let integrand = |t: f64| (-z * t * t).exp() * t.powf(power) * (1.0 + t * t).powf(shift);
    let quad = integrate_semi_infinite(integrand, 1.0 / z.sqrt(), rel_tol)?;
    Ok((2.0 / gamma_fn(a)? * quad.value, quad))
}

/// `coth(x)` for `x > 0`, written as `1 + 2e^{-2x} / (1 - e^{-2x})` with the
/// denominator from `expm1` so both limits keep full relative precision.
pub fn coth_stable(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "coth is only provided for x > 0",
        });
    }
    Ok(coth_unchecked(x))
}

#[inline]
pub(crate) fn coth_unchecked(x: f64) -> f64 {
    let q = (-2.0 * x).exp();
    1.0 + 2.0 * q / -(-2.0 * x).exp_m1()
}
