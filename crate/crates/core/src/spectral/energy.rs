use super::curve::{CurveKind, LogMuData, SpectralCurveP0};
use crate::error::{Result, WzError};
use crate::scalar::Real;
use num_complex::Complex;
use serde::Serialize;

/// Relative tolerance on the imaginary part of a Wronskian energy.
pub const WRONSKIAN_IMAG_TOL: f64 = 1e-9;

/// Orientation of the eigenvalue pair read off from the Wronskian sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
    Degenerate,
}

impl Orientation {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Orientation::Positive => T::one(),
            Orientation::Negative => -T::one(),
            Orientation::Degenerate => T::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WronskianEnergy<T> {
    /// `|E|`, the energy
    pub energy: T,
    /// the printed formula's value, before taking the magnitude
    pub signed: T,
    pub orientation: Orientation,
}

/// `E = -16 i (a2 b1 - a1 b2)` (conformal) or `-32 i (a2 b1 - a1 b2)` (nonconformal), where
/// `phi_i = (a_i / z^2 + b_i + ...) dz` at the distinguished point.
pub fn energy_wronskian<T: Real>(
    a1: Complex<T>,
    b1: Complex<T>,
    a2: Complex<T>,
    b2: Complex<T>,
    conformal: bool,
) -> Result<WronskianEnergy<T>> {
    let pref = if conformal { T::lit(-16.0) } else { T::lit(-32.0) };
    let w = a2 * b1 - a1 * b2;
    let e = w * Complex::new(T::zero(), pref);
    let scale = (a2 * b1).norm().max((a1 * b2).norm()) * pref.abs();
    if e.im.abs() > T::lit(WRONSKIAN_IMAG_TOL) * scale.max(T::one()) {
        return Err(WzError::Convention(format!("Wronskian energy is not real: imaginary part {}", e.im)));
    }
    let orientation = if e.re.abs() <= T::tiny() * scale {
        Orientation::Degenerate
    } else if e.re > T::zero() {
        Orientation::Positive
    } else {
        Orientation::Negative
    };
    let signed = if orientation == Orientation::Degenerate { T::zero() } else { e.re };
    Ok(WronskianEnergy { energy: signed.abs(), signed, orientation })
}

/// `(a, b)` in `d log mu = (a / z^2 + b + O(z)) dz`, with `z = eta` at `zeta = 0` in the
/// conformal case and `z = zeta` otherwise.
pub fn laurent_coefficients<T: Real>(curve: &SpectralCurveP0<T>, d: &LogMuData<T>) -> (Complex<T>, Complex<T>) {
    let [p0, p1, p2] = curve.coeffs();
    if curve.is_conformal() {
        // zeta = eta^2 / p1 - p2 eta^4 / p1^3 + ..., so eta / zeta = p1 / eta + p2 eta / p1 + ...
        (-d.v * p1, d.u + d.v * p2 / p1)
    } else {
        let two = T::lit(2.0);
        let e0 = p0.sqrt();
        let e1 = p1 / (e0 * two);
        let e2 = (p2 - e1 * e1) / (e0 * two);
        (-d.v * e0, d.u * e1 + d.v * e2)
    }
}

pub fn energy_from_data<T: Real>(
    curve: &SpectralCurveP0<T>,
    d1: &LogMuData<T>,
    d2: &LogMuData<T>,
) -> Result<WronskianEnergy<T>> {
    let (a1, b1) = laurent_coefficients(curve, d1);
    let (a2, b2) = laurent_coefficients(curve, d2);
    energy_wronskian(a1, b1, a2, b2, curve.is_conformal())
}

/// Energy of the family's reference map: `16 pi^2` (Clifford), `32 pi^2 (1 + |a|^2) / rs`.
pub fn energy_closed_form<T: Real>(curve: &SpectralCurveP0<T>) -> Result<T> {
    let pi2 = T::PI() * T::PI();
    match curve.kind() {
        CurveKind::Clifford => Ok(T::lit(16.0) * pi2),
        CurveKind::Nonconformal { alpha } => {
            let (r, s) = curve.r_s().expect("nonconformal");
            let rs = r * s;
            if rs.is_nan() || rs <= T::zero() || rs.is_infinite() {
                return Err(WzError::InvalidCurve(format!("rs = {rs} is not positive")));
            }
            Ok(T::lit(32.0) * pi2 * (T::one() + alpha.norm_sqr()) / rs)
        }
    }
}
