use crate::error::{Result, WzError};
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Which of the two genus-0 families a curve belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind<T> {
    /// `eta^2 = zeta`, the Clifford torus.
    Clifford,
    /// `eta^2 = -conj(alpha) zeta^2 + (1 + |alpha|^2) zeta - alpha`.
    Nonconformal { alpha: Complex<T> },
}

/// Rational spectral curve `eta^2 = P(zeta)` with `deg P <= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCurveP0<T> {
    kind: CurveKind<T>,
    /// `P(zeta) = coeffs[0] + coeffs[1] zeta + coeffs[2] zeta^2`
    coeffs: [Complex<T>; 3],
}

impl<T: Real> SpectralCurveP0<T> {
    pub fn clifford() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { kind: CurveKind::Clifford, coeffs: [z, Complex::new(T::one(), T::zero()), z] }
    }

    pub fn nonconformal(alpha: Complex<T>) -> Result<Self> {
        let m = alpha.norm();
        if m <= T::tiny() {
            return Err(WzError::InvalidCurve("alpha must be nonzero".into()));
        }
        if (m - T::one()).abs() <= T::tiny() {
            return Err(WzError::InvalidCurve("|alpha| = 1 puts a branch point on the unit circle".into()));
        }
        let one_plus = T::one() + alpha.norm_sqr();
        Ok(Self {
            kind: CurveKind::Nonconformal { alpha },
            coeffs: [-alpha, Complex::new(one_plus, T::zero()), -alpha.conj()],
        })
    }

    pub fn kind(&self) -> CurveKind<T> {
        self.kind
    }

    pub fn coeffs(&self) -> [Complex<T>; 3] {
        self.coeffs
    }

    /// Conformal exactly when `P` vanishes at `zeta = 0` and `zeta = infinity`.
    pub fn is_conformal(&self) -> bool {
        self.coeffs[0] == Complex::new(T::zero(), T::zero())
    }

    pub fn eval(&self, zeta: Complex<T>) -> Complex<T> {
        let [c0, c1, c2] = self.coeffs;
        c0 + zeta * (c1 + zeta * c2)
    }

    pub fn deriv(&self, zeta: Complex<T>) -> Complex<T> {
        let [_, c1, c2] = self.coeffs;
        c1 + zeta * c2 * T::lit(2.0)
    }

    /// Minimum of `|P(e^{i theta})|` over `probes` equally spaced points.
    pub fn min_abs_on_circle(&self, probes: usize) -> T {
        let probes = probes.max(1);
        (0..probes)
            .map(|k| {
                let theta = T::two_pi() * T::from_usize_lossy(k) / T::from_usize_lossy(probes);
                self.eval(Complex::from_polar(T::one(), theta)).norm()
            })
            .fold(T::infinity(), T::min)
    }

    pub fn check_branch_safety(&self, floor: T, probes: usize) -> Result<T> {
        let min_abs = self.min_abs_on_circle(probes);
        if min_abs > floor {
            Ok(min_abs)
        } else {
            Err(WzError::BranchSafety {
                min_abs: min_abs.to_f64().unwrap_or(f64::NAN),
                floor: floor.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    /// `r = sqrt((1 + |a|^2) + (a + conj a))`, `s = sqrt((1 + |a|^2) - (a + conj a))` for the
    /// nonconformal family.
    pub fn r_s(&self) -> Option<(T, T)> {
        match self.kind {
            CurveKind::Clifford => None,
            CurveKind::Nonconformal { alpha } => {
                let base = T::one() + alpha.norm_sqr();
                let trace = alpha.re * T::lit(2.0);
                Some(((base + trace).sqrt(), (base - trace).sqrt()))
            }
        }
    }

    /// The eigenvalue logarithms that realize the family's harmonic map.
    pub fn reference_log_mu(&self) -> (LogMuData<T>, LogMuData<T>) {
        let pi = T::PI();
        let half_pi = pi / T::lit(2.0);
        match self.kind {
            CurveKind::Clifford => {
                // (pi/2)(1+i)(eta + i/eta) + i pi  and  (pi/2)(1-i)(eta - i/eta) - i pi, using i/eta = i eta/zeta
                let k1 = Complex::new(half_pi, half_pi);
                let k2 = Complex::new(half_pi, -half_pi);
                let i = Complex::i();
                (
                    LogMuData { u: k1, v: k1 * i, w_over_ipi: 1 },
                    LogMuData { u: k2, v: -(k2 * i), w_over_ipi: -1 },
                )
            }
            CurveKind::Nonconformal { .. } => {
                let (r, s) = self.r_s().expect("nonconformal");
                let a = Complex::new(pi / r, T::zero());
                let b = Complex::new(T::zero(), pi / s);
                (LogMuData { u: a, v: -a, w_over_ipi: 0 }, LogMuData { u: b, v: b, w_over_ipi: 0 })
            }
        }
    }
}

/// `log mu = eta (u + v / zeta) + w` with `w = i pi * w_over_ipi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMuData<T> {
    pub u: Complex<T>,
    pub v: Complex<T>,
    pub w_over_ipi: i64,
}

impl<T: Real> LogMuData<T> {
    pub fn w(&self) -> Complex<T> {
        Complex::new(T::zero(), T::PI() * T::from_i64_lossy(self.w_over_ipi))
    }

    pub fn value(&self, eta: Complex<T>, zeta: Complex<T>) -> Complex<T> {
        eta * (self.u + self.v / zeta) + self.w()
    }

    /// Derivative in `theta` along `zeta = e^{i theta}`, given `d eta / d theta`.
    pub fn dtheta(&self, eta: Complex<T>, deta: Complex<T>, zeta: Complex<T>) -> Complex<T> {
        deta * (self.u + self.v / zeta) - Complex::<T>::i() * eta * self.v / zeta
    }

    /// The data of `1 / mu`: negates every term.
    pub fn inverse(&self) -> Self {
        Self { u: -self.u, v: -self.v, w_over_ipi: -self.w_over_ipi }
    }

    /// Data reproducing `-log mu` once `eta` is replaced by `-eta`.
    pub fn sheet_flipped(&self) -> Self {
        Self { w_over_ipi: -self.w_over_ipi, ..*self }
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (self.u - other.u).norm() <= tol && (self.v - other.v).norm() <= tol && self.w_over_ipi == other.w_over_ipi
    }
}

/// `{"kind": "clifford"}` or `{"kind": "nonconformal", "alpha": [re, im]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveJson {
    Clifford,
    Nonconformal { alpha: [f64; 2] },
}

/// `{"u": [re, im], "v": [re, im], "w_over_ipi": k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogMuJson {
    pub u: [f64; 2],
    pub v: [f64; 2],
    pub w_over_ipi: i64,
}

/// A curve with optional explicit log-mu data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralInput {
    #[serde(flatten)]
    pub curve: CurveJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logmu1: Option<LogMuJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logmu2: Option<LogMuJson>,
}

impl From<LogMuJson> for LogMuData<f64> {
    fn from(j: LogMuJson) -> Self {
        LogMuData { u: Complex::new(j.u[0], j.u[1]), v: Complex::new(j.v[0], j.v[1]), w_over_ipi: j.w_over_ipi }
    }
}

impl From<LogMuData<f64>> for LogMuJson {
    fn from(d: LogMuData<f64>) -> Self {
        LogMuJson { u: [d.u.re, d.u.im], v: [d.v.re, d.v.im], w_over_ipi: d.w_over_ipi }
    }
}

impl SpectralInput {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| WzError::Parse(format!("spectral input: {e}")))
    }

    pub fn resolve(&self) -> Result<(SpectralCurveP0<f64>, LogMuData<f64>, LogMuData<f64>)> {
        let curve = match self.curve {
            CurveJson::Clifford => SpectralCurveP0::clifford(),
            CurveJson::Nonconformal { alpha } => SpectralCurveP0::nonconformal(Complex::new(alpha[0], alpha[1]))?,
        };
        let (r1, r2) = curve.reference_log_mu();
        Ok((
            curve,
            self.logmu1.map(LogMuData::from).unwrap_or(r1),
            self.logmu2.map(LogMuData::from).unwrap_or(r2),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn clifford_theta_zero_lands_on_two_pi_i() {
        let c = SpectralCurveP0::<f64>::clifford();
        let (d1, _) = c.reference_log_mu();
        let one = Complex::new(1.0, 0.0);
        let v = d1.value(one, one);
        assert!((v - Complex::new(0.0, 2.0 * PI)).norm() < 1e-14);
    }

    #[test]
    fn nonconformal_zero_at_theta_zero() {
        let c = SpectralCurveP0::nonconformal(Complex::new(0.0, 0.3)).unwrap();
        let (d1, _) = c.reference_log_mu();
        let one = Complex::new(1.0, 0.0);
        let eta = c.eval(one).sqrt();
        assert!(d1.value(eta, one).norm() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_alpha() {
        assert!(SpectralCurveP0::<f64>::nonconformal(Complex::new(0.0, 0.0)).is_err());
        assert!(SpectralCurveP0::<f64>::nonconformal(Complex::new(0.6, 0.8)).is_err());
    }

    #[test]
    fn no_zeros_on_circle() {
        for a in [Complex::new(0.3, 0.0), Complex::new(-0.2, 0.7), Complex::new(1.5, 0.1)] {
            let c = SpectralCurveP0::nonconformal(a).unwrap();
            let m = c.min_abs_on_circle(4096);
            // |P(e^{i theta})| = |1 - conj(a) e^{i theta}|^2 >= (1 - |a|)^2
            assert!(m >= (1.0f64 - a.norm()).powi(2) - 1e-12);
            assert!(c.check_branch_safety(1e-6, 4096).is_ok());
        }
        let close = SpectralCurveP0::nonconformal(Complex::new(0.9999, 0.0)).unwrap();
        assert!(matches!(close.check_branch_safety(1e-6, 4096), Err(WzError::BranchSafety { .. })));
    }

    #[test]
    fn json_forms() {
        let s = SpectralInput::from_json_str(r#"{"kind":"nonconformal","alpha":[0,0.3]}"#).unwrap();
        assert_eq!(s.curve, CurveJson::Nonconformal { alpha: [0.0, 0.3] });
        let s = SpectralInput::from_json_str(
            r#"{"kind":"clifford","logmu2":{"u":[0,0],"v":[0,0],"w_over_ipi":2}}"#,
        )
        .unwrap();
        let (_, _, d2) = s.resolve().unwrap();
        assert_eq!(d2.w_over_ipi, 2);
        assert!(SpectralInput::from_json_str(r#"{"kind":"elliptic"}"#).is_err());
    }
}
