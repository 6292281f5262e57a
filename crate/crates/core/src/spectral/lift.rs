use super::curve::{LogMuData, SpectralCurveP0};
use crate::error::{Result, WzError};
use crate::numeric::{pairwise_sum, simpson};
use crate::scalar::Real;
use num_complex::Complex;
use std::fmt::Write as _;

pub const DEFAULT_BRANCH_FLOOR: f64 = 1e-6;
pub const DEFAULT_BRANCH_PROBES: usize = 4096;
pub const DEFAULT_ENDPOINT_TOL: f64 = 1e-9;
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-9;
pub const MIN_INTERVALS: usize = 64;

/// Which stretch of the unit circle is lifted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    /// `theta in [0, pi]`
    Half,
    /// `theta in [0, 2 pi]`
    Full,
}

impl Span {
    pub fn end<T: Real>(self) -> T {
        match self {
            Span::Half => T::PI(),
            Span::Full => T::two_pi(),
        }
    }
}

/// Starting sheet of `eta` at `theta = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sheet {
    /// principal square root of `P(1)`
    #[default]
    Principal,
    /// its negative, with `w -> -w` so that both `log mu` change sign
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftConfig<T> {
    pub branch_floor: T,
    pub branch_probes: usize,
    pub endpoint_tol: T,
    pub unitarity_tol: T,
    pub sheet: Sheet,
}

impl<T: Real> Default for LiftConfig<T> {
    fn default() -> Self {
        Self {
            branch_floor: T::lit(DEFAULT_BRANCH_FLOOR),
            branch_probes: DEFAULT_BRANCH_PROBES,
            endpoint_tol: T::lit(DEFAULT_ENDPOINT_TOL),
            unitarity_tol: T::lit(DEFAULT_UNITARITY_TOL),
            sheet: Sheet::Principal,
        }
    }
}

/// Measured invariant margins of a lift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftDiagnostics<T> {
    pub min_abs_p: T,
    pub max_eta_residual: T,
    pub max_re_logmu: T,
    /// worst `|eta[k+1] - eta[k]| / |eta[k+1] + eta[k]|`, always below 1
    pub max_continuity_ratio: T,
    pub max_endpoint_distance: T,
}

/// Branch-continuous lift of an arc of the unit circle to the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedCirclePath<T> {
    pub curve: SpectralCurveP0<T>,
    /// data as given, before any sheet flip
    pub d1: LogMuData<T>,
    pub d2: LogMuData<T>,
    pub span: Span,
    pub config: LiftConfig<T>,
    pub theta: Vec<T>,
    pub zeta: Vec<Complex<T>>,
    pub eta: Vec<Complex<T>>,
    pub logmu1: Vec<Complex<T>>,
    pub logmu2: Vec<Complex<T>>,
    pub dlogmu2: Vec<Complex<T>>,
    pub diagnostics: LiftDiagnostics<T>,
}

/// Lifts `[0, pi]` or `[0, 2 pi]` with `n` equal subintervals (`n + 1` samples, `n` even).
pub fn lift_circle<T: Real>(
    curve: &SpectralCurveP0<T>,
    d1: &LogMuData<T>,
    d2: &LogMuData<T>,
    n: usize,
    span: Span,
    config: &LiftConfig<T>,
) -> Result<LiftedCirclePath<T>> {
    if n < MIN_INTERVALS {
        return Err(WzError::TooFewSamples { needed: MIN_INTERVALS, got: n });
    }
    if !n.is_multiple_of(2) {
        return Err(WzError::InvalidGrid(format!("interval count {n} must be even")));
    }
    let min_abs_p = curve.check_branch_safety(config.branch_floor, config.branch_probes)?;

    let (given1, given2) = (*d1, *d2);
    let (d1, d2) = match config.sheet {
        Sheet::Principal => (*d1, *d2),
        Sheet::Flipped => (d1.sheet_flipped(), d2.sheet_flipped()),
    };

    let h = span.end::<T>() / T::from_usize_lossy(n);
    let mut theta = Vec::with_capacity(n + 1);
    let mut zeta = Vec::with_capacity(n + 1);
    let mut eta: Vec<Complex<T>> = Vec::with_capacity(n + 1);
    let mut max_eta_residual = T::zero();
    let mut max_continuity_ratio = T::zero();
    for k in 0..=n {
        let th = if k == n { span.end() } else { h * T::from_usize_lossy(k) };
        let z = Complex::from_polar(T::one(), th);
        let p = curve.eval(z);
        let root = p.sqrt();
        let e = match eta.last() {
            None => match config.sheet {
                Sheet::Principal => root,
                Sheet::Flipped => -root,
            },
            Some(&prev) => {
                let keep = (root - prev).norm();
                let flip = (root + prev).norm();
                let (e, near, far) = if keep <= flip { (root, keep, flip) } else { (-root, flip, keep) };
                if near.is_nan() || near >= far {
                    return Err(WzError::LiftInvariant(format!("ambiguous sheet at theta = {th}")));
                }
                max_continuity_ratio = max_continuity_ratio.max(near / far);
                e
            }
        };
        max_eta_residual = max_eta_residual.max((e * e - p).norm());
        theta.push(th);
        zeta.push(z);
        eta.push(e);
    }

    let i = Complex::i();
    let two = T::lit(2.0);
    let mut logmu1 = Vec::with_capacity(n + 1);
    let mut logmu2 = Vec::with_capacity(n + 1);
    let mut dlogmu2 = Vec::with_capacity(n + 1);
    let mut max_re_logmu = T::zero();
    for k in 0..=n {
        let (z, e) = (zeta[k], eta[k]);
        let deta = curve.deriv(z) * i * z / (e * two);
        let l1 = d1.value(e, z);
        let l2 = d2.value(e, z);
        max_re_logmu = max_re_logmu.max(l1.re.abs()).max(l2.re.abs());
        logmu1.push(l1);
        logmu2.push(l2);
        dlogmu2.push(d2.dtheta(e, deta, z));
    }
    if max_re_logmu > config.unitarity_tol {
        return Err(WzError::NonUnitary(max_re_logmu.to_f64().unwrap_or(f64::NAN)));
    }

    let marks: &[usize] = match span {
        Span::Half => &[0, n],
        Span::Full => &[0, n / 2, n],
    };
    let mut max_endpoint_distance = T::zero();
    for &k in marks {
        for l in [logmu1[k], logmu2[k]] {
            let d = distance_to_two_pi_i(l);
            max_endpoint_distance = max_endpoint_distance.max(d);
            if d > config.endpoint_tol {
                return Err(WzError::EndpointConstraint {
                    theta: theta[k].to_f64().unwrap_or(f64::NAN),
                    distance: d.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }

    Ok(LiftedCirclePath {
        curve: *curve,
        d1: given1,
        d2: given2,
        span,
        config: *config,
        theta,
        zeta,
        eta,
        logmu1,
        logmu2,
        dlogmu2,
        diagnostics: LiftDiagnostics {
            min_abs_p,
            max_eta_residual,
            max_re_logmu,
            max_continuity_ratio,
            max_endpoint_distance,
        },
    })
}

fn distance_to_two_pi_i<T: Real>(l: Complex<T>) -> T {
    let k = (l.im / T::two_pi()).round();
    (l - Complex::new(T::zero(), k * T::two_pi())).norm()
}

impl<T: Real> LiftedCirclePath<T> {
    pub fn intervals(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn step(&self) -> T {
        self.span.end::<T>() / T::from_usize_lossy(self.intervals())
    }

    /// `log mu_1 (log mu_2)'` at every sample.
    pub fn integrand(&self) -> Vec<Complex<T>> {
        self.logmu1.iter().zip(&self.dlogmu2).map(|(a, b)| a * b).collect()
    }

    /// Simpson value of the integral on this grid alone.
    pub fn simpson_value(&self) -> Complex<T> {
        simpson(&self.integrand(), self.step())
    }

    /// Same lift on a grid with `n` intervals.
    pub fn relift(&self, n: usize) -> Result<Self> {
        lift_circle(&self.curve, &self.d1, &self.d2, n, self.span, &self.config)
    }

    /// CSV with header `theta,re_eta,im_eta,im_logmu1,im_logmu2,integrand`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re_eta,im_eta,im_logmu1,im_logmu2,integrand\n");
        for (k, f) in self.integrand().iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.theta[k], self.eta[k].re, self.eta[k].im, self.logmu1[k].im, self.logmu2[k].im, f.re
            );
        }
        out
    }
}

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const DEFAULT_START_INTERVALS: usize = 1024;
pub const DEFAULT_MAX_INTERVALS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig<T> {
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        Self { rel_tol: T::lit(DEFAULT_QUAD_TOL), max_intervals: DEFAULT_MAX_INTERVALS }
    }
}

/// Outcome of adaptive Simpson doubling.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature<T> {
    /// real part of the converged value
    pub value: T,
    /// imaginary part, zero up to rounding for unitary data
    pub imag: T,
    pub intervals: usize,
    pub last_change: T,
    /// `(intervals, value)` at every level
    pub history: Vec<(usize, T)>,
}

/// `Int log mu_1 (log mu_2)' d theta` over the path's span, doubling the grid until two
/// successive Simpson values agree to `rel_tol`.
pub fn circle_integral<T: Real>(path: &LiftedCirclePath<T>, quad: &QuadConfig<T>) -> Result<Quadrature<T>> {
    let mut current = path.simpson_value();
    let mut n = path.intervals();
    let mut history = vec![(n, current.re)];
    let mut last_change = T::infinity();
    while 2 * n <= quad.max_intervals {
        let finer = path.relift(2 * n)?;
        let f = finer.integrand();
        let next: Complex<T> = simpson(&f, finer.step());
        let scale: Vec<T> = f.iter().map(|z| z.norm()).collect();
        let l1 = pairwise_sum(&scale) * finer.step();
        n *= 2;
        last_change = (next - current).norm();
        history.push((n, next.re));
        current = next;
        if last_change <= quad.rel_tol * current.norm().max(l1) {
            return Ok(Quadrature { value: current.re, imag: current.im, intervals: n, last_change, history });
        }
    }
    Err(WzError::NonConvergence { intervals: n, last_change: last_change.to_f64().unwrap_or(f64::NAN) })
}

/// Half-circle holonomy integral `Int_0^pi log mu_1 (log mu_2)' d theta`.
pub fn holonomy_integral<T: Real>(path: &LiftedCirclePath<T>, quad: &QuadConfig<T>) -> Result<Quadrature<T>> {
    if path.span != Span::Half {
        return Err(WzError::InvalidPath("holonomy integral needs a half-circle lift".into()));
    }
    circle_integral(path, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn clifford_half(n: usize) -> LiftedCirclePath<f64> {
        let c = SpectralCurveP0::clifford();
        let (d1, d2) = c.reference_log_mu();
        lift_circle(&c, &d1, &d2, n, Span::Half, &LiftConfig::default()).unwrap()
    }

    #[test]
    fn clifford_eta_is_half_angle() {
        let p = clifford_half(128);
        for (th, e) in p.theta.iter().zip(&p.eta) {
            assert!((e - Complex::from_polar(1.0, th / 2.0)).norm() < 1e-14);
        }
        // Re log mu_1 vanishes; Im is pi (cos + sin + 1) of the half angle
        for (th, l) in p.theta.iter().zip(&p.logmu1) {
            let expect = PI * ((th / 2.0).cos() + (th / 2.0).sin() + 1.0);
            assert!(l.re.abs() < 1e-13 && (l.im - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let c = SpectralCurveP0::nonconformal(Complex::new(0.2, -0.4)).unwrap();
        let (d1, d2) = c.reference_log_mu();
        let p = lift_circle(&c, &d1, &d2, 4096, Span::Full, &LiftConfig::default()).unwrap();
        let h = p.step();
        for k in (1..p.theta.len() - 1).step_by(97) {
            let fd = (p.logmu2[k + 1] - p.logmu2[k - 1]) / (2.0 * h);
            assert!((fd - p.dlogmu2[k]).norm() < 1e-5);
        }
    }

    #[test]
    fn clifford_half_integral() {
        let p = clifford_half(1024);
        let q = holonomy_integral(&p, &QuadConfig::default()).unwrap();
        let expect = -PI.powi(3) / 2.0 - 3.0 * PI * PI;
        assert!((q.value - expect).abs() < 1e-8, "{} vs {expect}", q.value);
        assert!(q.imag.abs() < 1e-9);
    }

    #[test]
    fn constant_second_eigenvalue_gives_zero() {
        let c = SpectralCurveP0::clifford();
        let (d1, _) = c.reference_log_mu();
        let z = Complex::new(0.0, 0.0);
        let d2 = LogMuData { u: z, v: z, w_over_ipi: 2 };
        let p = lift_circle(&c, &d1, &d2, 1024, Span::Half, &LiftConfig::default()).unwrap();
        assert_eq!(holonomy_integral(&p, &QuadConfig::default()).unwrap().value, 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = SpectralCurveP0::clifford();
        let (d1, d2) = c.reference_log_mu();
        let cfg = LiftConfig::default();
        assert!(matches!(lift_circle(&c, &d1, &d2, 32, Span::Half, &cfg), Err(WzError::TooFewSamples { .. })));
        assert!(lift_circle(&c, &d1, &d2, 65, Span::Half, &cfg).is_err());
        let bad = LogMuData { w_over_ipi: 0, ..d1 };
        assert!(matches!(lift_circle(&c, &bad, &d2, 64, Span::Half, &cfg), Err(WzError::EndpointConstraint { .. })));
        let nonunit = LogMuData { u: Complex::new(1.0, 0.0), v: Complex::new(1.0, 0.0), w_over_ipi: 0 };
        assert!(matches!(lift_circle(&c, &nonunit, &d2, 64, Span::Half, &cfg), Err(WzError::NonUnitary(_))));
        let p = lift_circle(&c, &d1, &d2, 64, Span::Full, &cfg).unwrap();
        assert!(holonomy_integral(&p, &QuadConfig::default()).is_err());
    }

    #[test]
    fn nonconvergence_is_reported() {
        let p = clifford_half(64);
        let q = QuadConfig { rel_tol: 1e-30, max_intervals: 256 };
        assert!(matches!(holonomy_integral(&p, &q), Err(WzError::NonConvergence { intervals: 256, .. })));
    }

    #[test]
    fn csv_has_one_row_per_sample() {
        let p = clifford_half(64);
        let csv = p.to_csv();
        assert_eq!(csv.lines().count(), 66);
        assert!(csv.starts_with("theta,re_eta"));
    }
}
