//! Genus-0 spectral curves for harmonic tori in SU(2): lifts of the unit circle, the
//! holonomy integral, Wronskian energies and the Wess-Zumino term.

mod curve;
mod energy;
mod lift;

pub use curve::{CurveJson, CurveKind, LogMuData, LogMuJson, SpectralCurveP0, SpectralInput};
pub use energy::{
    energy_closed_form, energy_from_data, energy_wronskian, laurent_coefficients, Orientation, WronskianEnergy,
};
pub use lift::{
    circle_integral, holonomy_integral, lift_circle, LiftConfig, LiftDiagnostics, LiftedCirclePath, QuadConfig,
    Quadrature, Sheet, Span, DEFAULT_BRANCH_FLOOR, DEFAULT_BRANCH_PROBES, DEFAULT_ENDPOINT_TOL, DEFAULT_MAX_INTERVALS,
    DEFAULT_QUAD_TOL, DEFAULT_START_INTERVALS, DEFAULT_UNITARITY_TOL, MIN_INTERVALS,
};

use crate::closedforms::{AngleClass, DEFAULT_ANGLE_TOL};
use crate::error::{Result, WzError};
use crate::modulipath::CartanPath;
use crate::numeric::angle_distance;
use crate::rootsys::{build_group, GroupData, GroupType, Series};
use crate::scalar::Real;
use num_complex::Complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig<T> {
    pub lift: LiftConfig<T>,
    pub quad: QuadConfig<T>,
    pub angle_tol: T,
}

impl<T: Real> Default for SpectralConfig<T> {
    fn default() -> Self {
        Self { lift: LiftConfig::default(), quad: QuadConfig::default(), angle_tol: T::lit(DEFAULT_ANGLE_TOL) }
    }
}

/// Energy of a curve with given data: the closed form for reference data, the Wronskian
/// magnitude otherwise. The orientation always comes from the Wronskian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedEnergy<T> {
    pub energy: T,
    pub orientation: Orientation,
    pub closed_form: bool,
}

impl<T: Real> OrientedEnergy<T> {
    pub fn signed(&self) -> T {
        self.orientation.sign::<T>() * self.energy
    }
}

pub fn oriented_energy<T: Real>(
    curve: &SpectralCurveP0<T>,
    d1: &LogMuData<T>,
    d2: &LogMuData<T>,
) -> Result<OrientedEnergy<T>> {
    let w = energy_from_data(curve, d1, d2)?;
    if w.orientation == Orientation::Degenerate {
        return Err(WzError::Convention("principal parts are linearly dependent".into()));
    }
    let (r1, r2) = curve.reference_log_mu();
    let tol = T::lit(1e-12);
    let reference = d1.approx_eq(&r1, tol) && d2.approx_eq(&r2, tol);
    let energy = if reference { energy_closed_form(curve)? } else { w.energy };
    Ok(OrientedEnergy { energy, orientation: w.orientation, closed_form: reference })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGamma<T> {
    pub gamma: AngleClass<T>,
    pub integral: Quadrature<T>,
    pub energy: OrientedEnergy<T>,
}

/// `Gamma = -(1/pi) Int_0^pi log mu_1 (log mu_2)' - E / 32`, with `E` oriented.
pub fn gamma_spectral<T: Real>(
    curve: &SpectralCurveP0<T>,
    d1: &LogMuData<T>,
    d2: &LogMuData<T>,
    n: usize,
    cfg: &SpectralConfig<T>,
) -> Result<SpectralGamma<T>> {
    let energy = oriented_energy(curve, d1, d2)?;
    let path = lift_circle(curve, d1, d2, n, Span::Half, &cfg.lift)?;
    let integral = holonomy_integral(&path, &cfg.quad)?;
    let raw = -integral.value / T::PI() - energy.signed() / T::lit(32.0);
    Ok(SpectralGamma { gamma: AngleClass::new(raw, cfg.angle_tol), integral, energy })
}

/// `exp(i (3 pi c E - Gamma))`.
pub fn holonomy_relation<T: Real>(energy: T, gamma: &AngleClass<T>, g: &GroupData) -> Complex<T> {
    let three_pi_c = T::lit(3.0 * g.cs_constant() * std::f64::consts::PI);
    Complex::from_polar(T::one(), three_pi_c * energy - gamma.raw)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyModCheck<T> {
    /// circular distance between `E / 16` and `-(1/pi) Int_0^{2 pi}`
    pub residual: T,
    pub energy: OrientedEnergy<T>,
    pub full_integral: Quadrature<T>,
}

pub fn energy_mod_check<T: Real>(
    curve: &SpectralCurveP0<T>,
    d1: &LogMuData<T>,
    d2: &LogMuData<T>,
    n: usize,
    cfg: &SpectralConfig<T>,
) -> Result<EnergyModCheck<T>> {
    let energy = oriented_energy(curve, d1, d2)?;
    let path = lift_circle(curve, d1, d2, n, Span::Full, &cfg.lift)?;
    let full_integral = circle_integral(&path, &cfg.quad)?;
    let residual = angle_distance(energy.signed() / T::lit(16.0), -full_integral.value / T::PI());
    Ok(EnergyModCheck { residual, energy, full_integral })
}

/// The action in the two normalizations in use, for SU(2) (`c = -1/(96 pi)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WzwFunctional<T> {
    /// `-E / (16 pi) - i Gamma`
    pub inverse_16pi: Complex<T>,
    /// `-6 c E - i Gamma`
    pub six_c: Complex<T>,
    /// `Re(six_c) - Re(inverse_16pi)`
    pub real_part_gap: T,
}

pub fn wzw_functional<T: Real>(energy: T, gamma: &AngleClass<T>) -> WzwFunctional<T> {
    let pi = T::PI();
    let c = -T::one() / (T::lit(96.0) * pi);
    let inverse_16pi = Complex::new(-energy / (T::lit(16.0) * pi), -gamma.raw);
    let six_c = Complex::new(-T::lit(6.0) * c * energy, -gamma.raw);
    WzwFunctional { inverse_16pi, six_c, real_part_gap: six_c.re - inverse_16pi.re }
}

/// The SU(2) Cartan path of a half-circle lift: `a_i = (log mu_i - log mu_i(0)) / (2 pi i)`
/// against `t = theta / pi`. Its `path_holonomy` is the conjugate of `exp((i/pi) Int)`.
pub fn cartan_path<T: Real>(path: &LiftedCirclePath<T>) -> Result<CartanPath<T>> {
    if path.span != Span::Half {
        return Err(WzError::InvalidPath("cartan path needs a half-circle lift".into()));
    }
    let g = build_group(GroupType::new(Series::A, 1)?)?;
    let t: Vec<T> = path.theta.iter().map(|&th| th / T::PI()).collect();
    let coord = |l: &[Complex<T>]| -> Vec<Vec<T>> {
        let l0 = l[0];
        l.iter().map(|&x| vec![(x - l0).im / T::two_pi()]).collect()
    };
    CartanPath::new(g, t, coord(&path.logmu1), coord(&path.logmu2))
}

/// Every spectral quantity of one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport<T> {
    pub gamma: SpectralGamma<T>,
    pub mod_check: EnergyModCheck<T>,
    /// `exp(i (3 pi c sigma E - Gamma))`
    pub holonomy_relation: Complex<T>,
    /// `exp((i/pi) Int_0^pi)`
    pub holonomy_direct: Complex<T>,
    pub wzw: WzwFunctional<T>,
    pub half_lift: LiftedCirclePath<T>,
}

pub fn analyze<T: Real>(
    curve: &SpectralCurveP0<T>,
    d1: &LogMuData<T>,
    d2: &LogMuData<T>,
    n: usize,
    cfg: &SpectralConfig<T>,
) -> Result<SpectralReport<T>> {
    let gamma = gamma_spectral(curve, d1, d2, n, cfg)?;
    let mod_check = energy_mod_check(curve, d1, d2, n, cfg)?;
    let su2 = build_group(GroupType::new(Series::A, 1)?)?;
    let holonomy_relation = holonomy_relation(gamma.energy.signed(), &gamma.gamma, &su2);
    let holonomy_direct = Complex::from_polar(T::one(), gamma.integral.value / T::PI());
    let wzw = wzw_functional(gamma.energy.energy, &gamma.gamma);
    let half_lift = lift_circle(curve, d1, d2, n, Span::Half, &cfg.lift)?;
    Ok(SpectralReport { gamma, mod_check, holonomy_relation, holonomy_direct, wzw, half_lift })
}
