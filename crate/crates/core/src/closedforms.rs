//! Closed-form Wess-Zumino evaluations: maps into a maximal torus, symmetric spaces,
//! compositions with the equatorial sphere, and harmonic 2-spheres.

use crate::error::{Result, WzError};
use crate::numeric::{distance_to_lattice, rem_euclid};
use crate::rootsys::{GroupData, Rational};
use crate::scalar::Real;
use serde::Serialize;

/// Default tolerance for recognising a multiple of pi in closed-form results.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-9;

/// An angle with its canonical representative in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleClass<T> {
    pub raw: T,
    pub canonical: T,
    /// `n` in `{0, 1}` with `canonical` within tolerance of `n pi`, if any.
    pub pi_multiple: Option<i64>,
    /// Circular distance from `canonical` to the nearest of `{0, pi}`.
    pub pi_residual: T,
}

impl<T: Real> AngleClass<T> {
    pub fn new(raw: T, tol: T) -> Self {
        let pi = T::PI();
        let canonical = rem_euclid(raw, T::two_pi());
        let pi_residual = distance_to_lattice(canonical, pi);
        let pi_multiple = (pi_residual < tol).then(|| {
            let n = (canonical / pi).round().to_i64().unwrap_or(0);
            n.rem_euclid(2)
        });
        Self { raw, canonical, pi_multiple, pi_residual }
    }

    pub fn with_default_tol(raw: T) -> Self {
        Self::new(raw, T::lit(DEFAULT_ANGLE_TOL))
    }

    /// `n pi`, reduced by integer parity so the canonical value is exactly `0` or `pi`.
    pub fn from_pi_multiple(n: i64) -> Self {
        let parity = n.rem_euclid(2);
        Self {
            raw: T::from_i64_lossy(n) * T::PI(),
            canonical: if parity == 0 { T::zero() } else { T::PI() },
            pi_multiple: Some(parity),
            pi_residual: T::zero(),
        }
    }

    /// Circular distance to another angle.
    pub fn distance(&self, other: T) -> T {
        crate::numeric::angle_distance(self.canonical, other)
    }
}

/// Integer coefficients of `sum m_i coroot_i` in the coroot lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        if self.len() == rank {
            Ok(())
        } else {
            Err(WzError::DimensionMismatch { expected: rank, got: self.len() })
        }
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

pub(crate) fn rational_to<T: Real>(r: Rational) -> T {
    T::from_i64_lossy(*r.numer()) / T::from_i64_lossy(*r.denom())
}

fn bilinear_pi_multiple(form: &[Vec<i64>], m: &LatticeVector, n: &LatticeVector) -> i64 {
    let mut acc: i128 = 0;
    for (i, row) in form.iter().enumerate() {
        for (j, &f) in row.iter().enumerate() {
            acc += i128::from(f) * i128::from(m.0[i]) * i128::from(n.0[j]);
        }
    }
    acc.rem_euclid(2) as i64
}

/// Wess-Zumino term of the torus homomorphism `(x1, x2) -> exp(x1 lambda_1) exp(x2 lambda_2)`
/// with `lambda_1 = sum m_i coroot_i`, `lambda_2 = sum n_i coroot_i`.
///
/// Evaluates `2 pi B(lambda_1, lambda_2) / B(coroot_beta, coroot_beta)` from the exact coroot
/// Gram ratio; twice the ratio is integral, so the result is exactly `0` or `pi`.
pub fn wz_torus_hom<T: Real>(g: &GroupData, m: &LatticeVector, n: &LatticeVector) -> Result<AngleClass<T>> {
    m.check_rank(g.rank())?;
    n.check_rank(g.rank())?;
    let doubled: Vec<Vec<i64>> = g
        .coroot_gram_ratio
        .iter()
        .map(|row| {
            row.iter()
                .map(|r| {
                    let d = *r * Rational::from(2);
                    debug_assert!(d.is_integer());
                    d.to_integer()
                })
                .collect()
        })
        .collect();
    Ok(AngleClass::from_pi_multiple(bilinear_pi_multiple(&doubled, m, n)))
}

/// `pi sum S_ij m_i n_j` with `S_ij = min(C_ij, C_ji)`. Agrees with [`wz_torus_hom`] except on
/// types with two bonded short simple roots (`C_n`, `F4`).
pub fn wz_torus_hom_s_form<T: Real>(g: &GroupData, m: &LatticeVector, n: &LatticeVector) -> Result<AngleClass<T>> {
    m.check_rank(g.rank())?;
    n.check_rank(g.rank())?;
    Ok(AngleClass::from_pi_multiple(bilinear_pi_multiple(&g.s_matrix, m, n)))
}

/// Map into a canonically embedded symmetric space with homology class `n` times the generator.
pub fn wz_symmetric_space<T: Real>(n: i64) -> AngleClass<T> {
    AngleClass::from_pi_multiple(n)
}

/// Composition of a degree-`deg` map to `S^2` with the equatorial sphere in `SU(2)`.
pub fn wz_degree<T: Real>(deg: i64) -> AngleClass<T> {
    AngleClass::from_pi_multiple(deg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereHarmonic<T> {
    pub gamma: AngleClass<T>,
    /// Distance of `|beta|^2 E / 16 pi` to the nearest integer.
    pub integrality_residual: T,
}

/// Harmonic map `S^2 -> G` of energy `energy`: `Gamma = |beta|^2 E / 16`.
pub fn wz_sphere_harmonic<T: Real>(g: &GroupData, energy: T, angle_tol: T) -> Result<SphereHarmonic<T>> {
    if energy < T::zero() {
        return Err(WzError::NegativeEnergy(energy.to_f64().unwrap_or(f64::NAN)));
    }
    let beta_sq: T = rational_to(g.beta_norm_sq);
    let raw = beta_sq * energy / T::lit(16.0);
    Ok(SphereHarmonic {
        gamma: AngleClass::new(raw, angle_tol),
        integrality_residual: distance_to_lattice(raw / T::PI(), T::one()),
    })
}

/// Wess-Zumino term `3 c (theta - sin theta) E` of the map trivializing the flat connection at
/// parameter `theta` in the family of a harmonic 2-sphere.
pub fn wz_sphere_theta<T: Real>(g: &GroupData, energy: T, theta: T, angle_tol: T) -> AngleClass<T> {
    let c_pi: T = rational_to(g.cs_constant_times_pi);
    let three_c = T::lit(3.0) * c_pi / T::PI();
    AngleClass::new(three_c * (theta - theta.sin()) * energy, angle_tol)
}

/// Smallest positive energy allowed by the integrality of `|beta|^2 E / 16 pi`.
pub fn energy_quantum<T: Real>(g: &GroupData) -> T {
    T::lit(16.0) * T::PI() / rational_to::<T>(g.beta_norm_sq)
}
