//! Chern-Simons line-bundle holonomy along sampled paths of flat connections on the torus
//! `R^2 / 2 pi Z^2`, written as constant Cartan-valued connections `a_1 dx_1 + a_2 dx_2`.

use crate::closedforms::rational_to;
use crate::error::{Result, WzError};
use crate::numeric::{derivative_nonuniform, distance_to_lattice, trapezoid};
use crate::rootsys::{GroupData, GroupType};
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Tolerance for the lattice endpoint and trivial start of a closed-loop path.
pub const LATTICE_TOL: f64 = 1e-9;

/// Samples of a path `t -> (a_1(t), a_2(t))` in coroot coordinates.
#[derive(Debug, Clone)]
pub struct CartanPath<T> {
    pub group: GroupData,
    pub t: Vec<T>,
    pub a1: Vec<Vec<T>>,
    pub a2: Vec<Vec<T>>,
}

/// Wire format: `{"group": "A2", "t": [...], "a1": [[...], ...], "a2": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CartanPathJson {
    pub group: GroupType,
    pub t: Vec<f64>,
    pub a1: Vec<Vec<f64>>,
    pub a2: Vec<Vec<f64>>,
}

impl CartanPath<f64> {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: CartanPathJson = serde_json::from_str(s).map_err(|e| WzError::Parse(format!("cartan path: {e}")))?;
        let group = crate::rootsys::build_group(raw.group)?;
        Self::new(group, raw.t, raw.a1, raw.a2)
    }

    pub fn to_json(&self) -> CartanPathJson {
        CartanPathJson { group: self.group.group, t: self.t.clone(), a1: self.a1.clone(), a2: self.a2.clone() }
    }
}

impl<T: Real> CartanPath<T> {
    pub fn new(group: GroupData, t: Vec<T>, a1: Vec<Vec<T>>, a2: Vec<Vec<T>>) -> Result<Self> {
        let n = t.len();
        if a1.len() != n || a2.len() != n {
            return Err(WzError::InvalidPath(format!(
                "sample counts differ: t {n}, a1 {}, a2 {}",
                a1.len(),
                a2.len()
            )));
        }
        if n == 0 || t[0] != T::zero() {
            return Err(WzError::InvalidPath("t must start at 0".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) || t[n - 1] > T::one() {
            return Err(WzError::InvalidPath("t must be strictly increasing within [0, 1]".into()));
        }
        let rank = group.rank();
        if let Some(bad) = a1.iter().chain(&a2).find(|v| v.len() != rank) {
            return Err(WzError::DimensionMismatch { expected: rank, got: bad.len() });
        }
        Ok(Self { group, t, a1, a2 })
    }

    /// Straight line `t -> t lambda` to a pair of lattice points, sampled uniformly.
    pub fn straight(group: GroupData, lambda1: &[i64], lambda2: &[i64], samples: usize) -> Result<Self> {
        let rank = group.rank();
        for l in [lambda1, lambda2] {
            if l.len() != rank {
                return Err(WzError::DimensionMismatch { expected: rank, got: l.len() });
            }
        }
        let samples = samples.max(2);
        let last = T::from_usize_lossy(samples - 1);
        let t: Vec<T> = (0..samples).map(|k| T::from_usize_lossy(k) / last).collect();
        let scaled = |l: &[i64], s: T| l.iter().map(|&x| T::from_i64_lossy(x) * s).collect::<Vec<T>>();
        let a1 = t.iter().map(|&s| scaled(lambda1, s)).collect();
        let a2 = t.iter().map(|&s| scaled(lambda2, s)).collect();
        Self::new(group, t, a1, a2)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn derivatives(&self, a: &[Vec<T>]) -> Vec<Vec<T>> {
        let rank = self.group.rank();
        let per_coord: Vec<Vec<T>> = (0..rank)
            .map(|i| {
                let ys: Vec<T> = a.iter().map(|v| v[i]).collect();
                derivative_nonuniform(&self.t, &ys)
            })
            .collect();
        (0..self.len()).map(|k| (0..rank).map(|i| per_coord[i][k]).collect()).collect()
    }

    fn require_samples(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(WzError::TooFewSamples { needed, got: self.len() })
        } else {
            Ok(())
        }
    }

    /// Checks the closed-loop preconditions: ends at `t = 1`, starts at the trivial connection
    /// and ends at a pair of lattice points.
    pub fn check_closed_loop(&self) -> Result<()> {
        let tol = T::lit(LATTICE_TOL);
        let last = self.len() - 1;
        if (self.t[last] - T::one()).abs() > tol {
            return Err(WzError::InvalidPath("closed loop must end at t = 1".into()));
        }
        let origin_ok = self.a1[0].iter().chain(&self.a2[0]).all(|x| x.abs() <= tol);
        if !origin_ok {
            return Err(WzError::InvalidPath("closed loop must start at the trivial connection".into()));
        }
        for (name, a) in [("a1", &self.a1[last]), ("a2", &self.a2[last])] {
            if let Some(x) = a.iter().find(|x| distance_to_lattice(**x, T::one()) > tol) {
                return Err(WzError::NonLatticeEndpoint(format!("{name} has coordinate {x} at t = 1")));
            }
        }
        Ok(())
    }
}

/// `sum_ij B(coroot_i, coroot_j) x_i y_j` for the Killing form `B`.
pub fn killing_pairing<T: Real>(g: &GroupData, x: &[T], y: &[T]) -> Result<T> {
    let rank = g.rank();
    for v in [x, y] {
        if v.len() != rank {
            return Err(WzError::DimensionMismatch { expected: rank, got: v.len() });
        }
    }
    Ok(pairing_unchecked(g, x, y))
}

fn pairing_unchecked<T: Real>(g: &GroupData, x: &[T], y: &[T]) -> T {
    let scale: T = rational_to(g.killing_beta_coroot());
    let mut acc = T::zero();
    for (i, row) in g.coroot_gram_ratio.iter().enumerate() {
        for (j, r) in row.iter().enumerate() {
            acc = acc + rational_to::<T>(*r) * x[i] * y[j];
        }
    }
    acc * scale
}

/// Samples of the line-bundle connection form `6c (B(a_1, a_2') - B(a_2, a_1'))`.
pub fn cs_connection_form<T: Real>(p: &CartanPath<T>) -> Result<Vec<T>> {
    p.require_samples(3)?;
    let d1 = p.derivatives(&p.a1);
    let d2 = p.derivatives(&p.a2);
    let six_c = T::lit(6.0) * rational_to::<T>(p.group.cs_constant_times_pi) / T::PI();
    Ok((0..p.len())
        .map(|k| {
            six_c * (pairing_unchecked(&p.group, &p.a1[k], &d2[k]) - pairing_unchecked(&p.group, &p.a2[k], &d1[k]))
        })
        .collect())
}

/// Samples of `B(a_1, a_2')`.
pub fn holonomy_integrand<T: Real>(p: &CartanPath<T>) -> Result<Vec<T>> {
    p.require_samples(3)?;
    let d2 = p.derivatives(&p.a2);
    Ok((0..p.len()).map(|k| pairing_unchecked(&p.group, &p.a1[k], &d2[k])).collect())
}

/// `int_0^1 B(a_1, a_2') dt` by the composite trapezoid rule.
pub fn holonomy_exponent_integral<T: Real>(p: &CartanPath<T>) -> Result<T> {
    let ys = holonomy_integrand(p)?;
    Ok(trapezoid(&p.t, &ys))
}

/// Holonomy `exp(48 pi^2 c i int_0^1 B(a_1, a_2') dt)` around the closed loop formed by the path
/// and the gauge transformation back to the trivial connection.
pub fn path_holonomy<T: Real>(p: &CartanPath<T>) -> Result<Complex<T>> {
    p.require_samples(3)?;
    p.check_closed_loop()?;
    let integral = holonomy_exponent_integral(p)?;
    let phase = T::lit(48.0) * T::PI() * rational_to::<T>(p.group.cs_constant_times_pi) * integral;
    Ok(Complex::from_polar(T::one(), phase))
}
