//! Discrete SU(2)-valued maps on the square torus: Maurer-Cartan pullback, the loop of
//! connections `A(theta)`, its curvature and the energy.

use crate::error::{Result, WzError};
use crate::numeric::pairwise_sum;
use crate::scalar::Real;
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

pub const MIN_GRID: usize = 8;
pub const UNIT_TOL: f64 = 1e-12;
pub const DEFAULT_PROJECTION_LIMIT: f64 = 1e-3;

/// Quaternion `a + b i + c j + d k`, identified with `[[a + bi, c + di], [-c + di, a - bi]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quat<T>(pub [T; 4]);

impl<T: Real> Quat<T> {
    pub fn one() -> Self {
        Self([T::one(), T::zero(), T::zero(), T::zero()])
    }

    pub fn conj(self) -> Self {
        let [a, b, c, d] = self.0;
        Self([a, -b, -c, -d])
    }

    pub fn norm(self) -> T {
        self.0.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self(self.0.map(|x| x * s))
    }

    fn add(self, o: Self) -> Self {
        let mut r = self.0;
        for (x, y) in r.iter_mut().zip(o.0) {
            *x = *x + y;
        }
        Self(r)
    }

    /// `exp(v)` for an imaginary quaternion `v`.
    pub fn exp_imag(v: [T; 3]) -> Self {
        let n = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        let s = if n > T::zero() { n.sin() / n } else { T::one() };
        Self([n.cos(), v[0] * s, v[1] * s, v[2] * s])
    }

    pub fn to_matrix(self) -> [[Complex<T>; 2]; 2] {
        let [a, b, c, d] = self.0;
        [[Complex::new(a, b), Complex::new(c, d)], [Complex::new(-c, d), Complex::new(a, -b)]]
    }
}

impl<T: Real> Mul for Quat<T> {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Self([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }
}

/// An element of `su(2)` as the imaginary quaternion `x i + y j + z k`.
pub type Su2<T> = [T; 3];

pub fn su2_to_matrix<T: Real>(v: Su2<T>) -> [[Complex<T>; 2]; 2] {
    Quat([T::zero(), v[0], v[1], v[2]]).to_matrix()
}

/// `B(X, Y) = 4 tr(XY)`.
pub fn killing_matrix<T: Real>(x: &[[Complex<T>; 2]; 2], y: &[[Complex<T>; 2]; 2]) -> Complex<T> {
    let mut tr = Complex::new(T::zero(), T::zero());
    for i in 0..2 {
        for k in 0..2 {
            tr = tr + x[i][k] * y[k][i];
        }
    }
    tr * T::lit(4.0)
}

/// `B(X, Y) = 4 tr(XY) = -8 <X, Y>` on imaginary quaternions.
pub fn killing<T: Real>(x: Su2<T>, y: Su2<T>) -> T {
    -T::lit(8.0) * (x[0] * y[0] + x[1] * y[1] + x[2] * y[2])
}

fn imag<T: Real>(q: Quat<T>) -> Su2<T> {
    [q.0[1], q.0[2], q.0[3]]
}

fn bracket<T: Real>(x: Su2<T>, y: Su2<T>) -> Su2<T> {
    // [x, y] = xy - yx = 2 x cross y for imaginary quaternions
    let two = T::lit(2.0);
    [
        two * (x[1] * y[2] - x[2] * y[1]),
        two * (x[2] * y[0] - x[0] * y[2]),
        two * (x[0] * y[1] - x[1] * y[0]),
    ]
}

fn su2_norm<T: Real>(v: Su2<T>) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Periodic grid of unit quaternions on `R^2 / (2 pi Z)^2`, row-major with `x` the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteTorusMap<T> {
    nx: usize,
    ny: usize,
    q: Vec<Quat<T>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteTorusMapJson {
    pub nx: usize,
    pub ny: usize,
    pub q: Vec<[f64; 4]>,
}

impl<T: Real> DiscreteTorusMap<T> {
    pub fn new(nx: usize, ny: usize, q: Vec<Quat<T>>) -> Result<Self> {
        if nx < MIN_GRID || ny < MIN_GRID {
            return Err(WzError::InvalidGrid(format!("grid {nx}x{ny} is smaller than {MIN_GRID}x{MIN_GRID}")));
        }
        if q.len() != nx * ny {
            return Err(WzError::DimensionMismatch { expected: nx * ny, got: q.len() });
        }
        let tol = T::lit(UNIT_TOL).max(T::epsilon() * T::lit(16.0));
        if let Some(k) = q.iter().position(|p| (p.norm() - T::one()).abs() > tol) {
            return Err(WzError::InvalidGrid(format!("site {k} is not a unit quaternion")));
        }
        Ok(Self { nx, ny, q })
    }

    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(T, T) -> Quat<T> + Sync) -> Result<Self> {
        let (hx, hy) = Self::spacing_for(nx, ny);
        let q = (0..nx * ny)
            .into_par_iter()
            .map(|k| f(hx * T::from_usize_lossy(k / ny), hy * T::from_usize_lossy(k % ny)))
            .collect();
        Self::new(nx, ny, q)
    }

    /// `(x, y) -> (e^{ix}, e^{iy}) / sqrt 2`.
    pub fn clifford(n: usize) -> Result<Self> {
        let r = T::one() / T::lit(2.0).sqrt();
        Self::from_fn(n, n, |x, y| Quat([x.cos() * r, x.sin() * r, y.cos() * r, y.sin() * r]))
    }

    pub fn constant(n: usize, g: Quat<T>) -> Result<Self> {
        Self::from_fn(n, n, |_, _| g)
    }

    fn spacing_for(nx: usize, ny: usize) -> (T, T) {
        (T::two_pi() / T::from_usize_lossy(nx), T::two_pi() / T::from_usize_lossy(ny))
    }

    pub fn spacing(&self) -> (T, T) {
        Self::spacing_for(self.nx, self.ny)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn sites(&self) -> &[Quat<T>] {
        &self.q
    }

    pub fn at(&self, i: usize, j: usize) -> Quat<T> {
        self.q[(i % self.nx) * self.ny + (j % self.ny)]
    }

    pub fn translate_left(&self, h: Quat<T>) -> Result<Self> {
        Self::new(self.nx, self.ny, self.q.iter().map(|&p| h.mul(p)).collect())
    }

    pub fn translate_right(&self, h: Quat<T>) -> Result<Self> {
        Self::new(self.nx, self.ny, self.q.iter().map(|&p| p.mul(h)).collect())
    }

    /// Right multiplication by `exp(eps (sin(x + 2y) i + cos(2x - y) j))`; not harmonic for `eps != 0`.
    pub fn perturb(&self, eps: T) -> Result<Self> {
        let (hx, hy) = self.spacing();
        let two = T::lit(2.0);
        let q = (0..self.nx * self.ny)
            .into_par_iter()
            .map(|k| {
                let (x, y) = (hx * T::from_usize_lossy(k / self.ny), hy * T::from_usize_lossy(k % self.ny));
                let v = [eps * (x + two * y).sin(), eps * (two * x - y).cos(), T::zero()];
                self.q[k].mul(Quat::exp_imag(v))
            })
            .collect();
        Self::new(self.nx, self.ny, q)
    }
}

impl DiscreteTorusMap<f64> {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: DiscreteTorusMapJson =
            serde_json::from_str(s).map_err(|e| WzError::Parse(format!("torus map: {e}")))?;
        Self::new(j.nx, j.ny, j.q.into_iter().map(Quat).collect())
    }

    pub fn to_json(&self) -> DiscreteTorusMapJson {
        DiscreteTorusMapJson { nx: self.nx, ny: self.ny, q: self.q.iter().map(|p| p.0).collect() }
    }
}

/// `(A_x, A_y)` at every site.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionSample<T> {
    pub nx: usize,
    pub ny: usize,
    pub ax: Vec<Su2<T>>,
    pub ay: Vec<Su2<T>>,
}

impl<T: Real> ConnectionSample<T> {
    pub fn zero(nx: usize, ny: usize) -> Self {
        let z = [T::zero(); 3];
        Self { nx, ny, ax: vec![z; nx * ny], ay: vec![z; nx * ny] }
    }

    fn idx(&self, i: isize, j: isize) -> usize {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        i * self.ny + j
    }

    pub fn max_norm(&self) -> T {
        self.ax.iter().chain(&self.ay).map(|&v| su2_norm(v)).fold(T::zero(), T::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pullback<T> {
    pub alpha: ConnectionSample<T>,
    /// `max |Re(g^{-1} D g)| / max(1, max |alpha|)`, the part discarded by the projection
    pub projection_residual: T,
}

fn d4<T: Real>(m: &DiscreteTorusMap<T>, i: usize, j: usize, dir: usize, h: T) -> Quat<T> {
    let at = |s: isize| {
        let (ii, jj) = if dir == 0 {
            ((i as isize + s).rem_euclid(m.nx as isize) as usize, j)
        } else {
            (i, (j as isize + s).rem_euclid(m.ny as isize) as usize)
        };
        m.q[ii * m.ny + jj]
    };
    let eight = T::lit(8.0);
    at(-2).add(at(-1).scale(-eight)).add(at(1).scale(eight)).add(at(2).scale(-T::one())).scale(T::one() / (T::lit(12.0) * h))
}

/// `alpha = g^{-1} dg` by fourth-order central differences, projected onto `su(2)`.
pub fn pullback_mc<T: Real>(m: &DiscreteTorusMap<T>, projection_limit: T) -> Result<Pullback<T>> {
    let (hx, hy) = m.spacing();
    let per_site: Vec<(Quat<T>, Quat<T>)> = (0..m.nx * m.ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / m.ny, k % m.ny);
            let gi = m.q[k].conj();
            (gi.mul(d4(m, i, j, 0, hx)), gi.mul(d4(m, i, j, 1, hy)))
        })
        .collect();
    let real_part = per_site.iter().map(|(x, y)| x.0[0].abs().max(y.0[0].abs())).fold(T::zero(), T::max);
    let alpha = ConnectionSample {
        nx: m.nx,
        ny: m.ny,
        ax: per_site.iter().map(|p| imag(p.0)).collect(),
        ay: per_site.iter().map(|p| imag(p.1)).collect(),
    };
    let projection_residual = real_part / alpha.max_norm().max(T::one());
    if projection_residual > projection_limit {
        return Err(WzError::ProjectionResidual {
            residual: projection_residual.to_f64().unwrap_or(f64::NAN),
            limit: projection_limit.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Pullback { alpha, projection_residual })
}

/// `A(theta) = (1/2)(1 - e^{i theta}) alpha^{1,0} + (1/2)(1 - e^{-i theta}) alpha^{0,1}` with
/// `alpha^{1,0} = (1/2)(alpha_x - i alpha_y) dz`.
pub fn family_at<T: Real>(alpha: &ConnectionSample<T>, theta: T) -> ConnectionSample<T> {
    let half = T::lit(0.5);
    let a = (T::one() - theta.cos()) * half;
    let b = theta.sin() * half;
    let comb = |p: Su2<T>, q: Su2<T>| [a * p[0] - b * q[0], a * p[1] - b * q[1], a * p[2] - b * q[2]];
    let (ax, ay): (Vec<_>, Vec<_>) = alpha
        .ax
        .par_iter()
        .zip(&alpha.ay)
        .map(|(&x, &y)| {
            let neg = [-x[0], -x[1], -x[2]];
            (comb(x, y), comb(y, neg))
        })
        .unzip();
    ConnectionSample { nx: alpha.nx, ny: alpha.ny, ax, ay }
}

/// Max over sites of `|d_x A_y - d_y A_x + [A_x, A_y]|`, second-order central differences.
pub fn curvature_residual<T: Real>(a: &ConnectionSample<T>) -> T {
    let (hx, hy) = (T::two_pi() / T::from_usize_lossy(a.nx), T::two_pi() / T::from_usize_lossy(a.ny));
    let two = T::lit(2.0);
    (0..a.nx * a.ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = ((k / a.ny) as isize, (k % a.ny) as isize);
            let dy_ax = |c: usize| (a.ax[a.idx(i, j + 1)][c] - a.ax[a.idx(i, j - 1)][c]) / (two * hy);
            let dx_ay = |c: usize| (a.ay[a.idx(i + 1, j)][c] - a.ay[a.idx(i - 1, j)][c]) / (two * hx);
            let br = bracket(a.ax[k], a.ay[k]);
            su2_norm([dx_ay(0) - dy_ax(0) + br[0], dx_ay(1) - dy_ax(1) + br[1], dx_ay(2) - dy_ax(2) + br[2]])
        })
        .reduce(|| T::zero(), T::max)
}

/// `E = -(1/2) sum B(alpha, *alpha) h_x h_y = -(1/2) sum (B(a_x, a_x) + B(a_y, a_y)) h_x h_y`.
pub fn energy_of<T: Real>(alpha: &ConnectionSample<T>) -> T {
    let (hx, hy) = (T::two_pi() / T::from_usize_lossy(alpha.nx), T::two_pi() / T::from_usize_lossy(alpha.ny));
    let dens: Vec<T> = alpha
        .ax
        .par_iter()
        .zip(&alpha.ay)
        .map(|(&x, &y)| -(killing(x, x) + killing(y, y)) * T::lit(0.5))
        .collect();
    pairwise_sum(&dens) * hx * hy
}

pub fn energy_numeric<T: Real>(m: &DiscreteTorusMap<T>, projection_limit: T) -> Result<T> {
    Ok(energy_of(&pullback_mc(m, projection_limit)?.alpha))
}

/// Curvature residual of `A(theta)` on the map and on its 2x coarsening, for an order estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessCheck<T> {
    pub theta: T,
    pub grids: Vec<usize>,
    pub residuals: Vec<T>,
    /// `residuals[k] / residuals[k + 1]`
    pub ratios: Vec<T>,
}

pub fn flatness_sweep<T: Real>(
    make: impl Fn(usize) -> Result<DiscreteTorusMap<T>>,
    grids: &[usize],
    theta: T,
    projection_limit: T,
) -> Result<FlatnessCheck<T>> {
    let residuals = grids
        .iter()
        .map(|&n| Ok(curvature_residual(&family_at(&pullback_mc(&make(n)?, projection_limit)?.alpha, theta))))
        .collect::<Result<Vec<T>>>()?;
    let ratios = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(FlatnessCheck { theta, grids: grids.to_vec(), residuals, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn lim() -> f64 {
        DEFAULT_PROJECTION_LIMIT
    }

    #[test]
    fn killing_normalization() {
        let h = su2_to_matrix([1.0f64, 0.0, 0.0]);
        assert_eq!(h[0][0], Complex::new(0.0, 1.0));
        assert_eq!(h[1][1], Complex::new(0.0, -1.0));
        assert_eq!(killing_matrix(&h, &h), Complex::new(-8.0, 0.0));
        assert_eq!(killing([1.0f64, 0.0, 0.0], [1.0, 0.0, 0.0]), -8.0);
        let (x, y) = ([0.3f64, -1.2, 0.5], [0.7, 0.1, -0.4]);
        assert!((killing_matrix(&su2_to_matrix(x), &su2_to_matrix(y)).re - killing(x, y)).abs() < 1e-14);
    }

    #[test]
    fn quaternion_matches_matrix_product() {
        let p = Quat([0.1f64, 0.7, -0.2, 0.4]);
        let q = Quat([-0.5f64, 0.3, 0.9, 0.2]);
        let (mp, mq, mpq) = (p.to_matrix(), q.to_matrix(), p.mul(q).to_matrix());
        for i in 0..2 {
            for k in 0..2 {
                let v = mp[i][0] * mq[0][k] + mp[i][1] * mq[1][k];
                assert!((v - mpq[i][k]).norm() < 1e-14);
            }
        }
        let x = [0.4f64, -0.1, 0.3];
        let (qx, qy) = (Quat([0.0, x[0], x[1], x[2]]), Quat([0.0, 1.0, 2.0, -1.0]));
        let c = qx.mul(qy).add(qy.mul(qx).scale(-1.0));
        let b = bracket(x, [1.0, 2.0, -1.0]);
        assert!(c.0[0].abs() < 1e-15 && (0..3).all(|k| (c.0[k + 1] - b[k]).abs() < 1e-14));
    }

    #[test]
    fn constant_map_is_flat_and_massless() {
        let g = Quat::exp_imag([0.3, -0.2, 0.9]);
        let m = DiscreteTorusMap::<f64>::constant(16, g).unwrap();
        let p = pullback_mc(&m, lim()).unwrap();
        assert!(p.alpha.max_norm() < 1e-14);
        assert!(energy_of(&p.alpha).abs() < 1e-25);
        assert_eq!(curvature_residual(&ConnectionSample::<f64>::zero(8, 8)), 0.0);
    }

    #[test]
    fn clifford_alpha_is_homogeneous() {
        let m = DiscreteTorusMap::<f64>::clifford(128).unwrap();
        let p = pullback_mc(&m, lim()).unwrap();
        let norms: Vec<f64> = p.alpha.ax.iter().map(|&v| su2_norm(v)).collect();
        let (lo, hi) = norms.iter().fold((f64::MAX, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
        assert!(hi - lo < 1e-12);
        // exact value |d/dx e^{ix}/sqrt 2| = 1/sqrt 2
        assert!((hi - 0.5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn pullback_is_fourth_order() {
        let fine = pullback_mc(&DiscreteTorusMap::<f64>::clifford(256).unwrap(), lim()).unwrap().alpha;
        let diff = |n: usize| {
            let c = pullback_mc(&DiscreteTorusMap::<f64>::clifford(n).unwrap(), lim()).unwrap().alpha;
            let step = 256 / n;
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    let a = c.ax[i * n + j];
                    let b = fine.ax[(i * step) * 256 + j * step];
                    worst = worst.max(su2_norm([a[0] - b[0], a[1] - b[1], a[2] - b[2]]));
                }
            }
            worst
        };
        let r = diff(32) / diff(64);
        assert!(r > 12.0 && r < 20.0, "{r}");
    }

    #[test]
    fn family_endpoints_and_reflection() {
        let a = pullback_mc(&DiscreteTorusMap::<f64>::clifford(16).unwrap(), lim()).unwrap().alpha;
        let zero = family_at(&a, 0.0);
        assert!(zero.max_norm() == 0.0);
        let at_pi = family_at(&a, PI);
        for k in 0..a.ax.len() {
            for c in 0..3 {
                assert!((at_pi.ax[k][c] - a.ax[k][c]).abs() < 1e-15 && (at_pi.ay[k][c] - a.ay[k][c]).abs() < 1e-15);
            }
        }
        let (t1, t2) = (family_at(&a, 1.1), family_at(&a, 2.0 * PI - 1.1));
        // same (1 - cos) part, opposite sin part
        let s = 1.1f64.sin();
        for k in 0..a.ax.len() {
            for c in 0..3 {
                assert!((t1.ax[k][c] - t2.ax[k][c] + s * a.ay[k][c]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn clifford_family_flat_to_second_order() {
        let chk = flatness_sweep(DiscreteTorusMap::<f64>::clifford, &[64, 128], PI / 2.0, lim()).unwrap();
        assert!(chk.ratios[0] > 3.5 && chk.ratios[0] < 4.5, "{:?}", chk);
    }

    #[test]
    fn perturbed_family_is_not_flat() {
        let chk = flatness_sweep(|n| DiscreteTorusMap::<f64>::clifford(n)?.perturb(0.01), &[64, 128], PI / 2.0, lim())
            .unwrap();
        assert!(chk.residuals[1] > 1e-3 && chk.ratios[0] < 1.5, "{:?}", chk);
    }

    #[test]
    fn energy_translation_invariance() {
        let m = DiscreteTorusMap::<f64>::clifford(64).unwrap().perturb(0.1).unwrap();
        let h = Quat::exp_imag([0.4, 1.1, -0.3]);
        let e = energy_numeric(&m, lim()).unwrap();
        let el = energy_numeric(&m.translate_left(h).unwrap(), lim()).unwrap();
        let er = energy_numeric(&m.translate_right(h).unwrap(), lim()).unwrap();
        assert!((e - el).abs() < 1e-10 * e && (e - er).abs() < 1e-10 * e);
    }

    #[test]
    fn clifford_energy() {
        let e = energy_numeric(&DiscreteTorusMap::<f64>::clifford(64).unwrap(), lim()).unwrap();
        assert!((e / (16.0 * PI * PI) - 1.0).abs() < 1e-3);
        let e32 = energy_numeric(&DiscreteTorusMap::<f32>::clifford(64).unwrap(), 1e-2).unwrap();
        assert!((e32 / (16.0 * std::f32::consts::PI.powi(2)) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn grid_validation_and_json() {
        assert!(DiscreteTorusMap::<f64>::clifford(4).is_err());
        assert!(DiscreteTorusMap::new(8, 8, vec![Quat([1.0, 0.1, 0.0, 0.0]); 64]).is_err());
        assert!(DiscreteTorusMap::new(8, 8, vec![Quat::<f64>::one(); 63]).is_err());
        let m = DiscreteTorusMap::<f64>::clifford(8).unwrap();
        let s = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(DiscreteTorusMap::from_json_str(&s).unwrap(), m);
    }

    #[test]
    fn rough_map_fails_projection() {
        let m = DiscreteTorusMap::<f64>::from_fn(8, 8, |x, y| Quat::exp_imag([3.0 * (4.0 * x).sin(), (3.0 * y).cos() * 2.0, 0.0]))
            .unwrap();
        assert!(matches!(pullback_mc(&m, 1e-3), Err(WzError::ProjectionResidual { .. })));
    }
}
