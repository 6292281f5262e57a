//! Deterministic summation, composite quadrature rules and finite differences.

use crate::scalar::Real;
use num_traits::Zero;
use std::ops::{Add, Mul};

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise (cascade) summation. The split points depend only on the length, so the result is
/// reproducible regardless of how the inputs were produced.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Zero + Add<Output = T>,
{
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Composite Simpson rule on a uniform grid. `ys.len()` must be odd and at least 3.
pub fn simpson<T, S>(ys: &[S], h: T) -> S
where
    T: Real,
    S: Copy + Zero + Add<Output = S> + Mul<T, Output = S>,
{
    let n = ys.len();
    assert!(n >= 3 && n % 2 == 1, "simpson needs an odd number (>= 3) of samples");
    let odd: Vec<S> = ys[1..n - 1].iter().step_by(2).copied().collect();
    let even: Vec<S> = ys[2..n - 1].iter().step_by(2).copied().collect();
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    (ys[0] + ys[n - 1] + pairwise_sum(&odd) * four + pairwise_sum(&even) * two) * (h / T::lit(3.0))
}

/// Composite trapezoid rule on an arbitrary increasing grid.
pub fn trapezoid<T: Real>(t: &[T], ys: &[T]) -> T {
    assert_eq!(t.len(), ys.len());
    let half = T::lit(0.5);
    let panels: Vec<T> = t
        .windows(2)
        .zip(ys.windows(2))
        .map(|(tw, yw)| (tw[1] - tw[0]) * (yw[0] + yw[1]) * half)
        .collect();
    pairwise_sum(&panels)
}

/// Derivative of the quadratic through three points, evaluated at `at`.
fn lagrange3_derivative<T: Real>(x: [T; 3], y: [T; 3], at: T) -> T {
    let [x0, x1, x2] = x;
    let [y0, y1, y2] = y;
    let l0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
    let l1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
    let l2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
    y0 * l0 + y1 * l1 + y2 * l2
}

/// Second-order derivative estimate on a nonuniform grid: centered 3-point stencils in the
/// interior, one-sided 3-point stencils at both ends. Needs at least 3 points.
pub fn derivative_nonuniform<T: Real>(t: &[T], ys: &[T]) -> Vec<T> {
    let n = t.len();
    assert!(n >= 3 && ys.len() == n);
    (0..n)
        .map(|k| {
            let base = k.saturating_sub(1).min(n - 3);
            let xs = [t[base], t[base + 1], t[base + 2]];
            let vs = [ys[base], ys[base + 1], ys[base + 2]];
            lagrange3_derivative(xs, vs, t[k])
        })
        .collect()
}

/// `x mod period` in `[0, period)`.
pub fn rem_euclid<T: Real>(x: T, period: T) -> T {
    let r = x - period * (x / period).floor();
    if r >= period || r < T::zero() {
        T::zero()
    } else {
        r
    }
}

/// Distance from `x` to the nearest point of `period * Z`.
pub fn distance_to_lattice<T: Real>(x: T, period: T) -> T {
    let r = rem_euclid(x, period);
    r.min(period - r).abs()
}

/// Circular distance between two angles, in `[0, pi]`.
pub fn angle_distance<T: Real>(a: T, b: T) -> T {
    distance_to_lattice(a - b, T::two_pi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let xs: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 55.0);
    }

    #[test]
    fn pairwise_is_deterministic_and_accurate() {
        let xs: Vec<f64> = (0..100_000).map(|k| 0.1 + 1e-9 * k as f64).collect();
        let exact = 0.1 * 100_000.0 + 1e-9 * (99_999.0 * 100_000.0 / 2.0);
        assert!((pairwise_sum(&xs) - exact).abs() < 1e-9);
        assert_eq!(pairwise_sum(&xs).to_bits(), pairwise_sum(&xs.clone()).to_bits());
    }

    #[test]
    fn simpson_exact_for_cubics() {
        let n = 8;
        let h = 1.0 / n as f64;
        let ys: Vec<f64> = (0..=n).map(|k| (k as f64 * h).powi(3)).collect();
        assert!((simpson(&ys, h) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn simpson_sine_fourth_order() {
        let err = |n: usize| {
            let h = PI / n as f64;
            let ys: Vec<f64> = (0..=n).map(|k| (k as f64 * h).sin()).collect();
            (simpson(&ys, h) - 2.0).abs()
        };
        let ratio = err(16) / err(32);
        assert!(ratio > 15.0 && ratio < 17.0, "ratio {ratio}");
    }

    #[test]
    fn trapezoid_linear_exact_on_nonuniform_grid() {
        let t = [0.0, 0.1, 0.5, 0.55, 1.0];
        let ys: Vec<f64> = t.iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((trapezoid(&t, &ys) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn derivative_exact_for_quadratics() {
        let t = [0.0, 0.2, 0.3, 0.7, 1.0];
        let ys: Vec<f64> = t.iter().map(|x| x * x - 2.0 * x).collect();
        for (d, x) in derivative_nonuniform(&t, &ys).iter().zip(t) {
            assert!((d - (2.0 * x - 2.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn lattice_distance() {
        assert!((distance_to_lattice(3.0 * PI, 2.0 * PI) - PI).abs() < 1e-12);
        assert!((distance_to_lattice(-0.1f64, 1.0) - 0.1).abs() < 1e-12);
        assert!((angle_distance(0.1, 2.0 * PI - 0.1) - 0.2).abs() < 1e-12);
    }
}
