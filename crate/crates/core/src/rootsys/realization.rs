//! Simple roots in orthonormal coordinates and the Weyl-orbit closure of the root system.
//!
//! Numbering follows Bourbaki; coordinates are exact in any field containing 1/2.

use super::group_type::{GroupType, Series};
use num_traits::Num;
use std::collections::HashSet;
use std::hash::Hash;
use std::ops::Neg;

/// Exact scalar field used for root coordinates.
pub trait ExactField: Num + Clone + Eq + Hash + Neg<Output = Self> + From<i64> {}

impl<T> ExactField for T where T: Num + Clone + Eq + Hash + Neg<Output = T> + From<i64> {}

pub type Vector<F> = Vec<F>;

pub fn dot<F: ExactField>(x: &[F], y: &[F]) -> F {
    x.iter().zip(y).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

fn add<F: ExactField>(x: &[F], y: &[F]) -> Vector<F> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

fn scale<F: ExactField>(s: &F, x: &[F]) -> Vector<F> {
    x.iter().map(|a| s.clone() * a.clone()).collect()
}

/// Reflection of `v` in the hyperplane orthogonal to `alpha`.
pub fn reflect<F: ExactField>(v: &[F], alpha: &[F]) -> Vector<F> {
    let two = F::from(2);
    let k = two * dot(v, alpha) / dot(alpha, alpha);
    v.iter().zip(alpha).map(|(x, a)| x.clone() - k.clone() * a.clone()).collect()
}

/// Coroot `2 alpha / (alpha, alpha)` under the Euclidean identification.
pub fn coroot<F: ExactField>(alpha: &[F]) -> Vector<F> {
    let k = F::from(2) / dot(alpha, alpha);
    scale(&k, alpha)
}

/// A root system given by its simple roots in an ambient Euclidean space.
#[derive(Debug, Clone)]
pub struct Realization<F> {
    pub simple_roots: Vec<Vector<F>>,
}

fn unit<F: ExactField>(dim: usize, i: usize) -> Vector<F> {
    (0..dim).map(|k| if k == i { F::one() } else { F::zero() }).collect()
}

fn e_diff<F: ExactField>(dim: usize, i: usize, j: usize) -> Vector<F> {
    let mut v = unit::<F>(dim, i);
    v[j] = -F::one();
    v
}

fn e8_simple_roots<F: ExactField>() -> Vec<Vector<F>> {
    let half = F::one() / F::from(2);
    let mut roots = Vec::with_capacity(8);
    let mut a1: Vector<F> = vec![-half.clone(); 8];
    a1[0] = half.clone();
    a1[7] = half;
    roots.push(a1);
    let mut a2 = unit::<F>(8, 0);
    a2[1] = F::one();
    roots.push(a2);
    for i in 0..6 {
        roots.push(e_diff(8, i + 1, i));
    }
    roots
}

impl<F: ExactField> Realization<F> {
    /// Standard orthonormal-coordinate realization of the simple roots.
    pub fn standard(gt: GroupType) -> Self {
        let n = gt.rank();
        let simple_roots = match gt.series() {
            Series::A => (0..n).map(|i| e_diff(n + 1, i, i + 1)).collect(),
            Series::B => {
                let mut r: Vec<_> = (0..n - 1).map(|i| e_diff(n, i, i + 1)).collect();
                r.push(unit(n, n - 1));
                r
            }
            Series::C => {
                let mut r: Vec<_> = (0..n - 1).map(|i| e_diff(n, i, i + 1)).collect();
                r.push(scale(&F::from(2), &unit::<F>(n, n - 1)));
                r
            }
            Series::D => {
                let mut r: Vec<_> = (0..n - 1).map(|i| e_diff(n, i, i + 1)).collect();
                r.push(add(&unit::<F>(n, n - 2), &unit::<F>(n, n - 1)));
                r
            }
            Series::E => e8_simple_roots().into_iter().take(n).collect(),
            Series::F => {
                let half = F::one() / F::from(2);
                vec![
                    e_diff(4, 1, 2),
                    e_diff(4, 2, 3),
                    unit(4, 3),
                    vec![half.clone(), -half.clone(), -half.clone(), -half],
                ]
            }
            Series::G => vec![
                vec![F::one(), -F::one(), F::zero()],
                vec![F::from(-2), F::one(), F::one()],
            ],
        };
        Self { simple_roots }
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// `C_ij = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)`.
    pub fn cartan_entry(&self, i: usize, j: usize) -> F {
        let ai = &self.simple_roots[i];
        let aj = &self.simple_roots[j];
        F::from(2) * dot(ai, aj) / dot(aj, aj)
    }

    /// All roots: the orbit of the simple roots under the simple reflections.
    pub fn roots(&self) -> HashSet<Vector<F>> {
        let mut seen: HashSet<Vector<F>> = self.simple_roots.iter().cloned().collect();
        let mut frontier: Vec<Vector<F>> = self.simple_roots.clone();
        while let Some(v) = frontier.pop() {
            for a in &self.simple_roots {
                let w = reflect(&v, a);
                if !seen.contains(&w) {
                    seen.insert(w.clone());
                    frontier.push(w);
                }
            }
        }
        seen
    }

    /// Highest root by saturating addition of simple roots, starting from the first simple root.
    pub fn highest_root(&self, roots: &HashSet<Vector<F>>) -> Vector<F> {
        let mut beta = self.simple_roots[0].clone();
        loop {
            let next = self
                .simple_roots
                .iter()
                .map(|a| add(&beta, a))
                .find(|candidate| roots.contains(candidate));
            match next {
                Some(b) => beta = b,
                None => return beta,
            }
        }
    }
}
