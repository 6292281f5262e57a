//! Independent brute-force route to [`GroupData`]: Dynkin diagram tables, root strings in
//! simple-root coordinates and the trace form of the adjoint action on simple coroots.

use super::group_type::{GroupType, Series};
use super::{s_matrix_from, GroupData, Rational};
use crate::error::{Result, WzError};
use std::collections::{BTreeSet, HashSet};

pub const ORACLE_MAX_RANK: usize = 8;

/// Dynkin data: bonds between nodes and relative squared root lengths.
struct Diagram {
    bonds: Vec<(usize, usize)>,
    lengths: Vec<i64>,
}

fn chain(n: usize) -> Vec<(usize, usize)> {
    (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()
}

fn diagram(gt: GroupType) -> Diagram {
    let n = gt.rank();
    match gt.series() {
        Series::A => Diagram { bonds: chain(n), lengths: vec![1; n] },
        Series::B => {
            let mut lengths = vec![2; n];
            lengths[n - 1] = 1;
            Diagram { bonds: chain(n), lengths }
        }
        Series::C => {
            let mut lengths = vec![1; n];
            lengths[n - 1] = 2;
            Diagram { bonds: chain(n), lengths }
        }
        Series::D => {
            let mut bonds = chain(n - 1);
            bonds.push((n - 3, n - 1));
            Diagram { bonds, lengths: vec![1; n] }
        }
        Series::E => {
            let bonds = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
                .into_iter()
                .filter(|&(i, j)| i < n && j < n)
                .collect();
            Diagram { bonds, lengths: vec![1; n] }
        }
        Series::F => Diagram { bonds: chain(4), lengths: vec![2, 2, 1, 1] },
        Series::G => Diagram { bonds: chain(2), lengths: vec![1, 3] },
    }
}

/// Cartan matrix `C_ij = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)` read off a diagram.
fn cartan_from_diagram(d: &Diagram) -> Vec<Vec<i64>> {
    let n = d.lengths.len();
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in &d.bonds {
        let (li, lj) = (d.lengths[i], d.lengths[j]);
        // long-over-short entry carries the length ratio
        c[i][j] = -(li / lj).max(1);
        c[j][i] = -(lj / li).max(1);
    }
    c
}

type Coeffs = Vec<i64>;

/// `<gamma, coroot_i>` for a root given in simple-root coefficients.
fn pairing(gamma: &[i64], cartan: &[Vec<i64>], i: usize) -> i64 {
    gamma.iter().enumerate().map(|(j, k)| k * cartan[j][i]).sum()
}

/// Positive roots via root strings: `gamma + alpha_i` is a root iff `p - <gamma, coroot_i> > 0`,
/// where `p` counts how far the alpha_i-string extends below `gamma`.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Coeffs> {
    let n = cartan.len();
    let mut all: HashSet<Coeffs> = HashSet::new();
    let mut layer: BTreeSet<Coeffs> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut ordered = Vec::new();
    while !layer.is_empty() {
        all.extend(layer.iter().cloned());
        ordered.extend(layer.iter().cloned());
        let mut next = BTreeSet::new();
        for gamma in &layer {
            for i in 0..n {
                let mut p = 0;
                let mut down = gamma.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing(gamma, cartan, i) > 0 {
                    let mut up = gamma.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        layer = next;
    }
    ordered
}

/// Builds [`GroupData`] from first principles, independently of the Euclidean realization.
pub fn killing_oracle(gt: GroupType) -> Result<GroupData> {
    let n = gt.rank();
    if n > ORACLE_MAX_RANK {
        return Err(WzError::OracleRankLimit(n));
    }
    let d = diagram(gt);
    let cartan = cartan_from_diagram(&d);
    let positive = positive_roots(&cartan);

    // Killing form on simple coroots: sum over all roots of <gamma, h_i><gamma, h_j>; negative
    // roots contribute the same as positive ones.
    let pairings: Vec<Vec<i64>> = positive
        .iter()
        .map(|g| (0..n).map(|i| pairing(g, &cartan, i)).collect())
        .collect();
    let mut killing = vec![vec![0i64; n]; n];
    for (i, row) in killing.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = 2 * pairings.iter().map(|p| p[i] * p[j]).sum::<i64>();
        }
    }

    let height = |g: &Coeffs| g.iter().sum::<i64>();
    let beta = positive
        .iter()
        .max_by_key(|g| height(g))
        .expect("at least one root")
        .clone();

    // beta's coroot in simple coroots: k_i |alpha_i|^2 / |beta|^2
    let long = *d.lengths.iter().max().expect("rank >= 1");
    let coroot_coeffs: Vec<i64> = beta
        .iter()
        .zip(&d.lengths)
        .map(|(k, l)| {
            debug_assert_eq!((k * l) % long, 0);
            k * l / long
        })
        .collect();
    let k_beta: i64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| coroot_coeffs[i] * coroot_coeffs[j] * killing[i][j])
        .sum();

    let beta_norm_sq = Rational::new(4, k_beta);
    let coroot_gram_ratio = killing
        .iter()
        .map(|row| row.iter().map(|&k| Rational::new(k, k_beta)).collect())
        .collect();
    let dual = Rational::from(1) / beta_norm_sq;
    if !dual.is_integer() {
        return Err(WzError::InvalidGroup(format!("{gt}: 1/|beta|^2 = {dual} not an integer")));
    }

    Ok(GroupData {
        group: gt,
        s_matrix: s_matrix_from(&cartan),
        cartan,
        coroot_gram_ratio,
        beta_norm_sq,
        cs_constant_times_pi: -beta_norm_sq / Rational::from(48),
        dual_coxeter: dual.to_integer(),
    })
}
