//! Root systems, Cartan matrices and Killing-form normalizations of every compact simple
//! simply connected Lie group.
//!
//! All arithmetic here is exact. Two routes produce [`GroupData`]:
//!
//! * [`build_group`] works in orthonormal coordinates. It closes the simple roots under Weyl
//!   reflections, finds the highest root by saturating addition and reads the Killing
//!   normalization off the Casimir identity `sum_alpha alpha (x) alpha = kappa * Id`.
//! * [`killing_oracle`] starts from Dynkin tables, grows the positive roots with root strings
//!   and evaluates the adjoint trace form on simple coroots directly.
//!
//! The two must agree field for field.

mod group_type;
mod killing;
mod realization;

pub use group_type::{GroupType, Series};
pub use killing::{killing_oracle, ORACLE_MAX_RANK};
pub use realization::{coroot, dot, reflect, ExactField, Realization};

use crate::error::{Result, WzError};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Exact rational used for all root-system constants.
pub type Rational = Ratio<i64>;

/// Root-system record for a simple type.
///
/// `cs_constant_times_pi` stores `pi * c` where `c = -|beta|^2 / (48 pi)` is the coefficient of
/// the normalized invariant 3-form, so the value is the exact rational `-|beta|^2 / 48`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupData {
    pub group: GroupType,
    pub cartan: Vec<Vec<i64>>,
    pub s_matrix: Vec<Vec<i64>>,
    /// `B(coroot_i, coroot_j) / B(coroot_beta, coroot_beta)`.
    #[serde(with = "rational_json::matrix")]
    pub coroot_gram_ratio: Vec<Vec<Rational>>,
    /// Squared length of the highest root in the Killing-dual normalization.
    #[serde(with = "rational_json::scalar")]
    pub beta_norm_sq: Rational,
    #[serde(with = "rational_json::scalar")]
    pub cs_constant_times_pi: Rational,
    pub dual_coxeter: i64,
}

impl GroupData {
    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// `B(coroot_beta, coroot_beta) = -4 / |beta|^2`, exactly.
    pub fn killing_beta_coroot(&self) -> Rational {
        Rational::from(-4) / self.beta_norm_sq
    }

    /// Exact Killing form on simple coroots, `B(coroot_i, coroot_j)`.
    pub fn killing_coroot_gram(&self) -> Vec<Vec<Rational>> {
        let scale = self.killing_beta_coroot();
        self.coroot_gram_ratio
            .iter()
            .map(|row| row.iter().map(|r| *r * scale).collect())
            .collect()
    }

    /// Coefficient `c` of the normalized 3-form as a float.
    pub fn cs_constant(&self) -> f64 {
        ratio_to_f64(self.cs_constant_times_pi) / std::f64::consts::PI
    }
}

pub(crate) fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub(crate) fn s_matrix_from(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    (0..n)
        .map(|i| (0..n).map(|j| cartan[i][j].min(cartan[j][i])).collect())
        .collect()
}

/// Builds the exact root-system constants from the standard Euclidean realization.
pub fn build_group(gt: GroupType) -> Result<GroupData> {
    let r = Realization::<Rational>::standard(gt);
    let n = r.rank();

    let mut cartan = vec![vec![0i64; n]; n];
    for (i, row) in cartan.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let c = r.cartan_entry(i, j);
            if !c.is_integer() {
                return Err(WzError::InvalidGroup(format!("{gt}: non-integral Cartan entry {c}")));
            }
            *entry = c.to_integer();
        }
    }

    let roots = r.roots();
    let beta = r.highest_root(&roots);
    // sum_alpha (alpha, x)(alpha, y) = kappa (x, y) on the span of the roots
    let total: Rational = roots.iter().map(|a| dot(a, a)).sum();
    let kappa = total / Rational::from(n as i64);
    let beta_norm_sq = dot(&beta, &beta) / kappa;

    let dual = Rational::from(1) / beta_norm_sq;
    if !dual.is_integer() {
        return Err(WzError::InvalidGroup(format!("{gt}: 1/|beta|^2 = {dual} not an integer")));
    }

    let beta_check = coroot(&beta);
    let beta_check_sq = dot(&beta_check, &beta_check);
    let coroots: Vec<_> = r.simple_roots.iter().map(|a| coroot(a)).collect();
    let coroot_gram_ratio = coroots
        .iter()
        .map(|ci| coroots.iter().map(|cj| dot(ci, cj) / beta_check_sq).collect())
        .collect();

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

/// JSON encoding of rationals as `{"num": .., "den": ..}`.
pub mod rational_json {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: i64,
        den: i64,
    }

    impl From<&Rational> for Repr {
        fn from(r: &Rational) -> Self {
            Repr { num: *r.numer(), den: *r.denom() }
        }
    }

    fn checked(repr: Repr) -> Result<Rational, String> {
        if repr.den == 0 {
            Err("zero denominator".into())
        } else {
            Ok(Rational::new(repr.num, repr.den))
        }
    }

    pub mod scalar {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
            Repr::from(r).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
            checked(Repr::deserialize(d)?).map_err(serde::de::Error::custom)
        }
    }

    pub mod matrix {
        use super::*;

        pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let reprs: Vec<Vec<Repr>> = m.iter().map(|row| row.iter().map(Repr::from).collect()).collect();
            reprs.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
            let reprs: Vec<Vec<Repr>> = Vec::deserialize(d)?;
            reprs
                .into_iter()
                .map(|row| row.into_iter().map(checked).collect::<Result<Vec<_>, _>>())
                .collect::<Result<_, _>>()
                .map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str) -> GroupData {
        build_group(name.parse().unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn a1_constants() {
        let g = group("A1");
        assert_eq!(g.cartan, vec![vec![2]]);
        assert_eq!(g.s_matrix, vec![vec![2]]);
        assert_eq!(g.beta_norm_sq, q(1, 2));
        assert_eq!(g.cs_constant_times_pi, q(-1, 96));
        assert_eq!(g.killing_beta_coroot(), Rational::from(-8));
        assert!((g.cs_constant() + 1.0 / (96.0 * std::f64::consts::PI)).abs() < 1e-18);
    }

    #[test]
    fn a2_and_g2_cartan() {
        let a2 = group("A2");
        assert_eq!(a2.cartan, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(a2.s_matrix, a2.cartan);
        assert_eq!(a2.beta_norm_sq, q(1, 3));
        let g2 = group("G2");
        assert_eq!(g2.cartan, vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(g2.s_matrix, vec![vec![2, -3], vec![-3, 2]]);
        assert_eq!(g2.dual_coxeter, 4);
    }

    #[test]
    fn dual_coxeter_table() {
        // independent table lookup
        let expect = |gt: GroupType| -> i64 {
            let n = gt.rank() as i64;
            match gt.series() {
                Series::A => n + 1,
                Series::B => 2 * n - 1,
                Series::C => n + 1,
                Series::D => 2 * n - 2,
                Series::E => [12, 18, 30][(n - 6) as usize],
                Series::F => 9,
                Series::G => 4,
            }
        };
        for gt in GroupType::all_up_to_rank(12) {
            assert_eq!(build_group(gt).unwrap().dual_coxeter, expect(gt), "{gt}");
        }
    }

    #[test]
    fn invariants_hold_for_all_types() {
        for gt in GroupType::all_up_to_rank(10) {
            let g = build_group(gt).unwrap();
            let n = g.rank();
            for i in 0..n {
                assert_eq!(g.cartan[i][i], 2);
                for j in 0..n {
                    if i != j {
                        assert!(g.cartan[i][j] <= 0);
                        assert_eq!(g.cartan[i][j] == 0, g.cartan[j][i] == 0);
                    }
                    assert_eq!(g.s_matrix[i][j], g.s_matrix[j][i]);
                    let long_i = lengths_equal_beta(&g, i);
                    let long_j = lengths_equal_beta(&g, j);
                    if i != j && (long_i || long_j) {
                        assert_eq!(g.coroot_gram_ratio[i][j], q(g.s_matrix[i][j], 2), "{gt} ({i},{j})");
                    }
                    // the doubled ratio is always an integer, so 2 pi * ratio lands in {0, pi}
                    assert!((g.coroot_gram_ratio[i][j] * Rational::from(2)).is_integer());
                    // unequal lengths: S carries the length ratio; otherwise S = C
                    if g.cartan[i][j] != g.cartan[j][i] {
                        assert!(g.s_matrix[i][j] <= -2);
                    } else {
                        assert_eq!(g.s_matrix[i][j], g.cartan[i][j]);
                    }
                }
                assert_eq!(g.s_matrix[i][i] % 2, 0);
            }
            assert_eq!(g.beta_norm_sq * Rational::from(g.dual_coxeter), Rational::from(1));
        }
    }

    /// Whether simple root `i` is long, read off the diagonal of the coroot ratio.
    fn lengths_equal_beta(g: &GroupData, i: usize) -> bool {
        g.coroot_gram_ratio[i][i] == Rational::from(1)
    }

    #[test]
    fn half_s_matrix_exact_for_non_c_f_types() {
        for gt in GroupType::all_up_to_rank(8) {
            if matches!(gt.series(), Series::C | Series::F) {
                continue;
            }
            let g = build_group(gt).unwrap();
            for i in 0..g.rank() {
                for j in 0..g.rank() {
                    if i != j {
                        assert_eq!(g.coroot_gram_ratio[i][j], q(g.s_matrix[i][j], 2), "{gt}");
                    }
                }
            }
        }
    }

    #[test]
    fn short_short_bonds_break_half_s_rule() {
        // C3: alpha_1, alpha_2 short and bonded; F4: alpha_3, alpha_4 short and bonded.
        let c3 = group("C3");
        assert_eq!(c3.s_matrix[0][1], -1);
        assert_eq!(c3.coroot_gram_ratio[0][1], Rational::from(-1));
        let f4 = group("F4");
        assert_eq!(f4.s_matrix[2][3], -1);
        assert_eq!(f4.coroot_gram_ratio[2][3], Rational::from(-1));
    }

    #[test]
    fn oracle_agrees_with_build() {
        for gt in GroupType::all_up_to_rank(ORACLE_MAX_RANK) {
            assert_eq!(build_group(gt).unwrap(), killing_oracle(gt).unwrap(), "{gt}");
        }
    }

    #[test]
    fn json_uses_num_den() {
        let g = group("A1");
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v["group"], "A1");
        assert_eq!(v["beta_norm_sq"], serde_json::json!({"num": 1, "den": 2}));
        assert_eq!(v["cs_constant_times_pi"], serde_json::json!({"num": -1, "den": 96}));
        let back: GroupData = serde_json::from_value(v).unwrap();
        assert_eq!(back, g);
    }
}
