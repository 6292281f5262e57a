//! Monte Carlo volume fractions of regions of S^3 bounded by the equator and the Clifford torus.

use crate::closedforms::AngleClass;
use crate::error::{Result, WzError};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const MIN_SAMPLES: u64 = 10_000;
pub const SHARD_SIZE: u64 = 65_536;
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha), stream = shard index";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    /// `Re z_1 = 0`
    Equator,
    /// `|z_1| = |z_2|`
    Clifford,
}

impl Surface {
    /// Whether a point of S^3 lies in the chosen half.
    pub fn inside(self, p: [f64; 4]) -> bool {
        match self {
            Surface::Equator => p[0] > 0.0,
            Surface::Clifford => p[0] * p[0] + p[1] * p[1] > p[2] * p[2] + p[3] * p[3],
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::Equator => "equator",
            Surface::Clifford => "clifford",
        })
    }
}

impl FromStr for Surface {
    type Err = WzError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "equator" => Ok(Surface::Equator),
            "clifford" => Ok(Surface::Clifford),
            _ => Err(WzError::Parse(format!("unknown surface `{s}` (expected equator or clifford)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct S3Sampler {
    pub seed: u64,
    pub n: u64,
}

impl S3Sampler {
    pub fn new(seed: u64, n: u64) -> Result<Self> {
        if n < MIN_SAMPLES {
            return Err(WzError::SamplerTooSmall { min: MIN_SAMPLES, got: n });
        }
        Ok(Self { seed, n })
    }

    fn shard_hits(&self, shard: u64, surface: Surface) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(shard);
        let start = shard * SHARD_SIZE;
        let count = SHARD_SIZE.min(self.n - start);
        let mut hits = 0;
        for _ in 0..count {
            let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if surface.inside(g.map(|x| x / r)) {
                hits += 1;
            }
        }
        hits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub hits: u64,
    pub samples: u64,
    pub fraction: f64,
    /// binomial standard error `sqrt(p (1 - p) / n)`
    pub stderr: f64,
}

/// Hit fraction of uniform points (normalized 4D Gaussians) on one side of the surface.
/// Shards are independent streams, so the count does not depend on the thread pool.
pub fn volume_fraction(surface: Surface, s: &S3Sampler) -> VolumeEstimate {
    let shards = s.n.div_ceil(SHARD_SIZE);
    let hits: u64 = (0..shards).into_par_iter().map(|k| s.shard_hits(k, surface)).sum();
    let fraction = hits as f64 / s.n as f64;
    let stderr = (fraction * (1.0 - fraction) / s.n as f64).sqrt();
    VolumeEstimate { hits, samples: s.n, fraction, stderr }
}

/// `Gamma = 2 pi vol(M) / vol(S^3)`.
pub fn gamma_from_fraction<T: Real>(fraction: T, tol: T) -> Result<AngleClass<T>> {
    if !(fraction >= T::zero() && fraction <= T::one()) {
        return Err(WzError::FractionOutOfRange(fraction.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(AngleClass::new(T::two_pi() * fraction, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn halves_of_the_sphere() {
        for surface in [Surface::Equator, Surface::Clifford] {
            let v = volume_fraction(surface, &S3Sampler::new(7, 200_000).unwrap());
            assert!((v.fraction - 0.5).abs() < 3.0 * v.stderr, "{surface}: {v:?}");
        }
    }

    #[test]
    fn stderr_scales_as_inverse_root() {
        let a = volume_fraction(Surface::Clifford, &S3Sampler::new(1, 50_000).unwrap());
        let b = volume_fraction(Surface::Clifford, &S3Sampler::new(1, 200_000).unwrap());
        assert!((a.stderr / b.stderr - 2.0).abs() < 0.05);
    }

    #[test]
    fn reproducible_across_thread_pools() {
        let s = S3Sampler::new(42, 300_000).unwrap();
        let a = volume_fraction(Surface::Equator, &s);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| volume_fraction(Surface::Equator, &s));
        assert_eq!(a, b);
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_from_fraction(0.5f64, 1e-9).unwrap();
        assert_eq!(g.pi_multiple, Some(1));
        assert_eq!(gamma_from_fraction(0.0f64, 1e-9).unwrap().raw, 0.0);
        assert!((gamma_from_fraction(0.25f64, 1e-9).unwrap().raw - PI / 2.0).abs() < 1e-15);
        assert!(gamma_from_fraction(1.5f64, 1e-9).is_err());
        assert!(gamma_from_fraction(f64::NAN, 1e-9).is_err());
    }

    #[test]
    fn sampler_minimum() {
        assert!(matches!(S3Sampler::new(0, 9_999), Err(WzError::SamplerTooSmall { .. })));
        assert_eq!("Clifford".parse::<Surface>().unwrap(), Surface::Clifford);
        assert!("torus".parse::<Surface>().is_err());
    }
}
