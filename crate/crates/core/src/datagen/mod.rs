//! Seeded generation of template instances (integer coordinates,
//! Pythagorean lengths), exact float instances and noisy instances.
//!
//! All randomness comes from ChaCha8 seeded with `GenerationConfig::seed`;
//! the algorithm name and parameters are written into each instance's
//! `generator` line.

mod float;
mod template;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::upgrade::{UpgradeError, MIN_SEGMENTS};

pub use float::{add_noise, gen_float_instance, GEN_PRECISION, STORED_DIGITS};
pub use template::gen_template_instance;

pub const RNG_NAME: &str = "chacha8";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatagenError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("gave up after {0} resamples")]
    GenerationExhausted(usize),
    #[error(transparent)]
    Upgrade(#[from] UpgradeError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationConfig {
    pub n: usize,
    pub seed: u64,
    /// Exclusive bound on the quadruple entries.
    pub quadruple_bound: u32,
    /// Exclusive bound on template coordinates.
    pub coordinate_bound: i64,
    /// Exclusive bound on template homography entries.
    pub h_bound: i64,
    pub cube_side: u32,
    /// Float coordinates are multiples of `1 / grid_denominator`.
    pub grid_denominator: u32,
    pub sigma: f64,
    pub max_resamples: usize,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            n: MIN_SEGMENTS,
            seed: 0,
            quadruple_bound: 50,
            coordinate_bound: 100,
            h_bound: 20,
            cube_side: 10,
            grid_denominator: 10,
            sigma: 0.0,
            max_resamples: 10_000,
        }
    }
}

impl GenerationConfig {
    pub fn new(n: usize, seed: u64) -> GenerationConfig {
        GenerationConfig {
            n,
            seed,
            ..GenerationConfig::default()
        }
    }

    /// Parses a flat `key = value` file; missing keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<GenerationConfig, DatagenError> {
        let c: GenerationConfig = toml::from_str(text).map_err(|e| DatagenError::InvalidConfig(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        let bad = |m: &str| Err(DatagenError::InvalidConfig(m.into()));
        if self.n < MIN_SEGMENTS {
            return bad("n must be at least 9");
        }
        if self.quadruple_bound < 4 || self.coordinate_bound < 2 || self.h_bound < 2 {
            return bad("bounds are too small");
        }
        if self.cube_side == 0 || self.grid_denominator == 0 {
            return bad("cube side and grid must be positive");
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be finite and non-negative");
        }
        Ok(())
    }

    pub(crate) fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// `a² + b² + c² = d²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PythagoreanQuadruple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// All primitive quadruples with `0 < a ≤ b ≤ c` and `d < bound`. Primitive
/// ones are pairwise not integer multiples of each other.
pub fn enumerate_quadruples(bound: u32) -> Vec<PythagoreanQuadruple> {
    let bound = bound as i64;
    let mut out = Vec::new();
    for a in 1..bound {
        for b in a..bound {
            for c in b..bound {
                let s = a * a + b * b + c * c;
                let d = s.isqrt();
                if d >= bound || d * d != s {
                    continue;
                }
                if num_integer::gcd(num_integer::gcd(a, b), num_integer::gcd(c, d)) == 1 {
                    out.push(PythagoreanQuadruple { a, b, c, d });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn smallest_bound_has_one_quadruple() {
        assert_eq!(enumerate_quadruples(4), vec![PythagoreanQuadruple { a: 1, b: 2, c: 2, d: 3 }]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let got: HashSet<_> = enumerate_quadruples(50).into_iter().collect();
        let mut want = HashSet::new();
        for a in 1i64..50 {
            for b in 1..50 {
                for c in 1..50 {
                    for d in 1..50 {
                        if a <= b && b <= c && a * a + b * b + c * c == d * d {
                            let g = (1..=a).rev().find(|g| a % g == 0 && b % g == 0 && c % g == 0 && d % g == 0);
                            if g == Some(1) {
                                want.insert(PythagoreanQuadruple { a, b, c, d });
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(got, want);
        assert!(got.len() >= 20);
        for q in &got {
            for r in &got {
                if q != r {
                    assert!(!(1..50).any(|s| q.a * s == r.a && q.b * s == r.b && q.c * s == r.c));
                }
            }
        }
    }

    #[test]
    fn config_parsing() {
        let c = GenerationConfig::from_toml("n = 12\nseed = 3\nsigma = 0.001\n").unwrap();
        assert_eq!((c.n, c.seed, c.sigma, c.quadruple_bound), (12, 3, 0.001, 50));
        assert!(GenerationConfig::from_toml("n = 8").is_err());
        assert!(GenerationConfig::from_toml("bogus = 1").is_err());
    }
}
