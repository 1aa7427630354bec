//! Tri-state zero testing: symbolic proof first, sampled evidence second.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Env, ScalarExpr};

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x00C4_27A5_F0A6_E001;

/// Interval sampled for symbols without declared bounds. It stays clear of
/// zero and of the usual coordinate singularities (θ = 0, π/2 poles of tan).
pub const DEFAULT_INTERVAL: (f64, f64) = (0.2, 1.4);

/// Values whose magnitude exceeds this are taken as evidence of non-vanishing.
pub const NONZERO_THRESHOLD: f64 = 1e-8;

const ZERO_TEST_SAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    ProvenZero,
    ProvenNonZero,
    Unknown,
}

/// Deterministic sampler of symbol values.
#[derive(Clone, Debug)]
pub struct Sampler {
    seed: u64,
    bounds: BTreeMap<String, (f64, f64)>,
    fixed: BTreeMap<String, f64>,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler::new(DEFAULT_SEED)
    }
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            seed,
            bounds: BTreeMap::new(),
            fixed: BTreeMap::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Restrict a symbol to the open interval `(lo, hi)`.
    pub fn with_bounds(mut self, name: &str, lo: f64, hi: f64) -> Self {
        self.bounds.insert(name.to_string(), (lo, hi));
        self
    }

    /// Pin a symbol (typically a parameter) to one value.
    pub fn with_fixed(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_string(), value);
        self
    }

    /// `count` sample environments binding every name in `symbols`.
    pub fn points<'a, I>(&self, symbols: I, count: usize) -> Vec<Env<f64>>
    where
        I: IntoIterator<Item = &'a String>,
    {
        let mut names: Vec<&String> = symbols.into_iter().collect();
        names.sort();
        names.dedup();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..count)
            .map(|_| {
                let mut env = Env::new();
                for name in &names {
                    let value = match self.fixed.get(name.as_str()) {
                        Some(v) => *v,
                        None => {
                            let (lo, hi) = self
                                .bounds
                                .get(name.as_str())
                                .copied()
                                .unwrap_or(DEFAULT_INTERVAL);
                            let u: f64 = rng.gen();
                            // Keep away from the interval ends.
                            lo + (hi - lo) * (0.05 + 0.9 * u)
                        }
                    };
                    env.set(name, value);
                }
                env
            })
            .collect()
    }

    pub fn is_zero(&self, e: &ScalarExpr) -> ZeroTest {
        if e.is_structurally_zero() {
            return ZeroTest::ProvenZero;
        }
        let symbols = e.free_symbols();
        for env in self.points(&symbols, ZERO_TEST_SAMPLES) {
            if let Ok(v) = e.evaluate(&env) {
                if v.abs() > NONZERO_THRESHOLD {
                    return ZeroTest::ProvenNonZero;
                }
            }
        }
        ZeroTest::Unknown
    }
}

/// Zero test with the default sampler.
pub fn is_zero(e: &ScalarExpr) -> ZeroTest {
    Sampler::default().is_zero(e)
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Symbols};
    use super::*;

    fn p(s: &str) -> ScalarExpr {
        parse(s, &Symbols::any()).unwrap()
    }

    #[test]
    fn tri_state() {
        assert_eq!(
            is_zero(&p("sin(theta)^2 + cos(theta)^2 - 1")),
            ZeroTest::ProvenZero
        );
        assert_eq!(is_zero(&p("x1")), ZeroTest::ProvenNonZero);
        // sin(2x) = 2 sin x cos x is outside the rewrite list.
        assert_eq!(is_zero(&p("sin(2*x) - 2*sin(x)*cos(x)")), ZeroTest::Unknown);
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let names = vec!["a".to_string(), "b".to_string()];
        let s = Sampler::new(7)
            .with_bounds("b", -3.0, -2.0)
            .with_fixed("a", 0.5);
        let first = s.points(&names, 5);
        let second = s.points(&names, 5);
        for (x, y) in first.iter().zip(&second) {
            assert_eq!(x.get("b"), y.get("b"));
            assert_eq!(x.get("a"), Some(0.5));
            let b = x.get("b").unwrap();
            assert!(b > -3.0 && b < -2.0);
        }
    }
}
