//! Exhaustive and seeded random streams of interpretations.

use super::{full_mask, Compact, Interpretation, OracleError, Signature, MAX_DOMAIN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default ceiling on exhaustive stream length.
pub const DEFAULT_BUDGET: u128 = 1 << 28;

/// `2^(|C|·d) · 2^(|R|·d²) · d^|ind|`, saturating.
pub fn interpretation_count(sig: &Signature, d: usize) -> u128 {
    let bits = (sig.concepts.len() * d + sig.roles.len() * d * d) as u32;
    let base = 1u128.checked_shl(bits).unwrap_or(u128::MAX);
    let inds = (d as u128)
        .checked_pow(sig.individuals.len() as u32)
        .unwrap_or(u128::MAX);
    base.saturating_mul(inds)
}

/// Odometer over every interpretation of a signature at a fixed domain size.
///
/// [`Enumerator::advance`] hands out a borrowed compact interpretation
/// without allocating; the [`Iterator`] impl materializes each one.
#[derive(Debug, Clone)]
pub struct Enumerator {
    sig: Signature,
    current: Compact,
    started: bool,
    done: bool,
}

impl Enumerator {
    pub fn new(sig: &Signature, d: usize, budget: u128) -> Result<Self, OracleError> {
        if d == 0 || d > MAX_DOMAIN {
            return Err(OracleError::DomainSize(d));
        }
        let needed = interpretation_count(sig, d);
        if needed > budget {
            return Err(OracleError::EnumerationBudget { needed, budget });
        }
        Ok(Enumerator {
            sig: sig.clone(),
            current: Compact::empty(sig, d),
            started: false,
            done: false,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Next interpretation in the stream, or `None` when exhausted.
    pub fn advance(&mut self) -> Option<&Compact> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let d = self.current.d;
        let full = full_mask(d);
        for k in 0..self.current.inds.len() {
            if self.current.inds[k] + 1 < d {
                self.current.inds[k] += 1;
                return Some(&self.current);
            }
            self.current.inds[k] = 0;
        }
        for m in self.current.roles.iter_mut() {
            if *m < full {
                *m += 1;
                return Some(&self.current);
            }
            *m = 0;
        }
        for m in self.current.concepts.iter_mut() {
            if *m < full {
                *m += 1;
                return Some(&self.current);
            }
            *m = 0;
        }
        self.done = true;
        None
    }
}

impl Iterator for Enumerator {
    type Item = Interpretation;

    fn next(&mut self) -> Option<Interpretation> {
        let sig = self.sig.clone();
        self.advance().map(|ci| Interpretation::from_compact(&sig, ci))
    }
}

/// Every interpretation of `sig` with exactly `d` elements, each once.
pub fn enumerate_interpretations(sig: &Signature, d: usize) -> Result<Enumerator, OracleError> {
    Enumerator::new(sig, d, DEFAULT_BUDGET)
}

/// Reproducible stream of uniformly random interpretations.
#[derive(Debug, Clone)]
pub struct RandomSampler {
    sig: Signature,
    d: usize,
    rng: ChaCha8Rng,
}

impl RandomSampler {
    pub fn new(sig: &Signature, d: usize, seed: u64) -> Result<Self, OracleError> {
        if d == 0 || d > MAX_DOMAIN {
            return Err(OracleError::DomainSize(d));
        }
        Ok(RandomSampler {
            sig: sig.clone(),
            d,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn sample_compact(&mut self) -> Compact {
        let full = full_mask(self.d);
        let mut ci = Compact::empty(&self.sig, self.d);
        for m in ci.concepts.iter_mut() {
            *m = self.rng.gen::<u64>() & full;
        }
        for m in ci.roles.iter_mut() {
            *m = self.rng.gen::<u64>() & full;
        }
        for i in ci.inds.iter_mut() {
            *i = self.rng.gen_range(0..self.d);
        }
        ci
    }
}

impl Iterator for RandomSampler {
    type Item = Interpretation;

    fn next(&mut self) -> Option<Interpretation> {
        let ci = self.sample_compact();
        Some(Interpretation::from_compact(&self.sig, &ci))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_concept_single_element() {
        let sig = Signature::new(["A"], Vec::<String>::new(), Vec::<String>::new());
        let all: Vec<Interpretation> = enumerate_interpretations(&sig, 1).unwrap().collect();
        assert_eq!(all.len(), 2);
        assert_ne!(all[0], all[1]);
    }

    #[test]
    fn one_concept_one_role_two_elements() {
        let sig = Signature::new(["A"], ["R"], Vec::<String>::new());
        let all: Vec<Interpretation> = enumerate_interpretations(&sig, 2).unwrap().collect();
        assert_eq!(all.len(), 64);
        let distinct: std::collections::BTreeSet<String> = all.iter().map(Interpretation::to_json).collect();
        assert_eq!(distinct.len(), 64);
    }

    #[test]
    fn individuals_multiply_the_count() {
        let sig = Signature::new(["A"], Vec::<String>::new(), ["a", "b"]);
        assert_eq!(enumerate_interpretations(&sig, 3).unwrap().count(), 8 * 9);
        assert_eq!(interpretation_count(&sig, 3), 72);
    }

    #[test]
    fn budget_is_enforced() {
        let sig = Signature::new(["A", "B"], ["R", "S"], Vec::<String>::new());
        assert!(matches!(
            Enumerator::new(&sig, 4, 1000),
            Err(OracleError::EnumerationBudget { .. })
        ));
        assert!(matches!(
            enumerate_interpretations(&sig, 0),
            Err(OracleError::DomainSize(0))
        ));
    }

    #[test]
    fn sampler_is_reproducible() {
        let sig = Signature::new(["A"], ["R"], ["a"]);
        let a: Vec<Interpretation> = RandomSampler::new(&sig, 5, 7).unwrap().take(20).collect();
        let b: Vec<Interpretation> = RandomSampler::new(&sig, 5, 7).unwrap().take(20).collect();
        let c: Vec<Interpretation> = RandomSampler::new(&sig, 5, 8).unwrap().take(20).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
