//! Seeded random inputs.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coefficients::{GaussianRational, TrigPoly};
use crate::psido::OneForm;

/// Shape of generated one-forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusConfig {
    /// Bound on `|l|_∞` for the frequencies used.
    pub max_freq: i32,
    /// Number of `(c e^{ilx} − c̄ e^{−ilx})` pairs per component.
    pub modes: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { max_freq: 2, modes: 2 }
    }
}

fn rng_for(seed: u64, d: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((d as u64) << 32) | index as u64);
    rng
}

fn small_rational(rng: &mut ChaCha8Rng) -> (i64, i64) {
    (rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

fn small_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let c = GaussianRational::complex(small_rational(rng), small_rational(rng));
        if !c.is_zero() {
            return c;
        }
    }
}

fn frequency(rng: &mut ChaCha8Rng, d: usize, max_freq: i32) -> Vec<i32> {
    (0..d).map(|_| rng.gen_range(-max_freq..=max_freq)).collect()
}

/// A purely imaginary-valued trigonometric polynomial.
fn imaginary_component(rng: &mut ChaCha8Rng, d: usize, cfg: CorpusConfig) -> TrigPoly {
    let mut f = TrigPoly::zero(d);
    for _ in 0..cfg.modes {
        let l = frequency(rng, d, cfg.max_freq);
        let c = small_gaussian(rng);
        if l.iter().all(|&x| x == 0) {
            let im = GaussianRational::i() * GaussianRational::from_rational(c.im().clone());
            f.add_assign(&TrigPoly::constant(d, im));
        } else {
            let neg: Vec<i32> = l.iter().map(|x| -x).collect();
            f.add_assign(&TrigPoly::mode(d, l, c.clone()));
            f.add_assign(&TrigPoly::mode(d, neg, -c.conj()));
        }
    }
    f
}

/// Selfadjoint one-form number `index` of the stream for `(seed, d)`.
pub fn random_one_form(d: usize, seed: u64, index: usize, cfg: CorpusConfig) -> OneForm {
    let mut rng = rng_for(seed, d, index);
    let a = (0..d).map(|_| imaginary_component(&mut rng, d, cfg)).collect();
    OneForm::new(d, a).expect("component count matches dimension")
}

/// Arbitrary complex function with `modes` random Fourier modes.
pub fn random_function(d: usize, seed: u64, index: usize, cfg: CorpusConfig) -> TrigPoly {
    let mut rng = rng_for(seed ^ 0x5eed_f00d, d, index);
    let mut f = TrigPoly::zero(d);
    for _ in 0..cfg.modes {
        let l = frequency(&mut rng, d, cfg.max_freq);
        f.add_assign(&TrigPoly::mode(d, l, small_gaussian(&mut rng)));
    }
    f
}

/// The first `count` one-forms of the `(seed, d)` stream.
pub fn one_form_corpus(d: usize, count: usize, seed: u64, cfg: CorpusConfig) -> Vec<OneForm> {
    (0..count).map(|i| random_one_form(d, seed, i, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_forms_are_selfadjoint() {
        for d in 2..=4 {
            for a in one_form_corpus(d, 10, 3, CorpusConfig::default()) {
                assert!(a.is_selfadjoint());
                assert!(a.components().iter().all(|f| f.max_abs_freq() <= 2));
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let cfg = CorpusConfig::default();
        assert_eq!(random_one_form(3, 11, 4, cfg), random_one_form(3, 11, 4, cfg));
        assert_ne!(random_one_form(3, 11, 4, cfg), random_one_form(3, 11, 5, cfg));
        assert_ne!(random_one_form(3, 11, 4, cfg), random_one_form(3, 12, 4, cfg));
    }
}
