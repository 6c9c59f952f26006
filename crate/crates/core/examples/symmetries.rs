//! G(t, x+2t) = exp(i(x+t)) G(t, x) and G(t, x) = G(t, −x), checked on
//! Fourier coefficients at random times.
//!
//!     cargo run --example symmetries

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zoll::circle::{check_reflection_symmetry, check_translation_symmetry};

pub fn run(samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut translation, mut reflection) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let t = rng.random_range(-100.0..100.0);
        translation = translation.max(check_translation_symmetry(t, 128).expect("K >= 2"));
        reflection = reflection.max(check_reflection_symmetry(t, 128).expect("K >= 1"));
    }
    (translation, reflection)
}

fn main() {
    let (translation, reflection) = run(100, 1);
    println!("100 random t: translation defect {translation:.2e}, reflection defect {reflection:.2e}");
}
