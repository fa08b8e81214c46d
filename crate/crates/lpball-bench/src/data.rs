//! Seeded synthetic instances.
//!
//! Every trial draws from its own ChaCha20 stream: the generator is seeded
//! from the experiment seed mixed with a tag naming the instance family and
//! its dimensions, and the trial index selects the stream. Trials therefore
//! reproduce independently of execution order.

use ndarray::{Array1, Array2};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

/// Written into every CSV header.
pub const PRNG_ID: &str =
    "ChaCha20Rng (rand_chacha 0.9); key = seed_from_u64(seed ^ fnv1a(tag)); stream = trial";

/// Noise variance of the measurements.
pub const NOISE_VARIANCE: f64 = 1e-4;

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn trial_rng(seed: u64, tag: &str, trial: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ fnv1a(tag));
    rng.set_stream(trial as u64);
    rng
}

/// `y ~ N(0, I_n)` for the projection study.
pub fn gen_projection_instance(n: usize, seed: u64, trial: usize) -> Array1<f64> {
    let mut rng = trial_rng(seed, &format!("projection:n={n}"), trial);
    (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Sparse recovery instance `b = A x_hat + noise`.
#[derive(Debug, Clone)]
pub struct RecoveryInstance {
    pub a: Array2<f64>,
    pub b: Array1<f64>,
    pub x_hat: Array1<f64>,
}

/// `x_hat` has `s` entries equal to +-1 (equal odds) at uniformly chosen
/// positions, `A` is `m x n` standard Gaussian and the noise is
/// `N(0, 1e-4)`.
pub fn gen_recovery_instance(
    n: usize,
    m: usize,
    s: usize,
    seed: u64,
    trial: usize,
) -> RecoveryInstance {
    assert!(s >= 1 && s <= n && m >= 1, "need 0 < s <= n and m >= 1");
    let mut rng = trial_rng(seed, &format!("recovery:n={n}:m={m}:s={s}"), trial);
    let mut x_hat = Array1::zeros(n);
    for i in index::sample(&mut rng, n, s) {
        x_hat[i] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    }
    let a = Array2::from_shape_simple_fn((m, n), || rng.sample::<f64, _>(StandardNormal));
    let noise = Normal::new(0.0, NOISE_VARIANCE.sqrt()).expect("valid normal");
    let b = a.dot(&x_hat) + &Array1::from_shape_simple_fn(m, || noise.sample(&mut rng));
    RecoveryInstance { a, b, x_hat }
}
