use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::correlations::Setting;

/// ChaCha20 keyed by `seed`, on stream `index`. Independent streams let every
/// sample be generated in isolation, so parallel and serial runs agree.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point on the unit sphere from three standard normals.
pub fn random_setting<R: Rng + ?Sized>(rng: &mut R) -> Setting {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if let Ok(s) = Setting::from_direction(v) {
            return s;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GwSample {
    pub x: f64,
    pub theta: f64,
    pub a: Setting,
    pub b: Setting,
}

/// `(x, θ)` uniform on `[0, 1] × [0, π/4]` conditioned on entanglement
/// (`(1 + 2 sin 2θ)x > 1`), with independent uniform settings.
pub fn sample_entangled_gw(seed: u64, count: usize) -> Vec<GwSample> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let (x, theta) = loop {
                let x: f64 = rng.random();
                let theta = FRAC_PI_4 * rng.random::<f64>();
                if (1.0 + 2.0 * (2.0 * theta).sin()) * x > 1.0 {
                    break (x, theta);
                }
            };
            let a = random_setting(&mut rng);
            let b = random_setting(&mut rng);
            GwSample { x, theta, a, b }
        })
        .collect()
}
