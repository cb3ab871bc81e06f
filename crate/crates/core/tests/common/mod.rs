#![allow(dead_code)]

use epr2::correlations::Setting;
use epr2::linalg::{CMat, Mat2, Mat4};
use epr2::states::{DensityMatrix, PureState};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn cnormal<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<const N: usize, R: Rng>(rng: &mut R) -> CMat<N> {
    CMat::from_fn(|_, _| cnormal(rng))
}

/// Hilbert–Schmidt random mixed state.
pub fn random_density<R: Rng>(rng: &mut R) -> DensityMatrix {
    density_from(&ginibre::<4, _>(rng))
}

pub fn density_from(g: &Mat4) -> DensityMatrix {
    let m = *g * g.adjoint();
    let t = m.trace().re;
    let m = m.scale_re(1.0 / t);
    // exact Hermitian symmetrization against rounding
    let m = (m + m.adjoint()).scale_re(0.5);
    DensityMatrix::new(m).expect("valid density matrix")
}

pub fn random_pure<R: Rng>(rng: &mut R) -> PureState {
    PureState::normalized(std::array::from_fn(|_| cnormal(rng))).unwrap()
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng>(rng: &mut R) -> Mat2 {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|v| v / n);
    CMat([
        [Complex64::new(a, b), Complex64::new(c, d)],
        [Complex64::new(-c, d), Complex64::new(a, -b)],
    ])
}

pub fn random_setting<R: Rng>(rng: &mut R) -> Setting {
    epr2::harness::sampling::random_setting(rng)
}

pub fn arb_setting() -> impl Strategy<Value = Setting> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-4)
        .prop_map(|v| Setting::from_direction(v).unwrap())
}

pub fn arb_mat<const N: usize>() -> impl Strategy<Value = CMat<N>> {
    prop::collection::vec(-1.0f64..1.0, 2 * N * N).prop_map(|v| {
        CMat::from_fn(|i, j| Complex64::new(v[2 * (i * N + j)], v[2 * (i * N + j) + 1]))
    })
}

pub fn arb_density() -> impl Strategy<Value = DensityMatrix> {
    arb_mat::<4>()
        .prop_filter("nonsingular", |g| g.max_abs() > 1e-3)
        .prop_map(|g| density_from(&g))
}

pub fn arb_su2() -> impl Strategy<Value = Mat2> {
    any::<u64>().prop_map(|seed| random_su2(&mut rng(seed)))
}
