mod common;

use common::*;
use epr2::entanglement::concurrence_pure;
use epr2::linalg::{kron, Mat4};
use epr2::states::{
    bell_diag, generalized_werner, pure_theta, schmidt_decompose, werner, BdParams, DensityMatrix,
};
use proptest::prelude::*;

#[test]
fn schmidt_round_trip_haar() {
    let mut r = rng(11);
    for _ in 0..1000 {
        let psi = random_pure(&mut r);
        let f = schmidt_decompose(&psi);
        assert!(f.ua.unitarity_error() < 1e-10 && f.ub.unitarity_error() < 1e-10);
        assert!(psi.fidelity(&f.state()) >= 1.0 - 1e-10);
        assert!((f.s() - concurrence_pure(&psi)).abs() < 1e-10);
        assert!(f.theta >= 0.0 && f.theta <= std::f64::consts::FRAC_PI_4 + 1e-12);
    }
}

#[test]
fn schmidt_of_local_rotations() {
    let mut r = rng(12);
    for &theta in &[0.0, 1e-9, 0.2, std::f64::consts::FRAC_PI_4] {
        let (ua, ub) = (random_su2(&mut r), random_su2(&mut r));
        let u = kron(&ua, &ub);
        let psi = epr2::states::PureState(u.apply(pure_theta(theta).unwrap().amplitudes()));
        let f = schmidt_decompose(&psi);
        assert!((f.theta - theta).abs() < 1e-9, "{theta} {}", f.theta);
        assert!(psi.fidelity(&f.state()) >= 1.0 - 1e-10);
    }
}

#[test]
fn gen_werner_at_quarter_pi_is_werner() {
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        let a = generalized_werner(x, std::f64::consts::FRAC_PI_4).unwrap();
        let b = werner(x).unwrap();
        assert!(a.matrix().max_diff(b.matrix()) < 1e-14);
    }
}

#[test]
fn density_json_round_trip() {
    let rho = random_density(&mut rng(13));
    let back = DensityMatrix::from_json_str(&rho.to_json_string()).unwrap();
    assert_eq!(rho, back);
    let v: serde_json::Value = serde_json::from_str(&rho.to_json_string()).unwrap();
    assert_eq!(v["rho"].as_array().unwrap().len(), 4);
    assert_eq!(v["rho"][0][0].as_array().unwrap().len(), 2);
}

#[test]
fn rejects_invalid_matrices() {
    let mut m = Mat4::identity().scale_re(0.25);
    m.0[0][1].re = 0.1;
    assert!(DensityMatrix::new(m).is_err());
    let m = Mat4::from_real_diag([0.5, 0.5, 0.5, -0.5]);
    assert!(DensityMatrix::new(m).is_err());
    let m = Mat4::from_real_diag([0.5, 0.5, 0.5, 0.5]);
    assert!(DensityMatrix::new(m).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn constructors_are_valid(x in 0.0f64..=1.0, theta in 0.0f64..=std::f64::consts::FRAC_PI_4,
                              w in prop::array::uniform5(0.0f64..1.0)) {
        prop_assert!(werner(x).is_ok());
        prop_assert!(generalized_werner(x, theta).is_ok());
        let t: f64 = w.iter().sum();
        let p = BdParams { x: w[0] / t, y: w[1] / t, a: w[2] / t, b: w[3] / t, gamma: w[4] / t };
        let rho = bell_diag(&p).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range(x in 1.0001f64..3.0) {
        prop_assert!(werner(x).is_err());
        prop_assert!(werner(-x).is_err());
        prop_assert!(pure_theta(x).is_err());
    }
}
