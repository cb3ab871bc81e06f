mod common;

use common::*;
use epr2::entanglement::{concurrence, r_spectrum, spin_flip, wootters_decomposition};
use epr2::linalg::kron;
use epr2::states::{werner, DensityMatrix};
use proptest::prelude::*;

fn entangled_and_separable(seed: u64, n_ent: usize, n_sep: usize) -> Vec<DensityMatrix> {
    let mut r = rng(seed);
    let (mut ent, mut sep) = (vec![], vec![]);
    while ent.len() < n_ent || sep.len() < n_sep {
        let rho = random_density(&mut r);
        if concurrence(&rho) > 0.0 {
            if ent.len() < n_ent {
                ent.push(rho);
            }
        } else if sep.len() < n_sep {
            sep.push(rho);
        }
    }
    ent.extend(sep);
    ent
}

#[test]
fn werner_line() {
    for i in 0..=100 {
        let x = i as f64 / 100.0;
        let c = concurrence(&werner(x).unwrap());
        assert!((c - ((3.0 * x - 1.0) / 2.0).max(0.0)).abs() < 1e-10, "x={x}");
    }
}

#[test]
fn wootters_on_random_states() {
    for rho in entangled_and_separable(21, 150, 50) {
        let d = wootters_decomposition(&rho).unwrap();
        let c = concurrence(&rho);
        assert!(d.reconstruct().max_diff(rho.matrix()) < 1e-9);
        assert!((d.average_concurrence() - c).abs() < 1e-8, "{} vs {c}", d.average_concurrence());
        let w: f64 = d.branches.iter().map(|b| b.0).sum();
        assert!((w - 1.0).abs() < 1e-10);
    }
}

#[test]
fn wootters_on_low_rank_states() {
    let mut r = rng(22);
    for k in 0..60 {
        // rank 1..3 mixtures of random pure states, some of them product
        let rank = 1 + k % 3;
        let mut m = epr2::linalg::Mat4::zeros();
        for _ in 0..rank {
            let psi = if k % 2 == 0 {
                random_pure(&mut r)
            } else {
                let a = random_su2(&mut r).column(0);
                let b = random_su2(&mut r).column(0);
                epr2::states::PureState(epr2::linalg::kron_vec(&a, &b))
            };
            m = m + psi.projector().matrix().scale_re(1.0 / rank as f64);
        }
        let rho = DensityMatrix::new(m).unwrap();
        let d = wootters_decomposition(&rho).unwrap();
        assert!(d.reconstruct().max_diff(rho.matrix()) < 1e-9);
        assert!((d.average_concurrence() - concurrence(&rho)).abs() < 1e-8, "k={k} avg={} c={} n={} sp={:?}", d.average_concurrence(), concurrence(&rho), d.branches.len(), r_spectrum(&rho).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn concurrence_range_and_lu_invariance(rho in arb_density(), ua in arb_su2(), ub in arb_su2()) {
        let c = concurrence(&rho);
        prop_assert!((0.0..=1.0).contains(&c));
        let c2 = concurrence(&rho.conjugate_local(&ua, &ub));
        prop_assert!((c - c2).abs() < 1e-9, "{} vs {}", c, c2);
    }

    #[test]
    fn r_spectrum_sum(rho in arb_density()) {
        let sp = r_spectrum(&rho).unwrap();
        let tr = (*rho.matrix() * *spin_flip(&rho).matrix()).trace().re;
        prop_assert!((sp.0.iter().sum::<f64>() - tr).abs() < 1e-10);
    }
}

#[test]
fn local_conjugation_matches_kron() {
    let mut r = rng(23);
    let rho = random_density(&mut r);
    let (ua, ub) = (random_su2(&mut r), random_su2(&mut r));
    let u = kron(&ua, &ub);
    let direct = u * *rho.matrix() * u.adjoint();
    assert!(rho.conjugate_local(&ua, &ub).matrix().max_diff(&direct) < 1e-14);
}
