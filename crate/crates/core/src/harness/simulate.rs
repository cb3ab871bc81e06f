//! Monte-Carlo sampling of a discrete LHV model.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;

use crate::correlations::{JointTable, Setting};
use crate::localmodels::LhvModel;

use super::sampling::stream_rng;

const CHUNK: usize = 1 << 16;

/// Empirical outcome frequencies: per run, draw a branch with probability
/// `μᵢ`, then `α = +1` with probability `pᵢ(a)` and `β = +1` with probability
/// `qᵢ(b)`, independently.
pub fn simulate_lhv(model: &LhvModel, a: &Setting, b: &Setting, n: usize, seed: u64) -> JointTable {
    let weights: Vec<f64> = model.branches.iter().map(|br| br.mu).collect();
    let chooser = WeightedIndex::new(&weights).expect("model weights are a distribution");
    let pa: Vec<f64> = model.branches.iter().map(|br| br.pa.eval(a)).collect();
    let qb: Vec<f64> = model.branches.iter().map(|br| br.qb.eval(b)).collect();

    let chunks = n.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            let mut counts = [0u64; 4];
            for _ in 0..len {
                let i = chooser.sample(&mut rng);
                let alpha = rng.random::<f64>() < pa[i];
                let beta = rng.random::<f64>() < qb[i];
                counts[2 * usize::from(!alpha) + usize::from(!beta)] += 1;
            }
            counts
        })
        .reduce(|| [0; 4], |x, y| std::array::from_fn(|k| x[k] + y[k]));

    let total = n.max(1) as f64;
    JointTable {
        pp: counts[0] as f64 / total,
        pm: counts[1] as f64 / total,
        mp: counts[2] as f64 / total,
        mm: counts[3] as f64 / total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localmodels::{classical_zz_model, werner_third_model};

    fn s(v: [f64; 3]) -> Setting {
        Setting::new(v).unwrap()
    }

    fn within_sigmas(freq: f64, p: f64, n: usize, k: f64) -> bool {
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        (freq - p).abs() <= k * sigma.max(1.0 / n as f64)
    }

    #[test]
    fn uniform_cells() {
        let n = 1_000_000;
        let t = simulate_lhv(&LhvModel::uniform(), &s([1.0, 0.0, 0.0]), &s([0.0, 1.0, 0.0]), n, 1);
        for c in t.cells() {
            assert!((c - 0.25).abs() < 0.0013, "{c}");
        }
    }

    #[test]
    fn classical_correlation() {
        let n = 1_000_000;
        let z = s([0.0, 0.0, 1.0]);
        let t = simulate_lhv(&classical_zz_model(), &z, &z, n, 2);
        assert!(within_sigmas(t.pp, 0.5, n, 3.0));
        assert!(within_sigmas(t.mm, 0.5, n, 3.0));
        assert_eq!(t.pm, 0.0);
        assert_eq!(t.mp, 0.0);
    }

    #[test]
    fn werner_third_matches_eval() {
        let n = 1_000_000;
        let (a, b) = (s([0.6, 0.0, 0.8]), s([0.0, -0.6, 0.8]));
        let m = werner_third_model();
        let t = simulate_lhv(&m, &a, &b, n, 3);
        let expect = JointTable::from_fn(&a, &b, |a, b| m.eval(a, b));
        for (f, p) in t.cells().iter().zip(expect.cells()) {
            assert!(within_sigmas(*f, p, n, 3.0), "{f} vs {p}");
        }
    }

    #[test]
    fn reproducible() {
        let z = s([0.0, 0.0, 1.0]);
        let m = werner_third_model();
        assert_eq!(simulate_lhv(&m, &z, &z, 200_000, 4), simulate_lhv(&m, &z, &z, 200_000, 4));
    }
}
