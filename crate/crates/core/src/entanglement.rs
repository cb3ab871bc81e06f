//! Concurrence and optimal (concurrence-minimizing) pure-state ensembles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, inner, sigma_yy, Mat4, I};
use crate::states::{DensityMatrix, PureState};

/// Branches lighter than this are dropped from the ensemble.
const BRANCH_TOL: f64 = 1e-14;

/// Spectrum of `R = ρ ρ̃`, clamped at zero, descending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum4(pub [f64; 4]);

impl Spectrum4 {
    /// `max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}`
    pub fn concurrence(&self) -> f64 {
        let r = self.0.map(f64::sqrt);
        (r[0] - r[1] - r[2] - r[3]).max(0.0)
    }
}

/// Pure-state ensemble `ρ = Σ tᵢ |φᵢ⟩⟨φᵢ|` attaining the minimal average
/// concurrence.
#[derive(Clone, Debug)]
pub struct WoottersDecomposition {
    pub branches: Vec<(f64, PureState)>,
}

impl WoottersDecomposition {
    pub fn average_concurrence(&self) -> f64 {
        self.branches.iter().map(|(t, phi)| t * concurrence_pure(phi)).sum()
    }

    pub fn reconstruct(&self) -> Mat4 {
        self.branches
            .iter()
            .fold(Mat4::zeros(), |acc, (t, phi)| acc + Mat4::outer(&phi.0, &phi.0).scale_re(*t))
    }
}

/// `2|c₁c₄ − c₂c₃|`
pub fn concurrence_pure(psi: &PureState) -> f64 {
    let c = psi.0;
    2.0 * (c[0] * c[3] - c[1] * c[2]).norm()
}

/// `|ψ̃⟩ = (σ_y ⊗ σ_y)|ψ*⟩`
fn tilde(v: &[Complex64; 4]) -> [Complex64; 4] {
    sigma_yy().apply(&v.map(|z| z.conj()))
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`
pub fn spin_flip(rho: &DensityMatrix) -> DensityMatrix {
    let yy = sigma_yy();
    DensityMatrix::new(yy * rho.matrix().conj() * yy).expect("spin flip preserves validity")
}

/// Subnormalized eigenvectors `vᵢ = √λᵢ eᵢ` of `ρ` and the complex
/// symmetric matrix `τᵢⱼ = ⟨vᵢ|ṽⱼ⟩`. Rounding-level negative eigenvalues are
/// clamped to zero.
fn eigen_frame(rho: &DensityMatrix) -> Result<([[Complex64; 4]; 4], Mat4)> {
    let eig = linalg::eig_hermitian(rho.matrix())?;
    let v: [[Complex64; 4]; 4] =
        std::array::from_fn(|k| eig.vector(k).map(|z| z * eig.values[k].max(0.0).sqrt()));
    let tilde_v = v.map(|vi| tilde(&vi));
    let tau = Mat4::from_fn(|i, j| inner(&v[i], &tilde_v[j]));
    Ok((v, tau))
}

/// Eigenvalues of `ρ ρ̃`. These are the squared Takagi values of `τ`; going
/// through `τ` keeps `√λᵢ` accurate to rounding even when `λᵢ` is at the
/// noise floor, which `√ρ ρ̃ √ρ` does not.
pub fn r_spectrum(rho: &DensityMatrix) -> Result<Spectrum4> {
    let (_, tau) = eigen_frame(rho)?;
    let (_, sigma) = linalg::takagi(&tau)?;
    Ok(Spectrum4(sigma.map(|v| v * v)))
}

/// Concurrence of a mixed state.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    r_spectrum(rho)
        .expect("validated density matrices are Hermitian")
        .concurrence()
}

/// Optimal decomposition of `ρ` into pure states of equal concurrence `C(ρ)`
/// (or all of concurrence zero when `C(ρ) = 0`).
///
/// 1. Subnormalized eigenvectors `vᵢ = √λᵢ eᵢ` of `ρ`.
/// 2. Takagi factorization of `τᵢⱼ = ⟨vᵢ|ṽⱼ⟩ = U Σ Uᵀ` gives
///    `xᵢ = Σⱼ Uⱼᵢ vⱼ` with `⟨xᵢ|x̃ⱼ⟩ = σᵢ δᵢⱼ`.
/// 3. Entangled case: `y = (x₁, ix₂, ix₃, ix₄)` has preconcurrence matrix
///    `diag(σ₁, −σ₂, −σ₃, −σ₄)` with trace `C`. Real plane rotations then
///    zero the diagonal of `Y − C·Re G` (`G` the Gram matrix), which forces
///    `⟨zᵢ|z̃ᵢ⟩ = C⟨zᵢ|zᵢ⟩` for every branch.
/// 4. Separable case: phases close the polygon `Σ σᵢ e^{−2iφᵢ} = 0`, and a
///    4×4 Hadamard-type rotation gives every branch zero preconcurrence.
pub fn wootters_decomposition(rho: &DensityMatrix) -> Result<WoottersDecomposition> {
    let (v, tau) = eigen_frame(rho)?;
    let (u, sigma) = linalg::takagi(&tau)?;
    let x: [[Complex64; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|k| (0..4).map(|j| u[(j, i)] * v[j][k]).sum())
    });

    let c = sigma[0] - sigma[1] - sigma[2] - sigma[3];
    let z = if c > 0.0 {
        equalize_entangled(&x, &sigma, c)?
    } else {
        separable_branches(&x, &sigma)?
    };

    let branches: Vec<(f64, PureState)> = z
        .iter()
        .filter_map(|zi| {
            let t = linalg::norm(zi).powi(2);
            (t > BRANCH_TOL).then(|| (t, PureState(zi.map(|a| a / t.sqrt()))))
        })
        .collect();
    let decomposition = WoottersDecomposition { branches };

    let residual = decomposition.reconstruct().max_diff(rho.matrix());
    if residual > 1e-9 {
        return Err(Error::NumericalFailure { what: "wootters reconstruction", residual });
    }
    let target = c.max(0.0);
    let spread = decomposition
        .branches
        .iter()
        .map(|(_, phi)| (concurrence_pure(phi) - target).abs())
        .fold(0.0, f64::max);
    if c > 0.0 && spread > 1e-8 {
        return Err(Error::NumericalFailure { what: "preconcurrence equalization", residual: spread });
    }
    Ok(decomposition)
}

fn combine(r: &[[f64; 4]; 4], y: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|k| (0..4).map(|j| y[j][k] * r[i][j]).sum()))
}

fn equalize_entangled(
    x: &[[Complex64; 4]; 4],
    sigma: &[f64; 4],
    c: f64,
) -> Result<[[Complex64; 4]; 4]> {
    let y: [[Complex64; 4]; 4] =
        std::array::from_fn(|i| if i == 0 { x[0] } else { x[i].map(|a| a * I) });
    // F = Y − C·Re G, real symmetric and traceless
    let mut f = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let yij = if i == j { if i == 0 { sigma[0] } else { -sigma[i] } } else { 0.0 };
            f[i][j] = yij - c * inner(&y[i], &y[j]).re;
        }
    }
    let mut r = [[0.0; 4]; 4];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    // each rotation zeroes one positive diagonal entry against a negative one;
    // entries already at zero are untouched, so three rotations suffice
    let tol = 1e-15;
    for _ in 0..8 {
        let pos = (0..4).filter(|&i| f[i][i] > tol).max_by(|&a, &b| f[a][a].total_cmp(&f[b][b]));
        let neg = (0..4).filter(|&i| f[i][i] < -tol).min_by(|&a, &b| f[a][a].total_cmp(&f[b][b]));
        let (p, q) = match (pos, neg) {
            (Some(p), Some(q)) => (p, q),
            _ => break,
        };
        let mean = 0.5 * (f[p][p] + f[q][q]);
        let half_diff = 0.5 * (f[p][p] - f[q][q]);
        let off = f[p][q];
        let radius = half_diff.hypot(off);
        // f_pp(φ) = mean + half_diff·cos 2φ + off·sin 2φ = 0
        let two_phi = off.atan2(half_diff) + (-mean / radius).clamp(-1.0, 1.0).acos();
        let (s, co) = (0.5 * two_phi).sin_cos();
        rotate_plane(&mut f, &mut r, p, q, co, s);
    }
    let residual = (0..4).map(|i| f[i][i].abs()).fold(0.0, f64::max);
    if residual > 1e-12 {
        return Err(Error::NumericalFailure { what: "preconcurrence equalization", residual });
    }
    Ok(combine(&r, &y))
}

/// Applies `R' = Q R`, `F' = Q F Qᵀ` with `Q` the rotation taking
/// `e_p ↦ c·e_p + s·e_q` in the `(p, q)` plane.
#[allow(clippy::needless_range_loop)]
fn rotate_plane(f: &mut [[f64; 4]; 4], r: &mut [[f64; 4]; 4], p: usize, q: usize, c: f64, s: f64) {
    for k in 0..4 {
        let (fp, fq) = (f[p][k], f[q][k]);
        f[p][k] = c * fp + s * fq;
        f[q][k] = -s * fp + c * fq;
    }
    for k in 0..4 {
        let (fp, fq) = (f[k][p], f[k][q]);
        f[k][p] = c * fp + s * fq;
        f[k][q] = -s * fp + c * fq;
    }
    for k in 0..4 {
        let (rp, rq) = (r[p][k], r[q][k]);
        r[p][k] = c * rp + s * rq;
        r[q][k] = -s * rp + c * rq;
    }
}

/// Phases `w₁..w₄` (unit complex numbers) with `Σ σᵢ wᵢ = 0`. Requires
/// `σ₁ ≤ σ₂ + σ₃ + σ₄` with `σ` descending.
fn close_polygon(sigma: &[f64; 4]) -> [Complex64; 4] {
    let [a, b, c, d] = *sigma;
    // split into triangles (a, b, L) and (c, d, L)
    let l = (a - b).max(c - d).max(0.0);
    let angle_between = |p: f64, q: f64, target: f64| -> f64 {
        if p * q <= 0.0 {
            return 0.0;
        }
        ((target * target - p * p - q * q) / (2.0 * p * q)).clamp(-1.0, 1.0).acos()
    };
    let w1 = Complex64::new(1.0, 0.0);
    let w2 = Complex64::from_polar(1.0, angle_between(a, b, l));
    let closing = -(w1 * a + w2 * b);
    let psi = angle_between(c, d, l);
    let pair = Complex64::new(c, 0.0) + Complex64::from_polar(d, psi);
    let rot = if pair.norm() > 0.0 && closing.norm() > 0.0 {
        Complex64::from_polar(1.0, closing.arg() - pair.arg())
    } else {
        Complex64::new(1.0, 0.0)
    };
    [w1, w2, rot, rot * Complex64::from_polar(1.0, psi)]
}

fn separable_branches(x: &[[Complex64; 4]; 4], sigma: &[f64; 4]) -> Result<[[Complex64; 4]; 4]> {
    let w = close_polygon(sigma);
    let closure: Complex64 = (0..4).map(|i| w[i] * sigma[i]).sum();
    if closure.norm() > 1e-10 {
        return Err(Error::NumericalFailure { what: "phase polygon", residual: closure.norm() });
    }
    // yᵢ = e^{iφᵢ} xᵢ has ⟨yᵢ|ỹᵢ⟩ = e^{−2iφᵢ} σᵢ, so take φᵢ = −arg(wᵢ)/2
    let y: [[Complex64; 4]; 4] = std::array::from_fn(|i| {
        let phase = Complex64::from_polar(1.0, -0.5 * w[i].arg());
        x[i].map(|a| a * phase)
    });
    let h = [
        [0.5, 0.5, 0.5, 0.5],
        [0.5, 0.5, -0.5, -0.5],
        [0.5, -0.5, 0.5, -0.5],
        [0.5, -0.5, -0.5, 0.5],
    ];
    Ok(combine(&h, &y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};
    use crate::states::{bell_diag, bell_psi_plus, pure_theta, werner, BdParams};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn pure_concurrence_examples() {
        assert_eq!(concurrence_pure(&PureState([ONE, ZERO, ZERO, ZERO])), 0.0);
        for theta in [0.1, 0.3, 0.5, FRAC_PI_4] {
            let c = concurrence_pure(&pure_theta(theta).unwrap());
            assert!((c - (2.0 * theta).sin()).abs() < 1e-15);
        }
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!((concurrence_pure(&PureState([ZERO, h, h, ZERO])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spin_flip_examples() {
        let bell = bell_psi_plus().projector();
        assert!(spin_flip(&bell).matrix().max_diff(bell.matrix()) < 1e-15);
        let p00 = PureState([ONE, ZERO, ZERO, ZERO]).projector();
        let p11 = PureState([ZERO, ZERO, ZERO, ONE]).projector();
        assert!(spin_flip(&p00).matrix().max_diff(p11.matrix()) < 1e-15);
        let mm = DensityMatrix::maximally_mixed();
        assert!(spin_flip(&mm).matrix().max_diff(mm.matrix()) < 1e-15);
    }

    #[test]
    fn r_spectrum_examples() {
        let s = r_spectrum(&bell_psi_plus().projector()).unwrap();
        for (got, want) in s.0.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let s = r_spectrum(&DensityMatrix::maximally_mixed()).unwrap();
        assert!(s.0.iter().all(|l| (l - 1.0 / 16.0).abs() < 1e-14));
        let s = r_spectrum(&werner(1.0 / 3.0).unwrap()).unwrap();
        let r = s.0.map(f64::sqrt);
        assert!((r[0] - r[1] - r[2] - r[3]).abs() < 1e-10);
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&werner(0.6).unwrap()) - 0.4).abs() < 1e-12);
        let bd = bell_diag(&BdParams::new(0.15, 0.15, 0.1, 0.1, 0.5).unwrap()).unwrap();
        assert!((concurrence(&bd) - 0.3).abs() < 1e-12);
        let rho_s = bell_diag(&BdParams::new(0.5, 0.5, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert!(concurrence(&rho_s).abs() < 1e-12);
    }

    #[test]
    fn werner_line() {
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            let c = concurrence(&werner(x).unwrap());
            assert!((c - ((3.0 * x - 1.0) / 2.0).max(0.0)).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn wootters_pure_and_bell() {
        let psi = pure_theta(0.4).unwrap();
        let d = wootters_decomposition(&psi.projector()).unwrap();
        assert_eq!(d.branches.len(), 1);
        assert!((d.branches[0].0 - 1.0).abs() < 1e-12);
        assert!(d.branches[0].1.fidelity(&psi) > 1.0 - 1e-12);

        let d = wootters_decomposition(&werner(1.0).unwrap()).unwrap();
        assert_eq!(d.branches.len(), 1);
        assert!(d.branches[0].1.fidelity(&bell_psi_plus()) > 1.0 - 1e-12);
    }

    #[test]
    fn wootters_werner_08() {
        let rho = werner(0.8).unwrap();
        let d = wootters_decomposition(&rho).unwrap();
        assert!(d.branches.len() <= 4);
        assert!((d.average_concurrence() - 0.7).abs() < 1e-8);
        assert!(d.reconstruct().max_diff(rho.matrix()) < 1e-9);
        for (_, phi) in &d.branches {
            assert!((concurrence_pure(phi) - 0.7).abs() < 1e-8);
        }
    }

    #[test]
    fn wootters_separable() {
        for rho in [
            werner(0.2).unwrap(),
            werner(1.0 / 3.0).unwrap(),
            DensityMatrix::maximally_mixed(),
            bell_diag(&BdParams::new(0.5, 0.5, 0.0, 0.0, 0.0).unwrap()).unwrap(),
        ] {
            let d = wootters_decomposition(&rho).unwrap();
            assert!(d.reconstruct().max_diff(rho.matrix()) < 1e-9);
            for (_, phi) in &d.branches {
                assert!(concurrence_pure(phi) < 1e-8);
            }
        }
    }

    #[test]
    fn polygon_closes() {
        for s in [[1.0, 1.0, 0.0, 0.0], [0.5, 0.3, 0.2, 0.1], [0.25; 4], [0.0; 4], [0.4, 0.2, 0.2, 0.0]] {
            let w = close_polygon(&s);
            let sum: Complex64 = (0..4).map(|i| w[i] * s[i]).sum();
            assert!(sum.norm() < 1e-14, "{s:?}");
        }
    }
}
