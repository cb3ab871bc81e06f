//! Small dense complex matrices.
//!
//! Everything here works on fixed `N×N` arrays (`N` is 2 or 4 in practice).
//! Eigendecompositions use cyclic Jacobi rotations, which for matrices this
//! small are both accurate to a few ulps and simple enough to audit.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for Hermiticity and symmetry checks.
pub const HERM_TOL: f64 = 1e-10;
/// Tolerance for reconstruction checks (`s·s = m`, `U Σ Uᵀ = m`, ...).
pub const RECON_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major complex `N×N` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<[f64; 2]>>", try_from = "Vec<Vec<[f64; 2]>>")]
pub struct CMat<const N: usize>(pub [[Complex64; N]; N]);

pub type Mat2 = CMat<2>;
pub type Mat4 = CMat<4>;

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct EigenResult<const N: usize> {
    pub values: [f64; N],
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMat<N>,
}

impl<const N: usize> EigenResult<N> {
    pub fn vector(&self, k: usize) -> [Complex64; N] {
        self.vectors.column(k)
    }
}

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_diag(d: [f64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { Complex64::new(d[i], 0.0) } else { ZERO })
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64; N], w: &[Complex64; N]) -> Self {
        Self::from_fn(|i, j| v[i] * w[j].conj())
    }

    pub fn column(&self, k: usize) -> [Complex64; N] {
        std::array::from_fn(|i| self.0[i][k])
    }

    pub fn set_column(&mut self, k: usize, v: &[Complex64; N]) {
        for (row, &x) in self.0.iter_mut().zip(v) {
            row[k] = x;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn apply(&self, v: &[Complex64; N]) -> [Complex64; N] {
        std::array::from_fn(|i| (0..N).map(|j| self.0[i][j] * v[j]).sum())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max |m − n|` entrywise.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    pub fn symmetry_error(&self) -> f64 {
        self.max_diff(&self.transpose())
    }

    pub fn unitarity_error(&self) -> f64 {
        (self.adjoint() * *self).max_diff(&Self::identity())
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

impl<const N: usize> From<CMat<N>> for Vec<Vec<[f64; 2]>> {
    fn from(m: CMat<N>) -> Self {
        m.0.iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }
}

impl<const N: usize> TryFrom<Vec<Vec<[f64; 2]>>> for CMat<N> {
    type Error = String;
    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> std::result::Result<Self, String> {
        if rows.len() != N || rows.iter().any(|r| r.len() != N) {
            return Err(format!("expected a {N}x{N} matrix"));
        }
        Ok(Self::from_fn(|i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}

pub fn sigma_x() -> Mat2 {
    CMat([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> Mat2 {
    CMat([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> Mat2 {
    CMat([[ONE, ZERO], [ZERO, -ONE]])
}

pub fn paulis() -> [Mat2; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// `σ_y ⊗ σ_y`, the two-qubit spin-flip operator.
pub fn sigma_yy() -> Mat4 {
    kron(&sigma_y(), &sigma_y())
}

/// Kronecker product in basis order |00⟩, |01⟩, |10⟩, |11⟩.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|i, j| a.0[i / 2][j / 2] * b.0[i % 2][j % 2])
}

pub fn kron_vec(a: &[Complex64; 2], b: &[Complex64; 2]) -> [Complex64; 4] {
    std::array::from_fn(|i| a[i / 2] * b[i % 2])
}

pub fn inner<const N: usize>(v: &[Complex64; N], w: &[Complex64; N]) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm<const N: usize>(v: &[Complex64; N]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian<const N: usize>(m: &CMat<N>) -> Result<EigenResult<N>> {
    let deviation = m.hermiticity_error();
    if deviation > HERM_TOL || !m.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }
    // symmetrize so that rounding in the input does not leak into the spectrum
    let mut a = (*m + m.adjoint()).scale_re(0.5);
    let mut v = CMat::<N>::identity();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.0[i][j].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                // phase that makes a_pq real, then a real plane rotation
                let phase = apq / r;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let half = 0.5 * (2.0 * r).atan2(aqq - app);
                let (s, c) = half.sin_cos();
                let mut g = CMat::<N>::identity();
                g.0[p][p] = Complex64::new(c, 0.0);
                g.0[p][q] = Complex64::new(s, 0.0);
                g.0[q][p] = -phase.conj() * s;
                g.0[q][q] = phase.conj() * c;
                a = g.adjoint() * a * g;
                v = v * g;
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a.0[j][j].re.total_cmp(&a.0[i][i].re));
    let values = std::array::from_fn(|k| a.0[order[k]][order[k]].re);
    let vectors = CMat::from_fn(|i, k| v.0[i][order[k]]);
    Ok(EigenResult { values, vectors })
}

/// Positive semidefinite square root. Eigenvalues in `[−HERM_TOL, 0)` are
/// clamped to zero.
pub fn sqrt_psd<const N: usize>(m: &CMat<N>) -> Result<CMat<N>> {
    let eig = eig_hermitian(m)?;
    let min = eig.values[N - 1];
    if min < -HERM_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let roots = eig.values.map(|l| l.max(0.0).sqrt());
    Ok(eig.vectors * CMat::from_real_diag(roots) * eig.vectors.adjoint())
}

/// Real symmetric eigendecomposition (dense, row-major `n×n`), descending.
/// Returns eigenvalues and eigenvectors as columns of a row-major matrix.
fn eig_real_symmetric(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())).max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let half = 0.5 * (2.0 * apq).atan2(a[q * n + q] - a[p * n + p]);
                let (s, c) = half.sin_cos();
                // a ← Gᵀ a G with G = [[c, s], [−s, c]] in the (p, q) plane
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + col] = v[i * n + k];
        }
    }
    (values, vectors)
}

/// Takagi factorization `m = U·diag(σ)·Uᵀ` of a complex symmetric matrix,
/// with `U` unitary and `σ` real, nonnegative, descending.
///
/// Works through the real symmetric embedding `[[X, Y], [Y, −X]]` of
/// `m = X + iY`: an eigenvector `(a; b)` with eigenvalue `σ ≥ 0` gives
/// `u = a + ib` satisfying `m·ū = σ·u`, and the eigenspaces for `±σ` are
/// exchanged by `u ↦ iu`. Degenerate clusters therefore need no special
/// phase fixing; only the zero cluster, where `u` and `iu` collide, is
/// resolved by complex Gram–Schmidt.
pub fn takagi<const N: usize>(m: &CMat<N>) -> Result<(CMat<N>, [f64; N])> {
    let deviation = m.symmetry_error();
    if deviation > HERM_TOL || !m.is_finite() {
        return Err(Error::NotSymmetric { deviation });
    }
    let sym = (*m + m.transpose()).scale_re(0.5);
    let n2 = 2 * N;
    let mut emb = vec![0.0; n2 * n2];
    for i in 0..N {
        for j in 0..N {
            let z = sym.0[i][j];
            emb[i * n2 + j] = z.re;
            emb[i * n2 + N + j] = z.im;
            emb[(N + i) * n2 + j] = z.im;
            emb[(N + i) * n2 + N + j] = -z.re;
        }
    }
    let (vals, vecs) = eig_real_symmetric(emb, n2);

    let mut u = CMat::<N>::zeros();
    let mut sigma = [0.0; N];
    let mut accepted = 0;
    let candidates = (0..n2).map(|k| {
        let v: [Complex64; N] =
            std::array::from_fn(|i| Complex64::new(vecs[i * n2 + k], vecs[(N + i) * n2 + k]));
        (vals[k].max(0.0), v)
    });
    // standard basis vectors close the zero cluster if the embedding did not
    let fallback = (0..N).map(|k| {
        let v: [Complex64; N] = std::array::from_fn(|i| if i == k { ONE } else { ZERO });
        (0.0, v)
    });
    for (value, mut v) in candidates.chain(fallback) {
        if accepted == N {
            break;
        }
        for k in 0..accepted {
            let col = u.column(k);
            let overlap = inner(&col, &v);
            for i in 0..N {
                v[i] -= overlap * col[i];
            }
        }
        let nv = norm(&v);
        if nv < 0.5 {
            continue;
        }
        let v = v.map(|z| z / nv);
        u.set_column(accepted, &v);
        sigma[accepted] = value;
        accepted += 1;
    }
    if accepted < N {
        return Err(Error::NumericalFailure { what: "takagi", residual: f64::NAN });
    }

    let recon = u * CMat::from_real_diag(sigma) * u.transpose();
    let residual = recon.max_diff(&sym);
    if residual > RECON_TOL * sym.max_abs().max(1.0) {
        return Err(Error::NumericalFailure { what: "takagi", residual });
    }
    Ok((u, sigma))
}
