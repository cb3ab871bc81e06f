//! Two-qubit states: pure amplitudes, validated density matrices, the named
//! families used throughout the crate, and Schmidt (LU-canonical) forms.

use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, inner, kron_vec, Mat2, Mat4, HERM_TOL, ONE, ZERO};

/// Normalization tolerance for pure states.
pub const NORM_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted in a density matrix.
pub const PSD_TOL: f64 = 1e-9;

/// Pure state `c1|00⟩ + c2|01⟩ + c3|10⟩ + c4|11⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState(pub [Complex64; 4]);

impl PureState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let n = linalg::norm(&amplitudes);
        if (n * n - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("pure state has squared norm {}", n * n)));
        }
        Ok(PureState(amplitudes))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self> {
        let n = linalg::norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(PureState(amplitudes.map(|z| z / n)))
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.0
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(Mat4::outer(&self.0, &self.0))
    }

    /// `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        inner(&self.0, &other.0).norm()
    }
}

/// Validated two-qubit density matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RhoDocument", into = "RhoDocument")]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity. Nothing is corrected.
    pub fn new(m: Mat4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let deviation = m.hermiticity_error();
        if deviation > HERM_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > HERM_TOL || tr.im.abs() > HERM_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let eig = linalg::eig_hermitian(&m)?;
        if eig.values[3] < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: eig.values[3] });
        }
        Ok(DensityMatrix(m))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Mat4::identity().scale_re(0.25))
    }

    /// Convex mixture `w·self + (1 − w)·other`.
    pub fn mix(&self, w: f64, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(self.0.scale_re(w) + other.0.scale_re(1.0 - w))
    }

    /// `(uA ⊗ uB) ρ (uA ⊗ uB)†`.
    pub fn conjugate_local(&self, ua: &Mat2, ub: &Mat2) -> DensityMatrix {
        let u = linalg::kron(ua, ub);
        DensityMatrix(u * self.0 * u.adjoint())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("density matrix serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

/// On-disk form: `{"rho": [[[re, im] × 4] × 4]}`, row-major.
#[derive(Serialize, Deserialize)]
struct RhoDocument {
    rho: Mat4,
}

impl TryFrom<RhoDocument> for DensityMatrix {
    type Error = Error;
    fn try_from(doc: RhoDocument) -> Result<Self> {
        DensityMatrix::new(doc.rho)
    }
}

impl From<DensityMatrix> for RhoDocument {
    fn from(d: DensityMatrix) -> Self {
        RhoDocument { rho: d.0 }
    }
}

/// `|ψ⟩ = (uA ⊗ uB)(cos θ|00⟩ + sin θ|11⟩)`, up to a global phase.
#[derive(Clone, Copy, Debug)]
pub struct SchmidtForm {
    pub theta: f64,
    pub ua: Mat2,
    pub ub: Mat2,
}

impl SchmidtForm {
    /// `cos 2θ`
    pub fn c(&self) -> f64 {
        (2.0 * self.theta).cos()
    }

    /// `sin 2θ`
    pub fn s(&self) -> f64 {
        (2.0 * self.theta).sin()
    }

    pub fn state(&self) -> PureState {
        let (s, c) = self.theta.sin_cos();
        let a0 = self.ua.column(0);
        let a1 = self.ua.column(1);
        let b0 = self.ub.column(0);
        let b1 = self.ub.column(1);
        let t0 = kron_vec(&a0, &b0);
        let t1 = kron_vec(&a1, &b1);
        PureState(std::array::from_fn(|i| t0[i] * c + t1[i] * s))
    }
}

/// Parameters of the Bell-plus-diagonal family (`x + y + a + b + γ = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BdParams {
    pub x: f64,
    pub y: f64,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
}

impl BdParams {
    pub fn new(x: f64, y: f64, a: f64, b: f64, gamma: f64) -> Result<Self> {
        let p = BdParams { x, y, a, b, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.x, self.y, self.a, self.b, self.gamma];
        if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParams(format!("negative or non-finite entry in {self:?}")));
        }
        let sum: f64 = vals.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("x+y+a+b+gamma = {sum}, expected 1")));
        }
        Ok(())
    }

    /// Closed-form concurrence `max{0, γ − 2√(ab)}`.
    pub fn concurrence(&self) -> f64 {
        (self.gamma - 2.0 * (self.a * self.b).sqrt()).max(0.0)
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_4 + 1e-15).contains(&theta) {
        return Err(Error::OutOfRange { name: "theta", value: theta, range: "[0, pi/4]" });
    }
    Ok(())
}

pub(crate) fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange { name, value: x, range: "[0, 1]" });
    }
    Ok(())
}

/// `cos θ|00⟩ + sin θ|11⟩` for `θ ∈ [0, π/4]`.
pub fn pure_theta(theta: f64) -> Result<PureState> {
    check_theta(theta)?;
    let (s, c) = theta.sin_cos();
    Ok(PureState([Complex64::new(c, 0.0), ZERO, ZERO, Complex64::new(s, 0.0)]))
}

/// `|ψ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_psi_plus() -> PureState {
    pure_theta(FRAC_PI_4).expect("pi/4 is in range")
}

/// Werner state `x|ψ⁺⟩⟨ψ⁺| + (1 − x)𝟏/4`.
pub fn werner(x: f64) -> Result<DensityMatrix> {
    check_unit_interval("x", x)?;
    Ok(bell_psi_plus().projector().mix(x, &DensityMatrix::maximally_mixed()))
}

/// Generalized Werner state `x|ψ(θ)⟩⟨ψ(θ)| + (1 − x)𝟏/4`.
pub fn generalized_werner(x: f64, theta: f64) -> Result<DensityMatrix> {
    check_unit_interval("x", x)?;
    let psi = pure_theta(theta)?;
    Ok(psi.projector().mix(x, &DensityMatrix::maximally_mixed()))
}

/// Bell state `|ψ⁺⟩` mixed with a diagonal state.
pub fn bell_diag(p: &BdParams) -> Result<DensityMatrix> {
    p.validate()?;
    let g = Complex64::new(p.gamma / 2.0, 0.0);
    let mut m = Mat4::from_real_diag([p.x + p.gamma / 2.0, p.a, p.b, p.y + p.gamma / 2.0]);
    m.0[0][3] = g;
    m.0[3][0] = g;
    DensityMatrix::new(m)
}

/// 2×2 Hermitian eigenpairs in closed form, descending. For (near-)degenerate
/// input the standard basis is returned.
fn eig2_hermitian(m: &Mat2) -> ([f64; 2], [[Complex64; 2]; 2]) {
    let a = m.0[0][0].re;
    let d = m.0[1][1].re;
    let b = m.0[0][1];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let hi = mean + half_gap;
    let lo = mean - half_gap;
    if b.norm() <= 1e-15 * (a.abs() + d.abs()).max(1e-300) || half_gap <= 1e-300 {
        return if a >= d {
            ([a, d], [[ONE, ZERO], [ZERO, ONE]])
        } else {
            ([d, a], [[ZERO, ONE], [ONE, ZERO]])
        };
    }
    // (b, λ − a) and (λ − d, b*) both solve the eigen-equation; keep the longer
    let c1 = [b, Complex64::new(hi - a, 0.0)];
    let c2 = [Complex64::new(hi - d, 0.0), b.conj()];
    let v = if linalg::norm(&c1) >= linalg::norm(&c2) { c1 } else { c2 };
    let n = linalg::norm(&v);
    let v0 = v.map(|z| z / n);
    let v1 = orthogonal_complement(&v0);
    ([hi, lo], [v0, v1])
}

/// Unit vector orthogonal to a unit vector in C².
fn orthogonal_complement(v: &[Complex64; 2]) -> [Complex64; 2] {
    [-v[1].conj(), v[0].conj()]
}

/// Local-unitary canonical form of a pure state.
///
/// The amplitude matrix `M[i][j] = ⟨ij|ψ⟩` is factored as `M = W·S·V†`;
/// then `uA = W`, `uB = V̄` and `S = diag(cos θ, sin θ)`. θ is taken from
/// `sin 2θ = 2|det M|`, which stays accurate when `sin θ` is tiny.
pub fn schmidt_decompose(psi: &PureState) -> SchmidtForm {
    let c = psi.0;
    let m = Mat2::from_fn(|i, j| c[2 * i + j]);
    let det = m.0[0][0] * m.0[1][1] - m.0[0][1] * m.0[1][0];
    let theta = 0.5 * (2.0 * det.norm()).min(1.0).asin();
    let sin_t = theta.sin();

    let (_, w) = eig2_hermitian(&(m * m.adjoint()));
    let mut v = [[ZERO; 2]; 2];
    let mh = m.adjoint();
    // right singular vectors v_k = M†w_k/σ_k, with the smaller one taken from
    // the orthogonal complement when σ₂ is negligible
    let v0 = mh.apply(&w[0]);
    let n0 = linalg::norm(&v0);
    v[0] = v0.map(|z| z / n0);
    v[1] = if sin_t > 1e-6 {
        let v1 = mh.apply(&w[1]);
        let n1 = linalg::norm(&v1);
        let mut v1 = v1.map(|z| z / n1);
        // re-orthogonalize against v0
        let o = inner(&v[0], &v1);
        for k in 0..2 {
            v1[k] -= o * v[0][k];
        }
        let n1 = linalg::norm(&v1);
        v1.map(|z| z / n1)
    } else {
        let mut v1 = orthogonal_complement(&v[0]);
        let z = inner(&w[1], &m.apply(&v1));
        if z.norm() > 0.0 {
            let phase = z.conj() / z.norm();
            v1 = v1.map(|x| x * phase);
        }
        v1
    };
    // fix the phase of v0 so that w0† M v0 is real positive
    let z = inner(&w[0], &m.apply(&v[0]));
    if z.norm() > 0.0 {
        let phase = z.conj() / z.norm();
        v[0] = v[0].map(|x| x * phase);
    }

    let ua = Mat2::from_fn(|i, k| w[k][i]);
    let ub = Mat2::from_fn(|i, k| v[k][i].conj());
    SchmidtForm { theta, ua, ub }
}
