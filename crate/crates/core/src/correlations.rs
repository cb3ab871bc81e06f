//! Quantum joint-outcome probabilities for local projective measurements.
//!
//! A measurement setting carries its outcome sign: `A = α·a`, so
//! `P_Q(α, β | a, b)` is written `P_Q(A, B)` throughout.

use std::ops::Neg;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, paulis, Mat2, HERM_TOL};
use crate::states::{check_theta, check_unit_interval, BdParams, DensityMatrix};

/// Largest norm deviation silently renormalized by [`Setting::new`].
pub const SETTING_NORM_TOL: f64 = 1e-6;

/// Outcome-weighted measurement direction, a unit vector in R³.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Setting([f64; 3]);

impl Setting {
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > SETTING_NORM_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Setting(v.map(|c| c / n)))
    }

    /// Normalizes any nonzero vector.
    pub fn from_direction(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Setting(v.map(|c| c / n)))
    }

    /// Polar angle from +z, azimuth from +x.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let (st, ct) = polar.sin_cos();
        let (sp, cp) = azimuth.sin_cos();
        Setting([st * cp, st * sp, ct])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Setting) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| a * b).sum()
    }

    /// `B′ = (B_x, −B_y, B_z)`
    pub fn primed(&self) -> Setting {
        Setting([self.0[0], -self.0[1], self.0[2]])
    }

    /// `σ⃗·v`
    pub fn pauli(&self) -> Mat2 {
        let [sx, sy, sz] = paulis();
        sx.scale_re(self.0[0]) + sy.scale_re(self.0[1]) + sz.scale_re(self.0[2])
    }
}

impl Neg for Setting {
    type Output = Setting;
    fn neg(self) -> Setting {
        Setting(self.0.map(|c| -c))
    }
}

impl TryFrom<[f64; 3]> for Setting {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Setting::new(v)
    }
}

impl From<Setting> for [f64; 3] {
    fn from(s: Setting) -> Self {
        s.0
    }
}

/// Joint outcome table indexed by `(α, β)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl JointTable {
    /// Evaluates `p` at the four sign combinations of two directions.
    pub fn from_fn(a: &Setting, b: &Setting, mut p: impl FnMut(&Setting, &Setting) -> f64) -> Self {
        JointTable {
            pp: p(a, b),
            pm: p(a, &-*b),
            mp: p(&-*a, b),
            mm: p(&-*a, &-*b),
        }
    }

    pub fn cells(&self) -> [f64; 4] {
        [self.pp, self.pm, self.mp, self.mm]
    }

    pub fn total(&self) -> f64 {
        self.cells().iter().sum()
    }

    /// `P(α)` for Alice's outcome.
    pub fn marginal_a(&self) -> [f64; 2] {
        [self.pp + self.pm, self.mp + self.mm]
    }

    pub fn marginal_b(&self) -> [f64; 2] {
        [self.pp + self.mp, self.pm + self.mm]
    }
}

/// `Π = ½(𝟏 + σ⃗·A)`
pub fn projector(s: &Setting) -> Mat2 {
    (Mat2::identity() + s.pauli()).scale_re(0.5)
}

/// `Tr(Π_A ⊗ Π_B ρ)`
pub fn p_q(rho: &DensityMatrix, a: &Setting, b: &Setting) -> f64 {
    let pi = linalg::kron(&projector(a), &projector(b));
    let m = rho.matrix();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            tr += pi[(i, j)] * m[(j, i)];
        }
    }
    tr.re
}

pub fn joint_table(rho: &DensityMatrix, a: &Setting, b: &Setting) -> JointTable {
    JointTable::from_fn(a, b, |a, b| p_q(rho, a, b))
}

/// Closed form for `cos θ|00⟩ + sin θ|11⟩`:
/// `¼[1 + c(A_z + B_z) + A_zB_z + s(A_xB_x − A_yB_y)]`.
pub fn p_q_pure(theta: f64, a: &Setting, b: &Setting) -> f64 {
    let (s, c) = (2.0 * theta).sin_cos();
    0.25 * (1.0 + c * (a.z() + b.z()) + a.z() * b.z() + s * (a.x() * b.x() - a.y() * b.y()))
}

/// State families with closed-form distributions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Werner { x: f64 },
    GenWerner { x: f64, theta: f64 },
    /// `γ|ψ⁺⟩⟨ψ⁺| + a|01⟩⟨01| + b|10⟩⟨10|`
    Bd0 { a: f64, b: f64, gamma: f64 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Werner { x } => check_unit_interval("x", x),
            Family::GenWerner { x, theta } => {
                check_unit_interval("x", x)?;
                check_theta(theta)
            }
            Family::Bd0 { a, b, gamma } => BdParams::new(0.0, 0.0, a, b, gamma).map(|_| ()),
        }
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        match *self {
            Family::Werner { x } => crate::states::werner(x),
            Family::GenWerner { x, theta } => crate::states::generalized_werner(x, theta),
            Family::Bd0 { a, b, gamma } => {
                crate::states::bell_diag(&BdParams::new(0.0, 0.0, a, b, gamma)?)
            }
        }
    }
}

/// Closed-form `P_Q` of a family member.
pub fn p_q_family(family: &Family, a: &Setting, b: &Setting) -> Result<f64> {
    family.validate()?;
    let xy = a.x() * b.x() - a.y() * b.y();
    let zz = a.z() * b.z();
    Ok(match *family {
        Family::Werner { x } => 0.25 * (1.0 + x * (zz + xy)),
        Family::GenWerner { x, theta } => {
            let (s, c) = (2.0 * theta).sin_cos();
            0.25 * (1.0 + x * (c * a.z() + c * b.z() + zz + s * xy))
        }
        Family::Bd0 { a: pa, b: pb, gamma } => {
            0.25 * (1.0 + (pa - pb) * (a.z() - b.z()) + (gamma - pa - pb) * zz + gamma * xy)
        }
    })
}

/// Setting seen through a local unitary: `σ⃗·A' = u† (σ⃗·A) u`.
pub fn rotate_setting(u: &Mat2, s: &Setting) -> Result<Setting> {
    let deviation = u.unitarity_error();
    if deviation > HERM_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(rotate_unchecked(u, s))
}

pub(crate) fn rotate_unchecked(u: &Mat2, s: &Setting) -> Setting {
    let conj = u.adjoint() * s.pauli() * *u;
    let v = paulis().map(|sigma| 0.5 * (sigma * conj).trace().re);
    Setting(v)
}

/// SO(3) matrix of the map in [`rotate_setting`], row-major.
pub fn rotation_matrix(u: &Mat2) -> [[f64; 3]; 3] {
    let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let cols = e.map(|v| rotate_unchecked(u, &Setting(v)).0);
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sigma_x;
    use crate::states::{bell_diag, pure_theta, werner};

    fn s(v: [f64; 3]) -> Setting {
        Setting::new(v).unwrap()
    }

    #[test]
    fn projector_examples() {
        assert!(projector(&s([0.0, 0.0, 1.0])).max_diff(&Mat2::from_real_diag([1.0, 0.0])) < 1e-15);
        assert!(projector(&s([0.0, 0.0, -1.0])).max_diff(&Mat2::from_real_diag([0.0, 1.0])) < 1e-15);
        let px = projector(&s([1.0, 0.0, 0.0]));
        let half = Complex64::new(0.5, 0.0);
        assert!(px.max_diff(&crate::linalg::CMat([[half, half], [half, half]])) < 1e-15);
        assert!((px * px).max_diff(&px) < 1e-12);
    }

    #[test]
    fn setting_normalization() {
        let v = Setting::new([0.0, 0.0, 1.0 + 5e-7]).unwrap();
        assert_eq!(v.z(), 1.0);
        assert!(matches!(Setting::new([0.0, 0.0, 1.1]), Err(Error::NotUnit { .. })));
        assert_eq!(s([0.0, 1.0, 0.0]).primed(), s([0.0, -1.0, 0.0]));
    }

    #[test]
    fn pq_examples() {
        let z = s([0.0, 0.0, 1.0]);
        let rho_s = bell_diag(&BdParams::new(0.5, 0.5, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert!((p_q(&rho_s, &z, &z) - 0.5).abs() < 1e-15);
        assert!((p_q(&werner(0.5).unwrap(), &z, &z) - 0.375).abs() < 1e-15);
        let a = s([0.3, -0.4, (1.0f64 - 0.25).sqrt()]);
        assert!((p_q(&DensityMatrix::maximally_mixed(), &a, &z) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pq_pure_examples() {
        let z = s([0.0, 0.0, 1.0]);
        let x = s([1.0, 0.0, 0.0]);
        assert!((p_q_pure(std::f64::consts::FRAC_PI_4, &z, &z) - 0.5).abs() < 1e-15);
        assert!((p_q_pure(0.0, &z, &z) - 1.0).abs() < 1e-15);
        let want = 0.25 * (1.0 + 3f64.sqrt() / 2.0);
        assert!((p_q_pure(std::f64::consts::PI / 6.0, &x, &x) - want).abs() < 1e-15);
        let rho = pure_theta(std::f64::consts::PI / 6.0).unwrap().projector();
        assert!((p_q(&rho, &x, &x) - want).abs() < 1e-12);
    }

    #[test]
    fn family_examples() {
        let y = s([0.0, 1.0, 0.0]);
        let z = s([0.0, 0.0, 1.0]);
        let v = p_q_family(&Family::Werner { x: 1.0 / 3.0 }, &y, &y).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
        let v = p_q_family(&Family::GenWerner { x: 1.0, theta: std::f64::consts::PI / 6.0 }, &z, &z)
            .unwrap();
        assert!((v - 0.75).abs() < 1e-15);
        let v = p_q_family(&Family::Bd0 { a: 0.2, b: 0.2, gamma: 0.6 }, &z, &z).unwrap();
        assert!((v - 0.25 * (1.0 + 0.6 - 0.4)).abs() < 1e-15);
        assert!(p_q_family(&Family::Bd0 { a: 0.2, b: 0.2, gamma: 0.7 }, &z, &z).is_err());
    }

    #[test]
    fn rotation_examples() {
        let z = s([0.0, 0.0, 1.0]);
        let x = s([1.0, 0.0, 0.0]);
        assert_eq!(rotate_setting(&Mat2::identity(), &z).unwrap(), z);
        let r = rotate_setting(&sigma_x(), &z).unwrap();
        assert!((r.z() + 1.0).abs() < 1e-15);
        let r = rotate_setting(&sigma_x(), &x).unwrap();
        assert!((r.x() - 1.0).abs() < 1e-15);
        let mut bad = Mat2::identity();
        bad.0[0][0] = Complex64::new(2.0, 0.0);
        assert!(matches!(rotate_setting(&bad, &z), Err(Error::NotUnitary { .. })));
    }
}
