//! Discrete local hidden-variable models and local/nonlocal splits.
//!
//! A model is a finite mixture `P_L(A, B) = Σᵢ μᵢ pᵢ(A) qᵢ(B)` of products of
//! response functions, each satisfying `p(A) + p(−A) = 1`. A split pairs a
//! model with a state and a local weight `p_L`; whatever is left,
//! `P_NL = (P_Q − p_L·P_L)/(1 − p_L)`, is the nonlocal remainder.

use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{p_q, rotate_unchecked, Setting};
use crate::entanglement::{concurrence, wootters_decomposition};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::states::{
    bell_diag, check_theta, check_unit_interval, generalized_werner, pure_theta, schmidt_decompose,
    werner, BdParams, DensityMatrix,
};

/// Tolerance on `Σ μᵢ = 1`.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn component(self, v: &Setting) -> f64 {
        match self {
            Axis::X => v.x(),
            Axis::Y => v.y(),
            Axis::Z => v.z(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Local response function: probability of the outcome encoded in a setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ResponseFn {
    /// Constant ½.
    Uniform,
    /// `F^±(v) = ½(1 ± v_axis)`.
    HalfLinear { axis: Axis, sign: Sign },
    /// `½(1 + z_sign·sin ϑ·v_z + sign·cos ϑ·v_axis)`; `z_sign` is `+` on
    /// Alice's side and `−` on Bob's.
    Tilted {
        axis: Axis,
        sign: Sign,
        vartheta: f64,
        z_sign: Sign,
    },
    /// `½[1 + f(v_z)]` with `f(x) = sgn(x)·min(1, c|x|/(1 − s))`,
    /// `c = cos 2θ`, `s = sin 2θ`.
    ScaraniF { theta: f64 },
    /// `inner` evaluated at the setting rotated by `u` (`σ⃗·v' = u†(σ⃗·v)u`).
    Rotated { u: Mat2, inner: Box<ResponseFn> },
}

/// `f(x) = sgn(x)·min(1, c|x|/(1 − s))`. At `θ = π/4` the slope is 0/0 and
/// `f ≡ 0`.
pub fn scarani_f(theta: f64, x: f64) -> f64 {
    let (s, c) = (2.0 * theta).sin_cos();
    if 1.0 - s <= 1e-15 {
        return 0.0;
    }
    x.signum() * (c / (1.0 - s) * x.abs()).min(1.0)
}

impl ResponseFn {
    pub fn eval(&self, v: &Setting) -> f64 {
        match self {
            ResponseFn::Uniform => 0.5,
            ResponseFn::HalfLinear { axis, sign } => 0.5 * (1.0 + sign.value() * axis.component(v)),
            ResponseFn::Tilted { axis, sign, vartheta, z_sign } => {
                let (st, ct) = vartheta.sin_cos();
                0.5 * (1.0 + z_sign.value() * st * v.z() + sign.value() * ct * axis.component(v))
            }
            ResponseFn::ScaraniF { theta } => 0.5 * (1.0 + scarani_f(*theta, v.z())),
            ResponseFn::Rotated { u, inner } => inner.eval(&rotate_unchecked(u, v)),
        }
    }

    /// Parameters keep the response inside `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        match self {
            ResponseFn::Uniform | ResponseFn::HalfLinear { .. } => Ok(()),
            ResponseFn::Tilted { axis: Axis::Z, .. } => {
                Err(Error::InvalidParams("tilted response needs axis x or y".into()))
            }
            ResponseFn::Tilted { vartheta, .. } if !vartheta.is_finite() => {
                Err(Error::InvalidParams(format!("vartheta = {vartheta}")))
            }
            ResponseFn::Tilted { .. } => Ok(()),
            ResponseFn::ScaraniF { theta } => check_theta(*theta),
            ResponseFn::Rotated { u, inner } => {
                let deviation = u.unitarity_error();
                if deviation > crate::linalg::HERM_TOL {
                    return Err(Error::NotUnitary { deviation });
                }
                inner.validate()
            }
        }
    }

    /// Reflection `v_z → −v_z` applied to the argument.
    fn flip_z(&self) -> ResponseFn {
        match self {
            ResponseFn::HalfLinear { axis: Axis::Z, sign } => {
                ResponseFn::HalfLinear { axis: Axis::Z, sign: sign.flip() }
            }
            ResponseFn::Tilted { axis, sign, vartheta, z_sign } => ResponseFn::Tilted {
                axis: *axis,
                sign: *sign,
                vartheta: *vartheta,
                z_sign: z_sign.flip(),
            },
            other => other.clone(),
        }
    }

    fn half(axis: Axis, sign: Sign) -> ResponseFn {
        ResponseFn::HalfLinear { axis, sign }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub mu: f64,
    #[serde(rename = "pA")]
    pub pa: ResponseFn,
    #[serde(rename = "qB")]
    pub qb: ResponseFn,
}

/// Finite LHV model `Σᵢ μᵢ pᵢ(A) qᵢ(B)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LhvModel {
    pub branches: Vec<Branch>,
}

impl LhvModel {
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        let m = LhvModel { branches };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.branches.is_empty() {
            return Err(Error::InvalidParams("model has no branches".into()));
        }
        if let Some(b) = self.branches.iter().find(|b| !(0.0..=1.0).contains(&b.mu)) {
            return Err(Error::InvalidParams(format!("branch weight {} outside [0, 1]", b.mu)));
        }
        let total: f64 = self.branches.iter().map(|b| b.mu).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidParams(format!("branch weights sum to {total}")));
        }
        self.branches.iter().try_for_each(|b| {
            b.pa.validate()?;
            b.qb.validate()
        })
    }

    pub fn single(pa: ResponseFn, qb: ResponseFn) -> Self {
        LhvModel { branches: vec![Branch { mu: 1.0, pa, qb }] }
    }

    pub fn uniform() -> Self {
        Self::single(ResponseFn::Uniform, ResponseFn::Uniform)
    }

    /// Flattened convex combination `Σ wⱼ Mⱼ`; zero-weight branches dropped.
    pub fn mixture(parts: &[(f64, &LhvModel)]) -> Result<Self> {
        let branches = parts
            .iter()
            .flat_map(|(w, m)| {
                m.branches.iter().map(move |b| Branch { mu: w * b.mu, ..b.clone() })
            })
            .filter(|b| b.mu > 0.0)
            .collect();
        LhvModel::new(branches)
    }

    pub fn eval(&self, a: &Setting, b: &Setting) -> f64 {
        self.branches.iter().map(|br| br.mu * br.pa.eval(a) * br.qb.eval(b)).sum()
    }

    fn map_responses(&self, f: impl Fn(&ResponseFn) -> ResponseFn) -> LhvModel {
        LhvModel {
            branches: self
                .branches
                .iter()
                .map(|b| Branch { mu: b.mu, pa: f(&b.pa), qb: f(&b.qb) })
                .collect(),
        }
    }
}

/// `Σᵢ μᵢ pᵢ(A) qᵢ(B)`
pub fn eval_model(m: &LhvModel, a: &Setting, b: &Setting) -> f64 {
    m.eval(a, b)
}

/// Local/nonlocal split `P_Q = p_L·P_L + (1 − p_L)·P_NL` of a state.
#[derive(Clone, Debug)]
pub struct Epr2Split {
    pub p_local: f64,
    pub model: LhvModel,
    pub source: DensityMatrix,
}

/// Serialized split: `{"p_local": r, "branches": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub p_local: f64,
    pub branches: Vec<Branch>,
}

impl ModelDocument {
    pub fn model(&self) -> Result<LhvModel> {
        LhvModel::new(self.branches.clone())
    }
}

impl Epr2Split {
    pub fn local(&self, a: &Setting, b: &Setting) -> f64 {
        self.model.eval(a, b)
    }

    pub fn quantum(&self, a: &Setting, b: &Setting) -> f64 {
        p_q(&self.source, a, b)
    }

    /// `P_NL = (P_Q − p_L·P_L)/(1 − p_L)`.
    pub fn remainder(&self, a: &Setting, b: &Setting) -> Result<f64> {
        if self.p_local >= 1.0 - 1e-12 {
            return Err(Error::LocalWeightOne);
        }
        Ok((self.quantum(a, b) - self.p_local * self.local(a, b)) / (1.0 - self.p_local))
    }

    pub fn document(&self) -> ModelDocument {
        ModelDocument { p_local: self.p_local, branches: self.model.branches.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("model serializes")
    }

    /// Evaluates the split on every pair of grid settings.
    pub fn check(&self, grid: &SettingGrid) -> GridReport {
        let points = grid.points();
        let local_weight_one = self.p_local >= 1.0 - 1e-12;
        let partial: Vec<GridReport> = points
            .par_iter()
            .map(|a| {
                let mut r = GridReport::empty();
                for b in &points {
                    let q = self.quantum(a, b);
                    let l = self.local(a, b);
                    r.count += 1;
                    r.min_local = r.min_local.min(l);
                    r.max_local_error = r.max_local_error.max((q - l).abs());
                    if l > 1e-12 {
                        r.min_ratio = r.min_ratio.min(q / l);
                    }
                    if !local_weight_one {
                        let nl = (q - self.p_local * l) / (1.0 - self.p_local);
                        r.min_remainder = Some(r.min_remainder.map_or(nl, |m: f64| m.min(nl)));
                    }
                }
                r
            })
            .collect();
        partial.into_iter().fold(GridReport::empty(), GridReport::merge)
    }
}

/// Summary of a split evaluated on a setting grid.
#[derive(Clone, Copy, Debug)]
pub struct GridReport {
    pub count: usize,
    /// `min P_NL`; `None` when `p_L = 1`.
    pub min_remainder: Option<f64>,
    /// `max |P_Q − P_L|`, meaningful when `p_L = 1`.
    pub max_local_error: f64,
    pub min_ratio: f64,
    pub min_local: f64,
}

impl GridReport {
    fn empty() -> Self {
        GridReport {
            count: 0,
            min_remainder: None,
            max_local_error: 0.0,
            min_ratio: f64::INFINITY,
            min_local: f64::INFINITY,
        }
    }

    fn merge(self, o: GridReport) -> GridReport {
        GridReport {
            count: self.count + o.count,
            min_remainder: match (self.min_remainder, o.min_remainder) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
            max_local_error: self.max_local_error.max(o.max_local_error),
            min_ratio: self.min_ratio.min(o.min_ratio),
            min_local: self.min_local.min(o.min_local),
        }
    }

    /// The split is a valid decomposition on the grid.
    pub fn is_valid(&self, tol: f64) -> bool {
        match self.min_remainder {
            Some(m) => m >= -tol,
            None => self.max_local_error <= tol,
        }
    }
}

/// Product grid of settings: `polar` polar angles in `[0, π]` (poles
/// included) times `azimuth` azimuths in `[0, 2π)`, used for both parties.
#[derive(Clone, Copy, Debug)]
pub struct SettingGrid {
    pub polar: usize,
    pub azimuth: usize,
}

impl SettingGrid {
    pub fn new(polar: usize, azimuth: usize) -> Self {
        SettingGrid { polar: polar.max(2), azimuth: azimuth.max(1) }
    }

    pub fn points(&self) -> Vec<Setting> {
        let mut pts = Vec::with_capacity(self.polar * self.azimuth);
        for i in 0..self.polar {
            let t = std::f64::consts::PI * i as f64 / (self.polar - 1) as f64;
            for k in 0..self.azimuth {
                let p = 2.0 * std::f64::consts::PI * k as f64 / self.azimuth as f64;
                pts.push(Setting::from_angles(t, p));
            }
        }
        pts
    }
}

/// Grid used for the built-in post-condition checks.
const BUILTIN_GRID: SettingGrid = SettingGrid { polar: 20, azimuth: 20 };

fn debug_check(split: &Epr2Split) {
    if cfg!(debug_assertions) {
        let report = split.check(&BUILTIN_GRID);
        debug_assert!(report.is_valid(1e-9), "split fails its own grid check: {report:?}");
    }
}

/// `½F⁺(A_z)F⁺(B_z) + ½F⁻(A_z)F⁻(B_z)`, exact for `(|00⟩⟨00| + |11⟩⟨11|)/2`.
pub fn classical_zz_model() -> LhvModel {
    use ResponseFn as R;
    LhvModel {
        branches: vec![
            Branch { mu: 0.5, pa: R::half(Axis::Z, Sign::Plus), qb: R::half(Axis::Z, Sign::Plus) },
            Branch { mu: 0.5, pa: R::half(Axis::Z, Sign::Minus), qb: R::half(Axis::Z, Sign::Minus) },
        ],
    }
}

/// Single-branch product model `¼[1 + f(A_z)][1 + f(B_z)]`.
pub fn scarani_model(theta: f64) -> LhvModel {
    LhvModel::single(ResponseFn::ScaraniF { theta }, ResponseFn::ScaraniF { theta })
}

/// Pure state `cos θ|00⟩ + sin θ|11⟩`: `p_L = 1 − sin 2θ`.
pub fn model_pure(theta: f64) -> Result<Epr2Split> {
    check_theta(theta)?;
    let theta = theta.min(FRAC_PI_4);
    let split = Epr2Split {
        p_local: 1.0 - (2.0 * theta).sin(),
        model: scarani_model(theta),
        source: pure_theta(theta)?.projector(),
    };
    debug_check(&split);
    Ok(split)
}

/// Six-branch model exact for the Werner state at `x = 1/3`.
pub fn werner_third_model() -> LhvModel {
    use Axis::*;
    use ResponseFn as R;
    use Sign::*;
    let pairs = [
        (R::half(Z, Plus), R::half(Z, Plus)),
        (R::half(Z, Minus), R::half(Z, Minus)),
        (R::half(X, Plus), R::half(X, Plus)),
        (R::half(X, Minus), R::half(X, Minus)),
        (R::half(Y, Plus), R::half(Y, Minus)),
        (R::half(Y, Minus), R::half(Y, Plus)),
    ];
    LhvModel {
        branches: pairs.into_iter().map(|(pa, qb)| Branch { mu: 1.0 / 6.0, pa, qb }).collect(),
    }
}

/// Werner state: exact local model for `x ≤ 1/3`, weight `1 − (3x − 1)/2`
/// above.
pub fn model_werner(x: f64) -> Result<Epr2Split> {
    check_unit_interval("x", x)?;
    let third = werner_third_model();
    let (p_local, model) = if 3.0 * x < 1.0 {
        (1.0, LhvModel::mixture(&[(3.0 * x, &third), (1.0 - 3.0 * x, &LhvModel::uniform())])?)
    } else {
        (1.0 - (3.0 * x - 1.0) / 2.0, third)
    };
    let split = Epr2Split { p_local, model, source: werner(x)? };
    debug_check(&split);
    Ok(split)
}

/// Model exact for the generalized Werner state at `x_c = 1/(1 + 2s)`.
pub fn gen_werner_critical_model(theta: f64) -> Result<LhvModel> {
    use Axis::*;
    use ResponseFn as R;
    use Sign::*;
    let (s, c) = (2.0 * theta).sin_cos();
    let xc = 1.0 / (1.0 + 2.0 * s);
    let terms = [
        (1.0 + c, R::half(Z, Plus), R::half(Z, Plus)),
        (1.0 - c, R::half(Z, Minus), R::half(Z, Minus)),
        (s, R::half(X, Plus), R::half(X, Plus)),
        (s, R::half(X, Minus), R::half(X, Minus)),
        (s, R::half(Y, Plus), R::half(Y, Minus)),
        (s, R::half(Y, Minus), R::half(Y, Plus)),
    ];
    let branches = terms
        .into_iter()
        .map(|(w, pa, qb)| Branch { mu: 0.5 * xc * w, pa, qb })
        .filter(|b| b.mu > 0.0)
        .collect();
    LhvModel::new(branches)
}

/// Mixing coefficient `k = (1 − s)[(1 + 2s)x − 1] / (s[3 − (1 + 2s)x])`
/// between the pure-state model and the critical model.
pub fn gen_werner_k(x: f64, theta: f64) -> Option<f64> {
    let s = (2.0 * theta).sin();
    let denom = s * (3.0 - (1.0 + 2.0 * s) * x);
    (denom.abs() >= 1e-12).then(|| (1.0 - s) * ((1.0 + 2.0 * s) * x - 1.0) / denom)
}

/// Generalized Werner state `x|ψ(θ)⟩⟨ψ(θ)| + (1 − x)𝟏/4`.
pub fn model_gen_werner(x: f64, theta: f64) -> Result<Epr2Split> {
    check_unit_interval("x", x)?;
    check_theta(theta)?;
    let theta = theta.min(FRAC_PI_4);
    let s = (2.0 * theta).sin();
    let source = generalized_werner(x, theta)?;
    let critical = gen_werner_critical_model(theta)?;
    let scaled = (1.0 + 2.0 * s) * x;

    let (p_local, model) = if scaled <= 1.0 {
        let uniform = LhvModel::uniform();
        (1.0, LhvModel::mixture(&[(scaled, &critical), (1.0 - scaled, &uniform)])?)
    } else {
        let p_local = 1.0 - (scaled - 1.0) / 2.0;
        match gen_werner_k(x, theta) {
            // only x = 1, s = 1: the Bell state itself
            None => return model_pure(theta),
            Some(k) => {
                if !(-1e-12..=1.0 + 1e-12).contains(&k) {
                    return Err(Error::NumericalFailure { what: "mixing coefficient k", residual: k });
                }
                let k = k.clamp(0.0, 1.0);
                let pure = scarani_model(theta);
                (p_local, LhvModel::mixture(&[(k, &pure), (1.0 - k, &critical)])?)
            }
        }
    };
    // no built-in check here: remainder positivity above x_c is an empirical
    // claim, verified by the caller's grid and scatter checks
    Ok(Epr2Split { p_local, model, source })
}

fn tilted_quartet(vartheta: f64) -> LhvModel {
    use Axis::*;
    use Sign::*;
    let t = |axis, sign, z_sign| ResponseFn::Tilted { axis, sign, vartheta, z_sign };
    let pairs = [
        (t(X, Plus, Plus), t(X, Plus, Minus)),
        (t(X, Minus, Plus), t(X, Minus, Minus)),
        (t(Y, Plus, Plus), t(Y, Minus, Minus)),
        (t(Y, Minus, Plus), t(Y, Plus, Minus)),
    ];
    LhvModel {
        branches: pairs.into_iter().map(|(pa, qb)| Branch { mu: 0.25, pa, qb }).collect(),
    }
}

/// `γ|ψ⁺⟩⟨ψ⁺| + a|01⟩⟨01| + b|10⟩⟨10|`.
pub fn model_bd0(a: f64, b: f64, gamma: f64) -> Result<Epr2Split> {
    let params = BdParams::new(0.0, 0.0, a, b, gamma)?;
    let source = bell_diag(&params)?;
    let split = if a >= b {
        bd0_ordered(a, b, gamma, source)?
    } else {
        // swapping a and b is the bit flip on both qubits; the distribution
        // only sees it through A_z, B_z
        let swapped = bd0_ordered(b, a, gamma, source)?;
        Epr2Split {
            model: swapped.model.map_responses(ResponseFn::flip_z),
            ..swapped
        }
    };
    debug_check(&split);
    Ok(split)
}

fn bd0_ordered(a: f64, b: f64, gamma: f64, source: DensityMatrix) -> Result<Epr2Split> {
    let (ra, rb) = (a.sqrt(), b.sqrt());
    let boundary = 2.0 * ra * rb;
    if gamma > boundary {
        let sum = ra + rb;
        let vartheta = if sum > 0.0 { ((ra - rb) / sum).asin() } else { 0.0 };
        return Ok(Epr2Split {
            p_local: 1.0 - (gamma - boundary),
            model: tilted_quartet(vartheta),
            source,
        });
    }
    let critical = tilted_quartet((ra - rb).clamp(-1.0, 1.0).asin());
    if gamma == boundary {
        return Ok(Epr2Split { p_local: 1.0, model: critical, source });
    }
    let g = 2.0 * gamma / (gamma + boundary);
    let delta = (ra + rb - g) * (ra - rb) / (1.0 - g);
    if !(-1e-12..=1.0 + 1e-12).contains(&delta) {
        return Err(Error::NumericalFailure { what: "bd0 anticorrelation bias", residual: delta });
    }
    let delta = delta.clamp(0.0, 1.0);
    use Axis::Z;
    use Sign::*;
    let anti = LhvModel {
        branches: vec![
            Branch {
                mu: 0.5 * (1.0 + delta),
                pa: ResponseFn::half(Z, Plus),
                qb: ResponseFn::half(Z, Minus),
            },
            Branch {
                mu: 0.5 * (1.0 - delta),
                pa: ResponseFn::half(Z, Minus),
                qb: ResponseFn::half(Z, Plus),
            },
        ],
    };
    let model = LhvModel::mixture(&[(g, &critical), (1.0 - g, &anti)])?;
    Ok(Epr2Split { p_local: 1.0, model, source })
}

/// Bell state mixed with a diagonal state, via the `x = y = 0` core:
/// `P_L = [w(1 − C′)P_L(ρ′) + x F⁺F⁺ + y F⁻F⁻] / [w(1 − C′) + x + y]`
/// with `w = γ + a + b` and `ρ′` the renormalized core.
pub fn model_bd(p: &BdParams) -> Result<Epr2Split> {
    p.validate()?;
    let source = bell_diag(p)?;
    let zz = classical_zz_model();
    let weight = p.gamma + p.a + p.b;

    let (p_local, core_branches, core_local) = if weight > 0.0 {
        let core = model_bd0(p.a / weight, p.b / weight, p.gamma / weight)?;
        let core_local = weight * core.p_local;
        (1.0 - weight * (1.0 - core.p_local), core.model.branches, core_local)
    } else {
        (1.0, Vec::new(), 0.0)
    };
    let norm = core_local + p.x + p.y;
    let model = if norm <= 1e-15 {
        // all weight is nonlocal; the local part is never used
        LhvModel::new(core_branches)?
    } else {
        let scaled = core_branches
            .into_iter()
            .map(|b| Branch { mu: b.mu * core_local / norm, ..b })
            .chain([
                Branch { mu: p.x / norm, ..zz.branches[0].clone() },
                Branch { mu: p.y / norm, ..zz.branches[1].clone() },
            ])
            .filter(|b| b.mu > 0.0)
            .collect();
        LhvModel::new(scaled)?
    };
    let split = Epr2Split { p_local, model, source };
    debug_check(&split);
    Ok(split)
}

/// General state: Scarani models of the optimal-ensemble branches, each
/// seen through that branch's local unitaries. `p_L = 1 − C(ρ)`.
pub fn model_general(rho: &DensityMatrix) -> Result<Epr2Split> {
    let c = concurrence(rho);
    let decomposition = wootters_decomposition(rho)?;
    let forms: Vec<_> = decomposition
        .branches
        .iter()
        .map(|(t, phi)| (*t, schmidt_decompose(phi)))
        .collect();
    let theta = forms[0].1.theta;
    let spread = forms.iter().map(|(_, f)| (f.theta - theta).abs()).fold(0.0, f64::max);
    if spread > 1e-8 {
        return Err(Error::NumericalFailure { what: "branch Schmidt angles", residual: spread });
    }
    let total: f64 = forms.iter().map(|(t, _)| t).sum();
    let branches = forms
        .iter()
        .map(|(t, f)| Branch {
            mu: t / total,
            pa: ResponseFn::Rotated { u: f.ua, inner: Box::new(ResponseFn::ScaraniF { theta }) },
            qb: ResponseFn::Rotated { u: f.ub, inner: Box::new(ResponseFn::ScaraniF { theta }) },
        })
        .collect();
    Ok(Epr2Split { p_local: 1.0 - c, model: LhvModel::new(branches)?, source: *rho })
}

/// `P_NL` of a split at one pair of settings.
pub fn remainder(split: &Epr2Split, a: &Setting, b: &Setting) -> Result<f64> {
    split.remainder(a, b)
}

/// The `(|00⟩⟨00| + |11⟩⟨11|)/2` split.
pub fn model_classical_zz() -> Result<Epr2Split> {
    let source = bell_diag(&BdParams::new(0.5, 0.5, 0.0, 0.0, 0.0)?)?;
    Ok(Epr2Split { p_local: 1.0, model: classical_zz_model(), source })
}
