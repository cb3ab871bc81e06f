//! State mini-language:
//! `pure:theta=T` | `werner:x=X` | `gw:x=X,theta=T` |
//! `bd:x=..,y=..,a=..,b=..,gamma=..` | `file:PATH`.

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::localmodels::{
    model_bd, model_gen_werner, model_general, model_pure, model_werner, Epr2Split,
};
use crate::states::{bell_diag, generalized_werner, pure_theta, werner, BdParams, DensityMatrix};

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Pure { theta: f64 },
    Werner { x: f64 },
    GenWerner { x: f64, theta: f64 },
    Bd(BdParams),
    File(PathBuf),
}

fn parse_params(body: &str, allowed: &[&str]) -> Result<HashMap<String, f64>> {
    let mut out = HashMap::new();
    for part in body.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(Error::Parse(format!("unknown parameter {k:?}; expected {allowed:?}")));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{k}: {v:?} is not a number")))?;
        if out.insert(k.to_string(), v).is_some() {
            return Err(Error::Parse(format!("parameter {k:?} given twice")));
        }
    }
    Ok(out)
}

fn require(p: &HashMap<String, f64>, key: &str) -> Result<f64> {
    p.get(key).copied().ok_or_else(|| Error::Parse(format!("missing parameter {key:?}")))
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("state spec {s:?} has no ':'")))?;
        match kind.trim() {
            "pure" => {
                let p = parse_params(body, &["theta"])?;
                Ok(StateSpec::Pure { theta: require(&p, "theta")? })
            }
            "werner" => {
                let p = parse_params(body, &["x"])?;
                Ok(StateSpec::Werner { x: require(&p, "x")? })
            }
            "gw" => {
                let p = parse_params(body, &["x", "theta"])?;
                Ok(StateSpec::GenWerner { x: require(&p, "x")?, theta: require(&p, "theta")? })
            }
            "bd" => {
                let p = parse_params(body, &["x", "y", "a", "b", "gamma"])?;
                let get = |k| p.get(k).copied().unwrap_or(0.0);
                Ok(StateSpec::Bd(BdParams {
                    x: get("x"),
                    y: get("y"),
                    a: get("a"),
                    b: get("b"),
                    gamma: get("gamma"),
                }))
            }
            "file" if !body.is_empty() => Ok(StateSpec::File(PathBuf::from(body))),
            other => Err(Error::Parse(format!("unknown state family {other:?}"))),
        }
    }
}

impl StateSpec {
    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Pure { theta } => Ok(pure_theta(*theta)?.projector()),
            StateSpec::Werner { x } => werner(*x),
            StateSpec::GenWerner { x, theta } => generalized_werner(*x, *theta),
            StateSpec::Bd(p) => bell_diag(p),
            StateSpec::File(path) => DensityMatrix::load(path),
        }
    }

    /// The family's explicit construction, or the general one for matrices
    /// read from file.
    pub fn split(&self) -> Result<Epr2Split> {
        match self {
            StateSpec::Pure { theta } => model_pure(*theta),
            StateSpec::Werner { x } => model_werner(*x),
            StateSpec::GenWerner { x, theta } => model_gen_werner(*x, *theta),
            StateSpec::Bd(p) => model_bd(p),
            StateSpec::File(_) => model_general(&self.density_matrix()?),
        }
    }
}
