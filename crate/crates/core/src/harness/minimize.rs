//! Minimization of `P_Q/P_L` over pairs of measurement settings: a
//! Fibonacci-lattice grid on each sphere, then coordinate-wise golden-section
//! refinement in spherical coordinates.

use rayon::prelude::*;

use crate::correlations::Setting;
use crate::error::{Error, Result};
use crate::localmodels::Epr2Split;

/// Below this `P_L` the ratio is taken as `+∞`.
pub const PL_FLOOR: f64 = 1e-12;

const GOLDEN_STEPS: usize = 48;

/// `n` nearly uniform points on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Setting> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            Setting::from_angles(z.clamp(-1.0, 1.0).acos(), golden_angle * i as f64)
        })
        .collect()
}

fn ratio(split: &Epr2Split, a: &Setting, b: &Setting) -> f64 {
    let l = split.local(a, b);
    if l < PL_FLOOR {
        return f64::INFINITY;
    }
    split.quantum(a, b) / l
}

fn to_angles(s: &Setting) -> (f64, f64) {
    (s.z().clamp(-1.0, 1.0).acos(), s.y().atan2(s.x()))
}

#[derive(Clone, Copy, Debug)]
pub struct RatioMinimum {
    pub value: f64,
    pub a: Setting,
    pub b: Setting,
    /// Best value on the grid, before refinement.
    pub grid_value: f64,
}

/// Scan of a split over all pairs of grid settings.
#[derive(Clone, Copy, Debug)]
pub struct GridScan {
    pub min_ratio: f64,
    pub argmin: Option<(Setting, Setting)>,
    /// `min P_NL`, `None` when `p_L = 1`.
    pub min_remainder: Option<f64>,
    pub max_local_error: f64,
}

pub fn grid_scan(split: &Epr2Split, points: &[Setting]) -> GridScan {
    let weight_one = split.p_local >= 1.0 - 1e-12;
    let per_a: Vec<(f64, usize, Option<f64>, f64)> = points
        .par_iter()
        .map(|a| {
            let mut best = (f64::INFINITY, usize::MAX);
            let mut min_nl: Option<f64> = None;
            let mut max_err = 0.0f64;
            for (j, b) in points.iter().enumerate() {
                let q = split.quantum(a, b);
                let l = split.local(a, b);
                if l >= PL_FLOOR && q / l < best.0 {
                    best = (q / l, j);
                }
                max_err = max_err.max((q - l).abs());
                if !weight_one {
                    let nl = (q - split.p_local * l) / (1.0 - split.p_local);
                    min_nl = Some(min_nl.map_or(nl, |m| m.min(nl)));
                }
            }
            (best.0, best.1, min_nl, max_err)
        })
        .collect();
    let mut scan = GridScan {
        min_ratio: f64::INFINITY,
        argmin: None,
        min_remainder: None,
        max_local_error: 0.0,
    };
    for (i, (value, j, nl, err)) in per_a.into_iter().enumerate() {
        if value < scan.min_ratio {
            scan.min_ratio = value;
            scan.argmin = Some((points[i], points[j]));
        }
        scan.min_remainder = match (scan.min_remainder, nl) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        scan.max_local_error = scan.max_local_error.max(err);
    }
    scan
}

fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_STEPS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimum of `P_Q/P_L` over setting pairs. Settings where `P_L` vanishes
/// are excluded (ratio `+∞`).
pub fn min_ratio(split: &Epr2Split, grid_density: usize, refine_iters: usize) -> Result<RatioMinimum> {
    let points = fibonacci_sphere(grid_density.max(2));
    let scan = grid_scan(split, &points);
    let (a0, b0) = scan.argmin.ok_or(Error::DegeneratePl)?;
    let grid_value = scan.min_ratio;

    let (ta, pa) = to_angles(&a0);
    let (tb, pb) = to_angles(&b0);
    let mut coords = [ta, pa, tb, pb];
    let mut best = grid_value;
    let eval = |c: &[f64; 4]| {
        ratio(split, &Setting::from_angles(c[0], c[1]), &Setting::from_angles(c[2], c[3]))
    };
    // bracket one lattice spacing on either side, halving every pass
    let mut half_width = 2.0 * (4.0 * std::f64::consts::PI / points.len() as f64).sqrt();
    for _ in 0..refine_iters {
        for d in 0..4 {
            let center = coords[d];
            let (x, fx) = golden_section(
                |t| {
                    let mut c = coords;
                    c[d] = t;
                    eval(&c)
                },
                center - half_width,
                center + half_width,
            );
            if fx < best {
                best = fx;
                coords[d] = x;
            }
        }
        half_width *= 0.5;
    }
    Ok(RatioMinimum {
        value: best,
        a: Setting::from_angles(coords[0], coords[1]),
        b: Setting::from_angles(coords[2], coords[3]),
        grid_value,
    })
}
