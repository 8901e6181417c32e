//! Marching-cell kernels for the regions between the layer and the ends.
//!
//! Away from r₀, the axis, and the transport zeros, the dominant balance is
//! ε u″ − i ε^{−1/3} M T(r) u = f with T order one. On each cell of the
//! partition the transport factor is frozen at the cell edge nearest r₀,
//! giving a constant-coefficient operator whose Green's function is the
//! two-sided exponential e^{−m_j ε^{−2/3}|r−s|} with m_j = √(iMT(r_j)),
//! Re m_j > 0. The integrals against piecewise-linear data have closed
//! forms, so the only discretization error is the linear interpolation of f
//! between grid nodes.

use num_complex::Complex64;

use crate::gilbert::sqrt_re_positive;

use super::decomp::{Cell, Region, RegionDecomposition};
use super::gridfn::{Basis, GridFunction};
use super::GreensError;

/// Segments whose nearest point sits deeper than this many e-foldings from
/// the evaluation radius contribute below f64 resolution and are skipped.
const EFOLD_CUTOFF: f64 = 45.0;

/// Switch radius between the power series and the closed forms for the
/// segment-integral helpers.
const SERIES_RADIUS: f64 = 0.3;

/// E₁(μ) = (1−e^{−μ})/μ = Σ (−μ)^k/(k+1)!.
pub(crate) fn e1_fn(mu: Complex64) -> Complex64 {
    if mu.norm() < SERIES_RADIUS {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..24u32 {
            let t = term / ((k + 1) as f64);
            sum += t;
            if t.norm() < 1e-18 {
                break;
            }
            term *= -mu / ((k + 1) as f64);
        }
        sum
    } else {
        (1.0 - (-mu).exp()) / mu
    }
}

/// G(μ) = (1−(1+μ)e^{−μ})/μ² = Σ (−μ)^k (k+1)/(k+2)!; this is ∫₀¹ t e^{−μt} dt.
pub(crate) fn g_fn(mu: Complex64) -> Complex64 {
    if mu.norm() < SERIES_RADIUS {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut fact = 2.0f64;
        for k in 0..24u32 {
            let t = term * ((k + 1) as f64) / fact;
            sum += t;
            if t.norm() < 1e-18 {
                break;
            }
            term *= -mu;
            fact *= (k + 3) as f64;
        }
        sum
    } else {
        (1.0 - (1.0 + mu) * (-mu).exp()) / (mu * mu)
    }
}

/// Exact integral of e^{−a_coef|r−s|} times the linear interpolant of
/// (fa, fb) over [sa, sb], for r outside or inside the segment.
fn segment_contrib(
    r: f64,
    sa: f64,
    sb: f64,
    fa: Complex64,
    fb: Complex64,
    a_coef: Complex64,
) -> Complex64 {
    let len = sb - sa;
    if len <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if sa >= r {
        let mu = a_coef * len;
        let d = sa - r;
        (-a_coef * d).exp() * len * (fa * e1_fn(mu) + (fb - fa) * g_fn(mu))
    } else if sb <= r {
        let mu = a_coef * len;
        let d = r - sb;
        (-a_coef * d).exp() * len * (fb * e1_fn(mu) + (fa - fb) * g_fn(mu))
    } else {
        let t = (r - sa) / len;
        let fr = fa + (fb - fa) * t;
        segment_contrib(r, sa, r, fa, fr, a_coef) + segment_contrib(r, r, sb, fr, fb, a_coef)
    }
}

fn cell_kernel(
    f: &GridFunction,
    cell: &Cell,
    m_param: f64,
    eps: f64,
    out: &mut GridFunction,
) {
    let m_j = sqrt_re_positive(Complex64::new(0.0, m_param * cell.t_frozen));
    let e3 = eps.cbrt();
    let a_coef = m_j / (e3 * e3);
    let pref = -1.0 / (2.0 * m_j * e3);
    let grid = &f.grid;
    let n = grid.len();

    for c in 0..f.comps {
        for i in 0..n {
            let r = grid[i];
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n.saturating_sub(1) {
                let (ga, gb) = (grid[j], grid[j + 1]);
                let lo = ga.max(cell.lo);
                let hi = gb.min(cell.hi);
                if hi - lo <= 1e-14 {
                    continue;
                }
                let dist = if r < lo {
                    lo - r
                } else if r > hi {
                    r - hi
                } else {
                    0.0
                };
                if a_coef.re * dist > EFOLD_CUTOFF {
                    continue;
                }
                let fa = f.at(j, c);
                let fb = f.at(j + 1, c);
                if fa.norm() == 0.0 && fb.norm() == 0.0 {
                    continue;
                }
                let ta = (lo - ga) / (gb - ga);
                let tb = (hi - ga) / (gb - ga);
                let va = fa + (fb - fa) * ta;
                let vb = fa + (fb - fa) * tb;
                acc += segment_contrib(r, lo, hi, va, vb, a_coef);
            }
            if acc.norm() != 0.0 {
                let cur = out.at(i, c);
                out.set(i, c, cur + pref * acc);
            }
        }
    }
}

/// Applies the summed frozen-cell Green's operators of one marching
/// direction. The input must be supported in that direction's region;
/// each cell contributes its own exponential kernel with the transport
/// factor frozen at the cell edge nearest r₀.
pub fn g13_apply(
    f: &GridFunction,
    decomp: &RegionDecomposition,
    direction: Region,
) -> Result<GridFunction, GreensError> {
    let cells = match direction {
        Region::TowardsZero => &decomp.p1,
        Region::TowardsInfinity => &decomp.p3,
        other => {
            return Err(GreensError::Shape(format!(
                "marching kernel direction must be a towards region, got {other:?}"
            )))
        }
    };
    if f.comps != 2 || f.basis != Basis::V {
        return Err(GreensError::Shape(format!(
            "marching kernel wants 2 components in the diagonalized basis, got {} in {:?}",
            f.comps, f.basis
        )));
    }
    for i in 0..f.len() {
        let supported = (0..f.comps).any(|c| f.at(i, c).norm() != 0.0);
        if supported && decomp.region_of(f.grid[i]) != Some(direction) {
            return Err(GreensError::Shape(format!(
                "input supported at r = {} outside the {direction:?} region",
                f.grid[i]
            )));
        }
    }

    let mut out = GridFunction::zeros(f.grid.clone(), f.comps, f.basis);
    for cell in cells {
        cell_kernel(f, cell, decomp.m_param, decomp.eps, &mut out);
    }
    Ok(out)
}
