//! Near-axis kernel: inverts the frozen Bessel operator on [0, ε^γ).
//!
//! Close to the axis the r⁻² terms dominate the operator and cannot be
//! frozen away. Conjugating the two-component system by P = [[1,1],[1,-1]]
//! leaves exactly one of the r⁻² couplings in place, and it lands below the
//! diagonal: the sum channel V₊ solves the scalar equation
//! ε(u″ + u′/r) − ε^{1/3}M²u/r² − iε^{-1/3}Mτ u = f on its own, while the
//! difference channel sees V₊ only through a κε^{1/3}/r² source term. In
//! the stretched variable √(iMτ) ε^{-2/3} r the scalar equation is a
//! modified Bessel equation of order ν = |M|ε^{-1/3}, so its kernel is
//! built from the I_ν/K_ν pair. That kernel regularizes: data allowed to
//! blow up like r⁻² comes back bounded at the axis, which is what lets the
//! glued operator act on the quadratically weighted data space at all.

use num_complex::Complex64;

use crate::gilbert::{sqrt_re_positive, GilbertData};
use crate::specfun::{bessel_ik_uniform, Scaled, ScaledSum};

use super::decomp::{Region, RegionDecomposition};
use super::gridfn::{Basis, GridFunction};
use super::GreensError;

/// Orders this close below 1 are rounded up instead of rejected; they only
/// arise from the floating-point evaluation of |M|ε^{-1/3} itself.
const ORDER_SLACK: f64 = 1e-9;

/// Modified Bessel pair at one radius, scaled to survive the layer's
/// e-fold counts.
#[derive(Clone, Copy)]
struct IkPair {
    i: Scaled,
    k: Scaled,
}

fn ik_at(nu: f64, sb: Complex64, r: f64) -> Result<IkPair, GreensError> {
    let ik = bessel_ik_uniform(nu, sb * (r / nu))?;
    Ok(IkPair { i: ik.i.scaled(), k: ik.k.scaled() })
}

/// Applies the scalar kernel for the positive branch Mτ > 0, where the
/// frozen coefficient √(iMτε^{-4/3}) sits on the π/4 ray. The solution is
///
///   u(r) = −ε⁻¹ [ K_ν(√b r) ∫₀^r s I_ν(√b s) f ds
///                 + I_ν(√b r) ∫_r^∞ s K_ν(√b s) f ds ],
///
/// regular at the axis and decaying past the data. Both integrals are
/// cumulative trapezoids against the grid data; I and K are only ever
/// evaluated where the matching cofactor integral is nonzero, so the
/// exponentially growing branch never meets a large radius.
fn scalar_apply_positive(
    data: &[Complex64],
    grid: &[f64],
    nu: f64,
    sb: Complex64,
    eps: f64,
) -> Result<Vec<Complex64>, GreensError> {
    let n = grid.len();
    let mut pairs: Vec<Option<IkPair>> = vec![None; n];
    let mut out = vec![Complex64::new(0.0, 0.0); n];

    // The s I f and s K f integrand samples, zero off the data support. The
    // s factor kills the axis node, so the pair is never needed at r = 0.
    let mut gi = vec![Scaled::ZERO; n];
    let mut gk = vec![Scaled::ZERO; n];
    let mut any = false;
    for i in 0..n {
        let sf = grid[i] * data[i];
        if sf == Complex64::new(0.0, 0.0) {
            continue;
        }
        let pair = ik_at(nu, sb, grid[i])?;
        pairs[i] = Some(pair);
        gi[i] = pair.i.mul_complex(sf);
        gk[i] = pair.k.mul_complex(sf);
        any = true;
    }
    if !any {
        return Ok(out);
    }

    // Forward cumulative trapezoid of s I f and backward of s K f.
    let mut inner = vec![Scaled::ZERO; n];
    let mut acc = ScaledSum::new();
    for j in 1..n {
        let h = Complex64::new(0.5 * (grid[j] - grid[j - 1]), 0.0);
        acc.add(gi[j - 1].mul_complex(h));
        acc.add(gi[j].mul_complex(h));
        inner[j] = acc.total();
    }
    let mut outer = vec![Scaled::ZERO; n];
    let mut acc = ScaledSum::new();
    for j in (0..n - 1).rev() {
        let h = Complex64::new(0.5 * (grid[j + 1] - grid[j]), 0.0);
        acc.add(gk[j + 1].mul_complex(h));
        acc.add(gk[j].mul_complex(h));
        outer[j] = acc.total();
    }

    for i in 0..n {
        if grid[i] == 0.0 {
            continue;
        }
        let need_k = !inner[i].is_zero();
        let need_i = !outer[i].is_zero();
        if !(need_k || need_i) {
            continue;
        }
        if pairs[i].is_none() {
            pairs[i] = Some(ik_at(nu, sb, grid[i])?);
        }
        let pair = pairs[i].unwrap();
        let mut t = Complex64::new(0.0, 0.0);
        if need_k {
            t += pair.k.mul(inner[i]).exped();
        }
        if need_i {
            t += pair.i.mul(outer[i]).exped();
        }
        out[i] = -t / eps;
    }
    Ok(out)
}

/// Scalar solve for either sign of Mτ. The negative branch conjugates the
/// equation, which flips the frozen coefficient back onto the π/4 ray.
fn scalar_solve(
    data: &[Complex64],
    grid: &[f64],
    nu: f64,
    m_tau: f64,
    eps: f64,
) -> Result<Vec<Complex64>, GreensError> {
    let sb = sqrt_re_positive(Complex64::new(0.0, m_tau.abs() * eps.powf(-4.0 / 3.0)));
    if m_tau > 0.0 {
        scalar_apply_positive(data, grid, nu, sb, eps)
    } else {
        let flipped: Vec<Complex64> = data.iter().map(|v| v.conj()).collect();
        let u = scalar_apply_positive(&flipped, grid, nu, sb, eps)?;
        Ok(u.into_iter().map(|v| v.conj()).collect())
    }
}

/// Applies the near-axis Green's operator to a two-component field in the
/// diagonalized basis. The input must be supported in the near-zero region.
/// The sum and difference channels are solved in sequence: first the
/// decoupled sum channel, then the difference channel with the off-diagonal
/// κε^{1/3}/r² source folded into its data, and the result is rotated back.
pub fn g0_apply(
    f: &GridFunction,
    decomp: &RegionDecomposition,
    gd: &GilbertData,
) -> Result<GridFunction, GreensError> {
    if f.comps != 2 {
        return Err(GreensError::Shape(format!(
            "near-axis kernel acts on 2 components, got {}",
            f.comps
        )));
    }
    if f.basis != Basis::V {
        return Err(GreensError::Shape("near-axis kernel expects the diagonalized basis".into()));
    }
    if (decomp.r0 - gd.r0).abs() > 1e-12 {
        return Err(GreensError::Shape(format!(
            "decomposition r0 = {} disagrees with layer data r0 = {}",
            decomp.r0, gd.r0
        )));
    }
    let tau = match decomp.tau {
        Some(t) if t.abs() > 1e-14 => t,
        other => return Err(GreensError::NearZeroDegeneracy { tau: other }),
    };

    let eps = decomp.eps;
    let mut nu = gd.m_param.abs() * eps.powf(-1.0 / 3.0);
    if nu < 1.0 {
        if nu > 1.0 - ORDER_SLACK {
            nu = 1.0;
        } else {
            return Err(GreensError::BesselOrderWindow { nu });
        }
    }

    let grid = f.grid.as_slice();
    let zero = Complex64::new(0.0, 0.0);
    for (i, &r) in grid.iter().enumerate() {
        if decomp.region_of(r) == Some(Region::NearZero) {
            continue;
        }
        for c in 0..2 {
            if f.at(i, c) != zero {
                return Err(GreensError::Shape(format!(
                    "near-axis kernel fed data outside [0, eps^gamma) at r = {r}"
                )));
            }
        }
    }

    let n = grid.len();
    let m_tau = gd.m_param * tau;
    let e13 = eps.powf(1.0 / 3.0);
    let kappa = gd.kappa();

    let plus: Vec<Complex64> = (0..n).map(|i| f.at(i, 0) + f.at(i, 1)).collect();
    let minus: Vec<Complex64> = (0..n).map(|i| f.at(i, 0) - f.at(i, 1)).collect();

    let v_plus = scalar_solve(&plus, grid, nu, m_tau, eps)?;

    // Fold the lower-triangular coupling into the difference channel's data.
    // v_plus vanishes at the axis node, where the r⁻² factor has no limit,
    // so that node keeps its bare data.
    let mut minus_src = minus;
    for i in 0..n {
        let r = grid[i];
        if r > 0.0 && v_plus[i] != zero {
            minus_src[i] += kappa * e13 / (r * r) * v_plus[i];
        }
    }
    let v_minus = scalar_solve(&minus_src, grid, nu, m_tau, eps)?;

    let mut out = GridFunction::zeros(f.grid.clone(), 2, Basis::V);
    let half = Complex64::new(0.5, 0.0);
    for i in 0..n {
        out.set(i, 0, half * (v_plus[i] + v_minus[i]));
        out.set(i, 1, half * (v_plus[i] - v_minus[i]));
    }
    Ok(out)
}
