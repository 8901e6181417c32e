//! Turning-point kernels for the zones around interior zeros of the
//! transport function.
//!
//! Where T crosses zero away from r₀ the marching cells lose their
//! spectral gap, so the operator is frozen differently: on a zone of
//! half-width ε^ω around a simple zero s_j the transport factor is
//! replaced by its linearization, giving ε u″ − iε^{−1/3} t_j (r−s_j) u = f
//! with t_j = M T′(s_j). In the stretched variable z = γ(r−s_j) with
//! γ = (i t_j)^{1/3} ε^{−4/9} this is the Airy equation, and the recessive
//! pair Ai(z), Ai(e^{2πi/3}z) builds a two-sided kernel that decays in both
//! directions. Their Wronskian is constant, so a single numerical
//! evaluation at the turning point normalizes the whole kernel.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::specfun::{airy_ai, airy_both, Scaled, ScaledSum};

use super::decomp::{LvZone, Region, RegionDecomposition};
use super::gridfn::{Basis, GridFunction};
use super::GreensError;

/// Output nodes whose stretched coordinate exceeds this are left at zero:
/// the kernel envelope at |z| = 40 sits over a hundred e-folds below its
/// turning-point value.
const STRETCH_CUTOFF: f64 = 40.0;

/// The fundamental pair at one stretched coordinate. `a1` is recessive to
/// the right of the turning point, `a2` to the left.
#[derive(Clone, Copy)]
struct AiPair {
    a1: Scaled,
    a2: Scaled,
}

fn ai_pair(gamma: Complex64, rot: Complex64, x: f64) -> Result<AiPair, GreensError> {
    let z = gamma * x;
    Ok(AiPair { a1: airy_ai(z)?.scaled(), a2: airy_ai(rot * z)?.scaled() })
}

/// Applies the two-sided Airy kernel with stretch factor γ about s_j,
///
///   u(r) = −(εγW)⁻¹ [ a₁(r) ∫_left^r a₂ f + a₂(r) ∫_r^right a₁ f ],
///
/// with a₁(r) = Ai(γ(r−s_j)), a₂(r) = Ai(e^{2πi/3}γ(r−s_j)) and W the
/// Wronskian of the rotated pair at the turning point. Both integrals are
/// cumulative trapezoids over the grid. Any γ off the π/6 ray family makes
/// the Airy evaluations fail, which surfaces a branch bug as an error
/// instead of a silently wrong kernel.
fn airy_kernel(
    data: &[Complex64],
    grid: &[f64],
    s_j: f64,
    gamma: Complex64,
    eps: f64,
) -> Result<Vec<Complex64>, GreensError> {
    let rot = Complex64::new(0.0, 2.0 * PI / 3.0).exp();
    let (a0, ap0) = airy_both(Complex64::new(0.0, 0.0))?;
    let wronskian = a0.exped() * ap0.exped() * (rot - 1.0);
    let pref = -1.0 / (eps * gamma * wronskian);

    let n = grid.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; n];
    let mut pairs: Vec<Option<AiPair>> = vec![None; n];

    // Integrand samples a₁f and a₂f, evaluated only on the data support.
    let mut g1 = vec![Scaled::ZERO; n];
    let mut g2 = vec![Scaled::ZERO; n];
    let mut any = false;
    for i in 0..n {
        if data[i] == zero {
            continue;
        }
        let pair = ai_pair(gamma, rot, grid[i] - s_j)?;
        pairs[i] = Some(pair);
        g1[i] = pair.a1.mul_complex(data[i]);
        g2[i] = pair.a2.mul_complex(data[i]);
        any = true;
    }
    if !any {
        return Ok(out);
    }

    // Forward cumulative trapezoid of a₂f and backward of a₁f.
    let mut inner = vec![Scaled::ZERO; n];
    let mut acc = ScaledSum::new();
    for j in 1..n {
        let h = Complex64::new(0.5 * (grid[j] - grid[j - 1]), 0.0);
        acc.add(g2[j - 1].mul_complex(h));
        acc.add(g2[j].mul_complex(h));
        inner[j] = acc.total();
    }
    let mut outer = vec![Scaled::ZERO; n];
    let mut acc = ScaledSum::new();
    for j in (0..n - 1).rev() {
        let h = Complex64::new(0.5 * (grid[j + 1] - grid[j]), 0.0);
        acc.add(g1[j + 1].mul_complex(h));
        acc.add(g1[j].mul_complex(h));
        outer[j] = acc.total();
    }

    for i in 0..n {
        let x = grid[i] - s_j;
        if gamma.norm() * x.abs() > STRETCH_CUTOFF {
            continue;
        }
        let need_a1 = !inner[i].is_zero();
        let need_a2 = !outer[i].is_zero();
        if !(need_a1 || need_a2) {
            continue;
        }
        if pairs[i].is_none() {
            pairs[i] = Some(ai_pair(gamma, rot, x)?);
        }
        let pair = pairs[i].unwrap();
        let mut t = zero;
        if need_a1 {
            t += pair.a1.mul(inner[i]).exped();
        }
        if need_a2 {
            t += pair.a2.mul(outer[i]).exped();
        }
        out[i] = pref * t;
    }
    Ok(out)
}

/// Kernel for one zone and either sign of the frozen slope. The positive
/// branch puts γ on the π/6 ray directly; the negative branch conjugates
/// the equation, solves with |t_j|, and conjugates back.
fn zone_apply(
    data: &[Complex64],
    grid: &[f64],
    zone: &LvZone,
    m_param: f64,
    eps: f64,
) -> Result<Vec<Complex64>, GreensError> {
    let t_j = m_param * zone.slope;
    if t_j.abs() < 1e-14 {
        return Err(GreensError::FrozenDegeneracy { r_j: zone.s, mt: t_j.abs() });
    }
    let gamma = |t: f64| {
        t.cbrt() * eps.powf(-4.0 / 9.0) * Complex64::new(0.0, PI / 6.0).exp()
    };
    if t_j > 0.0 {
        airy_kernel(data, grid, zone.s, gamma(t_j), eps)
    } else {
        let flipped: Vec<Complex64> = data.iter().map(|v| v.conj()).collect();
        let u = airy_kernel(&flipped, grid, zone.s, gamma(-t_j), eps)?;
        Ok(u.into_iter().map(|v| v.conj()).collect())
    }
}

/// Applies the summed turning-point Green's operators to a two-component
/// field in the diagonalized basis. The input must be supported inside the
/// linear-vanish zones; each zone contributes its own Airy kernel with the
/// slope frozen at its transport zero, applied per component.
pub fn glv_apply(
    f: &GridFunction,
    decomp: &RegionDecomposition,
) -> Result<GridFunction, GreensError> {
    if f.comps != 2 || f.basis != Basis::V {
        return Err(GreensError::Shape(format!(
            "turning-point kernel wants 2 components in the diagonalized basis, got {} in {:?}",
            f.comps, f.basis
        )));
    }
    let grid = f.grid.as_slice();
    let zero = Complex64::new(0.0, 0.0);
    let zone_of: Vec<Option<usize>> = grid
        .iter()
        .map(|&r| match decomp.region_of(r) {
            Some(Region::LinearVanish(j)) => Some(j),
            _ => None,
        })
        .collect();
    for i in 0..f.len() {
        let supported = (0..f.comps).any(|c| f.at(i, c) != zero);
        if supported && zone_of[i].is_none() {
            return Err(GreensError::Shape(format!(
                "input supported at r = {} outside every linear-vanish zone",
                grid[i]
            )));
        }
    }

    let mut out = GridFunction::zeros(f.grid.clone(), f.comps, f.basis);
    let mut data = vec![zero; grid.len()];
    for (j, zone) in decomp.lv.iter().enumerate() {
        for c in 0..f.comps {
            for i in 0..grid.len() {
                data[i] = if zone_of[i] == Some(j) { f.at(i, c) } else { zero };
            }
            let u = zone_apply(&data, grid, zone, decomp.m_param, decomp.eps)?;
            for (i, v) in u.into_iter().enumerate() {
                if v != zero {
                    let cur = out.at(i, c);
                    out.set(i, c, cur + v);
                }
            }
        }
    }
    Ok(out)
}
