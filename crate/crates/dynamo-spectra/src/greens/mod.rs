//! Glued approximate Green's functions and the resolvent built on them.
//!
//! The shifted modal operator is inverted region by region with frozen
//! coefficients: a parabolic-cylinder kernel on the critical layer around
//! r₀, two-sided exponential kernels on cells marching toward the ends, a
//! modified-Bessel kernel near the axis, and Airy kernels around simple
//! zeros of the transport function. Summing the pieces gives an approximate
//! inverse G^λ whose defect E = (L−λ)G^λ − Id contracts in the weighted
//! Y norm, so (L−λ)⁻¹ = G^λ Σ (−E)ⁿ converges with a computable residual
//! certificate. A contour integral of that resolvent yields the Riesz
//! projector onto the leading mode, and four homogeneous solutions built
//! the same way correct the boundary conditions on an annulus.
//!
//! Functions are sampled on a shared radial grid ([`GridFunction`]); the
//! kernel applications are pure quadrature passes over it.

mod decomp;
mod g0;
mod g13;
mod g2;
mod glv;
mod gridfn;
mod norms;

pub use decomp::{decompose, Cell, LvZone, Region, RegionDecomposition};
pub use g0::g0_apply;
pub use g13::g13_apply;
pub use g2::g2_apply;
pub use glv::glv_apply;
pub use gridfn::{greens_grid, Basis, GridFunction};
pub use norms::WeightedNorms;

use num_complex::Complex64;
use thiserror::Error;

use crate::profiles::ProfileError;
use crate::specfun::SpecFunError;

/// Simplified profile with a smooth lump added to U on [1.6, 2.2], big
/// enough that the transport function dips negative there and crosses
/// zero twice. Exercises the linear-vanish machinery, which none of the
/// closed-form presets reach.
#[cfg(test)]
pub(crate) fn lv_test_profile() -> crate::profiles::VelocityProfile {
    use std::fmt::Write;
    let mut csv = String::from("r,omega,uz\n");
    let n = 220;
    for i in 0..=n {
        let r = 0.25 + 2.25 * (i as f64) / (n as f64);
        let bump = 2.0 * (-((r - 1.9) / 0.15).powi(2)).exp();
        writeln!(csv, "{},{},{}", r, 1.0 - r, 1.0 - r * r + bump).unwrap();
    }
    let table = crate::profiles::SplineTable::parse_csv(&csv).unwrap();
    crate::profiles::VelocityProfile::custom(
        table,
        crate::profiles::DomainKind::Annulus { p: 0.25, q: 2.5 },
    )
}

#[derive(Debug, Error)]
pub enum GreensError {
    #[error("region exponent constraint violated: {0}")]
    ExponentConstraint(String),
    #[error("unbounded domain {0}; cap it (Annulus/Disk) before decomposing")]
    UnboundedDomain(String),
    #[error("frozen transport degenerate at knot r = {r_j}: |M T| = {mt:.3e} (decomposition bug or zero missed by the audit)")]
    FrozenDegeneracy { r_j: f64, mt: f64 },
    #[error("Wronskian pole: Weber index nu = {nu} is a non-negative integer; move lambda off the discrete spectrum")]
    WronskianPole { nu: Complex64 },
    #[error("lambda outside the layer window: Weber index nu = {nu} has |Re nu| > 2.5")]
    LambdaWindow { nu: Complex64 },
    #[error("near-zero kernel needs tau = lim T != 0 (got {tau:?})")]
    NearZeroDegeneracy { tau: Option<f64> },
    #[error("near-zero kernel needs Bessel order M eps^(-1/3) >= 1, got {nu:.3}; decrease eps or raise M")]
    BesselOrderWindow { nu: f64 },
    #[error("grid too coarse for the defect operator: h = {h:.3e} exceeds eps^(1/3)/10 = {need:.3e}")]
    Resolution { h: f64, need: f64 },
    #[error("Neumann series diverges: contraction ratio rho = {rho:.3} >= 1")]
    Divergence { rho: f64 },
    #[error("contour point lambda = {lambda} hit a divergent resolvent (rho = {rho:.3})")]
    ContourDivergence { lambda: Complex64, rho: f64 },
    #[error("boundary matrix degenerate: |det J| = {det:.3e}, scaled inverse norm {scaled_inv:.3e}")]
    BoundaryDegeneracy { det: f64, scaled_inv: f64 },
    #[error("grid function mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}
