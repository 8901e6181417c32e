//! Closed-form layer constants and the predicted growth rate.
//!
//! At the critical radius the shifted modal operator reduces, in suitable
//! variables, to a Weber (parabolic cylinder) problem with quadratic
//! potential c₂ (r−r₀)² and a stretching offset. Its principal eigenvalue
//! gives the leading growth rate
//!
//!   μ⋆ = −M²(1/r₀² + ρ²) + √(−2iMΩ'(r₀)/r₀) − √c₂,
//!   c₂ = (iM/2)(Ω''(r₀) − ρ U''(r₀)),
//!
//! with both square roots on the Re > 0 branch, and λ⋆ = ε^{1/3} μ⋆. All of
//! that is ε-free; this module computes the constants once per (profile,
//! r₀, M) and hands them to the kernel and eigensolver layers.

use num_complex::Complex64;
use thiserror::Error;

use crate::profiles::{ProfileError, VelocityProfile};

#[derive(Debug, Error)]
pub enum GilbertError {
    #[error("degenerate curvature: c2 = 0 at r0 = {r0} (M = {m_param}); the quadratic layer reduction is invalid")]
    DegenerateCurvature { r0: f64, m_param: f64 },
    #[error("degenerate pitch: U'(r0) = 0 at r0 = {r0}")]
    DegeneratePitch { r0: f64 },
    #[error("degenerate shear: Omega'(r0) = 0 at r0 = {r0}")]
    DegenerateShear { r0: f64 },
    #[error("branch inconsistency: complex and real growth-rate routes differ by {delta:.3e}")]
    BranchChoice { delta: f64 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Principal square root pushed onto the Re > 0 branch; purely imaginary
/// ties resolve toward Im > 0.
pub fn sqrt_re_positive(w: Complex64) -> Complex64 {
    let s = w.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        -s
    } else {
        s
    }
}

/// Every scalar the layer theory produces at (profile, r₀, M). ε-free;
/// ε-dependent quantities are exposed as methods.
#[derive(Clone, Debug)]
pub struct GilbertData {
    pub r0: f64,
    pub m_param: f64,
    pub k_param: f64,
    pub rho: f64,
    /// α² = −2iM/(r₀³ Ω'(r₀)), Re α > 0. Relates the V and b bases.
    pub alpha: Complex64,
    pub c2: Complex64,
    pub c2_sqrt: Complex64,
    /// √(−2iM Ω'(r₀)/r₀), Re > 0: the stretching contribution to μ⋆.
    pub stretch_root: Complex64,
    pub mu_star: Complex64,
    /// Gaussian width constant ½|c₂|^{−1/2} of the layer eigenmode bounds.
    pub chi: f64,
    /// Profile data at r₀ reused downstream: values, first and second
    /// derivatives of Ω and U.
    pub omega0: f64,
    pub u0: f64,
    pub omega1: f64,
    pub u1: f64,
    pub omega2: f64,
    pub u2: f64,
}

impl GilbertData {
    /// λ⋆(ε) = ε^{1/3} μ⋆.
    pub fn lambda_star(&self, eps: f64) -> Complex64 {
        self.mu_star * eps.powf(1.0 / 3.0)
    }

    /// Weber index for the first V component at contour offset η.
    pub fn nu1(&self, eta: Complex64) -> Complex64 {
        -0.5 * eta / self.c2_sqrt
    }

    /// Weber index for the second V component (stretch moved to the other
    /// side): ν₂ = ν₁ − stretch_root/√c₂.
    pub fn nu2(&self, eta: Complex64) -> Complex64 {
        self.nu1(eta) - self.stretch_root / self.c2_sqrt
    }

    /// Higher Hermite-level eigenvalue μ_j = μ⋆ − 2j √c₂ (j = 0 recovers
    /// μ⋆). Documentation only; nothing downstream consumes j ≥ 1.
    pub fn mu_level(&self, j: u32) -> Complex64 {
        self.mu_star - 2.0 * (j as f64) * self.c2_sqrt
    }

    /// Leading eigenvalue of the no-stretching control operator (the
    /// coupling term rΩ' removed): μ_ns = −M²(1/r₀²+ρ²) − √c₂.
    pub fn mu_no_stretch(&self) -> Complex64 {
        self.mu_star - self.stretch_root
    }

    /// Phase shift between the computational (shifted) gauge and the lab
    /// gauge: λ_lab = λ_shifted − iε^{−1/3} M (Ω₀ − ρ U₀).
    pub fn gauge_shift(&self, eps: f64) -> Complex64 {
        Complex64::new(0.0, 1.0)
            * eps.powf(-1.0 / 3.0)
            * self.m_param
            * (self.omega0 - self.rho * self.u0)
    }

    /// Change of basis b = Q V: rows (b_r, b_θ), columns (V₁, V₂).
    pub fn q_matrix(&self, eps: f64) -> [[Complex64; 2]; 2] {
        let ae = self.alpha * eps.powf(1.0 / 3.0);
        [[-ae, ae], [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]]
    }

    pub fn q_inv(&self, eps: f64) -> [[Complex64; 2]; 2] {
        let ae = self.alpha * eps.powf(1.0 / 3.0);
        let half = Complex64::new(0.5, 0.0);
        [[-half / ae, half], [half / ae, half]]
    }

    /// The off-diagonal coupling constant of the near-origin reduction:
    /// κ = −2iM/α = α r₀³ Ω'(r₀).
    pub fn kappa(&self) -> Complex64 {
        self.alpha * self.r0.powi(3) * self.omega1
    }
}

/// Compute all layer constants. M must be nonzero and the profile
/// nondegenerate at r₀ (both shears nonvanishing, curvature c₂ ≠ 0).
pub fn gilbert_constants(
    profile: &VelocityProfile,
    r0: f64,
    m_param: f64,
) -> Result<GilbertData, GilbertError> {
    let om = profile.omega_jet(r0)?;
    let uz = profile.uz_jet(r0)?;
    if uz.d1 == 0.0 {
        return Err(GilbertError::DegeneratePitch { r0 });
    }
    if om.d1 == 0.0 {
        return Err(GilbertError::DegenerateShear { r0 });
    }
    let rho = om.d1 / uz.d1;
    let c2 = Complex64::new(0.0, 0.5 * m_param) * (om.d2 - rho * uz.d2);
    if c2.norm() == 0.0 {
        return Err(GilbertError::DegenerateCurvature { r0, m_param });
    }
    let c2_sqrt = sqrt_re_positive(c2);
    let stretch_root = sqrt_re_positive(Complex64::new(0.0, -2.0 * m_param * om.d1 / r0));
    let alpha = sqrt_re_positive(Complex64::new(0.0, -2.0 * m_param) / (r0.powi(3) * om.d1));
    let sigma = 1.0 / (r0 * r0) + rho * rho;
    let mu_star = -m_param * m_param * sigma + stretch_root - c2_sqrt;
    Ok(GilbertData {
        r0,
        m_param,
        k_param: -m_param * rho,
        rho,
        alpha,
        c2,
        c2_sqrt,
        stretch_root,
        mu_star,
        chi: 0.5 / c2.norm().sqrt(),
        omega0: om.v,
        u0: uz.v,
        omega1: om.d1,
        u1: uz.d1,
        omega2: om.d2,
        u2: uz.d2,
    })
}

/// μ⋆ from the complex formula, cross-checked against the independent
/// real-part route. A disagreement means a branch was chosen wrongly
/// somewhere, so it is an error rather than a warning.
pub fn growth_rate(gd: &GilbertData) -> Result<(Complex64, f64), GilbertError> {
    let m_abs = gd.m_param.abs();
    let re_route = m_abs.sqrt()
        * (gd.omega1.abs().sqrt() / gd.r0.sqrt()
            - 0.5 * (gd.omega2 - gd.rho * gd.u2).abs().sqrt())
        - m_abs * m_abs * (1.0 / (gd.r0 * gd.r0) + gd.rho * gd.rho);
    let delta = (gd.mu_star.re - re_route).abs();
    let scale = gd.mu_star.norm().max(1.0);
    if delta > 1e-10 * scale {
        return Err(GilbertError::BranchChoice { delta });
    }
    debug_assert!(delta <= 1e-12 * scale, "route disagreement {delta:.3e}");
    Ok((gd.mu_star, re_route))
}

/// The layer ansatz at one radius, in both bases.
#[derive(Clone, Copy, Debug)]
pub struct AnsatzValue {
    /// (V₁, V₂) = (Gaussian, 0).
    pub v: [Complex64; 2],
    /// (b_r, b_θ) = (−α ε^{1/3} V₁, V₁).
    pub b: [Complex64; 2],
}

/// Sample the asymptotic eigenmode f⋆(r) = (e^{−½ε^{−2/3}√c₂ (r−r₀)²}, 0).
pub fn ansatz_profile(gd: &GilbertData, eps: f64, r: f64) -> AnsatzValue {
    let x = r - gd.r0;
    let v1 = (-0.5 * eps.powf(-2.0 / 3.0) * gd.c2_sqrt * x * x).exp();
    AnsatzValue {
        v: [v1, Complex64::new(0.0, 0.0)],
        b: [-gd.alpha * eps.powf(1.0 / 3.0) * v1, v1],
    }
}
