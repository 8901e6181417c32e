//! Velocity profiles, the transport function, and admissibility audits.
//!
//! A Ponomarenko-type flow u = r Ω(r) θ̂ + U(r) ẑ enters the solver only
//! through the scalar fields Ω, U and their first three derivatives. The
//! critical radius r₀ is where the pitch of the helical shear matches the
//! mode pitch; away from it the transport function
//!
//!   T(r) = Ω(r) − Ω(r₀) − ρ (U(r) − U(r₀)),   ρ = Ω'(r₀)/U'(r₀)
//!
//! measures the phase detuning. T vanishes quadratically at r₀ and may have
//! extra simple zeros elsewhere; those get their own boundary-layer
//! treatment downstream, so the audit locates them and checks their slopes.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("profile is not evaluable at r = {r}: {what}")]
    NotEvaluable { r: f64, what: String },
    #[error("r = {r} lies outside the profile domain {domain}")]
    OutsideDomain { r: f64, domain: String },
    #[error("transport zero at s = {s} is not simple: |T'(s)| = {slope:.3e} below threshold")]
    NonSimpleZero { s: f64, slope: f64 },
    #[error("degenerate critical radius: {0}")]
    DegenerateCriticalRadius(String),
    #[error("mode selection failed: {0}")]
    ModeSelection(String),
    #[error("custom profile: {0}")]
    CustomData(String),
    #[error("io error reading profile table: {0}")]
    Io(#[from] std::io::Error),
}

/// Radial interval the fields live on. `Exterior` and `FullLine` are
/// truncated at solve time by the decay rule in `discrete::RadialGrid`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainKind {
    FullLine,
    Disk { q: f64 },
    Annulus { p: f64, q: f64 },
    Exterior { p: f64 },
}

impl DomainKind {
    pub fn contains(&self, r: f64) -> bool {
        match *self {
            DomainKind::FullLine => r >= 0.0,
            DomainKind::Disk { q } => (0.0..=q).contains(&r),
            DomainKind::Annulus { p, q } => (p..=q).contains(&r),
            DomainKind::Exterior { p } => r >= p,
        }
    }

    /// Left endpoint of the interval (0 for disk and full line).
    pub fn left(&self) -> f64 {
        match *self {
            DomainKind::FullLine | DomainKind::Disk { .. } => 0.0,
            DomainKind::Annulus { p, .. } | DomainKind::Exterior { p } => p,
        }
    }

    /// Right endpoint if the interval is bounded.
    pub fn right(&self) -> Option<f64> {
        match *self {
            DomainKind::Disk { q } | DomainKind::Annulus { q, .. } => Some(q),
            _ => None,
        }
    }

    /// True when the closure of the interval contains the origin.
    pub fn touches_origin(&self) -> bool {
        matches!(self, DomainKind::FullLine | DomainKind::Disk { .. })
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DomainKind::FullLine => write!(f, "[0, inf)"),
            DomainKind::Disk { q } => write!(f, "[0, {q}]"),
            DomainKind::Annulus { p, q } => write!(f, "[{p}, {q}]"),
            DomainKind::Exterior { p } => write!(f, "[{p}, inf)"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ProfileKind {
    /// Ω = 1 − r, U = 1 − r².
    Simplified,
    /// Ω = e^{−a r²}, U = e^{−b r²} with a ≠ b.
    Gaussian { a: f64, b: f64 },
    /// The simplified fields cut off by a C³ taper: χ = 1 for r ≤ r_on,
    /// χ = 0 for r ≥ r_off, septic smoothstep in between.
    Compact { r_on: f64, r_off: f64 },
    /// Ω = a₁ r^{−2} + a₃, U = a₂ ln r + a₄ (swirl a₁/r + a₃ r in θ̂).
    TaylorCouette { a1: f64, a2: f64, a3: f64, a4: f64 },
    /// Tabulated (r, Ω, U) with natural cubic spline interpolation. The
    /// spline is C²; third derivatives are taken piecewise constant.
    Custom(Arc<SplineTable>),
}

#[derive(Clone, Debug)]
pub struct VelocityProfile {
    pub kind: ProfileKind,
    pub domain: DomainKind,
}

/// Septic smoothstep: 0 → 1 on [0,1] with three vanishing derivatives at
/// both ends, so the compact cutoff stays C³.
fn smoothstep7(t: f64) -> (f64, f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0, 0.0);
    }
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let s = ((( -20.0 * t + 70.0) * t - 84.0) * t + 35.0) * t4;
    let s1 = (((-140.0 * t + 420.0) * t - 420.0) * t + 140.0) * t3;
    let s2 = (((-840.0 * t + 2100.0) * t - 1680.0) * t + 420.0) * t2;
    let s3 = (((-4200.0 * t + 8400.0) * t - 5040.0) * t + 840.0) * t;
    (s, s1, s2, s3)
}

/// Value and first three derivatives of one scalar field at one radius.
#[derive(Clone, Copy, Debug, Default)]
pub struct Jet3 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite() && self.d3.is_finite()
    }
}

impl VelocityProfile {
    pub fn simplified(domain: DomainKind) -> Self {
        VelocityProfile { kind: ProfileKind::Simplified, domain }
    }

    pub fn gaussian(a: f64, b: f64, domain: DomainKind) -> Self {
        VelocityProfile { kind: ProfileKind::Gaussian { a, b }, domain }
    }

    pub fn compact(r_on: f64, r_off: f64, domain: DomainKind) -> Self {
        VelocityProfile { kind: ProfileKind::Compact { r_on, r_off }, domain }
    }

    pub fn taylor_couette(a1: f64, a2: f64, a3: f64, a4: f64, domain: DomainKind) -> Self {
        VelocityProfile { kind: ProfileKind::TaylorCouette { a1, a2, a3, a4 }, domain }
    }

    pub fn custom(table: SplineTable, domain: DomainKind) -> Self {
        VelocityProfile { kind: ProfileKind::Custom(Arc::new(table)), domain }
    }

    /// Read a `r,omega,uz` table (CSV with that header) into a spline
    /// profile.
    pub fn from_csv(path: &Path, domain: DomainKind) -> Result<Self, ProfileError> {
        let text = std::fs::read_to_string(path)?;
        let table = SplineTable::parse_csv(&text)?;
        Ok(Self::custom(table, domain))
    }

    pub fn omega_jet(&self, r: f64) -> Result<Jet3, ProfileError> {
        let jet = match &self.kind {
            ProfileKind::Simplified => Jet3 { v: 1.0 - r, d1: -1.0, d2: 0.0, d3: 0.0 },
            ProfileKind::Gaussian { a, .. } => gaussian_jet(*a, r),
            ProfileKind::Compact { r_on, r_off } => {
                let base = Jet3 { v: 1.0 - r, d1: -1.0, d2: 0.0, d3: 0.0 };
                cutoff_product(base, *r_on, *r_off, r)
            }
            ProfileKind::TaylorCouette { a1, a3, .. } => {
                if r <= 0.0 {
                    return Err(ProfileError::NotEvaluable {
                        r,
                        what: "Taylor-Couette swirl diverges at the axis".into(),
                    });
                }
                let r2 = r * r;
                Jet3 {
                    v: a1 / r2 + a3,
                    d1: -2.0 * a1 / (r2 * r),
                    d2: 6.0 * a1 / (r2 * r2),
                    d3: -24.0 * a1 / (r2 * r2 * r),
                }
            }
            ProfileKind::Custom(t) => t.omega_jet(r)?,
        };
        if !jet.is_finite() {
            return Err(ProfileError::NotEvaluable { r, what: "Omega jet not finite".into() });
        }
        Ok(jet)
    }

    pub fn uz_jet(&self, r: f64) -> Result<Jet3, ProfileError> {
        let jet = match &self.kind {
            ProfileKind::Simplified => {
                Jet3 { v: 1.0 - r * r, d1: -2.0 * r, d2: -2.0, d3: 0.0 }
            }
            ProfileKind::Gaussian { b, .. } => gaussian_jet(*b, r),
            ProfileKind::Compact { r_on, r_off } => {
                let base = Jet3 { v: 1.0 - r * r, d1: -2.0 * r, d2: -2.0, d3: 0.0 };
                cutoff_product(base, *r_on, *r_off, r)
            }
            ProfileKind::TaylorCouette { a2, a4, .. } => {
                if r <= 0.0 {
                    return Err(ProfileError::NotEvaluable {
                        r,
                        what: "Taylor-Couette axial field diverges at the axis".into(),
                    });
                }
                Jet3 {
                    v: a2 * r.ln() + a4,
                    d1: a2 / r,
                    d2: -a2 / (r * r),
                    d3: 2.0 * a2 / (r * r * r),
                }
            }
            ProfileKind::Custom(t) => t.uz_jet(r)?,
        };
        if !jet.is_finite() {
            return Err(ProfileError::NotEvaluable { r, what: "U jet not finite".into() });
        }
        Ok(jet)
    }

    pub fn omega(&self, r: f64) -> Result<f64, ProfileError> {
        Ok(self.omega_jet(r)?.v)
    }

    pub fn uz(&self, r: f64) -> Result<f64, ProfileError> {
        Ok(self.uz_jet(r)?.v)
    }
}

fn gaussian_jet(a: f64, r: f64) -> Jet3 {
    let e = (-a * r * r).exp();
    let ar = a * r;
    Jet3 {
        v: e,
        d1: -2.0 * ar * e,
        d2: (4.0 * ar * ar - 2.0 * a) * e,
        d3: (12.0 * a * ar - 8.0 * ar * ar * ar) * e,
    }
}

/// Leibniz product of a base jet with the cutoff χ(r).
fn cutoff_product(base: Jet3, r_on: f64, r_off: f64, r: f64) -> Jet3 {
    let w = r_off - r_on;
    let (s, s1, s2, s3) = smoothstep7((r - r_on) / w);
    // chi = 1 - smoothstep; chain rule brings one 1/w per derivative.
    let c = 1.0 - s;
    let c1 = -s1 / w;
    let c2 = -s2 / (w * w);
    let c3 = -s3 / (w * w * w);
    Jet3 {
        v: base.v * c,
        d1: base.d1 * c + base.v * c1,
        d2: base.d2 * c + 2.0 * base.d1 * c1 + base.v * c2,
        d3: base.d3 * c + 3.0 * base.d2 * c1 + 3.0 * base.d1 * c2 + base.v * c3,
    }
}

// ---------------------------------------------------------------------------
// Natural cubic spline for tabulated profiles

#[derive(Clone, Debug)]
pub struct SplineTable {
    r: Vec<f64>,
    omega: Spline,
    uz: Spline,
}

#[derive(Clone, Debug)]
struct Spline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots (natural: zero at both ends).
    m: Vec<f64>,
}

impl Spline {
    fn fit(x: &[f64], y: &[f64]) -> Spline {
        let n = x.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for interior second derivatives, solved by
            // the Thomas algorithm (diagonally dominant, no pivoting needed).
            let mut sub = vec![0.0; n - 2];
            let mut diag = vec![0.0; n - 2];
            let mut sup = vec![0.0; n - 2];
            let mut rhs = vec![0.0; n - 2];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                sub[i - 1] = h0;
                diag[i - 1] = 2.0 * (h0 + h1);
                sup[i - 1] = h1;
                rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 1..n - 2 {
                let w = sub[i] / diag[i - 1];
                diag[i] -= w * sup[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[n - 2] = rhs[n - 3] / diag[n - 3];
            for i in (1..n - 2).rev() {
                m[i] = (rhs[i - 1] - sup[i - 1] * m[i + 1]) / diag[i - 1];
            }
        }
        Spline { x: x.to_vec(), y: y.to_vec(), m }
    }

    fn jet(&self, r: f64) -> Result<Jet3, ProfileError> {
        let n = self.x.len();
        if r < self.x[0] - 1e-12 || r > self.x[n - 1] + 1e-12 {
            return Err(ProfileError::OutsideDomain {
                r,
                domain: format!("[{}, {}] (table range)", self.x[0], self.x[n - 1]),
            });
        }
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - r) / h;
        let b = (r - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let v = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (self.y[i + 1] - self.y[i]) / h
            + ((3.0 * b * b - 1.0) * m1 - (3.0 * a * a - 1.0) * m0) * h / 6.0;
        let d2 = a * m0 + b * m1;
        let d3 = (m1 - m0) / h;
        Ok(Jet3 { v, d1, d2, d3 })
    }
}

impl SplineTable {
    pub fn parse_csv(text: &str) -> Result<SplineTable, ProfileError> {
        let mut lines = text.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, l)) if l.trim().is_empty() => continue,
                Some((_, l)) => break l.trim(),
                None => return Err(ProfileError::CustomData("empty table".into())),
            }
        };
        let cols: Vec<&str> = header.split(',').map(|c| c.trim()).collect();
        if cols != ["r", "omega", "uz"] {
            return Err(ProfileError::CustomData(format!(
                "expected header 'r,omega,uz', got '{header}'"
            )));
        }
        let mut r = Vec::new();
        let mut om = Vec::new();
        let mut uz = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').map(|c| c.trim()).collect();
            if parts.len() != 3 {
                return Err(ProfileError::CustomData(format!(
                    "line {}: expected 3 columns, got {}",
                    lineno + 1,
                    parts.len()
                )));
            }
            let parse = |s: &str| -> Result<f64, ProfileError> {
                s.parse::<f64>().map_err(|_| {
                    ProfileError::CustomData(format!("line {}: bad number '{s}'", lineno + 1))
                })
            };
            let (rv, ov, uv) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
            if !(rv.is_finite() && ov.is_finite() && uv.is_finite()) {
                return Err(ProfileError::CustomData(format!(
                    "line {}: non-finite entry",
                    lineno + 1
                )));
            }
            r.push(rv);
            om.push(ov);
            uz.push(uv);
        }
        if r.len() < 4 {
            return Err(ProfileError::CustomData(format!(
                "need at least 4 rows for a cubic spline, got {}",
                r.len()
            )));
        }
        if !r.windows(2).all(|w| w[0] < w[1]) {
            return Err(ProfileError::CustomData("r column must be strictly increasing".into()));
        }
        let omega = Spline::fit(&r, &om);
        let uz_s = Spline::fit(&r, &uz);
        Ok(SplineTable { r, omega, uz: uz_s })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.r[0], self.r[self.r.len() - 1])
    }

    fn omega_jet(&self, r: f64) -> Result<Jet3, ProfileError> {
        self.omega.jet(r)
    }

    fn uz_jet(&self, r: f64) -> Result<Jet3, ProfileError> {
        self.uz.jet(r)
    }
}

// ---------------------------------------------------------------------------
// Transport function

/// The detuning field T(r) = Ω(r) − Ω₀ − ρ (U(r) − U₀) anchored at r₀,
/// together with its extra simple zeros.
#[derive(Clone, Debug)]
pub struct TransportFunction {
    pub r0: f64,
    pub rho: f64,
    pub omega0: f64,
    pub u0: f64,
    /// Limit of T at the origin, when the domain closure contains it.
    pub tau: Option<f64>,
    /// Simple zeros away from r₀, each with the unscaled slope T'(s_j).
    pub zero_set: Vec<(f64, f64)>,
    profile: VelocityProfile,
}

impl TransportFunction {
    /// Build the transport data at r₀. The zero set is left empty; fill it
    /// with [`find_zero_set`] for the window of interest.
    pub fn new(profile: &VelocityProfile, r0: f64) -> Result<TransportFunction, ProfileError> {
        if !profile.domain.contains(r0) {
            return Err(ProfileError::OutsideDomain { r: r0, domain: profile.domain.to_string() });
        }
        let om = profile.omega_jet(r0)?;
        let uz = profile.uz_jet(r0)?;
        if uz.d1 == 0.0 || !uz.d1.is_finite() {
            return Err(ProfileError::DegenerateCriticalRadius(format!(
                "U'(r0) = {} at r0 = {r0}; the pitch ratio rho is undefined",
                uz.d1
            )));
        }
        let rho = om.d1 / uz.d1;
        let tau = if profile.domain.touches_origin() {
            let t0 = profile.omega(0.0)? - om.v - rho * (profile.uz(0.0)? - uz.v);
            Some(t0)
        } else {
            None
        };
        Ok(TransportFunction {
            r0,
            rho,
            omega0: om.v,
            u0: uz.v,
            tau,
            zero_set: Vec::new(),
            profile: profile.clone(),
        })
    }

    pub fn value(&self, r: f64) -> Result<f64, ProfileError> {
        let om = self.profile.omega(r)?;
        let uz = self.profile.uz(r)?;
        Ok(om - self.omega0 - self.rho * (uz - self.u0))
    }

    /// T together with T' and T'' at r.
    pub fn jet(&self, r: f64) -> Result<(f64, f64, f64), ProfileError> {
        let om = self.profile.omega_jet(r)?;
        let uz = self.profile.uz_jet(r)?;
        Ok((
            om.v - self.omega0 - self.rho * (uz.v - self.u0),
            om.d1 - self.rho * uz.d1,
            om.d2 - self.rho * uz.d2,
        ))
    }

    pub fn profile(&self) -> &VelocityProfile {
        &self.profile
    }
}

/// Evaluate T(r) for the profile anchored at r₀.
pub fn evaluate_transport(
    profile: &VelocityProfile,
    r0: f64,
    r: f64,
) -> Result<f64, ProfileError> {
    TransportFunction::new(profile, r0)?.value(r)
}

/// Locate the simple zeros of T on `window`, excluding the quadratic zero
/// at r₀ itself. Sign changes are bracketed on a dense scan (10⁴ samples per
/// unit length) and refined by bisection to `tol`.
pub fn find_zero_set(
    profile: &VelocityProfile,
    r0: f64,
    window: (f64, f64),
    tol: f64,
) -> Result<Vec<(f64, f64)>, ProfileError> {
    let tf = TransportFunction::new(profile, r0)?;
    let (lo, hi) = window;
    if !(hi > lo) || tol <= 0.0 {
        return Err(ProfileError::ModeSelection(format!(
            "bad zero-search window [{lo}, {hi}] or tol {tol}"
        )));
    }
    let len = hi - lo;
    let n = ((len * 1e4).ceil() as usize).clamp(1000, 2_000_000);
    let exclude = 1e-3 * len;
    let mut zeros = Vec::new();
    let mut prev_r = lo;
    let mut prev_v = tf.value(lo)?;
    // Slope scale for the simplicity threshold.
    let mut slope_scale: f64 = 1.0;
    for i in 1..=n {
        let r = lo + len * (i as f64) / (n as f64);
        let v = tf.value(r)?;
        let (_, d1, _) = tf.jet(r)?;
        slope_scale = slope_scale.max(d1.abs());
        let near_r0 = (prev_r - r0).abs() < exclude || (r - r0).abs() < exclude;
        if !near_r0 && prev_v != 0.0 && (prev_v.signum() != v.signum()) {
            let (mut a, mut b) = (prev_r, r);
            let mut fa = prev_v;
            while b - a > tol {
                let m = 0.5 * (a + b);
                let fm = tf.value(m)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fa.signum() == fm.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            let s = 0.5 * (a + b);
            let (_, slope, _) = tf.jet(s)?;
            zeros.push((s, slope));
        }
        prev_r = r;
        prev_v = v;
    }
    for &(s, slope) in &zeros {
        if slope.abs() <= 1e-8 * slope_scale.max(1.0) {
            return Err(ProfileError::NonSimpleZero { s, slope });
        }
    }
    Ok(zeros)
}

// ---------------------------------------------------------------------------
// Audit

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub h0_ok: bool,
    pub h1_ok: bool,
    pub h2_ok: bool,
    pub h3_ok: bool,
    /// Shear balance r₀ |d/dr log|Ω'/U'|| at r₀; must be < 4 for the layer
    /// constants to give a growing mode at small |M|.
    pub gilbert_ok: bool,
    pub log_deriv_value: f64,
    /// Open interval of |M| with positive leading growth rate.
    pub m_window: (f64, f64),
    pub zero_set: Vec<(f64, f64)>,
    pub diagnostics: Vec<String>,
}

/// Check the standing hypotheses on `window` and report the admissible
/// range of the scaled mode number.
pub fn audit(
    profile: &VelocityProfile,
    r0: f64,
    m_param: f64,
    window: (f64, f64),
) -> Result<AuditReport, ProfileError> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(ProfileError::ModeSelection(format!("bad audit window [{lo}, {hi}]")));
    }
    let tf = TransportFunction::new(profile, r0)?;
    let mut diagnostics = Vec::new();

    // H0: both fields C3-evaluable on the window (sampled).
    let n_samples = 400;
    let mut h0_ok = true;
    for i in 0..=n_samples {
        let r = lo + (hi - lo) * (i as f64) / (n_samples as f64);
        match (profile.omega_jet(r), profile.uz_jet(r)) {
            (Ok(_), Ok(_)) => {}
            (Err(e), _) | (_, Err(e)) => {
                h0_ok = false;
                diagnostics.push(format!("H0: {e}"));
                break;
            }
        }
    }

    // H1: T(r0) = 0 (by construction), T'(r0) = 0, T''(r0) != 0, and every
    // other zero on the window is simple.
    let (t0, t1, t2) = tf.jet(r0)?;
    let curv_scale = t2.abs().max(1.0);
    let mut h1_ok = t0.abs() <= 1e-10 * curv_scale
        && t1.abs() <= 1e-8 * curv_scale
        && t2.abs() > 1e-8;
    if !h1_ok {
        diagnostics.push(format!(
            "H1: at r0 = {r0}: T = {t0:.3e}, T' = {t1:.3e}, T'' = {t2:.3e}"
        ));
    }
    let zero_set = match find_zero_set(profile, r0, window, 1e-12 * (hi - lo)) {
        Ok(z) => z,
        Err(ProfileError::NonSimpleZero { s, slope }) => {
            h1_ok = false;
            diagnostics.push(format!("H1: non-simple transport zero at s = {s} (T' = {slope:.3e})"));
            Vec::new()
        }
        Err(e) => return Err(e),
    };

    // H2: relative-derivative control of T on the window tail, away from
    // the critical radius and the linear zeros.
    let margin = 0.05 * (hi - lo);
    let mut h2_value: f64 = 0.0;
    for i in 0..=n_samples {
        let r = lo + (hi - lo) * (i as f64) / (n_samples as f64);
        if (r - r0).abs() < margin {
            continue;
        }
        if zero_set.iter().any(|&(s, _)| (r - s).abs() < 0.4 * margin) {
            continue;
        }
        if let Ok((t, d1, d2)) = tf.jet(r) {
            if t != 0.0 {
                h2_value = h2_value.max(d1.abs().max(d2.abs()) / t.abs());
            }
        }
    }
    let h2_ok = h2_value.is_finite() && h2_value < 1e4;
    diagnostics.push(format!("H2: sup tail max(|T'|,|T''|)/|T| = {h2_value:.3e}"));

    // H3: only bites on unbounded domains; there the angular shear r Omega'
    // must be dominated by the transport growth at large radius.
    let h3_ok = match profile.domain {
        DomainKind::Annulus { .. } | DomainKind::Disk { .. } => {
            diagnostics.push("H3: bounded domain, vacuous".into());
            true
        }
        _ => {
            let mut ok = true;
            let mut last_ratio = f64::INFINITY;
            for j in 1..=8 {
                let r = hi + (hi - lo) * (j as f64);
                match (profile.omega_jet(r), tf.value(r)) {
                    (Ok(om), Ok(t)) => {
                        let ratio = (r * om.d1).abs() / (1.0 + t.abs());
                        if j == 8 && (ratio > 1.0 || ratio > last_ratio * 1.5) {
                            ok = false;
                        }
                        last_ratio = ratio;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            diagnostics.push(format!("H3: tail ratio |r Omega'|/(1+|T|) -> {last_ratio:.3e}"));
            ok
        }
    };

    // Shear balance at r0 and the |M| window where Re(mu*) > 0.
    let om = profile.omega_jet(r0)?;
    let uz = profile.uz_jet(r0)?;
    let log_deriv_value = r0 * (om.d2 / om.d1 - uz.d2 / uz.d1).abs();
    let gilbert_ok = log_deriv_value < 4.0;

    let g1 = om.d1.abs().sqrt() / r0.sqrt()
        - 0.5 * (om.d2 - tf.rho * uz.d2).abs().sqrt();
    let g2 = 1.0 / (r0 * r0) + tf.rho * tf.rho;
    let m_window = if g1 > 0.0 {
        // Re(mu*)(|M|) = |M|^{1/2} g1 - M^2 g2 changes sign once; bisect for
        // the root rather than trusting the closed form blindly.
        let re_mu = |m: f64| m.sqrt() * g1 - m * m * g2;
        let mut a = (g1 / g2).powf(2.0 / 3.0) * 0.5;
        let mut b = (g1 / g2).powf(2.0 / 3.0) * 2.0;
        debug_assert!(re_mu(a) > 0.0 && re_mu(b) < 0.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if re_mu(m) > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        (0.0, 0.5 * (a + b))
    } else {
        diagnostics.push("shear balance leaves no growing window (g1 <= 0)".into());
        (0.0, 0.0)
    };
    if m_param > 0.0 && (m_param <= m_window.0 || m_param >= m_window.1) {
        diagnostics.push(format!(
            "requested M = {m_param} outside the growing window (0, {:.6})",
            m_window.1
        ));
    }

    Ok(AuditReport {
        h0_ok,
        h1_ok,
        h2_ok,
        h3_ok,
        gilbert_ok,
        log_deriv_value,
        m_window,
        zero_set,
        diagnostics,
    })
}

// ---------------------------------------------------------------------------
// Integer mode selection

#[derive(Clone, Debug)]
pub struct ModeSelection {
    pub eps: f64,
    /// Effective scaled mode numbers after rounding: m = M ε^{-1/3} exactly.
    pub m_param: f64,
    pub k_param: f64,
    pub m: i64,
    pub k: i64,
    /// Critical radius perturbed so that k = -m Ω'(r₀)/U'(r₀) holds exactly.
    pub r0_adjusted: f64,
}

/// Round the scaled mode numbers to genuine integers (m, k), perturbing r₀
/// so the pitch resonance k U'(r₀) = -m Ω'(r₀) is exact.
pub fn select_integer_modes(
    profile: &VelocityProfile,
    r0: f64,
    m_param: f64,
    eps: f64,
) -> Result<ModeSelection, ProfileError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ProfileError::ModeSelection(format!("eps = {eps} not in (0, 1)")));
    }
    let e13 = eps.powf(1.0 / 3.0);
    let m = (m_param / e13).round().max(1.0);
    let m_tilde = m * e13;
    if (m_tilde - m_param).abs() > e13 * (1.0 + 1e-12) {
        return Err(ProfileError::ModeSelection(format!(
            "no integer m with |m eps^(1/3) - M| <= eps^(1/3) (M = {m_param}, eps = {eps})"
        )));
    }

    // rho(r) = Omega'/U'; we need an integer k near -m rho(r0), reachable by
    // moving r0 along the profile.
    let rho_at = |r: f64| -> Result<f64, ProfileError> {
        let om = profile.omega_jet(r)?;
        let uz = profile.uz_jet(r)?;
        if uz.d1 == 0.0 {
            return Err(ProfileError::DegenerateCriticalRadius(format!("U'({r}) = 0")));
        }
        Ok(om.d1 / uz.d1)
    };
    let k_real = -m * rho_at(r0)?;
    let mut candidates: Vec<i64> = vec![k_real.floor() as i64, k_real.ceil() as i64];
    candidates.dedup();
    candidates.retain(|&k| k != 0);
    if candidates.is_empty() {
        return Err(ProfileError::ModeSelection(format!(
            "both integer candidates around k = {k_real:.4} are zero"
        )));
    }

    // Search interval: the domain interior, stopping short of endpoints.
    let lo = profile.domain.left().max(1e-6 * r0.max(1.0)) + 1e-9;
    let hi = profile.domain.right().unwrap_or(r0 * 4.0) - 1e-9;
    let mut best: Option<(f64, i64)> = None;
    for &k in &candidates {
        // Find roots of g(r) = -m rho(r) - k by dense scan + bisection and
        // keep the one nearest the requested r0.
        let n = 4000;
        let mut prev_r = lo;
        let mut prev_g = match rho_at(lo) {
            Ok(rho) => -m * rho - k as f64,
            Err(_) => f64::NAN,
        };
        for i in 1..=n {
            let r = lo + (hi - lo) * (i as f64) / (n as f64);
            let g = match rho_at(r) {
                Ok(rho) => -m * rho - k as f64,
                Err(_) => f64::NAN,
            };
            if prev_g.is_finite() && g.is_finite() && prev_g.signum() != g.signum() {
                let (mut a, mut b, mut ga) = (prev_r, r, prev_g);
                for _ in 0..100 {
                    let mid = 0.5 * (a + b);
                    let gm = -m * rho_at(mid)? - k as f64;
                    if ga.signum() == gm.signum() {
                        a = mid;
                        ga = gm;
                    } else {
                        b = mid;
                    }
                }
                let root = 0.5 * (a + b);
                if best.map_or(true, |(r_best, _)| (root - r0).abs() < (r_best - r0).abs()) {
                    best = Some((root, k));
                }
            }
            prev_r = r;
            prev_g = g;
        }
    }
    let (r0_adjusted, k) = best.ok_or_else(|| {
        ProfileError::ModeSelection(format!(
            "no root of -m rho(r) = k found in [{lo:.4}, {hi:.4}] for k in {candidates:?}"
        ))
    })?;

    Ok(ModeSelection {
        eps,
        m_param: m_tilde,
        k_param: (k as f64) * e13,
        m: m as i64,
        k,
        r0_adjusted,
    })
}
