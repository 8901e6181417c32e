//! Region decomposition of the radial domain for the glued kernels.
//!
//! The domain splits into a critical layer of half-width ε^γ around r₀,
//! regions marching toward the ends partitioned into cells of width ε^δ
//! with the transport coefficient frozen per cell, optional linear-vanish
//! zones of half-width ε^ω around simple zeros of T, and (on domains that
//! contain the axis) a near-zero region [0, ε^γ). The exponents must obey
//!
//!   2/9 < γ < 1/3,  γ < δ,  γ + δ < 2/3,  2/9 < ω < γ,
//!
//! which makes every frozen-coefficient error term vanish as ε → 0.

use crate::greens::GreensError;
use crate::profiles::{find_zero_set, TransportFunction, VelocityProfile};

pub const DEFAULT_GAMMA: f64 = 0.25;
pub const DEFAULT_DELTA: f64 = 0.30;
pub const DEFAULT_OMEGA: f64 = 0.24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    NearZero,
    TowardsZero,
    Critical,
    /// Index into [`RegionDecomposition::lv`].
    LinearVanish(usize),
    TowardsInfinity,
}

/// One frozen-coefficient cell [lo, hi) with T evaluated at the cell edge
/// nearest the critical layer.
#[derive(Clone, Copy, Debug)]
pub struct Cell {
    pub lo: f64,
    pub hi: f64,
    pub r_frozen: f64,
    pub t_frozen: f64,
}

/// A simple zero s of T with its slope and the surrounding zone.
#[derive(Clone, Copy, Debug)]
pub struct LvZone {
    pub s: f64,
    pub slope: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug)]
pub struct RegionDecomposition {
    pub gamma: f64,
    pub delta: f64,
    pub omega: f64,
    pub eps: f64,
    pub r0: f64,
    pub m_param: f64,
    /// Computational interval [lo, hi].
    pub span: (f64, f64),
    /// Limit of T at the origin when the domain contains it.
    pub tau: Option<f64>,
    /// Ordered intervals tiling `span`; half-open except the last.
    pub regions: Vec<(Region, f64, f64)>,
    /// Cells of the towards-zero side, ascending.
    pub p1: Vec<Cell>,
    /// Cells of the towards-infinity side, ascending.
    pub p3: Vec<Cell>,
    pub lv: Vec<LvZone>,
}

impl RegionDecomposition {
    /// The tagged interval containing r, if r is inside the span.
    pub fn region_of(&self, r: f64) -> Option<Region> {
        let (_, hi) = self.span;
        for (k, &(region, a, b)) in self.regions.iter().enumerate() {
            let last = k + 1 == self.regions.len();
            if r >= a && (r < b || (last && r <= hi)) {
                return Some(region);
            }
        }
        None
    }

    pub fn critical_bounds(&self) -> (f64, f64) {
        let e_g = self.eps.powf(self.gamma);
        (self.r0 - e_g, self.r0 + e_g)
    }
}

fn validate_exponents(gamma: f64, delta: f64, omega: f64) -> Result<(), GreensError> {
    let c = |cond: bool, msg: String| {
        if cond {
            Ok(())
        } else {
            Err(GreensError::ExponentConstraint(msg))
        }
    };
    c(gamma > 2.0 / 9.0, format!("gamma <= 2/9 (gamma = {gamma})"))?;
    c(gamma < 1.0 / 3.0, format!("gamma >= 1/3 (gamma = {gamma})"))?;
    c(gamma < delta, format!("gamma >= delta (gamma = {gamma}, delta = {delta})"))?;
    c(
        gamma + delta < 2.0 / 3.0,
        format!("gamma + delta >= 2/3 (gamma = {gamma}, delta = {delta})"),
    )?;
    c(omega > 2.0 / 9.0, format!("omega <= 2/9 (omega = {omega})"))?;
    c(omega < gamma, format!("omega >= gamma (omega = {omega}, gamma = {gamma})"))?;
    Ok(())
}

/// Cells covering [a, b), marching away from the critical layer starting
/// at the end nearest r₀, with a final partial cell at the far end. The
/// frozen transport value is taken at the near edge of each cell.
fn cells_for_segment(
    tf: &TransportFunction,
    m_param: f64,
    a: f64,
    b: f64,
    width: f64,
    r0: f64,
) -> Result<Vec<Cell>, GreensError> {
    let mut cells = Vec::new();
    let span = b - a;
    if span <= 1e-12 {
        return Ok(cells);
    }
    let n = (span / width).ceil() as usize;
    let outward = a > r0;
    for k in 0..n {
        let (lo, hi, r_frozen) = if outward {
            let lo = a + width * k as f64;
            (lo, (lo + width).min(b), lo)
        } else {
            let hi = b - width * k as f64;
            ((hi - width).max(a), hi, hi)
        };
        if hi - lo <= 1e-12 {
            continue;
        }
        let t_frozen = tf.value(r_frozen)?;
        if (m_param * t_frozen).abs() < 1e-14 {
            return Err(GreensError::FrozenDegeneracy { r_j: r_frozen, mt: (m_param * t_frozen).abs() });
        }
        cells.push(Cell { lo, hi, r_frozen, t_frozen });
    }
    cells.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap());
    Ok(cells)
}

/// Split the domain into tagged regions and frozen-coefficient partitions.
/// `exponents` overrides the default (γ, δ, ω) triple.
pub fn decompose(
    profile: &VelocityProfile,
    r0: f64,
    m_param: f64,
    eps: f64,
    exponents: Option<(f64, f64, f64)>,
) -> Result<RegionDecomposition, GreensError> {
    let (gamma, delta, omega) =
        exponents.unwrap_or((DEFAULT_GAMMA, DEFAULT_DELTA, DEFAULT_OMEGA));
    validate_exponents(gamma, delta, omega)?;

    let lo = profile.domain.left();
    let hi = profile
        .domain
        .right()
        .ok_or_else(|| GreensError::UnboundedDomain(profile.domain.to_string()))?;
    let e_g = eps.powf(gamma);
    let e_w = eps.powf(omega);
    let e_d = eps.powf(delta);
    let floor = if profile.domain.touches_origin() { e_g } else { lo };
    if r0 - e_g <= floor || r0 + e_g >= hi {
        return Err(GreensError::Shape(format!(
            "critical layer [{}, {}] leaves the usable domain [{floor}, {hi}]",
            r0 - e_g,
            r0 + e_g
        )));
    }

    let tf = TransportFunction::new(profile, r0)?;
    let tau = tf.tau;

    // Simple zeros of T away from r₀ become linear-vanish zones, clamped
    // to the domain and kept clear of the critical layer.
    let mut lv = Vec::new();
    for (s, slope) in find_zero_set(profile, r0, (lo, hi), 1e-12)? {
        let zone_lo = (s - e_w).max(lo);
        let zone_hi = (s + e_w).min(hi);
        if zone_hi > r0 - e_g && zone_lo < r0 + e_g {
            return Err(GreensError::Shape(format!(
                "linear-vanish zone around s = {s} overlaps the critical layer"
            )));
        }
        lv.push(LvZone { s, slope, lo: zone_lo, hi: zone_hi });
    }
    lv.sort_by(|x, y| x.s.partial_cmp(&y.s).unwrap());

    // Tile [lo, hi]: optional near-zero region, towards-zero segments
    // interleaved with any linear-vanish zones, the critical layer, then
    // the towards-infinity side the same way.
    let mut regions = Vec::new();
    let mut p1 = Vec::new();
    let mut p3 = Vec::new();
    let tz_start = if profile.domain.touches_origin() {
        regions.push((Region::NearZero, 0.0, e_g));
        e_g
    } else {
        lo
    };

    let side = |regions: &mut Vec<(Region, f64, f64)>,
                    cells: &mut Vec<Cell>,
                    a: f64,
                    b: f64,
                    tag: Region|
     -> Result<(), GreensError> {
        let mut cursor = a;
        for (j, z) in lv.iter().enumerate() {
            if z.lo >= b || z.hi <= a {
                continue;
            }
            if z.lo > cursor {
                regions.push((tag, cursor, z.lo));
                cells.extend(cells_for_segment(&tf, m_param, cursor, z.lo, e_d, r0)?);
            }
            regions.push((Region::LinearVanish(j), z.lo, z.hi));
            cursor = z.hi;
        }
        if b > cursor {
            regions.push((tag, cursor, b));
            cells.extend(cells_for_segment(&tf, m_param, cursor, b, e_d, r0)?);
        }
        Ok(())
    };

    side(&mut regions, &mut p1, tz_start, r0 - e_g, Region::TowardsZero)?;
    regions.push((Region::Critical, r0 - e_g, r0 + e_g));
    side(&mut regions, &mut p3, r0 + e_g, hi, Region::TowardsInfinity)?;
    p1.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap());
    p3.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap());

    Ok(RegionDecomposition {
        gamma,
        delta,
        omega,
        eps,
        r0,
        m_param,
        span: (if profile.domain.touches_origin() { 0.0 } else { lo }, hi),
        tau,
        regions,
        p1,
        p3,
        lv,
    })
}
