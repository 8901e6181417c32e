//! Sampled radial functions and the working grid for kernel quadrature.

use std::sync::Arc;

use num_complex::Complex64;

use crate::gilbert::GilbertData;
use crate::greens::decomp::{Region, RegionDecomposition};
use crate::greens::GreensError;

/// Which unknowns the components mean. The layer analysis runs in the
/// diagonalizing V variables; the physical field is b = Q V per node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// (V₁, V₂), always two components.
    V,
    /// (b_r, b_θ) or (b_r, b_θ, b_z).
    BPolar,
}

/// Complex vector field sampled on a strictly increasing radial grid,
/// node-major: `values[i * comps + c]`.
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub grid: Arc<Vec<f64>>,
    pub comps: usize,
    pub basis: Basis,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: Arc<Vec<f64>>, comps: usize, basis: Basis) -> Self {
        let n = grid.len();
        GridFunction { grid, comps, basis, values: vec![Complex64::new(0.0, 0.0); n * comps] }
    }

    /// Sample `f(r, component)` on the grid.
    pub fn from_fn(
        grid: Arc<Vec<f64>>,
        comps: usize,
        basis: Basis,
        mut f: impl FnMut(f64, usize) -> Complex64,
    ) -> Self {
        let mut out = Self::zeros(grid, comps, basis);
        for i in 0..out.grid.len() {
            let r = out.grid[i];
            for c in 0..comps {
                out.values[i * comps + c] = f(r, c);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn at(&self, i: usize, c: usize) -> Complex64 {
        self.values[i * self.comps + c]
    }

    pub fn set(&mut self, i: usize, c: usize, v: Complex64) {
        self.values[i * self.comps + c] = v;
    }

    /// Same grid, same shape. Kernel code calls this before mixing two
    /// functions; a mismatch is always a caller bug.
    pub fn check_compatible(&self, other: &GridFunction) -> Result<(), GreensError> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && self.grid != other.grid {
            return Err(GreensError::Shape("grids differ".into()));
        }
        if self.comps != other.comps || self.basis != other.basis {
            return Err(GreensError::Shape(format!(
                "component layout differs: {} x {:?} vs {} x {:?}",
                self.comps, self.basis, other.comps, other.basis
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, a: Complex64) -> GridFunction {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= a;
        }
        out
    }

    /// self + a·other.
    pub fn axpy(&self, a: Complex64, other: &GridFunction) -> Result<GridFunction, GreensError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (v, w) in out.values.iter_mut().zip(&other.values) {
            *v += a * w;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction, GreensError> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Zero out every node outside `region`; kernel inputs are restricted
    /// this way so the glued operator can split by indicators exactly.
    pub fn restricted(&self, decomp: &RegionDecomposition, region: Region) -> GridFunction {
        let mut out = self.clone();
        for (i, &r) in self.grid.iter().enumerate() {
            if decomp.region_of(r) != Some(region) {
                for c in 0..self.comps {
                    out.values[i * self.comps + c] = Complex64::new(0.0, 0.0);
                }
            }
        }
        out
    }

    /// V → b via b = Q V. Two-component only.
    pub fn to_b(&self, gd: &GilbertData, eps: f64) -> Result<GridFunction, GreensError> {
        if self.basis != Basis::V {
            return Err(GreensError::Shape("to_b needs a V-basis function".into()));
        }
        let q = gd.q_matrix(eps);
        let mut out = self.clone();
        out.basis = Basis::BPolar;
        for i in 0..self.len() {
            let v1 = self.at(i, 0);
            let v2 = self.at(i, 1);
            out.set(i, 0, q[0][0] * v1 + q[0][1] * v2);
            out.set(i, 1, q[1][0] * v1 + q[1][1] * v2);
        }
        Ok(out)
    }

    /// b → V via V = Q⁻¹ b. Two-component only.
    pub fn to_v(&self, gd: &GilbertData, eps: f64) -> Result<GridFunction, GreensError> {
        if self.basis != Basis::BPolar || self.comps != 2 {
            return Err(GreensError::Shape("to_v needs a two-component b-basis function".into()));
        }
        let qi = gd.q_inv(eps);
        let mut out = self.clone();
        out.basis = Basis::V;
        for i in 0..self.len() {
            let br = self.at(i, 0);
            let bt = self.at(i, 1);
            out.set(i, 0, qi[0][0] * br + qi[0][1] * bt);
            out.set(i, 1, qi[1][0] * br + qi[1][1] * bt);
        }
        Ok(out)
    }
}

/// Validate a grid for [`GridFunction`] use: finite, strictly increasing.
pub fn check_grid(grid: &[f64]) -> Result<(), GreensError> {
    if grid.is_empty() {
        return Err(GreensError::Shape("empty grid".into()));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(GreensError::Shape(format!(
                "grid not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Build the quadrature grid for Green's work. Three step tiers keyed to
/// the distance from r₀: the critical layer resolves the Gaussian mode
/// width ε^{1/3}, a surrounding buffer resolves kernel tails leaking out
/// of it, and the rest resolves the frozen-coefficient cells. Region
/// edges, partition knots, and linear-vanish centers are grid nodes so
/// indicator restrictions and cell integrals see exact boundaries.
pub fn greens_grid(decomp: &RegionDecomposition, extra_nodes: &[f64]) -> Arc<Vec<f64>> {
    let eps = decomp.eps;
    let r0 = decomp.r0;
    let e13 = eps.powf(1.0 / 3.0);
    let h_crit = (10.0 * eps.powf(2.0 / 3.0)).min(e13 / 40.0);
    let h_layer = (eps.powf(decomp.delta) / 8.0).min(e13 / 20.0);
    let h_far = eps.powf(decomp.delta) / 8.0;
    let (lo, hi) = decomp.span;

    let mut anchors: Vec<f64> = vec![lo, hi];
    for &(_, a, b) in &decomp.regions {
        anchors.push(a);
        anchors.push(b);
    }
    for cell in decomp.p1.iter().chain(decomp.p3.iter()) {
        anchors.push(cell.lo);
        anchors.push(cell.hi);
    }
    for z in &decomp.lv {
        anchors.push(z.s);
    }
    anchors.extend(extra_nodes.iter().copied().filter(|r| (lo..=hi).contains(r)));
    anchors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    anchors.dedup_by(|a, b| (*a - *b).abs() < 1e-13);

    let step_at = |r: f64| {
        // Inside a linear-vanish zone the kernel varies on the Airy scale
        // ε^{4/9}/|M T'|^{1/3}, which can undercut the far tier.
        for z in &decomp.lv {
            if r >= z.lo && r <= z.hi {
                let t = (decomp.m_param * z.slope).abs().max(1e-14);
                return h_far.min(eps.powf(4.0 / 9.0) / (6.0 * t.cbrt()));
            }
        }
        let d = (r - r0).abs();
        if d <= eps.powf(decomp.gamma) {
            h_crit
        } else if d <= 10.0 * e13 {
            h_layer
        } else {
            h_far
        }
    };

    let mut grid = Vec::new();
    for pair in anchors.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        grid.push(a);
        // The finer of the endpoint tiers governs the whole gap, so tier
        // boundaries never leave an under-resolved span behind.
        let h = step_at(a).min(step_at(0.5 * (a + b))).min(step_at(b));
        let n = ((b - a) / h).ceil() as usize;
        for k in 1..n {
            grid.push(a + (b - a) * (k as f64) / (n as f64));
        }
    }
    grid.push(hi);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    Arc::new(grid)
}
