//! Weighted sup norms for the input and output spaces of the kernels.
//!
//! The weight w_ε(s) = 1 + (ε^{-1/3}|s|)^N, centered at r₀, confines mass
//! to an ε^{1/3} neighborhood of the critical radius. Forcings are
//! measured in Y (weight r² w_ε, allowing an r⁻² blow-up toward the
//! axis), outputs in X (weight max{1, r²} w_ε). Both norms are grid
//! suprema over the component maximum, the discrete analogue of the
//! L^∞-type spaces the contraction estimates live in.

use crate::greens::gridfn::GridFunction;

#[derive(Clone, Copy, Debug)]
pub struct WeightedNorms {
    /// Weight exponent N; the contraction estimates take N = 4.
    pub n_exp: i32,
    pub eps: f64,
    pub r0: f64,
}

impl WeightedNorms {
    pub fn new(eps: f64, r0: f64) -> Self {
        WeightedNorms { n_exp: 4, eps, r0 }
    }

    /// w_ε at displacement s from the center.
    pub fn weight(&self, s: f64) -> f64 {
        1.0 + (self.eps.powf(-1.0 / 3.0) * s.abs()).powi(self.n_exp)
    }

    pub fn x_weight(&self, r: f64) -> f64 {
        (r * r).max(1.0) * self.weight(r - self.r0)
    }

    pub fn y_weight(&self, r: f64) -> f64 {
        r * r * self.weight(r - self.r0)
    }

    fn sup(&self, f: &GridFunction, w: impl Fn(f64) -> f64) -> f64 {
        let mut sup = 0.0f64;
        for (i, &r) in f.grid.iter().enumerate() {
            let wr = w(r);
            for c in 0..f.comps {
                sup = sup.max(wr * f.at(i, c).norm());
            }
        }
        sup
    }

    pub fn x_norm(&self, f: &GridFunction) -> f64 {
        self.sup(f, |r| self.x_weight(r))
    }

    pub fn y_norm(&self, f: &GridFunction) -> f64 {
        self.sup(f, |r| self.y_weight(r))
    }
}
