//! Complex special functions for the frozen-coefficient kernels: Gamma,
//! parabolic cylinder D_ν (plus Hermite H_ν), modified Bessel I_ν/K_ν on the
//! arg = π/4 ray with uniform large-order asymptotics, and Airy Ai on the
//! ±π/6, ±5π/6 rays.
//!
//! Layer variables reach e^{±ε^{-2/3}(r-r₀)²} magnitudes, far past f64
//! range, so every value is carried as mantissa · e^{log_scale} and only the
//! ratios and products the Green's formulas actually need get exponentiated.
//! Each evaluator also reports an honest relative-error estimate from its
//! truncation and cancellation bookkeeping.

mod airy;
mod bessel;
mod gamma;
mod pcf;

pub use airy::{airy_ai, airy_ai_prime, airy_both};
pub use bessel::{bessel_ik_uniform, BesselIk};
pub use gamma::{gamma_fn, ln_gamma, rgamma};
pub use pcf::{hermite_h, parabolic_cylinder_d, PcfValue};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecFunError {
    #[error("gamma pole at z = {nearest} (non-positive integer)")]
    GammaPole { nearest: i64 },
    #[error("argument outside implemented sector: {0}")]
    Domain(String),
}

/// A special-function value as mantissa · e^{log_scale} with a relative
/// error estimate.
#[derive(Clone, Copy, Debug)]
pub struct SpecFunResult {
    pub value: Complex64,
    pub log_scale: f64,
    pub est_error: f64,
}

impl SpecFunResult {
    pub fn scaled(&self) -> Scaled {
        Scaled { val: self.value, log: self.log_scale }
    }

    /// Exponentiate the scale; under/overflows saturate to 0/inf.
    pub fn exped(&self) -> Complex64 {
        self.scaled().exped()
    }
}

/// Mantissa/exponent pair for overflow-safe products along kernel rows.
#[derive(Clone, Copy, Debug)]
pub struct Scaled {
    pub val: Complex64,
    pub log: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { val: Complex64::new(0.0, 0.0), log: 0.0 };

    pub fn one() -> Scaled {
        Scaled { val: Complex64::new(1.0, 0.0), log: 0.0 }
    }

    pub fn from_complex(v: Complex64) -> Scaled {
        Scaled { val: v, log: 0.0 }.renormed()
    }

    pub fn is_zero(&self) -> bool {
        self.val == Complex64::new(0.0, 0.0)
    }

    /// Pull the mantissa magnitude back toward 1 after products.
    pub fn renormed(self) -> Scaled {
        let n = self.val.norm();
        if n == 0.0 || !n.is_finite() {
            return Scaled { val: self.val, log: if n == 0.0 { 0.0 } else { self.log } };
        }
        let l = n.ln();
        Scaled { val: self.val / n, log: self.log + l }
    }

    pub fn mul(self, other: Scaled) -> Scaled {
        Scaled { val: self.val * other.val, log: self.log + other.log }.renormed()
    }

    pub fn mul_complex(self, c: Complex64) -> Scaled {
        Scaled { val: self.val * c, log: self.log }.renormed()
    }

    pub fn div(self, other: Scaled) -> Scaled {
        Scaled { val: self.val / other.val, log: self.log - other.log }.renormed()
    }

    pub fn neg(self) -> Scaled {
        Scaled { val: -self.val, log: self.log }
    }

    pub fn exped(self) -> Complex64 {
        if self.is_zero() || self.log < -745.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.val * self.log.exp()
    }

    /// Exponentiate relative to a common base exponent.
    pub fn exped_rel(&self, base: f64) -> Complex64 {
        self.val * (self.log - base).exp()
    }
}

/// Running sum of scaled terms, kept at the largest exponent seen.
#[derive(Clone, Copy, Debug)]
pub struct ScaledSum {
    acc: Complex64,
    log: f64,
    empty: bool,
}

impl Default for ScaledSum {
    fn default() -> Self {
        Self::new()
    }
}

impl ScaledSum {
    pub fn new() -> ScaledSum {
        ScaledSum { acc: Complex64::new(0.0, 0.0), log: 0.0, empty: true }
    }

    pub fn add(&mut self, term: Scaled) {
        if term.is_zero() {
            return;
        }
        if self.empty {
            self.acc = term.val;
            self.log = term.log;
            self.empty = false;
            return;
        }
        if term.log > self.log {
            // Rebase onto the larger exponent so the mantissa stays sane.
            let shift = (self.log - term.log).exp();
            self.acc = self.acc * shift + term.val;
            self.log = term.log;
        } else {
            let shift = (term.log - self.log).exp();
            self.acc += term.val * shift;
        }
    }

    pub fn total(&self) -> Scaled {
        if self.empty {
            Scaled::ZERO
        } else {
            Scaled { val: self.acc, log: self.log }.renormed()
        }
    }
}
