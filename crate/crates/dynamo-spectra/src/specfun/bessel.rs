//! Modified Bessel functions I_ν(νz), K_ν(νz) for real order ν >= 1 and
//! argument on the arg = π/4 ray, the combination the axis kernel needs.
//!
//! Two paths joined at |νz| = 60, ν = 40:
//!   moderate   ascending series for I; Temme's series (|νz| <= 2) or a
//!              Steed continued fraction for K at the fractional order,
//!              then stable upward recurrence in the order;
//!   uniform    Olver's large-order expansions through s = 3, which get
//!              better exactly where the moderate path loses digits.
//!
//! I is never reconstructed from K through the Wronskian; the identity is
//! left free as an end-to-end check.

use super::{gamma::ln_gamma, gamma::rgamma, Scaled, ScaledSum, SpecFunError, SpecFunResult};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

const EULER_GAMMA: f64 = 0.5772156649015329;

#[derive(Clone, Copy, Debug)]
pub struct BesselIk {
    pub i: SpecFunResult,
    pub k: SpecFunResult,
    /// d/dw I_ν(w) at w = νz.
    pub i_prime: SpecFunResult,
    /// d/dw K_ν(w) at w = νz.
    pub k_prime: SpecFunResult,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scaled_exp(exponent: Complex64) -> Scaled {
    Scaled { val: c(0.0, exponent.im).exp(), log: exponent.re }
}

/// Ascending series for I_ν(w). The terms peak near e^{|w|} while the sum
/// is only e^{Re w}, so roughly 0.127|w| digits cancel on this ray; the
/// estimate tracks that.
fn i_series(nu: f64, w: Complex64) -> (Scaled, f64) {
    let q = w * w * 0.25;
    let mut term = c(1.0, 0.0);
    let mut sum = term;
    let mut max_mag = 1.0f64;
    for k in 0..400 {
        let kf = k as f64;
        term = term * q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        max_mag = max_mag.max(term.norm());
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    let ln_pref = nu * (w * 0.5).ln()
        - ln_gamma(c(nu + 1.0, 0.0)).expect("nu + 1 >= 2 is off the poles");
    let cancel = (max_mag / sum.norm()).max(1.0);
    (scaled_exp(ln_pref).mul_complex(sum), 1e-15 * cancel + 1e-14)
}

/// Temme's series for K_μ(w), K_{μ+1}(w) at the fractional order
/// |μ| <= 1/2, valid for |w| <= 2.
fn k_temme(mu: f64, w: Complex64) -> (Scaled, Scaled) {
    let x2 = w * 0.5;
    let mu2 = mu * mu;
    let d_ln = -x2.ln();
    let e = mu * d_ln;
    let fact = if mu.abs() < 1e-10 { 1.0 } else { PI * mu / (PI * mu).sin() };
    let fact2 = if e.norm() < 1e-10 { c(1.0, 0.0) } else { e.sinh() / e };
    let gampl = rgamma(c(1.0 + mu, 0.0)).re;
    let gammi = rgamma(c(1.0 - mu, 0.0)).re;
    let gam1 = if mu.abs() < 1e-8 { -EULER_GAMMA } else { (gammi - gampl) / (2.0 * mu) };
    let gam2 = 0.5 * (gammi + gampl);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d_ln);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut coef = c(1.0, 0.0);
    let w2q = x2 * x2;
    let mut sum1 = p;
    for i in 1..200 {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        coef = coef * w2q / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = coef * ff;
        sum += del;
        sum1 += coef * (p - fi * ff);
        if del.norm() < sum.norm() * 1e-17 {
            break;
        }
    }
    (Scaled::from_complex(sum), Scaled::from_complex(sum1 * 2.0 / w))
}

/// Steed's continued fraction CF2 for K_μ(w), K_{μ+1}(w), |w| > 2 with
/// Re w > 0. The e^{-w} factor rides in the log slot.
fn k_cf2(mu: f64, w: Complex64) -> (Scaled, Scaled) {
    let mu2 = mu * mu;
    let a1 = 0.25 - mu2;
    let mut b = 2.0 * (1.0 + w);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = delh;
    let mut q1 = c(0.0, 0.0);
    let mut q2 = c(1.0, 0.0);
    let mut q = c(a1, 0.0);
    let mut coef = c(a1, 0.0);
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..1000 {
        a -= 2.0 * (i - 1) as f64;
        coef = -a * coef / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += coef * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() <= s.norm() * 1e-16 {
            break;
        }
    }
    let h = a1 * h;
    let pref = (PI / (2.0 * w)).sqrt();
    let kmu = Scaled { val: pref * c(0.0, -w.im).exp() / s, log: -w.re }.renormed();
    let kmu1 = kmu.mul_complex((mu + 0.5 + w - h) / w);
    (kmu, kmu1)
}

/// K_{ν-1}, K_ν, K_{ν+1} by upward recurrence from the fractional order;
/// upward is the stable direction for K.
fn k_triplet(nu: f64, w: Complex64) -> (Scaled, Scaled, Scaled) {
    let nl = (nu + 0.5).floor() as usize;
    let mu = nu - nl as f64;
    let (kmu, kmu1) = if w.norm() <= 2.0 { k_temme(mu, w) } else { k_cf2(mu, w) };
    let mut log = kmu.log.max(kmu1.log);
    let mut below = kmu.exped_rel(log);
    let mut here = kmu1.exped_rel(log);
    for j in 1..nl {
        let next = below + 2.0 * (mu + j as f64) / w * here;
        below = here;
        here = next;
        let m = here.norm();
        if m > 1e120 {
            let l = m.ln();
            below /= m;
            here /= m;
            log += l;
        }
    }
    // Now below = K_{ν-1}, here = K_ν (nl >= 1 since ν >= 1).
    let above = below + 2.0 * nu / w * here;
    (
        Scaled { val: below, log }.renormed(),
        Scaled { val: here, log }.renormed(),
        Scaled { val: above, log }.renormed(),
    )
}

fn moderate(nu: f64, w: Complex64) -> BesselIk {
    let (i_val, est_i) = i_series(nu, w);
    let (i_up, est_up) = i_series(nu + 1.0, w);
    // I'_ν = I_{ν+1} + (ν/w) I_ν.
    let mut ip = ScaledSum::new();
    ip.add(i_up);
    ip.add(i_val.mul_complex(nu / w));
    let ip = ip.total();
    let ip_cancel = (i_up.log.max(i_val.log) - ip.log).exp().max(1.0);

    let (k_lo, k_mid, k_hi) = k_triplet(nu, w);
    let mut kp = ScaledSum::new();
    kp.add(k_lo.mul_complex(c(-0.5, 0.0)));
    kp.add(k_hi.mul_complex(c(-0.5, 0.0)));
    let kp = kp.total();
    let est_k = 1e-12;

    BesselIk {
        i: SpecFunResult { value: i_val.val, log_scale: i_val.log, est_error: est_i },
        k: SpecFunResult { value: k_mid.val, log_scale: k_mid.log, est_error: est_k },
        i_prime: SpecFunResult {
            value: ip.val,
            log_scale: ip.log,
            est_error: (est_i + est_up) * ip_cancel,
        },
        k_prime: SpecFunResult { value: kp.val, log_scale: kp.log, est_error: est_k },
    }
}

fn u_polys(t: Complex64) -> (Complex64, Complex64, Complex64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let u1 = (3.0 * t - 5.0 * t3) / 24.0;
    let u2 = (81.0 * t2 - 462.0 * t2 * t2 + 385.0 * t3 * t3) / 1152.0;
    let u3 = (30375.0 * t3 - 369603.0 * t3 * t2 + 765765.0 * t3 * t2 * t2
        - 425425.0 * t3 * t3 * t3)
        / 414720.0;
    (u1, u2, u3)
}

fn v_polys(t: Complex64) -> (Complex64, Complex64, Complex64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let v1 = (-9.0 * t + 7.0 * t3) / 24.0;
    let v2 = (-135.0 * t2 + 594.0 * t2 * t2 - 455.0 * t3 * t3) / 1152.0;
    let v3 = (-42525.0 * t3 + 451737.0 * t3 * t2 - 883575.0 * t3 * t2 * t2
        + 475475.0 * t3 * t3 * t3)
        / 414720.0;
    (v1, v2, v3)
}

/// Olver's uniform large-order expansions through s = 3.
fn olver(nu: f64, z: Complex64) -> BesselIk {
    let opz = 1.0 + z * z;
    let sq = opz.sqrt();
    let t = 1.0 / sq;
    let xi = sq + (z / (1.0 + sq)).ln();
    let (u1, u2, u3) = u_polys(t);
    let (v1, v2, v3) = v_polys(t);
    let inv = 1.0 / nu;
    let su_p = 1.0 + inv * (u1 + inv * (u2 + inv * u3));
    let su_m = 1.0 + inv * (-u1 + inv * (u2 - inv * u3));
    let sv_p = 1.0 + inv * (v1 + inv * (v2 + inv * v3));
    let sv_m = 1.0 + inv * (-v1 + inv * (v2 - inv * v3));
    let q4 = (0.25 * opz.ln()).exp();
    let root_i = 1.0 / (2.0 * PI * nu).sqrt();
    let root_k = (PI / (2.0 * nu)).sqrt();
    let grow = scaled_exp(nu * xi);
    let decay = scaled_exp(-nu * xi);
    let w = nu * z;
    let est = 1.6 / (nu * nu + 0.5 * w.norm_sqr()).powi(2);

    let pack = |s: Scaled| SpecFunResult { value: s.val, log_scale: s.log, est_error: est };
    BesselIk {
        i: pack(grow.mul_complex(root_i / q4 * su_p)),
        k: pack(decay.mul_complex(root_k / q4 * su_m)),
        i_prime: pack(grow.mul_complex(root_i * q4 / z * sv_p)),
        k_prime: pack(decay.mul_complex(-root_k * q4 / z * sv_m)),
    }
}

/// I_ν(νz) and K_ν(νz) with their w-derivatives, for ν >= 1 on the
/// arg z = π/4 ray.
pub fn bessel_ik_uniform(nu: f64, z: Complex64) -> Result<BesselIk, SpecFunError> {
    if !(nu >= 1.0) {
        return Err(SpecFunError::Domain(format!("order ν = {nu} below the ν >= 1 window")));
    }
    if z.norm() == 0.0 {
        return Err(SpecFunError::Domain("argument 0 on the π/4 ray".into()));
    }
    let off = z.arg() - FRAC_PI_4;
    if off.abs() > 1e-12 {
        return Err(SpecFunError::Domain(format!(
            "arg z = {} is off the π/4 ray by {off:e}",
            z.arg()
        )));
    }
    let w = nu * z;
    if w.norm() <= 60.0 && nu <= 40.0 {
        Ok(moderate(nu, w))
    } else {
        Ok(olver(nu, z))
    }
}
