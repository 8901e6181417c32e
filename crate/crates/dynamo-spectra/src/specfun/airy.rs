//! Airy function Ai on the four rays arg z ∈ {±π/6, ±5π/6}, which is where
//! the linear-vanishing kernel evaluates it after its (iτ)^{1/3} rotation.
//!
//! Maclaurin series below |z| = 5.5, the compound asymptotic expansion in
//! ζ = (2/3) z^{3/2} beyond, truncated at its smallest term. On the ±5π/6
//! rays Ai is the exponentially growing branch; the same expansion covers
//! it since |arg z| < π.

use super::{Scaled, SpecFunError, SpecFunResult};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const AIRY_AI_ZERO: f64 = 0.3550280538878172;
pub const AIRY_AI_PRIME_ZERO: f64 = -0.2588194037928068;

const SWITCH: f64 = 5.5;
const RAY_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn on_allowed_ray(z: Complex64) -> bool {
    if z.norm() < 1e-8 {
        return true;
    }
    let arg = z.arg();
    [PI / 6.0, -PI / 6.0, 5.0 * PI / 6.0, -5.0 * PI / 6.0]
        .iter()
        .any(|ray| (arg - ray).abs() <= RAY_TOL)
}

/// Power series for w'' = z w from the Ai initial data; value and slope in
/// one pass, with cancellation tracked for the error estimate.
fn maclaurin(z: Complex64) -> (Scaled, Scaled, f64) {
    // a_{n+3} = a_n / ((n+3)(n+2)) with a_2 = 0; slot n mod 3 is rewritten
    // with a_{n+3} right after a_n is consumed.
    let mut ring = [c(AIRY_AI_ZERO, 0.0), c(AIRY_AI_PRIME_ZERO, 0.0), c(0.0, 0.0)];
    let mut val = c(0.0, 0.0);
    let mut slope = c(0.0, 0.0);
    let mut max_mag = 0.0f64;
    let mut zn = c(1.0, 0.0);
    let mut zn_prev = c(0.0, 0.0);
    let mut prev_small = false;
    for n in 0usize..210 {
        let an = ring[n % 3];
        let term = an * zn;
        val += term;
        let dterm = an * (n as f64) * zn_prev;
        slope += dterm;
        max_mag = max_mag.max(val.norm()).max(slope.norm());
        ring[n % 3] = an / (((n + 3) * (n + 2)) as f64);
        zn_prev = zn;
        zn *= z;
        // The a_2 lineage is identically zero, so one tiny term is not
        // proof of convergence; require two in a row.
        let small = term.norm() + dterm.norm() < 1e-18 * max_mag;
        if n > 6 && small && prev_small {
            break;
        }
        prev_small = small;
    }
    let floor = f64::MIN_POSITIVE;
    let est = 1e-15 * (max_mag / val.norm().min(slope.norm()).max(floor)).max(1.0);
    (Scaled::from_complex(val), Scaled::from_complex(slope), est)
}

/// Compound asymptotic series: Σ (-1)^k u_k ζ^{-k} and the v analogue,
/// stopped at the smallest term.
fn asym_sums(zeta: Complex64) -> (Complex64, Complex64, f64) {
    let mut term = c(1.0, 0.0);
    let mut uk = 1.0f64;
    let mut su = c(1.0, 0.0);
    let mut sv = c(1.0, 0.0);
    let mut prev_mag = 1.0f64;
    let mut est = 0.0;
    for k in 0usize..60 {
        let kf = k as f64;
        let uk_next = uk * (6.0 * kf + 5.0) * (6.0 * kf + 1.0) / (72.0 * (kf + 1.0));
        term = -term / zeta * (uk_next / uk);
        let mag = term.norm();
        if mag > prev_mag {
            est = mag;
            break;
        }
        su += term;
        // v_k = -u_k (6k+1)/(6k-1) at order k+1.
        let vk_over_uk = -(6.0 * (kf + 1.0) + 1.0) / (6.0 * (kf + 1.0) - 1.0);
        sv += term * vk_over_uk;
        uk = uk_next;
        prev_mag = mag;
        est = mag;
        if mag < 1e-18 {
            break;
        }
    }
    (su, sv, est / su.norm().max(f64::MIN_POSITIVE) + 1e-15)
}

fn asym(z: Complex64) -> (Scaled, Scaled, f64) {
    let zeta = 2.0 / 3.0 * (1.5 * z.ln()).exp();
    let (su, sv, est) = asym_sums(zeta);
    let quarter = (0.25 * z.ln()).exp();
    let pre = Scaled { val: c(0.0, -zeta.im).exp(), log: -zeta.re };
    let half_rpi = 0.5 / PI.sqrt();
    let ai = pre.mul_complex(half_rpi / quarter * su);
    let aip = pre.mul_complex(-half_rpi * quarter * sv);
    (ai, aip, est)
}

/// Ai(z) and Ai'(z) on the admissible rays.
pub fn airy_both(z: Complex64) -> Result<(SpecFunResult, SpecFunResult), SpecFunError> {
    if !on_allowed_ray(z) {
        return Err(SpecFunError::Domain(format!(
            "arg z = {} not on the ±π/6, ±5π/6 rays",
            z.arg()
        )));
    }
    let (ai, aip, est) = if z.norm() < SWITCH { maclaurin(z) } else { asym(z) };
    Ok((
        SpecFunResult { value: ai.val, log_scale: ai.log, est_error: est },
        SpecFunResult { value: aip.val, log_scale: aip.log, est_error: est },
    ))
}

pub fn airy_ai(z: Complex64) -> Result<SpecFunResult, SpecFunError> {
    airy_both(z).map(|p| p.0)
}

pub fn airy_ai_prime(z: Complex64) -> Result<SpecFunResult, SpecFunError> {
    airy_both(z).map(|p| p.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma_fn;

    fn ray(arg: f64, m: f64) -> Complex64 {
        m * c(0.0, arg).exp()
    }

    fn check(z: Complex64, ai_ref: Complex64, aip_ref: Complex64, tol: f64) {
        let (ai, aip) = airy_both(z).unwrap();
        let av = ai.exped();
        let pv = aip.exped();
        assert!(
            (av - ai_ref).norm() <= tol * ai_ref.norm(),
            "Ai off at {z}: {av} vs {ai_ref}"
        );
        assert!(
            (pv - aip_ref).norm() <= tol * aip_ref.norm(),
            "Ai' off at {z}: {pv} vs {aip_ref}"
        );
        assert!(ai.est_error < 1e-6);
    }

    #[test]
    fn reference_values_recessive_rays() {
        let a = PI / 6.0;
        check(ray(a, 0.3), c(0.2878708112157272, -0.03737652600248868), c(-0.2508535646466937, 0.01152084023167109), 1e-11);
        check(ray(a, 2.0), c(0.007652762915990246, -0.06053334785606144), c(-0.03066223223087247, 0.0862278757956198), 1e-11);
        check(ray(a, 5.4), c(0.0004817922822925799, 0.0001190763695451364), c(-0.001031317316027265, -0.0005515544870831836), 2e-9);
        check(ray(a, 8.0), c(-7.78495153830267e-7, 3.818510892231106e-6), c(4.886445724971364e-6, -9.976418043262551e-6), 2e-9);
        check(ray(a, 17.0), c(-1.141570952240878e-16, -6.093275404714223e-16), c(-1.897385833918557e-16, 2.555451429123012e-15), 1e-10);
        check(ray(-a, 0.3), c(0.2878708112157272, 0.03737652600248868), c(-0.2508535646466937, -0.01152084023167109), 1e-11);
        check(ray(-a, 2.0), c(0.007652762915990246, 0.06053334785606144), c(-0.03066223223087247, -0.0862278757956198), 1e-11);
        check(ray(-a, 5.4), c(0.0004817922822925799, -0.0001190763695451364), c(-0.001031317316027265, 0.0005515544870831836), 2e-9);
        check(ray(-a, 8.0), c(-7.78495153830267e-7, -3.818510892231106e-6), c(4.886445724971364e-6, 9.976418043262551e-6), 2e-9);
        check(ray(-a, 17.0), c(-1.141570952240878e-16, 6.093275404714223e-16), c(-1.897385833918557e-16, -2.555451429123012e-15), 1e-10);
    }

    #[test]
    fn reference_values_growing_rays() {
        let a = 5.0 * PI / 6.0;
        check(ray(a, 0.3), c(0.4223571238967587, -0.03707393141963238), c(-0.2508037555975117, -0.01615082998580571), 1e-11);
        check(ray(a, 2.0), c(0.7908970406329563, 0.5270816643404102), c(0.6164387334109965, -1.034725461454902), 1e-11);
        check(ray(a, 5.4), c(35.60030774311558, -59.10639858171331), c(-151.2579121397482, -46.07404239675987), 1e-11);
        check(ray(a, 8.0), c(-6023.066053604942, -3980.433080788033), c(-6572.655048173736, 19165.62425651142), 2e-9);
        check(ray(a, 17.0), c(17584974272262.29, 25691336711031.58), c(83591321467071.43, -96991230883918.97), 1e-10);
        check(ray(-a, 0.3), c(0.4223571238967587, 0.03707393141963238), c(-0.2508037555975117, 0.01615082998580571), 1e-11);
        check(ray(-a, 2.0), c(0.7908970406329563, -0.5270816643404102), c(0.6164387334109965, 1.034725461454902), 1e-11);
        check(ray(-a, 5.4), c(35.60030774311558, 59.10639858171331), c(-151.2579121397482, 46.07404239675987), 1e-11);
        check(ray(-a, 8.0), c(-6023.066053604942, 3980.433080788033), c(-6572.655048173736, -19165.62425651142), 2e-9);
        check(ray(-a, 17.0), c(17584974272262.29, -25691336711031.58), c(83591321467071.43, 96991230883918.97), 1e-10);
    }

    #[test]
    fn origin_value_matches_gamma_form() {
        // Ai(0) = 3^{-2/3} / Γ(2/3), an independent route to the constant.
        let g = gamma_fn(c(2.0 / 3.0, 0.0)).unwrap().exped();
        let want = 3.0f64.powf(-2.0 / 3.0) / g.re;
        let got = airy_ai(c(0.0, 0.0)).unwrap().exped();
        assert!((got.re - want).abs() < 1e-8 && got.im.abs() < 1e-15);
        assert!((got.re - AIRY_AI_ZERO).abs() < 1e-15);
    }

    #[test]
    fn rotated_pair_wronskian_constant() {
        // Ai(0) Ai'(0) (e^{2πi/3} - 1) = e^{-iπ/6} / (2π): the Wronskian
        // normalizer the linear-vanishing kernel divides by.
        let rot = c(0.0, 2.0 * PI / 3.0).exp();
        let w = AIRY_AI_ZERO * AIRY_AI_PRIME_ZERO * (rot - 1.0);
        let want = c(0.0, -PI / 6.0).exp() / (2.0 * PI);
        assert!((w - want).norm() < 1e-15);
        assert!((w - c(0.137832223855448, -0.07957747154594767)).norm() < 1e-15);
    }

    #[test]
    fn satisfies_airy_equation_pointwise() {
        // 100 points across the rays, avoiding the band where optimal
        // truncation noise exceeds what an h = 1e-4 second difference can
        // resolve.
        let h = 1e-4;
        let mut count = 0;
        for &arg in &[PI / 6.0, -PI / 6.0, 5.0 * PI / 6.0, -5.0 * PI / 6.0] {
            let dir = c(0.0, arg).exp();
            let moduli: Vec<f64> = (0..13)
                .map(|i| 0.3 + 0.25 * i as f64)
                .chain((0..12).map(|i| 8.0 + 0.8 * i as f64))
                .collect();
            for &m in &moduli {
                let z = m * dir;
                let at = |zz: Complex64| airy_ai(zz).unwrap().exped();
                let w = at(z);
                let second = (at(z + h * dir) + at(z - h * dir) - 2.0 * w) / (h * h * dir * dir);
                let rhs = z * w;
                let scale = second.norm() + rhs.norm();
                assert!(
                    (second - rhs).norm() <= 1e-5 * scale,
                    "Airy ODE residual {} at {z}",
                    (second - rhs).norm() / scale
                );
                count += 1;
            }
        }
        assert_eq!(count, 100);
    }

    #[test]
    fn slope_matches_difference_quotient() {
        for &(arg, m) in &[(PI / 6.0, 1.3), (-5.0 * PI / 6.0, 2.4), (PI / 6.0, 9.0)] {
            let dir = c(0.0, arg).exp();
            let z = m * dir;
            let h = 1e-5;
            let f = |zz: Complex64| airy_ai(zz).unwrap().exped();
            let fd = (f(z + h * dir) - f(z - h * dir)) / (2.0 * h * dir);
            let slope = airy_ai_prime(z).unwrap().exped();
            assert!((fd - slope).norm() <= 1e-6 * slope.norm());
        }
    }

    #[test]
    fn regimes_agree_at_the_switch() {
        for &arg in &[PI / 6.0, -5.0 * PI / 6.0] {
            let dir = c(0.0, arg).exp();
            let a = airy_ai(5.4999 * dir).unwrap();
            let b = airy_ai(5.5001 * dir).unwrap();
            let rel = (a.scaled().div(b.scaled()).exped() - 1.0).norm();
            // d ln Ai / dz ~ sqrt(z) ~ 2.3, so 2e-4 separation explains ~5e-4.
            assert!(rel < 2e-3, "switch jump {rel} on ray {arg}");
        }
    }

    #[test]
    fn decay_envelope_on_recessive_ray() {
        // |Ai(r e^{iπ/6})| e^{(√2/3) r^{3/2}} stays below 2 (measured ~0.27).
        let dir = c(0.0, PI / 6.0).exp();
        let mut worst = 0.0f64;
        for i in 0..50 {
            let r = 1.0 + 49.0 * (i as f64) / 49.0;
            let ai = airy_ai(r * dir).unwrap();
            let log_env = ai.log_scale + ai.value.norm().ln() + 2.0f64.sqrt() / 3.0 * r.powf(1.5);
            worst = worst.max(log_env.exp());
        }
        assert!(worst <= 2.0, "envelope constant {worst}");
    }

    #[test]
    fn rays_are_enforced() {
        assert!(matches!(airy_ai(c(1.0, 0.0)), Err(SpecFunError::Domain(_))));
        assert!(matches!(airy_ai(c(0.0, 2.0)), Err(SpecFunError::Domain(_))));
        // The origin itself is fine (needed for the Wronskian constant).
        assert!(airy_ai(c(1e-9, 0.0)).is_ok());
    }
}
