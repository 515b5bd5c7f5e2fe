//! Special functions and the named constants of the spectral law.
//!
//! Everything downstream is phrased in terms of a handful of constants
//! attached to a pair `(n, s)` with `0 < s < n`:
//!
//! * `vol(B^m) = pi^(m/2) / Gamma(m/2 + 1)`, the formal `m`-dimensional
//!   volume of the Euclidean unit ball (any real `m > 0`),
//! * `kappa_s = int_0^inf w_s(u) du = s 2^(s-1) Gamma(s/2)`, the total mass
//!   of the scale weight `w_s(u) = u^(s+1) e^(-u^2/4) / 2`,
//! * `gamma_s = kappa_s vol(B^s)`, the small-`t` coefficient of the Gaussian
//!   pair average `G(t) ~ gamma_s A t^(s/2)`,
//! * `gamma_{n,s} = (4 pi)^(-n/2) gamma_s`, its heat-sum counterpart,
//! * `C_{n,s} = (2 pi)^(s-n) vol(B^(n-s))`, the leading constant of the
//!   spectral counting law; identically `gamma_{n,s} / Gamma((n-s)/2 + 1)`.
//!
//! The identity in the last line is the bridge between the heat-kernel and
//! counting normalizations and is pinned by tests to 1e-12 relative error.

use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Lanczos coefficients, g = 7, 9 terms. Good to ~1e-14 relative on (0, 50].
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the approximation in its sweet spot
        PI / ((PI * x).sin() * lanczos_gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Euler gamma function for positive arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("gamma_fn", format!("x = {x} not > 0")));
    }
    Ok(lanczos_gamma(x))
}

/// Formal volume of the unit ball in dimension `m > 0` (real).
pub fn ball_volume(m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::domain("ball_volume", format!("m = {m} not > 0")));
    }
    Ok(PI.powf(0.5 * m) / lanczos_gamma(0.5 * m + 1.0))
}

/// Scale weight `w_s(u) = u^(s+1) e^(-u^2/4) / 2` appearing in the scaled
/// representation `G(t)/t^(s/2) = int w_s(u) a(sqrt(t) u) du`.
pub fn scale_weight(s: f64, u: f64) -> f64 {
    debug_assert!(u >= 0.0);
    0.5 * u.powf(s + 1.0) * (-0.25 * u * u).exp()
}

/// `kappa_s = int_0^inf w_s = s 2^(s-1) Gamma(s/2)` in closed form.
pub fn kappa_s(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::domain("kappa_s", format!("s = {s} not > 0")));
    }
    Ok(s * 2f64.powf(s - 1.0) * lanczos_gamma(0.5 * s))
}

/// All named constants for a pair `(n, s)`, with the cross-identities that
/// tie the counting, heat and Gaussian-average normalizations together.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantBundle {
    pub n: u32,
    pub s: f64,
    /// vol(B^s)
    pub vol_ball_s: f64,
    /// vol(B^(n-s))
    pub vol_ball_ns: f64,
    /// C_{n,s} = (2 pi)^(s-n) vol(B^(n-s)), leading constant of the counting law
    pub c_ns: f64,
    /// gamma_s = kappa_s vol(B^s), Gaussian-average coefficient
    pub gamma_s: f64,
    /// gamma_{n,s} = (4 pi)^(-n/2) gamma_s, heat-sum coefficient
    pub gamma_ns: f64,
    /// kappa_s = int_0^inf w_s(u) du
    pub kappa_s: f64,
}

/// Assemble the constant bundle for `0 < s < n`.
pub fn constant_bundle(n: u32, s: f64) -> Result<ConstantBundle> {
    if n == 0 {
        return Err(Error::domain("constant_bundle", "n must be >= 1"));
    }
    if !(s > 0.0 && s < n as f64) {
        return Err(Error::domain(
            "constant_bundle",
            format!("s = {s} not in (0, {n})"),
        ));
    }
    let nf = n as f64;
    let vol_ball_s = ball_volume(s)?;
    let vol_ball_ns = ball_volume(nf - s)?;
    let c_ns = (2.0 * PI).powf(s - nf) * vol_ball_ns;
    let kappa = kappa_s(s)?;
    let gamma_s = kappa * vol_ball_s;
    let gamma_ns = (4.0 * PI).powf(-0.5 * nf) * gamma_s;
    Ok(ConstantBundle {
        n,
        s,
        vol_ball_s,
        vol_ball_ns,
        c_ns,
        gamma_s,
        gamma_ns,
        kappa_s: kappa,
    })
}

/// Bessel function of the first kind, order `nu >= 0`, argument `x >= 0`.
///
/// Ascending series for `x <= 12`, Hankel asymptotic expansion beyond. For
/// half-integer orders the asymptotic series terminates and is exact; for
/// integer orders the truncation error just above the switch is ~3e-13.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::domain("bessel_j", format!("x = {x} < 0")));
    }
    if nu < 0.0 {
        return Err(Error::domain("bessel_j", format!("nu = {nu} < 0")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= 12.0 {
        // J_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_m (-1)^m (x/2)^(2m) / (m! (nu+1)_m)
        let half = 0.5 * x;
        let mut term = half.powf(nu) / lanczos_gamma(nu + 1.0);
        let mut sum = term;
        let q = -half * half;
        for m in 1..200 {
            let mf = m as f64;
            term *= q / (mf * (nu + mf));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        Ok(sum)
    } else {
        // A&S 9.2.5: J_nu = sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
        // chi = x - (nu/2 + 1/4) pi, with P, Q the usual (mu-1)(mu-9)... series.
        let mu = 4.0 * nu * nu;
        let mut p = 0.0;
        let mut q = 0.0;
        let mut c = 1.0f64;
        let mut prev = f64::INFINITY;
        for k in 0..40 {
            match k % 4 {
                0 => p += c,
                1 => q += c,
                2 => p -= c,
                _ => q -= c,
            }
            let kf = k as f64;
            let next = c * (mu - (2.0 * kf + 1.0).powi(2)) / (8.0 * x * (kf + 1.0));
            if next == 0.0 {
                break; // terminating (half-integer order): exact
            }
            if next.abs() >= prev.abs() {
                break; // asymptotic tail started to diverge
            }
            prev = next;
            c = next;
        }
        let chi = x - (0.5 * nu + 0.25) * PI;
        Ok((2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin()))
    }
}

/// Fourier multiplier of averaging over a ball of radius `rho` on `T^s`,
/// evaluated at `tau = 2 pi |k| rho`:
///
/// `m_s(tau) = 2^(s/2) Gamma(s/2 + 1) J_{s/2}(tau) / tau^(s/2)`, `m_s(0) = 1`.
///
/// `|m_s| <= 1` and `m_s(tau) -> 0`; for `s = 1` this is exactly `sin(tau)/tau`.
pub fn ball_multiplier(s: u32, tau: f64) -> Result<f64> {
    if s == 0 {
        return Err(Error::domain("ball_multiplier", "s must be >= 1"));
    }
    if tau < 0.0 {
        return Err(Error::domain("ball_multiplier", format!("tau = {tau} < 0")));
    }
    if s == 1 {
        return Ok(if tau == 0.0 { 1.0 } else { tau.sin() / tau });
    }
    let nu = 0.5 * s as f64;
    if tau <= 12.0 {
        // normalized series: no cancellation against the tau^(-nu) prefactor
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let q = -0.25 * tau * tau;
        for m in 1..300 {
            let mf = m as f64;
            term *= q / (mf * (mf + nu));
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        Ok(sum)
    } else {
        let j = bessel_j(nu, tau)?;
        Ok(2f64.powf(nu) * lanczos_gamma(nu + 1.0) * j / tau.powf(nu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;

    #[test]
    fn gamma_basics() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() / 24.0 < 1e-13);
        // reference values (Maple/mpmath, 20 digits)
        let cases = [
            (0.1, 9.513_507_698_668_731_8),
            (1.461_632_144_968_362_3, 0.885_603_194_410_888_7), // minimum
            (10.3, 716_430.689_062_376_5),
            (50.0, 6.082_818_640_342_675_6e62),
        ];
        for (x, want) in cases {
            let got = gamma_fn(x).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "gamma({x}): got {got}, want {want}"
            );
        }
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-2.5).is_err());
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((ball_volume(2.0).unwrap() - PI).abs() < 1e-14);
        assert!((ball_volume(3.0).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!(ball_volume(0.0).is_err());
    }

    #[test]
    fn bundle_at_2_1() {
        let b = constant_bundle(2, 1.0).unwrap();
        assert!((b.c_ns - 1.0 / PI).abs() < 1e-14);
        assert!((b.gamma_s - 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((b.gamma_ns - 0.5 / PI.sqrt()).abs() < 1e-14);
        assert!((b.kappa_s - PI.sqrt()).abs() < 1e-14);
        assert!(constant_bundle(2, 2.0).is_err());
        assert!(constant_bundle(2, 0.0).is_err());
    }

    #[test]
    fn counting_constant_identity_grid() {
        // C_{n,s} = gamma_{n,s} / Gamma((n-s)/2 + 1) across (n, s)
        let mut checked = 0;
        for n in [2u32, 3, 4] {
            for i in 1..=17 {
                let s = n as f64 * i as f64 / 18.0;
                let b = constant_bundle(n, s).unwrap();
                let rhs = b.gamma_ns / gamma_fn(0.5 * (n as f64 - s) + 1.0).unwrap();
                assert!(
                    ((b.c_ns - rhs) / b.c_ns).abs() < 1e-12,
                    "identity failed at n={n}, s={s}"
                );
                checked += 1;
            }
        }
        assert!(checked >= 50);
    }

    #[test]
    fn kappa_matches_quadrature() {
        for s in [0.5, 1.0, 1.5, 2.0] {
            let by_quad = adaptive_simpson(&|u| scale_weight(s, u), 0.0, 40.0, 1e-13);
            let closed = kappa_s(s).unwrap();
            assert!(
                (by_quad - closed).abs() < 1e-10,
                "kappa({s}): quad {by_quad} vs closed {closed}"
            );
        }
        // kappa_1 = sqrt(pi)
        assert!((kappa_s(1.0).unwrap() - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn scale_weight_values() {
        assert_eq!(scale_weight(1.0, 0.0), 0.0);
        let w = scale_weight(1.0, 2.0);
        assert!((w - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn bessel_against_libm() {
        // integer orders cross-checked against an independent implementation
        for x in [0.3, 1.7, 4.0, 8.9, 11.9, 12.5, 15.0, 27.5, 44.0] {
            for (nu, reference) in [(0.0, libm::j0(x)), (1.0, libm::j1(x)), (2.0, libm::jn(2, x))]
            {
                let got = bessel_j(nu, x).unwrap();
                let tol = if x > 9.0 && x < 16.0 { 5e-12 } else { 2e-13 };
                assert!(
                    (got - reference).abs() < tol,
                    "J_{nu}({x}): got {got}, libm {reference}"
                );
            }
        }
        assert!(bessel_j(0.5, -1.0).is_err());
    }

    #[test]
    fn half_integer_reduction_to_sinc() {
        // the generic Bessel route for J_{1/2} must reproduce sin(tau)/tau
        for i in 1..=100 {
            let tau = 0.5 * i as f64;
            let j = bessel_j(0.5, tau).unwrap();
            let m1 = 2f64.sqrt() * gamma_fn(1.5).unwrap() * j / tau.sqrt();
            assert!(
                (m1 - tau.sin() / tau).abs() < 1e-12,
                "tau = {tau}: {m1} vs {}",
                tau.sin() / tau
            );
        }
    }

    #[test]
    fn multiplier_endpoints() {
        assert_eq!(ball_multiplier(1, 0.0).unwrap(), 1.0);
        assert!(ball_multiplier(1, PI).unwrap().abs() < 1e-15);
        assert_eq!(ball_multiplier(2, 0.0).unwrap(), 1.0);
        assert!(ball_multiplier(0, 1.0).is_err());
        assert!(ball_multiplier(2, -0.1).is_err());
        // |m_s| <= 1 and decay on a coarse scan
        for s in [1u32, 2, 3, 4] {
            for i in 0..500 {
                let tau = 0.1 * i as f64;
                let m = ball_multiplier(s, tau).unwrap();
                assert!(m.abs() <= 1.0 + 1e-12, "|m_{s}({tau})| = {m} > 1");
            }
            assert!(ball_multiplier(s, 300.0).unwrap().abs() < 0.05);
        }
    }

    #[test]
    fn multiplier_matches_ball_average_quadrature() {
        // m_s(2 pi k rho) equals the normalized average of cos(2 pi k . y)
        // over the ball |y| <= rho. s = 1: (1/(2 rho)) int_{-rho}^{rho};
        // s = 2: polar integral with the angular average built in.
        let rho = 0.07;
        for k in [1.0f64, 3.0, 10.0, 30.0] {
            let tau = 2.0 * PI * k * rho;
            let direct1 =
                adaptive_simpson(&|y: f64| (2.0 * PI * k * y).cos(), -rho, rho, 1e-13)
                    / (2.0 * rho);
            let m1 = ball_multiplier(1, tau).unwrap();
            assert!((m1 - direct1).abs() < 1e-8, "s=1, k={k}");

            // s = 2: (1/(pi rho^2)) int_0^rho 2 pi r J0-like angular mean
            let direct2 = adaptive_simpson(
                &|r: f64| {
                    let ang = adaptive_simpson(
                        &|th: f64| (2.0 * PI * k * r * th.cos()).cos(),
                        0.0,
                        2.0 * PI,
                        1e-11,
                    ) / (2.0 * PI);
                    2.0 * PI * r * ang
                },
                0.0,
                rho,
                1e-11,
            ) / (PI * rho * rho);
            let m2 = ball_multiplier(2, tau).unwrap();
            assert!((m2 - direct2).abs() < 1e-8, "s=2, k={k}: {m2} vs {direct2}");
        }
    }
}
