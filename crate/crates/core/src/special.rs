//! Incomplete elliptic integral of the first kind, Jacobi amplitude and the
//! Fresnel integrals.
//!
//! Elliptic functions use the *parameter* convention:
//! `F(z | m) = ∫_0^z dt / sqrt(1 - m sin² t)` (not the modulus `k = sqrt(m)`).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
///
/// Requires non-negative arguments with at most one zero.
fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 1e-3;
    const C1: f64 = 1.0 / 24.0;
    const C2: f64 = 0.1;
    const C3: f64 = 3.0 / 44.0;
    const C4: f64 = 1.0 / 14.0;

    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = (x + y + z) / 3.0;
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (C1 * e2 - C2 - C3 * e3) * e2 + C4 * e3) / ave.sqrt();
        }
    }
}

/// `F(φ | m)` for `|φ| ≤ π/2`, where the radicand is positive.
fn ellip_f_reduced(phi: f64, m: f64) -> f64 {
    let s = phi.sin();
    let c = phi.cos();
    s * carlson_rf(c * c, 1.0 - m * s * s, 1.0)
}

/// Complete integral `K(m) = F(π/2 | m)` for `m < 1`.
fn ellip_k(m: f64) -> f64 {
    carlson_rf(0.0, 1.0 - m, 1.0)
}

/// Incomplete elliptic integral of the first kind `F(z | m)`.
///
/// Any `z` is accepted for `m < 1`. For `m ≥ 1` the integrand is singular at
/// `arcsin(1/√m)`, so `|z|` must stay below it.
pub fn ellip_f(z: f64, m: f64) -> Result<f64> {
    if !z.is_finite() || !m.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite argument F({z} | {m})")));
    }
    if m == 0.0 {
        return Ok(z);
    }
    let a = z.abs();
    let value = if m < 1.0 {
        // Reduce by half-periods: F(φ + kπ) = F(φ) + 2k K(m).
        let k = (a / PI).round();
        let r = a - k * PI;
        let base = ellip_f_reduced(r, m);
        if k == 0.0 {
            base
        } else {
            base + 2.0 * k * ellip_k(m)
        }
    } else {
        let limit = (1.0 / m.sqrt()).asin();
        if a >= limit {
            return Err(Error::SingularIntegrand { z, m });
        }
        ellip_f_reduced(a, m)
    };
    Ok(value.copysign(z))
}

/// Jacobi amplitude: the `θ` with `F(θ | m) = u`, for `m < 1`.
pub fn jacobi_am(u: f64, m: f64) -> Result<f64> {
    if !u.is_finite() || !m.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite argument am({u} | {m})")));
    }
    if !(m < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "jacobi_am needs m < 1 for a real amplitude, got m = {m}"
        )));
    }
    if u == 0.0 || m == 0.0 {
        return Ok(u);
    }
    let target = u.abs();
    // F' lies between 1 and 1/sqrt(1 - m), which brackets the root.
    let q = (1.0 - m).sqrt();
    let mut lo = target * q.min(1.0);
    let mut hi = target * q.max(1.0);
    let mut theta = 0.5 * (lo + hi);

    for _ in 0..200 {
        let residual = ellip_f(theta, m)? - target;
        if residual == 0.0 {
            return Ok(theta.copysign(u));
        }
        if residual > 0.0 {
            hi = theta;
        } else {
            lo = theta;
        }
        let s = theta.sin();
        let newton = theta - residual * (1.0 - m * s * s).sqrt();
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let converged = (next - theta).abs() <= 4.0 * f64::EPSILON * theta.max(1.0);
        theta = next;
        if converged || hi - lo <= 4.0 * f64::EPSILON * hi.max(1.0) {
            return Ok(theta.copysign(u));
        }
    }
    Err(Error::NoConvergence(format!("jacobi_am({u} | {m}) did not converge")))
}

/// Returns `(C(x), S(x))` with `C(x) = ∫_0^x cos(πt²/2) dt`, `S(x) = ∫_0^x sin(πt²/2) dt`.
fn fresnel(x: f64) -> (f64, f64) {
    const MAXIT: usize = 1000;
    const XMIN: f64 = 1.5;
    const FPMIN: f64 = 1e-300;
    let eps = f64::EPSILON;

    let ax = x.abs();
    let (c, s) = if ax < 1e-150 {
        (ax, 0.0)
    } else if ax <= XMIN {
        // Power series, alternating between the C and S partial sums.
        let fact = FRAC_PI_2 * ax * ax;
        let mut sum = 0.0;
        let mut sums = 0.0;
        let mut sumc = ax;
        let mut sign = 1.0;
        let mut odd = true;
        let mut term = ax;
        let mut n = 3.0;
        for k in 1..MAXIT {
            term *= fact / k as f64;
            sum += sign * term / n;
            let test = sum.abs() * eps;
            if odd {
                sign = -sign;
                sums = sum;
                sum = sumc;
            } else {
                sumc = sum;
                sum = sums;
            }
            if term < test {
                break;
            }
            odd = !odd;
            n += 2.0;
        }
        (sumc, sums)
    } else {
        // Continued fraction for the complementary error function (Lentz).
        let pix2 = PI * ax * ax;
        let mut b = Complex64::new(1.0, -pix2);
        let mut cc = Complex64::new(1.0 / FPMIN, 0.0);
        let mut d = b.inv();
        let mut h = d;
        let mut n = -1.0;
        for _ in 2..MAXIT {
            n += 2.0;
            let a = -n * (n + 1.0);
            b += Complex64::new(4.0, 0.0);
            d = (a * d + b).inv();
            cc = b + a / cc;
            let del = cc * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() <= eps {
                break;
            }
        }
        h *= Complex64::new(ax, -ax);
        let phase = Complex64::new((0.5 * pix2).cos(), (0.5 * pix2).sin());
        let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - phase * h);
        (cs.re, cs.im)
    };
    if x < 0.0 {
        (-c, -s)
    } else {
        (c, s)
    }
}

/// Fresnel cosine integral `C(z) = ∫_0^z cos(πt²/2) dt`.
pub fn fresnel_c(z: f64) -> f64 {
    fresnel(z).0
}

/// Fresnel sine integral `S(z) = ∫_0^z sin(πt²/2) dt`.
pub fn fresnel_s(z: f64) -> f64 {
    fresnel(z).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{diff1, integrate};
    use proptest::prelude::*;

    fn f_by_quadrature(z: f64, m: f64) -> f64 {
        integrate(|t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, z, 1e-13).unwrap()
    }

    #[test]
    fn zero_parameter_is_identity() {
        assert_eq!(ellip_f(0.7, 0.0).unwrap(), 0.7);
        assert_eq!(jacobi_am(0.37, 0.0).unwrap(), 0.37);
    }

    #[test]
    fn matches_quadrature() {
        for &(z, m) in &[(1.0, -3.0), (0.3, 0.9), (2.5, -5.0), (7.0, 0.5), (-4.0, -1.0), (0.5, 3.0)] {
            let got = ellip_f(z, m).unwrap();
            let want = f_by_quadrature(z, m);
            assert!((got - want).abs() <= 1e-10, "F({z}|{m}) = {got} vs {want}");
        }
    }

    #[test]
    fn complete_integral_at_known_value() {
        // K(1/2) = Γ(1/4)² / (4 sqrt(π)).
        let gamma_quarter = 3.625_609_908_221_908_f64;
        let want = gamma_quarter * gamma_quarter / (4.0 * PI.sqrt());
        assert!((ellip_f(FRAC_PI_2, 0.5).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn singular_integrand_rejected() {
        assert!(matches!(ellip_f(1.0, 2.0), Err(Error::SingularIntegrand { .. })));
        assert!(matches!(ellip_f(FRAC_PI_2, 1.0), Err(Error::SingularIntegrand { .. })));
        assert!(ellip_f(0.5, 2.0).is_ok());
    }

    #[test]
    fn minimal_family_chi_identity() {
        // chi(x) = ∫_0^x 1/sqrt(cosh²τ + 1) dτ for (c1, c2) = (1, 0), c = 1.
        for i in 0..20 {
            let x = 0.1 + 1.9 * i as f64 / 19.0;
            let chi = integrate(|t: f64| 1.0 / (t.cosh().powi(2) + 1.0).sqrt(), 0.0, x, 1e-13).unwrap();
            let closed = ellip_f((1.0 / x.cosh()).acos(), 0.5).unwrap() / 2f64.sqrt();
            assert!((chi - closed).abs() <= 1e-9, "x = {x}");
        }
    }

    #[test]
    fn amplitude_roundtrip() {
        let u = ellip_f(0.8, -2.0).unwrap();
        assert!((jacobi_am(u, -2.0).unwrap() - 0.8).abs() <= 1e-9);
        assert_eq!(jacobi_am(0.0, -1.0).unwrap(), 0.0);
        assert!(jacobi_am(1.0, 1.0).is_err());
    }

    #[test]
    fn fresnel_matches_quadrature() {
        for &z in &[0.0, 0.2, 1.0, 1.49, 1.51, 2.0, 3.3, -2.7, 5.0] {
            let c = integrate(|t: f64| (FRAC_PI_2 * t * t).cos(), 0.0, z, 1e-13).unwrap();
            let s = integrate(|t: f64| (FRAC_PI_2 * t * t).sin(), 0.0, z, 1e-13).unwrap();
            assert!((fresnel_c(z) - c).abs() <= 1e-10, "C({z})");
            assert!((fresnel_s(z) - s).abs() <= 1e-10, "S({z})");
        }
        assert_eq!(fresnel_c(0.0), 0.0);
        assert_eq!(fresnel_s(0.0), 0.0);
    }

    #[test]
    fn cornu_fourth_component() {
        let k = (2.0 / PI).sqrt();
        for &x in &[0.3, 0.8, 1.2, 2.0] {
            let closed = (PI / 2.0).sqrt() * fresnel_s(k * x);
            let quad = integrate(|t: f64| (t * t).sin(), 0.0, x, 1e-13).unwrap();
            assert!((closed - quad).abs() <= 1e-9);
        }
    }

    proptest! {
        #[test]
        fn ellip_f_is_odd(z in -10.0..10.0f64, m in -10.0..0.0f64) {
            prop_assert_eq!(ellip_f(-z, m).unwrap(), -ellip_f(z, m).unwrap());
        }

        #[test]
        fn amplitude_inverts_ellip_f(z in -1.2..1.2f64, m in -5.0..0.5f64) {
            let u = ellip_f(z, m).unwrap();
            prop_assert!((jacobi_am(u, m).unwrap() - z).abs() <= 1e-9);
        }

        #[test]
        fn amplitude_is_monotone(u in -3.0..3.0f64, du in 1e-3..1.0f64, m in -5.0..0.9f64) {
            prop_assert!(jacobi_am(u + du, m).unwrap() > jacobi_am(u, m).unwrap());
        }

        #[test]
        fn fresnel_bounds_and_derivative(z in -1.0..1.0f64, w in -4.0..4.0f64) {
            prop_assert!(fresnel_c(z).abs() <= z.abs());
            prop_assert!(fresnel_s(z).abs() <= z.abs());
            let dc = diff1(fresnel_c, w, 1e-3);
            prop_assert!((dc - (FRAC_PI_2 * w * w).cos()).abs() <= 1e-7);
        }
    }
}
