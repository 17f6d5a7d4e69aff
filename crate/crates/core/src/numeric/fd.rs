//! Five-point central finite differences.

use crate::error::{Error, Result};

/// Default step for first-derivative quantities.
pub const DEFAULT_H: f64 = 1e-3;
/// Default step for second-derivative quantities (paired with Richardson).
pub const DEFAULT_H2: f64 = 1e-2;

/// Fourth-order estimate of `f'(x)`.
pub fn diff1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order estimate of `f''(x)`.
pub fn diff2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// Combines fourth-order estimates at steps `h` and `h/2`.
pub fn richardson4(coarse: f64, fine: f64) -> f64 {
    (16.0 * fine - coarse) / 15.0
}

/// `diff1` at `h` and `h/2`, extrapolated.
pub fn diff1_richardson<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    richardson4(diff1(&f, x, h), diff1(&f, x, 0.5 * h))
}

/// `diff2` at `h` and `h/2`, extrapolated.
pub fn diff2_richardson<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    richardson4(diff2(&f, x, h), diff2(&f, x, 0.5 * h))
}

/// Fails with `DomainClip` when the stencil `[x - reach, x + reach]` leaves `[lo, hi]`.
pub fn check_stencil(x: f64, reach: f64, lo: f64, hi: f64) -> Result<()> {
    let (s_lo, s_hi) = (x - reach, x + reach);
    // A relative slack absorbs round-off in grid construction.
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if s_lo < lo - slack || s_hi > hi + slack {
        return Err(Error::DomainClip {
            lo: s_lo,
            hi: s_hi,
            domain_lo: lo,
            domain_hi: hi,
        });
    }
    Ok(())
}

/// `diff1` restricted to a declared domain.
pub fn diff1_in<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, lo: f64, hi: f64) -> Result<f64> {
    check_stencil(x, 2.0 * h, lo, hi)?;
    Ok(diff1(f, x, h))
}

/// `diff2` restricted to a declared domain.
pub fn diff2_in<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, lo: f64, hi: f64) -> Result<f64> {
    check_stencil(x, 2.0 * h, lo, hi)?;
    Ok(diff2(f, x, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_derivative() {
        assert!((diff1(|x| x * x, 3.0, 1e-3) - 6.0).abs() < 1e-9);
    }

    #[test]
    fn sinh_second_derivative_at_zero() {
        assert!(diff2(f64::sinh, 0.0, 1e-3).abs() < 1e-8);
    }

    #[test]
    fn minimal_angle_is_even() {
        let theta = |x: f64| (1.0 / x.cosh()).atan();
        assert!(diff1(theta, 0.0, 1e-3).abs() < 1e-12);
    }

    #[test]
    fn richardson_improves_second_derivative() {
        let f = |x: f64| (2.0 * x).exp();
        let want = 4.0 * (1.0f64).exp();
        let plain = (diff2(f, 0.5, 1e-2) - want).abs();
        let extrap = (diff2_richardson(f, 0.5, 1e-2) - want).abs();
        assert!(extrap < plain && extrap < 1e-9, "{plain:e} {extrap:e}");
    }

    #[test]
    fn domain_clip() {
        assert!(diff1_in(|x| x, 0.001, 1e-3, 0.0, 1.0).is_err());
        assert!(diff1_in(|x| x, 0.002, 1e-3, 0.0, 1.0).is_ok());
        assert!(matches!(
            diff2_in(|x| x, 0.999, 1e-3, 0.0, 1.0),
            Err(Error::DomainClip { .. })
        ));
    }

    proptest! {
        #[test]
        fn quintic_derivative(x in -2.0..2.0f64, c in proptest::collection::vec(-3.0..3.0f64, 6)) {
            let p = |t: f64| c.iter().rev().fold(0.0, |acc, &k| acc * t + k);
            let dp = |t: f64| c.iter().enumerate().skip(1).rev()
                .fold(0.0, |acc, (i, &k)| acc * t + i as f64 * k);
            // The bare stencil carries an h^4 f^(5) / 30 term on quintics;
            // one Richardson step removes it.
            let got = diff1_richardson(p, x, 1e-2);
            let want = dp(x);
            prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
        }

        #[test]
        fn quartic_derivative_is_exact(x in -2.0..2.0f64, c in proptest::collection::vec(-3.0..3.0f64, 5)) {
            let p = |t: f64| c.iter().rev().fold(0.0, |acc, &k| acc * t + k);
            let dp = |t: f64| c.iter().enumerate().skip(1).rev()
                .fold(0.0, |acc, (i, &k)| acc * t + i as f64 * k);
            let want = dp(x);
            prop_assert!((diff1(p, x, 1e-2) - want).abs() <= 1e-10 * want.abs().max(1.0));
        }
    }
}
