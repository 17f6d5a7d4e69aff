//! Flat surfaces with `T` principal: `θ = arctan sqrt(x² + c)`, `β = x`.

use std::sync::Arc;

use super::PRIMITIVE_TOL;
use crate::error::{Error, Result};
use crate::numeric::Antiderivative;
use crate::surface::{Immersion, Rect};

/// Half-width of the band around `c = −1` treated as the parabolic case.
pub const CASE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatCase {
    /// `c > −1`: Euclidean rotation in the `(x₁, x₂)` plane.
    Elliptic,
    /// `c < −1`: hyperbolic rotation in the `(x₂, x₃)` plane.
    Hyperbolic,
    /// `c = −1`: parabolic.
    Parabolic,
}

pub fn flat_case(c: f64) -> FlatCase {
    if (c + 1.0).abs() <= CASE_TOL {
        FlatCase::Parabolic
    } else if c > -1.0 {
        FlatCase::Elliptic
    } else {
        FlatCase::Hyperbolic
    }
}

/// Left end of the open `x`-interval on which `θ` is defined and nonzero.
fn left_edge(c: f64) -> f64 {
    if c >= 0.0 {
        0.0
    } else {
        (-c).sqrt()
    }
}

/// `[x0, x0 + 1.5] × [−1, 1]` with `x0² + c = 0.04`, i.e. `tan θ(x0) = 0.2`.
pub fn flat_default_domain(c: f64) -> Result<Rect> {
    let x0 = (0.04 - c).max(0.04).sqrt();
    Rect::new(x0, x0 + 1.5, -1.0, 1.0)
}

/// The flat surface for `c` on `domain` (or the default one). `χ` is
/// anchored at 0 for `c ≥ 0` and at the left edge `sqrt(−c)` otherwise.
pub fn make_flat(c: f64, domain: Option<Rect>) -> Result<Immersion> {
    if !c.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite c = {c}")));
    }
    let domain = match domain {
        Some(d) => d,
        None => flat_default_domain(c)?,
    };
    domain.validate()?;
    let edge = left_edge(c);
    if !(domain.x0 > edge) {
        return Err(Error::EmptyDomain(format!(
            "flat family with c = {c} needs x > {edge}, domain starts at {}",
            domain.x0
        )));
    }

    let chi_prime = move |x: f64| (x * x + c).sqrt() / (x * x + c + 1.0).sqrt();
    let chi: Arc<dyn Fn(f64) -> f64 + Send + Sync> = if c == 0.0 {
        Arc::new(|x: f64| (x * x + 1.0).sqrt() - 1.0)
    } else {
        let lo = (domain.x0 - 0.05).max(edge);
        let table = Antiderivative::new(chi_prime, edge, lo, domain.x1 + 0.05, PRIMITIVE_TOL)?;
        Arc::new(move |x| table.eval(x))
    };
    let tag = format!("flat({c})");
    let ch = chi.clone();
    let imm = match flat_case(c) {
        FlatCase::Elliptic => {
            let k = (c + 1.0).sqrt();
            Immersion::new(tag, domain, move |x, y| {
                let w = (x * x + c + 1.0).sqrt();
                [x / k * y.cos(), x / k * y.sin(), w / k, ch(x)]
            })
            .with_partials(
                move |x, y| {
                    let w = (x * x + c + 1.0).sqrt();
                    [y.cos() / k, y.sin() / k, x / (k * w), chi_prime(x)]
                },
                move |x, y| [-x / k * y.sin(), x / k * y.cos(), 0.0, 0.0],
            )
        }
        FlatCase::Hyperbolic => {
            let q = (-c - 1.0).sqrt();
            Immersion::new(tag, domain, move |x, y| {
                let w = (x * x + c + 1.0).sqrt();
                [w / q, x / q * y.sinh(), x / q * y.cosh(), ch(x)]
            })
            .with_partials(
                move |x, y| {
                    let w = (x * x + c + 1.0).sqrt();
                    [x / (q * w), y.sinh() / q, y.cosh() / q, chi_prime(x)]
                },
                move |x, y| [0.0, x / q * y.cosh(), x / q * y.sinh(), 0.0],
            )
        }
        FlatCase::Parabolic => Immersion::new(tag, domain, move |x, y| {
            [
                x * y,
                0.5 * x * (1.0 - y * y) - 0.5 / x,
                0.5 * x * (1.0 + y * y) + 0.5 / x,
                ch(x),
            ]
        })
        .with_partials(
            move |x, y| {
                let e = 0.5 / (x * x);
                [y, 0.5 * (1.0 - y * y) + e, 0.5 * (1.0 + y * y) - e, chi_prime(x)]
            },
            move |x, y| [x, -x * y, x * y, 0.0],
        ),
    };
    Ok(imm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{sample, EngineConfig};

    #[test]
    fn c_zero_closed_form() {
        let f = make_flat(0.0, None).unwrap();
        let (x, y): (f64, f64) = (0.8, 0.3);
        let p = f.eval(x, y);
        let w = (x * x + 1.0).sqrt();
        let want = [x * y.cos(), x * y.sin(), w, w - 1.0];
        for i in 0..4 {
            assert!((p[i] - want[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn parabolic_components() {
        let f = make_flat(-1.0, None).unwrap();
        let (x, y) = (1.3, 0.4);
        let p = f.eval(x, y);
        assert!((p[0] - x * y).abs() < 1e-15);
        assert!((p[1] - (0.5 * x * (1.0 - y * y) - 0.5 / x)).abs() < 1e-15);
    }

    #[test]
    fn domain_guard() {
        let d = Rect::new(1.0, 2.5, -1.0, 1.0).unwrap();
        assert!(matches!(make_flat(-4.0, Some(d)), Err(Error::EmptyDomain(_))));
    }

    #[test]
    fn all_cases_flat() {
        let cfg = EngineConfig::default();
        for c in [0.0, -0.5, -4.0, -1.0, 2.0] {
            let f = make_flat(c, None).unwrap();
            let (x, y) = f.domain().center();
            let g = sample(&f, x, y, &cfg).unwrap();
            assert!(g.gauss.abs() < 1e-6, "c = {c}: K = {:e}", g.gauss);
            let t = (x * x + c).sqrt().atan();
            assert!((g.theta - t).abs() < 1e-8, "c = {c}: theta {} vs {t}", g.theta);
        }
    }

    #[test]
    fn chi_derivative_is_sin_theta() {
        for c in [-0.5, -4.0, 3.0] {
            let f = make_flat(c, None).unwrap();
            let x = f.domain().center().0;
            let (fx, _) = f.analytic_partials(x, 0.0).unwrap();
            let d = crate::numeric::diff1_richardson(|s| f.eval(s, 0.0)[3], x, 1e-3);
            assert!((fx[3] - d).abs() < 1e-10);
        }
    }
}
