//! Minimal surfaces with `T` principal: `θ = arctan(1/a)`,
//! `a = c₁ cosh x + c₂ sinh x`, in three cases by the sign of
//! `s = 1 + c₁² − c₂²`.

use std::sync::Arc;

use super::PRIMITIVE_TOL;
use crate::error::{Error, Result};
use crate::numeric::Antiderivative;
use crate::surface::{Immersion, Rect};

/// Half-width of the band around `s = 0` treated as the parabolic case.
pub const CASE_TOL: f64 = 1e-12;

const DEFAULT_X: (f64, f64) = (0.2, 1.5);
const SEARCH_SPAN: (f64, f64) = (-3.0, 3.0);
const MIN_A: f64 = 0.05;
const MAX_A: f64 = 20.0;
const MIN_B: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimalCase {
    /// `s > 0`: hyperbolic rotation in the `(x₂, x₃)` plane.
    Hyperbolic,
    /// `s < 0`: Euclidean rotation in the `(x₁, x₂)` plane.
    Elliptic,
    /// `s = 0`: parabolic.
    Parabolic,
}

pub fn minimal_case(c1: f64, c2: f64) -> MinimalCase {
    let s = 1.0 + c1 * c1 - c2 * c2;
    if s.abs() <= CASE_TOL {
        MinimalCase::Parabolic
    } else if s > 0.0 {
        MinimalCase::Hyperbolic
    } else {
        MinimalCase::Elliptic
    }
}

fn ab(c1: f64, c2: f64, x: f64) -> (f64, f64) {
    let (ch, sh) = (x.cosh(), x.sinh());
    (c1 * ch + c2 * sh, c1 * sh + c2 * ch)
}

fn admissible(c1: f64, c2: f64, x0: f64, x1: f64) -> bool {
    let needs_b = minimal_case(c1, c2) != MinimalCase::Hyperbolic;
    let n = 130;
    (0..=n).all(|i| {
        let x = x0 + (x1 - x0) * i as f64 / n as f64;
        let (a, b) = ab(c1, c2, x);
        a.abs() >= MIN_A && a.abs() <= MAX_A && (!needs_b || b >= MIN_B)
    })
}

fn check_params(c1: f64, c2: f64) -> Result<()> {
    if !c1.is_finite() || !c2.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite (c1, c2) = ({c1}, {c2})")));
    }
    if c1 == 0.0 && c2 == 0.0 {
        return Err(Error::DegenerateParameters("c1 = c2 = 0 makes a vanish identically".into()));
    }
    if minimal_case(c1, c2) != MinimalCase::Hyperbolic {
        // b² − a² = c₂² − c₁² ≥ 1, so b keeps the sign of c₂.
        if c2 < 0.0 {
            return Err(Error::DegenerateParameters(format!(
                "(c1, c2) = ({c1}, {c2}): b = a' < 0 everywhere, the H2 component would leave the upper sheet"
            )));
        }
    }
    Ok(())
}

/// A rectangle `[x0, x0 + 1.3] × [−1, 1]` on which `a` stays away from 0
/// (and from overflow) and, in the non-hyperbolic cases, `b > 0`.
/// `[0.2, 1.5]` is preferred when admissible.
pub fn minimal_default_domain(c1: f64, c2: f64) -> Result<Rect> {
    check_params(c1, c2)?;
    let len = DEFAULT_X.1 - DEFAULT_X.0;
    if admissible(c1, c2, DEFAULT_X.0, DEFAULT_X.1) {
        return Rect::new(DEFAULT_X.0, DEFAULT_X.1, -1.0, 1.0);
    }
    let steps = ((SEARCH_SPAN.1 - len - SEARCH_SPAN.0) / 0.05).round() as usize;
    // Try windows in order of distance from the default one.
    let mut starts: Vec<f64> = (0..=steps).map(|i| SEARCH_SPAN.0 + 0.05 * i as f64).collect();
    starts.sort_by(|p, q| (p - DEFAULT_X.0).abs().total_cmp(&(q - DEFAULT_X.0).abs()));
    starts
        .into_iter()
        .find(|&x0| admissible(c1, c2, x0, x0 + len))
        .map(|x0| Rect::new(x0, x0 + len, -1.0, 1.0))
        .unwrap_or_else(|| {
            Err(Error::EmptyDomain(format!(
                "no admissible x-window of length {len} in [{}, {}] for (c1, c2) = ({c1}, {c2})",
                SEARCH_SPAN.0, SEARCH_SPAN.1
            )))
        })
}

/// The minimal surface for `(c1, c2)` on `domain` (or the default one).
pub fn make_minimal(c1: f64, c2: f64, domain: Option<Rect>) -> Result<Immersion> {
    check_params(c1, c2)?;
    let domain = match domain {
        Some(d) => {
            d.validate()?;
            if !admissible(c1, c2, d.x0, d.x1) {
                return Err(Error::EmptyDomain(format!(
                    "[{}, {}] is not admissible for (c1, c2) = ({c1}, {c2}): a vanishes or b <= 0",
                    d.x0, d.x1
                )));
            }
            d
        }
        None => minimal_default_domain(c1, c2)?,
    };

    let r = move |x: f64| {
        let a = ab(c1, c2, x).0;
        (a * a + 1.0).sqrt()
    };
    let table = Antiderivative::new(move |t| 1.0 / r(t), 0.0, domain.x0 - 0.05, domain.x1 + 0.05, PRIMITIVE_TOL)?;
    let chi: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(move |x| table.eval(x));
    let s = 1.0 + c1 * c1 - c2 * c2;
    let case = minimal_case(c1, c2);
    let tag = format!("minimal({c1}, {c2})");

    // Shared pieces: a, b, r, r' = a b / r.
    let parts = move |x: f64| {
        let (a, b) = ab(c1, c2, x);
        let r = (a * a + 1.0).sqrt();
        (a, b, r, a * b / r)
    };
    let ch = chi.clone();
    let imm = match case {
        MinimalCase::Hyperbolic => {
            let k = 1.0 / s.sqrt();
            Immersion::new(tag, domain, move |x, y| {
                let (_, b, r, _) = parts(x);
                [k * b, k * r * y.sinh(), k * r * y.cosh(), ch(x)]
            })
            .with_partials(
                move |x, y| {
                    let (a, _, r, rp) = parts(x);
                    [k * a, k * rp * y.sinh(), k * rp * y.cosh(), 1.0 / r]
                },
                move |x, y| {
                    let r = parts(x).2;
                    [0.0, k * r * y.cosh(), k * r * y.sinh(), 0.0]
                },
            )
        }
        MinimalCase::Elliptic => {
            let k = 1.0 / (-s).sqrt();
            Immersion::new(tag, domain, move |x, y| {
                let (_, b, r, _) = parts(x);
                [k * r * y.cos(), k * r * y.sin(), k * b, ch(x)]
            })
            .with_partials(
                move |x, y| {
                    let (a, _, r, rp) = parts(x);
                    [k * rp * y.cos(), k * rp * y.sin(), k * a, 1.0 / r]
                },
                move |x, y| {
                    let r = parts(x).2;
                    [-k * r * y.sin(), k * r * y.cos(), 0.0, 0.0]
                },
            )
        }
        MinimalCase::Parabolic => Immersion::new(tag, domain, move |x, y| {
            let b = parts(x).1;
            [
                b * y,
                0.5 * b * (1.0 - y * y) - 0.5 / b,
                0.5 * b * (1.0 + y * y) + 0.5 / b,
                ch(x),
            ]
        })
        .with_partials(
            move |x, y| {
                let (a, b, r, _) = parts(x);
                let e = 0.5 * a / (b * b);
                [a * y, 0.5 * a * (1.0 - y * y) + e, 0.5 * a * (1.0 + y * y) - e, 1.0 / r]
            },
            move |x, y| {
                let b = parts(x).1;
                [b, -b * y, b * y, 0.0]
            },
        ),
    };
    Ok(imm)
}
