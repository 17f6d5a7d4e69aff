//! Constructors for the surfaces with T as a principal direction:
//!
//! `F(x, y) = (A(y) sinh φ(x) + B(y) cosh φ(x), χ(x))`
//!
//! with `A` a curve in S₁², `B` a curve in H², `<A, B> = 0`, `A' ∥ B'`,
//! `φ' = cos θ` and `χ' = sin θ`. Every constructor attaches analytic first
//! partials.

mod curves;
mod examples;
mod flat;
mod frames;
mod minimal;
mod oracles;
mod profile;
mod spec;

use std::sync::Arc;

pub use curves::{Curve3, CurveExpr, Factor, Term, Trig};
pub use examples::{make_named_example, perturbed_angle, NAMED_EXAMPLES};
pub use flat::{flat_case, flat_default_domain, make_flat, FlatCase};
pub use frames::{
    integrate_frame, make_theorem3, FrameCase, FrameInit, FrameState, FrameTrajectory, Theorem3Sign,
};
pub use minimal::{make_minimal, minimal_case, minimal_default_domain, MinimalCase};
pub use oracles::{
    beta_ode_residual, angle_ode_residual, minimal_angle_field, AngleField, MinimalAngleField,
};
pub use profile::{AngleProfile, Profile};
pub use spec::{FamilySpec, FrameInitSpec, PairSpec};

use crate::error::{Error, Result};
use crate::lorentz::{curve_normal, in_h2, inner3, LorentzVec3, DEFAULT_CAUSAL_TOL};
use crate::numeric::Antiderivative;
use crate::surface::{Immersion, Rect};

/// Tolerance for the Lorentz relations of curve pairs.
pub const PAIR_TOL: f64 = 1e-8;

/// Absolute tolerance of the primitives `φ`, `χ` computed by quadrature.
pub const PRIMITIVE_TOL: f64 = 1e-13;

const VALIDATION_SAMPLES: usize = 200;

/// The curves `A` (in S₁²) and `B` (in H²) of the classification.
#[derive(Clone)]
pub struct CurvePair {
    pub a: Curve3,
    pub b: Curve3,
}

impl CurvePair {
    pub fn new(a: Curve3, b: Curve3) -> Self {
        CurvePair { a, b }
    }

    pub fn from_exprs(a: &CurveExpr, b: &CurveExpr) -> Self {
        CurvePair::new(a.to_curve(), b.to_curve())
    }

    /// Checks `<A,A> = 1`, `<B,B> = −1` (upper sheet), `<A,B> = 0` and
    /// `A' ∥ B'` on samples of `[y0, y1]`.
    pub fn validate(&self, y0: f64, y1: f64) -> Result<()> {
        for i in 0..=VALIDATION_SAMPLES {
            let y = y0 + (y1 - y0) * i as f64 / VALIDATION_SAMPLES as f64;
            let (a, b) = (self.a.at(y), self.b.at(y));
            let fail = |relation: &str, residual: f64| Error::InvalidCurvePair {
                relation: relation.to_string(),
                residual,
                y,
            };
            let r = (inner3(a, a) - 1.0).abs();
            if !(r <= PAIR_TOL) {
                return Err(fail("<A,A> = 1", r));
            }
            let r = (inner3(b, b) + 1.0).abs();
            if !(r <= PAIR_TOL) {
                return Err(fail("<B,B> = -1", r));
            }
            if !(b.x3 > 0.0) {
                return Err(fail("B on the upper sheet (x3 > 0)", b.x3));
            }
            let r = inner3(a, b).abs();
            if !(r <= PAIR_TOL) {
                return Err(fail("<A,B> = 0", r));
            }
            let (da, db) = (self.a.deriv(y).to_array(), self.b.deriv(y).to_array());
            let scale = 1.0f64.max(da.iter().chain(&db).fold(0.0, |m, v| m.max(v.abs())));
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let r = (da[i] * db[j] - da[j] * db[i]).abs();
                if !(r <= PAIR_TOL * scale * scale) {
                    return Err(fail("A' parallel to B'", r));
                }
            }
        }
        Ok(())
    }
}

/// `Ã = A cosh φ₀ + B sinh φ₀`, `B̃ = A sinh φ₀ + B cosh φ₀`; with `φ − φ₀`
/// in place of `φ` the surface is unchanged.
pub fn shift_phi(pair: &CurvePair, phi0: f64) -> CurvePair {
    let (c, s) = (phi0.cosh(), phi0.sinh());
    let combine = |p: f64, q: f64| {
        let (a, b) = (pair.a.clone(), pair.b.clone());
        let (a1, b1) = (pair.a.clone(), pair.b.clone());
        let (a2, b2) = (pair.a.clone(), pair.b.clone());
        Curve3::new(move |y| p * a.at(y) + q * b.at(y), move |y| p * a1.deriv(y) + q * b1.deriv(y))
            .with_second(move |y| p * a2.deriv2(y) + q * b2.deriv2(y))
    };
    CurvePair::new(combine(c, s), combine(s, c))
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `φ` and `χ` for `angle`, closed form when available, else tabulated
/// quadrature on a span covering `[x0, x1]`.
fn primitives(angle: &AngleProfile, x0: f64, x1: f64) -> Result<(ScalarFn, ScalarFn)> {
    if let (Some(p), Some(c)) = (angle.closed_phi(), angle.closed_chi()) {
        return Ok((p, c));
    }
    let (lo, hi) = (x0 - 0.05, x1 + 0.05);
    let (lo, hi) = if angle.anchor <= x0 { (angle.anchor.max(lo), hi) } else { (lo, hi) };
    let t1 = angle.theta_fn();
    let t2 = angle.theta_fn();
    let phi = Antiderivative::new(move |t| t1(t).cos(), angle.anchor, lo, hi, PRIMITIVE_TOL)?;
    let chi = Antiderivative::new(move |t| t2(t).sin(), angle.anchor, lo, hi, PRIMITIVE_TOL)?;
    Ok((Arc::new(move |x| phi.eval(x)), Arc::new(move |x| chi.eval(x))))
}

/// The pair form `F = (A sinh φ + B cosh φ, χ)` on `domain`.
pub fn make_general(pair: &CurvePair, angle: &AngleProfile, domain: Rect) -> Result<Immersion> {
    make_general_shifted(pair, angle, domain, 0.0)
}

/// As [`make_general`] with `φ − phi0` in place of `φ`.
pub fn make_general_shifted(pair: &CurvePair, angle: &AngleProfile, domain: Rect, phi0: f64) -> Result<Immersion> {
    build_general("general", pair, angle, domain, phi0)
}

pub(crate) fn build_general(
    tag: &str,
    pair: &CurvePair,
    angle: &AngleProfile,
    domain: Rect,
    phi0: f64,
) -> Result<Immersion> {
    domain.validate()?;
    pair.validate(domain.y0, domain.y1)?;
    angle.validate_on(domain.x0, domain.x1)?;
    let (phi, chi) = primitives(angle, domain.x0, domain.x1)?;
    let theta = angle.theta_fn();

    let (a, b) = (pair.a.clone(), pair.b.clone());
    let (p, c) = (phi.clone(), chi.clone());
    let eval = move |x: f64, y: f64| {
        let f = p(x) - phi0;
        let h = f.sinh() * a.at(y) + f.cosh() * b.at(y);
        [h.x1, h.x2, h.x3, c(x)]
    };
    let (a, b, p) = (pair.a.clone(), pair.b.clone(), phi.clone());
    let fx = move |x: f64, y: f64| {
        let f = p(x) - phi0;
        let t = theta(x);
        let h = t.cos() * (f.cosh() * a.at(y) + f.sinh() * b.at(y));
        [h.x1, h.x2, h.x3, t.sin()]
    };
    let (a, b, p) = (pair.a.clone(), pair.b.clone(), phi);
    let fy = move |x: f64, y: f64| {
        let f = p(x) - phi0;
        let h = f.sinh() * a.deriv(y) + f.cosh() * b.deriv(y);
        [h.x1, h.x2, h.x3, 0.0]
    };
    Ok(Immersion::new(tag, domain, eval).with_partials(fx, fy))
}

/// The unit normal `N_f = f ⊠ f' / sqrt<f',f'>` of a curve in H², as a curve.
pub fn normal_curve(f: &Curve3) -> Curve3 {
    let f1 = f.clone();
    let f2 = f.clone();
    let value = move |y: f64| {
        curve_normal(f1.at(y), f1.deriv(y), DEFAULT_CAUSAL_TOL).unwrap_or(LorentzVec3::ZERO)
    };
    // N' = (f ⊠ f'') / n − N n' / n with n' = <f', f''> / n.
    let deriv = move |y: f64| {
        let (p, d1, d2) = (f2.at(y), f2.deriv(y), f2.deriv2(y));
        let n = inner3(d1, d1).sqrt();
        let nv = crate::lorentz::cross_l(p, d1) * (1.0 / n);
        let dn = inner3(d1, d2) / n;
        crate::lorentz::cross_l(p, d2) * (1.0 / n) - nv * (dn / n)
    };
    Curve3::new(value, deriv)
}

/// The single-curve form `F = (f cosh φ + N_f sinh φ, χ)` from one curve `f` in H².
pub fn make_from_curve(f: &Curve3, angle: &AngleProfile, domain: Rect) -> Result<Immersion> {
    domain.validate()?;
    for i in 0..=VALIDATION_SAMPLES {
        let y = domain.y0 + (domain.y1 - domain.y0) * i as f64 / VALIDATION_SAMPLES as f64;
        let p = f.at(y);
        if !in_h2(p, PAIR_TOL) {
            return Err(Error::NotOnH2 {
                y,
                residual: inner3(p, p) + 1.0,
                x3: p.x3,
            });
        }
        curve_normal(p, f.deriv(y), DEFAULT_CAUSAL_TOL)?;
    }
    let pair = CurvePair::new(normal_curve(f), f.clone());
    build_general("from_curve", &pair, angle, domain, 0.0)
}
