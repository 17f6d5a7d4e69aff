//! Angle profiles `θ(x)` (and other scalar profiles such as `ψ(y)`).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::diff1;
use crate::special::{fresnel_c, fresnel_s};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `θ(x)` with its derivative and, when known, closed-form primitives
/// `φ = ∫_0^x cos θ` and `χ = ∫_0^x sin θ`.
#[derive(Clone)]
pub struct AngleProfile {
    theta: ScalarFn,
    theta_prime: Option<ScalarFn>,
    phi: Option<ScalarFn>,
    chi: Option<ScalarFn>,
    /// Lower limit of the primitives.
    pub anchor: f64,
    /// Interval on which the profile is intended to be used.
    pub lo: f64,
    pub hi: f64,
}

impl std::fmt::Debug for AngleProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AngleProfile")
            .field("anchor", &self.anchor)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("closed_form_primitives", &self.phi.is_some())
            .finish()
    }
}

impl AngleProfile {
    pub fn new<F>(theta: F, lo: f64, hi: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::EmptyDomain(format!("angle profile interval [{lo}, {hi}]")));
        }
        Ok(AngleProfile {
            theta: Arc::new(theta),
            theta_prime: None,
            phi: None,
            chi: None,
            anchor: 0.0,
            lo,
            hi,
        })
    }

    pub fn with_derivative<F>(mut self, d: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.theta_prime = Some(Arc::new(d));
        self
    }

    /// Closed-form primitives anchored at 0.
    pub fn with_primitives<P, C>(mut self, phi: P, chi: C) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        C: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.phi = Some(Arc::new(phi));
        self.chi = Some(Arc::new(chi));
        self.anchor = 0.0;
        self
    }

    /// Moves the lower limit of the primitives (drops closed forms).
    pub fn with_anchor(mut self, anchor: f64) -> Self {
        if anchor != 0.0 {
            self.phi = None;
            self.chi = None;
        }
        self.anchor = anchor;
        self
    }

    pub fn with_interval(mut self, lo: f64, hi: f64) -> Self {
        self.lo = lo;
        self.hi = hi;
        self
    }

    pub fn theta(&self, x: f64) -> f64 {
        (self.theta)(x)
    }

    pub fn theta_prime(&self, x: f64) -> f64 {
        match &self.theta_prime {
            Some(d) => d(x),
            None => diff1(|s| (self.theta)(s), x, 1e-3),
        }
    }

    pub(crate) fn closed_phi(&self) -> Option<ScalarFn> {
        self.phi.clone()
    }

    pub(crate) fn closed_chi(&self) -> Option<ScalarFn> {
        self.chi.clone()
    }

    pub(crate) fn theta_fn(&self) -> ScalarFn {
        self.theta.clone()
    }

    /// Checks `θ ∈ (0, π)` on `[a, b]` (sampled).
    pub fn validate_on(&self, a: f64, b: f64) -> Result<()> {
        let n = 200;
        for i in 0..=n {
            let x = a + (b - a) * i as f64 / n as f64;
            let t = self.theta(x);
            if !(t > 0.0 && t < std::f64::consts::PI) {
                return Err(Error::InvalidParameter(format!(
                    "angle profile leaves (0, pi): theta({x}) = {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Serializable scalar profiles of one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    /// `value`
    Constant { value: f64 },
    /// `slope · x + intercept`
    Linear {
        slope: f64,
        #[serde(default)]
        intercept: f64,
    },
    /// `coeff · x^exponent`
    Power { coeff: f64, exponent: f64 },
    /// `arccos x`
    Arccos,
    /// `arctan(scale · x)`
    Arctan { scale: f64 },
    /// `arctan(1 / a(x))` (taken in `(0, π)`), `a = c1 cosh x + c2 sinh x`
    MinimalArctan { c1: f64, c2: f64 },
    /// `arctan sqrt(x² + c)`
    FlatArctan { c: f64 },
}

impl Profile {
    /// Value and first derivative at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match *self {
            Profile::Constant { value } => (value, 0.0),
            Profile::Linear { slope, intercept } => (slope * x + intercept, slope),
            Profile::Power { coeff, exponent } => {
                (coeff * x.powf(exponent), coeff * exponent * x.powf(exponent - 1.0))
            }
            Profile::Arccos => (x.acos(), -1.0 / (1.0 - x * x).sqrt()),
            Profile::Arctan { scale } => ((scale * x).atan(), scale / (1.0 + scale * scale * x * x)),
            Profile::MinimalArctan { c1, c2 } => {
                let a = c1 * x.cosh() + c2 * x.sinh();
                let b = c1 * x.sinh() + c2 * x.cosh();
                (1f64.atan2(a), -b / (1.0 + a * a))
            }
            Profile::FlatArctan { c } => {
                let q = x * x + c;
                let r = q.sqrt();
                (r.atan(), x / (r * (1.0 + q)))
            }
        }
    }

    /// A sensible default interval for the angle variable.
    pub fn default_interval(&self) -> (f64, f64) {
        match *self {
            Profile::Arccos => (0.1, 0.9),
            Profile::Power { .. } => (0.3, 1.2),
            Profile::FlatArctan { c } => {
                let lo = (0.04 - c).max(0.04).sqrt();
                (lo, lo + 1.5)
            }
            Profile::MinimalArctan { .. } => (0.2, 1.5),
            _ => (0.2, 1.3),
        }
    }

    /// Natural lower limit for the primitives of `cos θ`, `sin θ`.
    fn anchor(&self) -> f64 {
        match *self {
            Profile::FlatArctan { c } if c < 0.0 => (-c).sqrt(),
            _ => 0.0,
        }
    }

    /// Builds an [`AngleProfile`] on `[lo, hi]`.
    pub fn to_angle(&self, lo: f64, hi: f64) -> Result<AngleProfile> {
        let p = self.clone();
        let q = self.clone();
        let base = AngleProfile::new(move |x| p.eval(x).0, lo, hi)?.with_derivative(move |x| q.eval(x).1);
        let out = match *self {
            Profile::Constant { value } => {
                let (c, s) = (value.cos(), value.sin());
                base.with_primitives(move |x| x * c, move |x| x * s)
            }
            Profile::Linear { slope, intercept } if slope != 0.0 => base.with_primitives(
                move |x| ((slope * x + intercept).sin() - intercept.sin()) / slope,
                move |x| (intercept.cos() - (slope * x + intercept).cos()) / slope,
            ),
            Profile::Linear { intercept, .. } => {
                let (c, s) = (intercept.cos(), intercept.sin());
                base.with_primitives(move |x| x * c, move |x| x * s)
            }
            Profile::Arccos => base.with_primitives(
                |x| 0.5 * x * x,
                |x| 0.5 * (x * (1.0 - x * x).sqrt() + x.asin()),
            ),
            Profile::Power { coeff, exponent } if coeff == 1.0 && exponent == 2.0 => {
                let k = (2.0 / std::f64::consts::PI).sqrt();
                let s = (std::f64::consts::PI / 2.0).sqrt();
                base.with_primitives(move |x| s * fresnel_c(k * x), move |x| s * fresnel_s(k * x))
            }
            _ => base.with_anchor(self.anchor()),
        };
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate;

    #[test]
    fn derivatives_match_differences() {
        let profiles = [
            Profile::Linear { slope: 0.7, intercept: 0.2 },
            Profile::Power { coeff: 1.0, exponent: 2.0 },
            Profile::Arccos,
            Profile::Arctan { scale: 2.0 },
            Profile::MinimalArctan { c1: -1.0, c2: 2.0 },
            Profile::FlatArctan { c: -0.5 },
        ];
        for p in &profiles {
            let x = 0.83;
            let fd = crate::numeric::diff1_richardson(|s| p.eval(s).0, x, 1e-3);
            assert!((p.eval(x).1 - fd).abs() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn closed_primitives_match_quadrature() {
        let profiles = [
            Profile::Constant { value: 0.7 },
            Profile::Linear { slope: 1.0, intercept: 0.0 },
            Profile::Linear { slope: 0.0, intercept: 0.4 },
            Profile::Power { coeff: 1.0, exponent: 2.0 },
            Profile::Arccos,
        ];
        for p in &profiles {
            let a = p.to_angle(0.1, 0.9).unwrap();
            let phi = a.closed_phi().unwrap();
            let chi = a.closed_chi().unwrap();
            let x = 0.77;
            let qp = integrate(|t| p.eval(t).0.cos(), 0.0, x, 1e-13).unwrap();
            let qc = integrate(|t| p.eval(t).0.sin(), 0.0, x, 1e-13).unwrap();
            assert!((phi(x) - qp).abs() < 1e-12 && (chi(x) - qc).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn minimal_angle_at_origin() {
        let (t, _) = Profile::MinimalArctan { c1: 1.0, c2: 0.0 }.eval(0.0);
        assert!((t - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let p: Profile = serde_json::from_str(r#"{"kind":"flat_arctan","c":-1}"#).unwrap();
        assert_eq!(p, Profile::FlatArctan { c: -1.0 });
        assert!(serde_json::from_str::<Profile>(r#"{"kind":"linear"}"#).is_err());
    }
}
