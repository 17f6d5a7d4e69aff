//! Angle fields of minimal surfaces in non-canonical coordinates, and the
//! closed-form ODE solutions used in the classification proofs.

use serde::{Deserialize, Serialize};

use super::Profile;
use crate::error::{Error, Result};
use crate::numeric::{diff1_richardson, diff2_richardson, integrate};
use crate::special::jacobi_am;

/// `θ(x, y) = am(±(k x + y) / sqrt(k² + 1) | −c)`, a travelling-wave
/// solution of the minimal-angle PDE with `θ_x = k θ_y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalAngleField {
    pub k: f64,
    pub c: f64,
    pub sign: f64,
}

pub fn minimal_angle_field(k: f64, c: f64, sign: f64) -> Result<MinimalAngleField> {
    if !(k != 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("k must be nonzero and finite, got {k}")));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("c must be finite and >= 0, got {c}")));
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {sign}")));
    }
    Ok(MinimalAngleField { k, c, sign })
}

impl MinimalAngleField {
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let u = self.sign * (self.k * x + y) / (self.k * self.k + 1.0).sqrt();
        jacobi_am(u, -self.c)
    }
}

/// Scalar fields `θ(x, y)` accepted by the angle-PDE verifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "snake_case", deny_unknown_fields)]
pub enum AngleField {
    /// [`MinimalAngleField`]
    Jacobi {
        k: f64,
        c: f64,
        #[serde(default = "plus")]
        sign: f64,
    },
    /// `a + bx · x + by · y`
    Linear {
        #[serde(default)]
        a: f64,
        #[serde(default)]
        bx: f64,
        #[serde(default)]
        by: f64,
    },
}

fn plus() -> f64 {
    1.0
}

impl AngleField {
    pub fn validate(&self) -> Result<()> {
        if let AngleField::Jacobi { k, c, sign } = *self {
            minimal_angle_field(k, c, sign)?;
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match *self {
            AngleField::Jacobi { k, c, sign } => MinimalAngleField { k, c, sign }.eval(x, y),
            AngleField::Linear { a, bx, by } => Ok(a + bx * x + by * y),
        }
    }
}

impl From<MinimalAngleField> for AngleField {
    fn from(f: MinimalAngleField) -> Self {
        AngleField::Jacobi {
            k: f.k,
            c: f.c,
            sign: f.sign,
        }
    }
}

const ODE_H: f64 = 1e-2;

/// Residual of `f'' + tan θ θ' f' − cos²θ f = 0` at `x` for
/// `f = c₁ sinh φ + c₂ cosh φ`, `φ = ∫₀ˣ cos θ`, by finite differences.
pub fn beta_ode_residual(theta: &Profile, c1: f64, c2: f64, x: f64) -> Result<f64> {
    let angle = theta.to_angle(x - 1.0, x + 1.0)?;
    let phi = |s: f64| match angle.closed_phi() {
        Some(p) => p(s),
        None => integrate(|t| theta.eval(t).0.cos(), 0.0, s, 1e-13).unwrap_or(f64::NAN),
    };
    let f = |s: f64| {
        let p = phi(s);
        c1 * p.sinh() + c2 * p.cosh()
    };
    let (t, tp) = theta.eval(x);
    let f1 = diff1_richardson(f, x, ODE_H);
    let f2 = diff2_richardson(f, x, ODE_H);
    let r = f2 + t.tan() * tp * f1 - t.cos().powi(2) * f(x);
    if r.is_nan() {
        return Err(Error::NoConvergence(format!("primitive of cos(theta) at x = {x}")));
    }
    Ok(r)
}

/// Residual of `f'' − 2 cot f f'² + cos f sin f = 0` at `x` for
/// `f = arctan(1 / a)`, `a = c₁ cosh x + c₂ sinh x`, by finite differences.
pub fn angle_ode_residual(c1: f64, c2: f64, x: f64) -> f64 {
    let f = |s: f64| 1f64.atan2(c1 * s.cosh() + c2 * s.sinh());
    let v = f(x);
    let f1 = diff1_richardson(f, x, ODE_H);
    let f2 = diff2_richardson(f, x, ODE_H);
    f2 - 2.0 * f1 * f1 / v.tan() + v.cos() * v.sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::diff1;

    #[test]
    fn zero_parameter_is_linear() {
        let f = minimal_angle_field(2.0, 0.0, -1.0).unwrap();
        let (x, y) = (0.4, 0.3);
        let want = -(2.0 * x + y) / 5f64.sqrt();
        assert!((f.eval(x, y).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn travelling_wave_relation() {
        let f = minimal_angle_field(1.5, 1.0, 1.0).unwrap();
        let (x, y) = (0.37, 0.61);
        let tx = diff1(|s| f.eval(s, y).unwrap(), x, 1e-4);
        let ty = diff1(|s| f.eval(x, s).unwrap(), y, 1e-4);
        assert!((tx - 1.5 * ty).abs() < 1e-8);
    }

    #[test]
    fn rejects_zero_k() {
        assert!(minimal_angle_field(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn ode_residuals_vanish() {
        let theta = Profile::Linear { slope: 0.5, intercept: 1.0 };
        for x in [-0.9, 0.0, 0.7] {
            assert!(beta_ode_residual(&theta, 1.3, -0.4, x).unwrap().abs() < 1e-7);
            assert!(angle_ode_residual(1.5, 0.3, x).abs() < 1e-7);
        }
    }

    #[test]
    fn angle_ode_detects_wrong_solution() {
        // arctan(a) instead of arctan(1/a) is not a solution.
        let f = |s: f64| (1.5 * s.cosh()).atan();
        let x = 0.3;
        let v = f(x);
        let f1 = diff1_richardson(f, x, ODE_H);
        let f2 = diff2_richardson(f, x, ODE_H);
        assert!((f2 - 2.0 * f1 * f1 / v.tan() + v.cos() * v.sin()).abs() > 1e-3);
    }

    #[test]
    fn field_json() {
        let f: AngleField = serde_json::from_str(r#"{"field":"jacobi","k":1,"c":1}"#).unwrap();
        assert_eq!(f, AngleField::Jacobi { k: 1.0, c: 1.0, sign: 1.0 });
    }
}
