//! Curves in R³₁ as closures, and a small serializable expression language
//! for curves built from polynomials and (hyperbolic) trigonometric factors.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::lorentz::LorentzVec3;
use crate::numeric::diff1;

type VecFn = Arc<dyn Fn(f64) -> LorentzVec3 + Send + Sync>;

/// A parametrized curve `y -> R³₁` with its first derivative and, optionally,
/// its second.
#[derive(Clone)]
pub struct Curve3 {
    value: VecFn,
    d1: VecFn,
    d2: Option<VecFn>,
}

impl Curve3 {
    pub fn new<F, D>(value: F, d1: D) -> Self
    where
        F: Fn(f64) -> LorentzVec3 + Send + Sync + 'static,
        D: Fn(f64) -> LorentzVec3 + Send + Sync + 'static,
    {
        Curve3 {
            value: Arc::new(value),
            d1: Arc::new(d1),
            d2: None,
        }
    }

    pub fn with_second<D>(mut self, d2: D) -> Self
    where
        D: Fn(f64) -> LorentzVec3 + Send + Sync + 'static,
    {
        self.d2 = Some(Arc::new(d2));
        self
    }

    /// A constant curve.
    pub fn constant(v: LorentzVec3) -> Self {
        Curve3::new(move |_| v, |_| LorentzVec3::ZERO).with_second(|_| LorentzVec3::ZERO)
    }

    pub fn at(&self, y: f64) -> LorentzVec3 {
        (self.value)(y)
    }

    pub fn deriv(&self, y: f64) -> LorentzVec3 {
        (self.d1)(y)
    }

    /// Second derivative: analytic if supplied, else differences of the first.
    pub fn deriv2(&self, y: f64) -> LorentzVec3 {
        match &self.d2 {
            Some(d2) => d2(y),
            None => {
                let d1 = &self.d1;
                LorentzVec3 {
                    x1: diff1(|s| d1(s).x1, y, 1e-3),
                    x2: diff1(|s| d1(s).x2, y, 1e-3),
                    x3: diff1(|s| d1(s).x3, y, 1e-3),
                }
            }
        }
    }
}

/// Elementary factor kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Sin,
    Cos,
    Sinh,
    Cosh,
}

/// `f(ω y)` for one elementary `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    #[serde(rename = "fn")]
    pub kind: Trig,
    #[serde(default = "one")]
    pub omega: f64,
}

fn one() -> f64 {
    1.0
}

fn is_zero(p: &u32) -> bool {
    *p == 0
}

impl Factor {
    fn eval(&self, y: f64) -> f64 {
        let t = self.omega * y;
        match self.kind {
            Trig::Sin => t.sin(),
            Trig::Cos => t.cos(),
            Trig::Sinh => t.sinh(),
            Trig::Cosh => t.cosh(),
        }
    }

    /// `d/dy f(ω y) = scale · g(ω y)`.
    fn derivative(&self) -> (f64, Factor) {
        let (s, kind) = match self.kind {
            Trig::Sin => (1.0, Trig::Cos),
            Trig::Cos => (-1.0, Trig::Sin),
            Trig::Sinh => (1.0, Trig::Cosh),
            Trig::Cosh => (1.0, Trig::Sinh),
        };
        (s * self.omega, Factor { kind, omega: self.omega })
    }
}

/// `coeff · y^pow · Π f_i(ω_i y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub pow: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(coeff: f64, pow: u32, factors: &[(Trig, f64)]) -> Self {
        Term {
            coeff,
            pow,
            factors: factors.iter().map(|&(kind, omega)| Factor { kind, omega }).collect(),
        }
    }

    fn eval(&self, y: f64) -> f64 {
        let mut v = self.coeff * y.powi(self.pow as i32);
        for f in &self.factors {
            v *= f.eval(y);
        }
        v
    }

    fn derivative(&self, out: &mut Vec<Term>) {
        if self.pow > 0 {
            out.push(Term {
                coeff: self.coeff * self.pow as f64,
                pow: self.pow - 1,
                factors: self.factors.clone(),
            });
        }
        for (i, f) in self.factors.iter().enumerate() {
            let (s, g) = f.derivative();
            let mut factors = self.factors.clone();
            factors[i] = g;
            out.push(Term {
                coeff: self.coeff * s,
                pow: self.pow,
                factors,
            });
        }
    }
}

/// A curve in R³₁ given as three sums of [`Term`]s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveExpr(pub [Vec<Term>; 3]);

impl CurveExpr {
    pub fn constant(v: LorentzVec3) -> Self {
        let c = |x: f64| if x == 0.0 { vec![] } else { vec![Term::new(x, 0, &[])] };
        CurveExpr([c(v.x1), c(v.x2), c(v.x3)])
    }

    pub fn eval(&self, y: f64) -> LorentzVec3 {
        let comp = |terms: &Vec<Term>| terms.iter().map(|t| t.eval(y)).sum::<f64>();
        LorentzVec3 {
            x1: comp(&self.0[0]),
            x2: comp(&self.0[1]),
            x3: comp(&self.0[2]),
        }
    }

    /// Exact symbolic derivative.
    pub fn derivative(&self) -> CurveExpr {
        let d = |terms: &Vec<Term>| {
            let mut out = Vec::new();
            for t in terms {
                t.derivative(&mut out);
            }
            out
        };
        CurveExpr([d(&self.0[0]), d(&self.0[1]), d(&self.0[2])])
    }

    pub fn to_curve(&self) -> Curve3 {
        let f = self.clone();
        let d1 = self.derivative();
        let d2 = d1.derivative();
        Curve3::new(move |y| f.eval(y), move |y| d1.eval(y)).with_second(move |y| d2.eval(y))
    }
}
