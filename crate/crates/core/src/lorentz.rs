//! Linear algebra in Minkowski 3-space R³₁ with metric dx₁² + dx₂² − dx₃².
//!
//! H² is the upper sheet `<p,p> = -1, x3 > 0`; the de Sitter space S₁² is the
//! unit "sphere" `<u,u> = 1`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for causal-character classification.
pub const DEFAULT_CAUSAL_TOL: f64 = 1e-9;

/// A vector in R³₁. Serialized as a three-element array.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct LorentzVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl LorentzVec3 {
    pub const ZERO: LorentzVec3 = LorentzVec3 {
        x1: 0.0,
        x2: 0.0,
        x3: 0.0,
    };

    /// Panics on non-finite components; use [`LorentzVec3::try_new`] for untrusted input.
    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self::try_new(x1, x2, x3).expect("LorentzVec3 components must be finite")
    }

    pub fn try_new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        if x1.is_finite() && x2.is_finite() && x3.is_finite() {
            Ok(Self { x1, x2, x3 })
        } else {
            Err(Error::InvalidParameter(format!(
                "non-finite vector ({x1}, {x2}, {x3})"
            )))
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// Lorentzian inner product with `other`.
    pub fn dot(self, other: Self) -> f64 {
        inner3(self, other)
    }

    /// `<u,u>`; negative for timelike vectors.
    pub fn norm_sq(self) -> f64 {
        inner3(self, self)
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }
}

impl TryFrom<[f64; 3]> for LorentzVec3 {
    type Error = Error;

    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::try_new(a[0], a[1], a[2])
    }
}

impl From<LorentzVec3> for [f64; 3] {
    fn from(v: LorentzVec3) -> Self {
        v.to_array()
    }
}

impl Add for LorentzVec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            x1: self.x1 + o.x1,
            x2: self.x2 + o.x2,
            x3: self.x3 + o.x3,
        }
    }
}

impl AddAssign for LorentzVec3 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for LorentzVec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            x1: self.x1 - o.x1,
            x2: self.x2 - o.x2,
            x3: self.x3 - o.x3,
        }
    }
}

impl Neg for LorentzVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            x1: -self.x1,
            x2: -self.x2,
            x3: -self.x3,
        }
    }
}

impl Mul<f64> for LorentzVec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self {
            x1: self.x1 * s,
            x2: self.x2 * s,
            x3: self.x3 * s,
        }
    }
}

impl Mul<LorentzVec3> for f64 {
    type Output = LorentzVec3;
    fn mul(self, v: LorentzVec3) -> LorentzVec3 {
        v * self
    }
}

/// Causal character of a vector, together with the tolerance used to decide it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CausalCharacter {
    Spacelike { tol: f64 },
    Timelike { tol: f64 },
    Lightlike { tol: f64 },
}

impl CausalCharacter {
    pub fn is_spacelike(self) -> bool {
        matches!(self, CausalCharacter::Spacelike { .. })
    }

    pub fn is_timelike(self) -> bool {
        matches!(self, CausalCharacter::Timelike { .. })
    }

    pub fn is_lightlike(self) -> bool {
        matches!(self, CausalCharacter::Lightlike { .. })
    }

    pub fn tol(self) -> f64 {
        match self {
            CausalCharacter::Spacelike { tol }
            | CausalCharacter::Timelike { tol }
            | CausalCharacter::Lightlike { tol } => tol,
        }
    }
}

pub fn inner3(u: LorentzVec3, v: LorentzVec3) -> f64 {
    u.x1 * v.x1 + u.x2 * v.x2 - u.x3 * v.x3
}

/// Lorentzian cross product
/// `(u₂v₃ − u₃v₂, u₃v₁ − u₁v₃, u₂v₁ − u₁v₂)`.
///
/// The result is Lorentz-orthogonal to both factors.
pub fn cross_l(u: LorentzVec3, v: LorentzVec3) -> LorentzVec3 {
    LorentzVec3 {
        x1: u.x2 * v.x3 - u.x3 * v.x2,
        x2: u.x3 * v.x1 - u.x1 * v.x3,
        x3: u.x2 * v.x1 - u.x1 * v.x2,
    }
}

pub fn causal_character(u: LorentzVec3, tol: f64) -> CausalCharacter {
    let q = u.norm_sq();
    if q > tol {
        CausalCharacter::Spacelike { tol }
    } else if q < -tol {
        CausalCharacter::Timelike { tol }
    } else {
        CausalCharacter::Lightlike { tol }
    }
}

/// Membership in the upper sheet of the two-sheeted hyperboloid.
pub fn in_h2(p: LorentzVec3, tol: f64) -> bool {
    (p.norm_sq() + 1.0).abs() <= tol && p.x3 > 0.0
}

pub fn in_desitter(u: LorentzVec3, tol: f64) -> bool {
    (u.norm_sq() - 1.0).abs() <= tol
}

/// Unit normal `N_f = (f ⊠ f') / sqrt(<f',f'>)` of a curve in H² with spacelike speed.
///
/// The opposite sign gives a congruent surface in every construction that uses it.
pub fn curve_normal(f: LorentzVec3, f_prime: LorentzVec3, tol: f64) -> Result<LorentzVec3> {
    let speed_sq = f_prime.norm_sq();
    if speed_sq <= tol {
        return Err(Error::NonSpacelikeSpeed(speed_sq));
    }
    Ok(cross_l(f, f_prime) * (1.0 / speed_sq.sqrt()))
}
