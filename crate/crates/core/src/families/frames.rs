//! The frame `(A, B, H)` of curves in S₁², H², S₁² along which the
//! `(A, B)` pair evolves, for the three causal cases of `H'`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_general, AngleProfile, Curve3, CurvePair, Profile};
use crate::error::{Error, Result};
use crate::lorentz::{inner3, LorentzVec3};
use crate::numeric::{rk4, Trajectory, DEFAULT_RK4_STEP};
use crate::surface::{Immersion, Rect};

/// Tolerance for the Lorentz relations of an initial frame or of the
/// constant vectors of the lightlike case.
pub const FRAME_TOL: f64 = 1e-8;

/// How far the integrated span extends past the requested `y`-range.
const SPAN_PAD: f64 = 0.1;

/// `H'` spacelike (1), timelike (2) or lightlike (3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum FrameCase {
    Spacelike,
    Timelike,
    Lightlike,
}

impl TryFrom<u8> for FrameCase {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(FrameCase::Spacelike),
            2 => Ok(FrameCase::Timelike),
            3 => Ok(FrameCase::Lightlike),
            _ => Err(format!("case must be 1, 2 or 3, got {v}")),
        }
    }
}

impl From<FrameCase> for u8 {
    fn from(c: FrameCase) -> u8 {
        match c {
            FrameCase::Spacelike => 1,
            FrameCase::Timelike => 2,
            FrameCase::Lightlike => 3,
        }
    }
}

/// The `±` of the lightlike case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem3Sign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Theorem3Sign {
    fn value(self) -> f64 {
        match self {
            Theorem3Sign::Plus => 1.0,
            Theorem3Sign::Minus => -1.0,
        }
    }
}

/// `A ∈ S₁²`, `B ∈ H²`, `H ∈ S₁²`, pairwise Lorentz-orthogonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameState {
    pub a: LorentzVec3,
    pub b: LorentzVec3,
    pub h: LorentzVec3,
}

impl FrameState {
    pub fn new(a: LorentzVec3, b: LorentzVec3, h: LorentzVec3) -> Self {
        FrameState { a, b, h }
    }

    pub fn to_array(self) -> [f64; 9] {
        let (a, b, h) = (self.a, self.b, self.h);
        [a.x1, a.x2, a.x3, b.x1, b.x2, b.x3, h.x1, h.x2, h.x3]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        FrameState {
            a: LorentzVec3::new(s[0], s[1], s[2]),
            b: LorentzVec3::new(s[3], s[4], s[5]),
            h: LorentzVec3::new(s[6], s[7], s[8]),
        }
    }

    /// Residuals of the six relations, named.
    pub fn relations(&self) -> [(&'static str, f64); 6] {
        let (a, b, h) = (self.a, self.b, self.h);
        [
            ("<A,A> = 1", inner3(a, a) - 1.0),
            ("<B,B> = -1", inner3(b, b) + 1.0),
            ("<H,H> = 1", inner3(h, h) - 1.0),
            ("<A,B> = 0", inner3(a, b)),
            ("<A,H> = 0", inner3(a, h)),
            ("<B,H> = 0", inner3(b, h)),
        ]
    }

    /// Largest relation residual.
    pub fn drift(&self) -> f64 {
        self.relations().iter().fold(0.0, |m, (_, r)| m.max(r.abs()))
    }

    pub fn validate(&self) -> Result<()> {
        for (relation, residual) in self.relations() {
            if !(residual.abs() <= FRAME_TOL) {
                return Err(Error::InvalidFrame {
                    relation: relation.to_string(),
                    residual,
                });
            }
        }
        Ok(())
    }
}

/// Initial data of the frame equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameInit {
    /// `(A, B, H)` at `y = 0`.
    State(FrameState),
    /// Constant vectors `c₁, c₂, c₃` of the lightlike case.
    Constants {
        c1: LorentzVec3,
        c2: LorentzVec3,
        c3: LorentzVec3,
        sign: Theorem3Sign,
    },
}

type PsiFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `(A', B', H')` for the first two cases.
fn frame_rhs(case: FrameCase, psi: f64, s: &FrameState) -> FrameState {
    let (ch, sh) = (psi.cosh(), psi.sinh());
    let (a, b, h) = (s.a, s.b, s.h);
    match case {
        FrameCase::Spacelike => FrameState::new(ch * h, sh * h, sh * b - ch * a),
        FrameCase::Timelike => FrameState::new(sh * h, ch * h, ch * b - sh * a),
        FrameCase::Lightlike => FrameState::new(h, h, b - a),
    }
}

/// A frame solution that can be evaluated anywhere in its span.
#[derive(Clone)]
pub struct FrameTrajectory {
    case: FrameCase,
    psi: PsiFn,
    kind: Solution,
}

#[derive(Clone)]
enum Solution {
    Integrated(Arc<Trajectory>),
    Lightlike {
        c1: LorentzVec3,
        c2: LorentzVec3,
        c3: LorentzVec3,
        sign: f64,
    },
}

impl FrameTrajectory {
    pub fn case(&self) -> FrameCase {
        self.case
    }

    /// The integrated span, if the solution came from RK4.
    pub fn span(&self) -> Option<(f64, f64)> {
        match &self.kind {
            Solution::Integrated(t) => Some((t.first().0, t.last().0)),
            Solution::Lightlike { .. } => None,
        }
    }

    /// RK4 nodes and states, if integrated.
    pub fn trajectory(&self) -> Option<&Trajectory> {
        match &self.kind {
            Solution::Integrated(t) => Some(t),
            Solution::Lightlike { .. } => None,
        }
    }

    pub fn at(&self, y: f64) -> FrameState {
        match &self.kind {
            Solution::Integrated(t) => {
                let (case, psi) = (self.case, self.psi.clone());
                let field = move |s: f64, u: &[f64], out: &mut [f64]| {
                    out.copy_from_slice(&frame_rhs(case, psi(s), &FrameState::from_slice(u)).to_array())
                };
                FrameState::from_slice(&t.dense(&field, y))
            }
            &Solution::Lightlike { c1, c2, c3, sign } => {
                let q = 0.5 * y * y;
                let a = q * (sign * c2 - c1) + (sign * y) * c3 + c1;
                let b = q * (c2 - sign * c1) + y * c3 + c2;
                let h = y * (c2 - sign * c1) + c3;
                FrameState::new(a, b, h)
            }
        }
    }

    /// `(A', B', H')` at `y`.
    pub fn derivative(&self, y: f64) -> FrameState {
        let s = self.at(y);
        match &self.kind {
            Solution::Integrated(_) => frame_rhs(self.case, (self.psi)(y), &s),
            &Solution::Lightlike { c1, c2, sign, .. } => {
                let hp = c2 - sign * c1;
                FrameState::new(sign * s.h, s.h, hp)
            }
        }
    }

    /// The pair `(A, B)` with analytic first derivatives.
    pub fn pair(&self) -> CurvePair {
        let (t1, t2, t3, t4) = (self.clone(), self.clone(), self.clone(), self.clone());
        CurvePair::new(
            Curve3::new(move |y| t1.at(y).a, move |y| t2.derivative(y).a),
            Curve3::new(move |y| t3.at(y).b, move |y| t4.derivative(y).b),
        )
    }
}

/// Solves the frame equations on `[y0, y1]` (padded, always containing 0)
/// with RK4 step `h`. Cases 1 and 2 integrate from `y = 0` in both
/// directions; the lightlike case is in closed form and ignores `psi`.
pub fn integrate_frame(
    case: FrameCase,
    psi: &Profile,
    init: &FrameInit,
    y0: f64,
    y1: f64,
    h: f64,
) -> Result<FrameTrajectory> {
    let p = psi.clone();
    let psi_fn: PsiFn = Arc::new(move |y| p.eval(y).0);
    let kind = match (*init, case) {
        (FrameInit::Constants { c1, c2, c3, sign }, FrameCase::Lightlike) => {
            validate_constants(c1, c2, c3)?;
            Solution::Lightlike {
                c1,
                c2,
                c3,
                sign: sign.value(),
            }
        }
        (FrameInit::State(s), FrameCase::Lightlike) => {
            s.validate()?;
            Solution::Lightlike {
                c1: s.a,
                c2: s.b,
                c3: s.h,
                sign: 1.0,
            }
        }
        (FrameInit::Constants { .. }, _) => {
            return Err(Error::InvalidParameter(
                "constant vectors are only accepted for case 3; give a frame state".into(),
            ))
        }
        (FrameInit::State(s), _) => {
            s.validate()?;
            if !(h > 0.0) || !(y0 < y1) {
                return Err(Error::InvalidParameter(format!("frame span [{y0}, {y1}] with step {h}")));
            }
            let lo = y0.min(0.0) - SPAN_PAD;
            let hi = y1.max(0.0) + SPAN_PAD;
            let f = psi_fn.clone();
            let field = move |t: f64, u: &[f64], out: &mut [f64]| {
                out.copy_from_slice(&frame_rhs(case, f(t), &FrameState::from_slice(u)).to_array())
            };
            let start = s.to_array();
            let back = rk4(&field, 0.0, &start, lo, h)?;
            let fwd = rk4(&field, 0.0, &start, hi, h)?;
            let mut params = back.params().to_vec();
            let mut states = back.states().to_vec();
            params.extend_from_slice(&fwd.params()[1..]);
            states.extend_from_slice(&fwd.states()[1..]);
            Solution::Integrated(Arc::new(Trajectory::new(params, states)?))
        }
    };
    Ok(FrameTrajectory {
        case,
        psi: psi_fn,
        kind,
    })
}

fn validate_constants(c1: LorentzVec3, c2: LorentzVec3, c3: LorentzVec3) -> Result<()> {
    let rel = [
        ("<c1,c1> = 1", inner3(c1, c1) - 1.0),
        ("<c2,c2> = -1", inner3(c2, c2) + 1.0),
        ("<c3,c3> = 1", inner3(c3, c3) - 1.0),
        ("<c1,c2> = 0", inner3(c1, c2)),
        ("<c1,c3> = 0", inner3(c1, c3)),
        ("<c2,c3> = 0", inner3(c2, c3)),
    ];
    for (relation, residual) in rel {
        if !(residual.abs() <= FRAME_TOL) {
            return Err(Error::InvalidConstants {
                relation: relation.to_string(),
                residual,
            });
        }
    }
    Ok(())
}

/// Surface `(A sinh φ + B cosh φ, χ)` whose pair comes from the frame equations.
pub fn make_theorem3(
    case: FrameCase,
    psi: &Profile,
    init: &FrameInit,
    angle: &AngleProfile,
    domain: Rect,
) -> Result<Immersion> {
    domain.validate()?;
    let frame = integrate_frame(case, psi, init, domain.y0, domain.y1, DEFAULT_RK4_STEP)?;
    build_general("theorem3", &frame.pair(), angle, domain, 0.0)
}
