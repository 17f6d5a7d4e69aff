//! JSON description of a surface family.

use serde::{Deserialize, Serialize};

use super::{
    flat_default_domain, make_flat, make_from_curve, make_general, make_minimal, make_named_example,
    make_theorem3, CurveExpr, CurvePair, FrameCase, FrameInit, FrameState, Profile, Theorem3Sign,
};
use crate::error::{Error, Result};
use crate::lorentz::LorentzVec3;
use crate::surface::{Immersion, Rect};

/// Initial data of the frame equations in JSON form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FrameInitSpec {
    State {
        a: LorentzVec3,
        b: LorentzVec3,
        h: LorentzVec3,
    },
    Constants {
        c1: LorentzVec3,
        c2: LorentzVec3,
        c3: LorentzVec3,
        #[serde(default)]
        sign: Theorem3Sign,
    },
}

impl From<&FrameInitSpec> for FrameInit {
    fn from(s: &FrameInitSpec) -> Self {
        match *s {
            FrameInitSpec::State { a, b, h } => FrameInit::State(FrameState::new(a, b, h)),
            FrameInitSpec::Constants { c1, c2, c3, sign } => FrameInit::Constants { c1, c2, c3, sign },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub a: CurveExpr,
    pub b: CurveExpr,
}

fn zero_psi() -> Profile {
    Profile::Constant { value: 0.0 }
}

/// A surface family with its parameters and optional domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Minimal {
        c1: f64,
        c2: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Rect>,
    },
    Flat {
        c: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Rect>,
    },
    General {
        pair: PairSpec,
        theta: Profile,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Rect>,
    },
    FromCurve {
        f: CurveExpr,
        theta: Profile,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Rect>,
    },
    Theorem3 {
        case: FrameCase,
        #[serde(default = "zero_psi")]
        psi: Profile,
        init: FrameInitSpec,
        theta: Profile,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Rect>,
    },
    Example {
        id: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<Rect>,
    },
}

/// Externally tagged mirror of [`FamilySpec`] used for located errors.
struct Tagged(FamilySpec);

impl<'de> Deserialize<'de> for Tagged {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(rename_all = "snake_case", deny_unknown_fields)]
        enum External {
            Minimal {
                c1: f64,
                c2: f64,
                #[serde(default)]
                domain: Option<Rect>,
            },
            Flat {
                c: f64,
                #[serde(default)]
                domain: Option<Rect>,
            },
            General {
                pair: PairSpec,
                theta: Profile,
                #[serde(default)]
                domain: Option<Rect>,
            },
            FromCurve {
                f: CurveExpr,
                theta: Profile,
                #[serde(default)]
                domain: Option<Rect>,
            },
            Theorem3 {
                case: FrameCase,
                #[serde(default = "zero_psi")]
                psi: Profile,
                init: FrameInitSpec,
                theta: Profile,
                #[serde(default)]
                domain: Option<Rect>,
            },
            Example {
                id: String,
                #[serde(default)]
                domain: Option<Rect>,
            },
        }
        Ok(Tagged(match External::deserialize(d)? {
            External::Minimal { c1, c2, domain } => FamilySpec::Minimal { c1, c2, domain },
            External::Flat { c, domain } => FamilySpec::Flat { c, domain },
            External::General { pair, theta, domain } => FamilySpec::General { pair, theta, domain },
            External::FromCurve { f, theta, domain } => FamilySpec::FromCurve { f, theta, domain },
            External::Theorem3 {
                case,
                psi,
                init,
                theta,
                domain,
            } => FamilySpec::Theorem3 {
                case,
                psi,
                init,
                theta,
                domain,
            },
            External::Example { id, domain } => FamilySpec::Example { id, domain },
        }))
    }
}

fn profile_domain(theta: &Profile, domain: Option<Rect>) -> Result<Rect> {
    match domain {
        Some(d) => Ok(d),
        None => {
            let (x0, x1) = theta.default_interval();
            Rect::new(x0, x1, -1.0, 1.0)
        }
    }
}

impl FamilySpec {
    /// Parses JSON; errors name the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let invalid = |path: String, message: String| Error::InvalidSpec { path, message };
        // Internally tagged enums buffer their content, which hides field
        // paths; re-tag externally so every field error is located.
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| invalid(".".into(), e.to_string()))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| invalid(".".into(), "expected a JSON object".into()))?;
        let tag = match obj.remove("family") {
            Some(serde_json::Value::String(t)) => t,
            Some(_) => return Err(invalid("family".into(), "expected a string".into())),
            None => return Err(invalid("family".into(), "missing field `family`".into())),
        };
        let external = serde_json::json!({ tag.clone(): value });
        serde_path_to_error::deserialize::<_, Tagged>(external)
            .map(|t| t.0)
            .map_err(|e| {
                let path = e.path().to_string();
                // Strip the synthetic variant segment; an error at the top
                // level can only be an unknown family name.
                let path = match path.split_once('.') {
                    Some((head, rest)) if !head.is_empty() => rest.to_string(),
                    None if path == tag => ".".to_string(),
                    _ => "family".to_string(),
                };
                invalid(path, e.into_inner().to_string())
            })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family spec serializes")
    }

    /// The domain the built surface will carry.
    pub fn domain(&self) -> Result<Rect> {
        self.build().map(|s| s.domain())
    }

    pub fn build(&self) -> Result<Immersion> {
        match self {
            &FamilySpec::Minimal { c1, c2, domain } => make_minimal(c1, c2, domain),
            &FamilySpec::Flat { c, domain } => make_flat(c, Some(domain.map_or_else(|| flat_default_domain(c), Ok)?)),
            FamilySpec::General { pair, theta, domain } => {
                let d = profile_domain(theta, *domain)?;
                let angle = theta.to_angle(d.x0, d.x1)?;
                make_general(&CurvePair::from_exprs(&pair.a, &pair.b), &angle, d)
            }
            FamilySpec::FromCurve { f, theta, domain } => {
                let d = profile_domain(theta, *domain)?;
                make_from_curve(&f.to_curve(), &theta.to_angle(d.x0, d.x1)?, d)
            }
            FamilySpec::Theorem3 {
                case,
                psi,
                init,
                theta,
                domain,
            } => {
                let d = profile_domain(theta, *domain)?;
                make_theorem3(*case, psi, &init.into(), &theta.to_angle(d.x0, d.x1)?, d)
            }
            FamilySpec::Example { id, domain } => {
                let s = make_named_example(id)?;
                match domain {
                    Some(d) => {
                        d.validate()?;
                        Ok(s.with_domain(*d))
                    }
                    None => Ok(s),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal() {
        let s = FamilySpec::from_json(r#"{"family":"minimal","c1":1,"c2":0}"#).unwrap();
        assert_eq!(s, FamilySpec::Minimal { c1: 1.0, c2: 0.0, domain: None });
        s.build().unwrap();
    }

    #[test]
    fn error_names_field() {
        match FamilySpec::from_json(r#"{"family":"flat","c":"zero"}"#) {
            Err(Error::InvalidSpec { path, .. }) => assert_eq!(path, "c"),
            other => panic!("{other:?}"),
        }
        match FamilySpec::from_json(
            r#"{"family":"general","pair":{"a":[[],[],[]],"b":[[],[],[{"coeff":"x"}]]},"theta":{"kind":"arccos"}}"#,
        ) {
            Err(Error::InvalidSpec { path, .. }) => assert_eq!(path, "pair.b[2][0].coeff"),
            other => panic!("{other:?}"),
        }
        match FamilySpec::from_json(r#"{"family":"minimal","c1":1}"#) {
            Err(Error::InvalidSpec { message, .. }) => assert!(message.contains("c2"), "{message}"),
            other => panic!("{other:?}"),
        }
        match FamilySpec::from_json(r#"{"family":"sphere"}"#) {
            Err(Error::InvalidSpec { path, message }) => {
                assert_eq!(path, "family");
                assert!(message.contains("sphere"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn theorem3_rotation_matches_example() {
        let json = r#"{
            "family": "theorem3", "case": 1,
            "init": {"state": {"a": [0,1,0], "b": [0,0,1], "h": [1,0,0]}},
            "theta": {"kind": "linear", "slope": 1},
            "domain": {"x0": 0.2, "x1": 1.3, "y0": -1, "y1": 1}
        }"#;
        let s = FamilySpec::from_json(json).unwrap().build().unwrap();
        let r = make_named_example("rotation").unwrap();
        for &(x, y) in &[(0.3, -0.9), (1.2, 0.7)] {
            let (p, q) = (s.eval(x, y), r.eval(x, y));
            for i in 0..4 {
                assert!((p[i] - q[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn roundtrip() {
        let specs = [
            FamilySpec::Flat { c: -0.5, domain: None },
            FamilySpec::Example { id: "cornu".into(), domain: None },
            FamilySpec::FromCurve {
                f: CurveExpr::constant(LorentzVec3::new(0.0, 0.0, 1.0)),
                theta: Profile::Constant { value: 0.5 },
                domain: Some(Rect { x0: 0.1, x1: 0.5, y0: 0.0, y1: 1.0 }),
            },
        ];
        for s in specs {
            let back = FamilySpec::from_json(&s.to_json()).unwrap();
            assert_eq!(s, back);
        }
    }
}
