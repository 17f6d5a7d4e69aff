//! Catalog of named surfaces: the worked examples in closed form plus a
//! few fixtures (controls that deliberately break one hypothesis).

use std::sync::Arc;

use super::{build_general, make_from_curve, make_minimal, CurveExpr, CurvePair, Profile, Term, Trig};
use crate::error::{Error, Result};
use crate::numeric::{rk4, DEFAULT_RK4_STEP};
use crate::surface::{Immersion, Rect};

/// `(id, description)` of every named example.
pub const NAMED_EXAMPLES: &[(&str, &str)] = &[
    ("rotation", "frame case 1 with psi = 0 and theta = x: (sin y sinh(sin x), cos y sinh(sin x), cosh(sin x), 1 - cos x)"),
    ("case2_arccos", "frame case 2 with psi = 0 and theta = arccos x"),
    ("psi_y_case1", "frame case 1 with psi = y, theta = x"),
    ("psi_y_case2", "frame case 2 with psi = y, theta = x"),
    ("parabola", "frame case 3 with c1 = (0,1,0), c2 = (0,0,1), c3 = (1,0,0), theta = x"),
    ("cornu", "the parabola pair with theta = x^2; (phi, chi) is a Cornu spiral"),
    ("cmc", "constant mean curvature 1/2: (x, sqrt(1+x^2) sinh y, sqrt(1+x^2) cosh y, sqrt(1+x^2) - 1)"),
    ("cylinder", "the vertical cylinder f x R over the geodesic (0, sinh x, cosh x)"),
    ("constant_angle", "single-curve form over the horocycle (y, -y^2/2, 1 + y^2/2) with theta = 0.7"),
    ("perturbed_control", "rotation example with theta = x + 0.1 sin y (T not principal, not normally flat)"),
    ("off_ambient", "rotation example translated off H2 by (0.3, 0, 0)"),
    ("minimal_conformal", "minimal surface (c1, c2) = (1, 0) in a conformal, non-canonical chart"),
];

/// `θ(x, y)` of the `perturbed_control` fixture.
pub fn perturbed_angle(x: f64, y: f64) -> f64 {
    x + 0.1 * y.sin()
}

fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Rect {
    Rect { x0, x1, y0, y1 }
}

/// `(coeff, pow, factors)` of one term.
type TermParts<'a> = (f64, u32, &'a [(Trig, f64)]);

fn expr(parts: [&[TermParts]; 3]) -> CurveExpr {
    let comp = |p: &[TermParts]| p.iter().map(|&(c, k, f)| Term::new(c, k, f)).collect();
    CurveExpr([comp(parts[0]), comp(parts[1]), comp(parts[2])])
}

fn parabola_pair() -> CurvePair {
    let a = expr([&[(1.0, 1, &[])], &[(1.0, 0, &[]), (-0.5, 2, &[])], &[(0.5, 2, &[])]]);
    let b = expr([&[(1.0, 1, &[])], &[(-0.5, 2, &[])], &[(1.0, 0, &[]), (0.5, 2, &[])]]);
    CurvePair::from_exprs(&a, &b)
}

fn psi_y_case1_pair() -> CurvePair {
    use Trig::*;
    let a = expr([
        &[(1.0, 1, &[(Sinh, 1.0)]), (-1.0, 0, &[(Cosh, 1.0)])],
        &[(-0.5, 2, &[(Sinh, 1.0)]), (1.0, 1, &[(Cosh, 1.0)])],
        &[(0.5, 2, &[(Sinh, 1.0)]), (-1.0, 1, &[(Cosh, 1.0)]), (1.0, 0, &[(Sinh, 1.0)])],
    ]);
    let b = expr([
        &[(1.0, 1, &[(Cosh, 1.0)]), (-1.0, 0, &[(Sinh, 1.0)])],
        &[(-0.5, 2, &[(Cosh, 1.0)]), (1.0, 1, &[(Sinh, 1.0)])],
        &[(0.5, 2, &[(Cosh, 1.0)]), (-1.0, 1, &[(Sinh, 1.0)]), (1.0, 0, &[(Cosh, 1.0)])],
    ]);
    CurvePair::from_exprs(&a, &b)
}

fn psi_y_case2_pair() -> CurvePair {
    use Trig::*;
    let w = std::f64::consts::SQRT_2;
    let iw = 1.0 / w;
    let a = expr([
        &[(1.0, 0, &[(Sinh, w), (Sinh, 1.0)]), (-iw, 0, &[(Cosh, w), (Cosh, 1.0)])],
        &[(iw, 0, &[(Cosh, 1.0)])],
        &[(1.0, 0, &[(Cosh, w), (Sinh, 1.0)]), (-iw, 0, &[(Sinh, w), (Cosh, 1.0)])],
    ]);
    let b = expr([
        &[(1.0, 0, &[(Sinh, w), (Cosh, 1.0)]), (-iw, 0, &[(Cosh, w), (Sinh, 1.0)])],
        &[(iw, 0, &[(Sinh, 1.0)])],
        &[(1.0, 0, &[(Cosh, w), (Cosh, 1.0)]), (-iw, 0, &[(Sinh, w), (Sinh, 1.0)])],
    ]);
    CurvePair::from_exprs(&a, &b)
}

fn theta_x(lo: f64, hi: f64) -> Result<super::AngleProfile> {
    Profile::Linear {
        slope: 1.0,
        intercept: 0.0,
    }
    .to_angle(lo, hi)
}

fn rotation(offset: f64) -> Immersion {
    let tag = if offset == 0.0 { "rotation" } else { "off_ambient" };
    Immersion::new(tag, rect(0.2, 1.3, -1.0, 1.0), move |x, y| {
        let p = x.sin();
        [y.sin() * p.sinh() + offset, y.cos() * p.sinh(), p.cosh(), 1.0 - x.cos()]
    })
    .with_partials(
        |x, y| {
            let (p, c) = (x.sin(), x.cos());
            [c * y.sin() * p.cosh(), c * y.cos() * p.cosh(), c * p.sinh(), x.sin()]
        },
        |x, y| {
            let p = x.sin();
            [y.cos() * p.sinh(), -y.sin() * p.sinh(), 0.0, 0.0]
        },
    )
}

fn perturbed() -> Immersion {
    // θ = x + δ(y): φ = sin(x + δ) − sin δ, χ = cos δ − cos(x + δ).
    let parts = |x: f64, y: f64| {
        let d = 0.1 * y.sin();
        let dp = 0.1 * y.cos();
        let phi = (x + d).sin() - d.sin();
        let chi = d.cos() - (x + d).cos();
        (d, dp, phi, chi)
    };
    Immersion::new("perturbed_control", rect(0.2, 1.3, -1.0, 1.0), move |x, y| {
        let (_, _, p, c) = parts(x, y);
        [y.sin() * p.sinh(), y.cos() * p.sinh(), p.cosh(), c]
    })
    .with_partials(
        move |x, y| {
            let (d, _, p, _) = parts(x, y);
            let px = (x + d).cos();
            [px * y.sin() * p.cosh(), px * y.cos() * p.cosh(), px * p.sinh(), (x + d).sin()]
        },
        move |x, y| {
            let (d, dp, p, _) = parts(x, y);
            let py = ((x + d).cos() - d.cos()) * dp;
            let cy = ((x + d).sin() - d.sin()) * dp;
            [
                y.cos() * p.sinh() + y.sin() * p.cosh() * py,
                -y.sin() * p.sinh() + y.cos() * p.cosh() * py,
                p.sinh() * py,
                cy,
            ]
        },
    )
}

/// The `(1, 0)` minimal surface re-parametrized by `x = x(u)` with
/// `x' = β(x)`, so that the metric becomes `β²(du² + dy²)`.
fn minimal_conformal() -> Result<Immersion> {
    let base = make_minimal(1.0, 0.0, Some(rect(0.1, 1.7, -1.0, 1.0)))?;
    let beta = |x: f64| ((x.cosh().powi(2) + 1.0) / 2.0).sqrt();
    let field = move |_: f64, s: &[f64], out: &mut [f64]| out[0] = beta(s[0]);
    let (u0, u1) = (0.0, 0.7);
    let traj = Arc::new(rk4(field, u0 - 0.05, &[0.2 - 0.05 * beta(0.2)], u1 + 0.05, DEFAULT_RK4_STEP)?);
    let xu = move |u: f64| traj.dense(&field, u)[0];
    let (b1, b2, b3) = (base.clone(), base.clone(), base);
    let (x1, x2, x3) = (xu.clone(), xu.clone(), xu);
    Ok(Immersion::new("minimal_conformal", rect(u0, u1, -1.0, 1.0), move |u, y| b1.eval(x1(u), y))
        .with_partials(
            move |u, y| {
                let x = x2(u);
                let fx = b2.analytic_partials(x, y).expect("minimal family has partials").0;
                fx.map(|v| v * beta(x))
            },
            move |u, y| b3.analytic_partials(x3(u), y).expect("minimal family has partials").1,
        ))
}

/// Builds the named example on its default domain.
pub fn make_named_example(id: &str) -> Result<Immersion> {
    match id {
        "rotation" | "rotation_theta_x" => Ok(rotation(0.0)),
        "off_ambient" => Ok(rotation(0.3)),
        "perturbed_control" => Ok(perturbed()),
        "case2_arccos" => Ok(Immersion::new("case2_arccos", rect(0.1, 0.9, -1.0, 1.0), |x, y| {
            let p = 0.5 * x * x;
            [
                y.sinh() * p.cosh(),
                p.sinh(),
                y.cosh() * p.cosh(),
                0.5 * (x * (1.0 - x * x).sqrt() + x.asin()),
            ]
        })
        .with_partials(
            |x, y| {
                let p = 0.5 * x * x;
                [x * y.sinh() * p.sinh(), x * p.cosh(), x * y.cosh() * p.sinh(), (1.0 - x * x).sqrt()]
            },
            |x, y| {
                let p = 0.5 * x * x;
                [y.cosh() * p.cosh(), 0.0, y.sinh() * p.cosh(), 0.0]
            },
        )),
        "cmc" => Ok(Immersion::new("cmc", rect(0.1, 2.0, -1.0, 1.0), |x, y| {
            let w = (1.0 + x * x).sqrt();
            [x, w * y.sinh(), w * y.cosh(), w - 1.0]
        })
        .with_partials(
            |x, y| {
                let w = (1.0 + x * x).sqrt();
                [1.0, x / w * y.sinh(), x / w * y.cosh(), x / w]
            },
            |x, y| {
                let w = (1.0 + x * x).sqrt();
                [0.0, w * y.cosh(), w * y.sinh(), 0.0]
            },
        )),
        "cylinder" => Ok(Immersion::new("cylinder", rect(-1.0, 1.0, -1.0, 1.0), |x, y| {
            [0.0, x.sinh(), x.cosh(), y]
        })
        .with_partials(|x, _| [0.0, x.cosh(), x.sinh(), 0.0], |_, _| [0.0, 0.0, 0.0, 1.0])),
        "psi_y_case1" => {
            let d = rect(0.2, 1.3, 0.1, 1.1);
            build_general(id, &psi_y_case1_pair(), &theta_x(d.x0, d.x1)?, d, 0.0)
        }
        "psi_y_case2" => {
            let d = rect(0.2, 1.3, 0.1, 1.1);
            build_general(id, &psi_y_case2_pair(), &theta_x(d.x0, d.x1)?, d, 0.0)
        }
        "parabola" => {
            let d = rect(0.2, 1.3, -1.0, 1.0);
            build_general(id, &parabola_pair(), &theta_x(d.x0, d.x1)?, d, 0.0)
        }
        "cornu" => {
            let d = rect(0.3, 1.2, -1.0, 1.0);
            let angle = Profile::Power {
                coeff: 1.0,
                exponent: 2.0,
            }
            .to_angle(d.x0, d.x1)?;
            build_general(id, &parabola_pair(), &angle, d, 0.0)
        }
        "constant_angle" => {
            let d = rect(0.2, 1.3, -1.0, 1.0);
            let angle = Profile::Constant { value: 0.7 }.to_angle(d.x0, d.x1)?;
            let f = parabola_pair().b;
            let imm = make_from_curve(&f, &angle, d)?;
            Ok(rename(imm, "constant_angle"))
        }
        "minimal_conformal" => minimal_conformal(),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

fn rename(imm: Immersion, tag: &str) -> Immersion {
    let (a, b) = (imm.clone(), imm.clone());
    let domain = imm.domain();
    let fx = move |x, y| a.analytic_partials(x, y).expect("has partials").0;
    let fy = move |x, y| b.analytic_partials(x, y).expect("has partials").1;
    Immersion::new(tag, domain, move |x, y| imm.eval(x, y)).with_partials(fx, fy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::LorentzVec3;
    use crate::numeric::diff1_richardson;
    use crate::special::fresnel_s;

    #[test]
    fn rotation_at_origin() {
        assert_eq!(make_named_example("rotation_theta_x").unwrap().eval(0.0, 0.0), [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn cmc_fourth_component_at_zero() {
        assert_eq!(make_named_example("cmc").unwrap().eval(0.0, 0.4)[3], 0.0);
    }

    #[test]
    fn cornu_fourth_component() {
        let c = make_named_example("cornu").unwrap();
        let x: f64 = 0.9;
        let s = (std::f64::consts::PI / 2.0).sqrt();
        let want = s * fresnel_s(x / s);
        assert!((c.eval(x, 0.2)[3] - want).abs() < 1e-15);
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(make_named_example("torus"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn printed_pairs_are_valid() {
        psi_y_case1_pair().validate(-1.5, 1.5).unwrap();
        psi_y_case2_pair().validate(-1.5, 1.5).unwrap();
        parabola_pair().validate(-1.5, 1.5).unwrap();
    }

    #[test]
    fn parabola_example_matches_frame_case3() {
        use crate::families::{integrate_frame, FrameCase, FrameInit, Theorem3Sign};
        let init = FrameInit::Constants {
            c1: LorentzVec3::new(0.0, 1.0, 0.0),
            c2: LorentzVec3::new(0.0, 0.0, 1.0),
            c3: LorentzVec3::new(1.0, 0.0, 0.0),
            sign: Theorem3Sign::Plus,
        };
        let f = integrate_frame(FrameCase::Lightlike, &Profile::Constant { value: 0.0 }, &init, -1.0, 1.0, 1e-3)
            .unwrap();
        let p = parabola_pair();
        for y in [-0.8, 0.25] {
            assert!((f.at(y).a - p.a.at(y)).max_abs() < 1e-15);
        }
    }

    #[test]
    fn analytic_partials_match_differences() {
        for &(id, _) in NAMED_EXAMPLES {
            let s = make_named_example(id).unwrap();
            let (x, y) = s.domain().center();
            let (fx, fy) = s.analytic_partials(x, y).unwrap();
            for i in 0..4 {
                let dx = diff1_richardson(|t| s.eval(t, y)[i], x, 1e-3);
                let dy = diff1_richardson(|t| s.eval(x, t)[i], y, 1e-3);
                assert!((fx[i] - dx).abs() < 1e-8, "{id} x {i}: {} vs {dx}", fx[i]);
                assert!((fy[i] - dy).abs() < 1e-8, "{id} y {i}: {} vs {dy}", fy[i]);
            }
        }
    }
}
