//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::f64::consts::FRAC_PI_2;

use h2xr_core::cli_io::{cmd_verify, RunConfig, EXIT_VERIFY_FAILED};
use h2xr_core::families::{
    integrate_frame, beta_ode_residual, angle_ode_residual, make_flat, make_minimal, make_named_example, AngleField,
    FamilySpec, FrameCase, FrameInit, FrameState, Profile, Theorem3Sign,
};
use h2xr_core::lorentz::{causal_character, CausalCharacter, LorentzVec3};
use h2xr_core::numeric::integrate;
use h2xr_core::special::{ellip_f, fresnel_c, fresnel_s, jacobi_am};
use h2xr_core::surface::{gauss_intrinsic, sample, Immersion, Rect};
use h2xr_core::verifiers::{flat_and_minimal_scan, ResidualReport, Verifier};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances.
const MINIMALITY_TOL: f64 = 1e-6;
const PRINCIPAL_TOL: f64 = 1e-5;
const H2_TOL: f64 = 1e-9;
const CANONICAL_PDE_TOL: f64 = 1e-4;
const FLAT_K_TOL: f64 = 1e-4;
const K_AGREEMENT_TOL: f64 = 5e-4;
const CMC_TOL: f64 = 1e-6;
const NORMAL_FLAT_TOL: f64 = 1e-5;
const IDENTITY_TOL: f64 = 1e-4;
const CONTROL_FLATNESS_MIN: f64 = 1e-3;
const FRAME_VALUE_TOL: f64 = 1e-8;
const FRAME_DRIFT_TOL: f64 = 1e-8;
const CAUSAL_TOL: f64 = 1e-7;
const ODE_TOL: f64 = 1e-7;
const SPECIAL_TOL: f64 = 1e-10;
const ROUNDTRIP_TOL: f64 = 1e-9;
const CHI_IDENTITY_TOL: f64 = 1e-9;
const ANGLE_PDE_TOL: f64 = 1e-6;
const SCAN_K_MAX: f64 = -1e-3;

struct Outcome {
    failures: usize,
}

impl Outcome {
    fn record(&mut self, id: u32, title: &str, lines: Vec<(bool, String)>) {
        let ok = lines.iter().all(|(p, _)| *p);
        println!("{} criterion {id}: {title}", if ok { "PASS" } else { "FAIL" });
        for (p, msg) in lines {
            println!("    [{}] {msg}", if p { "ok" } else { "FAILED" });
        }
        if !ok {
            self.failures += 1;
        }
    }
}

fn check(report: &ResidualReport) -> (bool, String) {
    let detail = match &report.error {
        Some(e) => format!("error: {e}"),
        None => format!("max {:.3e} <= {:.0e}", report.max_abs, report.tolerance),
    };
    (report.pass, format!("{}: {detail}", report.name))
}

fn named(label: &str, mut line: (bool, String)) -> (bool, String) {
    line.1 = format!("{label} {}", line.1);
    line
}

fn verifier(n: usize) -> Verifier {
    Verifier::new(n, n)
        .with_tolerance("minimality", MINIMALITY_TOL)
        .with_tolerance("principal_direction", PRINCIPAL_TOL)
        .with_tolerance("h2_membership", H2_TOL)
        .with_tolerance("canonical_pde", CANONICAL_PDE_TOL)
        .with_tolerance("flatness_extrinsic", FLAT_K_TOL)
        .with_tolerance("flatness_intrinsic", FLAT_K_TOL)
        .with_tolerance("cmc", CMC_TOL)
        .with_tolerance("normal_flatness", NORMAL_FLAT_TOL)
        .with_tolerance("normal_curvature_identity", IDENTITY_TOL)
        .with_tolerance("minimal_angle_pde", ANGLE_PDE_TOL)
        .with_tolerance("minimal_angle_pde_log", ANGLE_PDE_TOL)
        .with_tolerance("laplacian_convention", ANGLE_PDE_TOL)
}

fn criterion_1(out: &mut Outcome) {
    let v = verifier(50);
    let mut lines = Vec::new();
    for (c1, c2) in [(1.0, 0.0), (0.0, 2.0), (1.0, 1.0)] {
        let label = format!("({c1}, {c2})");
        match make_minimal(c1, c2, None) {
            Ok(s) => {
                lines.push(named(&label, check(&v.minimality(&s))));
                lines.push(named(&label, check(&v.principal_direction(&s))));
                lines.push(named(&label, check(&v.h2_membership(&s))));
                lines.push(named(&label, check(&v.canonical_pde(&s))));
            }
            Err(e) => lines.push((false, format!("{label} construction failed: {e}"))),
        }
    }
    out.record(1, "minimal family is minimal, T-principal, on H2xR, canonical", lines);
}

fn criterion_2(out: &mut Outcome) {
    let v = verifier(50);
    let mut lines = Vec::new();
    for c in [0.0, -0.5, -4.0, -1.0] {
        let label = format!("c = {c}");
        let s = match make_flat(c, None) {
            Ok(s) => s,
            Err(e) => {
                lines.push((false, format!("{label} construction failed: {e}")));
                continue;
            }
        };
        for r in v.flatness(&s) {
            lines.push(named(&label, check(&r)));
        }
        let grid = v.interior_grid(&s).expect("interior grid");
        let mut worst = 0.0f64;
        let mut err = None;
        for (x, y) in grid.points() {
            match (sample(&s, x, y, &v.cfg), gauss_intrinsic(&s, x, y, &v.cfg)) {
                (Ok(p), Ok(k)) => worst = worst.max((p.gauss - k).abs()),
                (Err(e), _) | (_, Err(e)) => {
                    err = Some(e);
                    break;
                }
            }
        }
        lines.push(match err {
            Some(e) => (false, format!("{label} K agreement: error {e}")),
            None => (
                worst <= K_AGREEMENT_TOL,
                format!("{label} |K_extrinsic - K_intrinsic| max {worst:.3e} <= {K_AGREEMENT_TOL:.0e}"),
            ),
        });
    }
    out.record(2, "flat family has K = 0 by both formulas", lines);
}

fn criterion_3(out: &mut Outcome) {
    let v = verifier(40);
    let s = make_named_example("cmc").expect("cmc example");
    let cmc = v.cmc(&s);
    let mut lines = vec![check(&cmc), check(&v.principal_direction(&s))];
    // Independently of the report: |H| itself at every node.
    let grid = v.interior_grid(&s).unwrap();
    let worst = grid
        .points()
        .iter()
        .map(|&(x, y)| sample(&s, x, y, &v.cfg).map_or(f64::INFINITY, |p| (p.mean.abs() - 0.5).abs()))
        .fold(0.0f64, f64::max);
    lines.push((worst <= CMC_TOL, format!("||H| - 1/2| max {worst:.3e} <= {CMC_TOL:.0e}")));
    out.record(3, "CMC example has H^2 = 1/4 and T principal", lines);
}

fn theorem4_surfaces() -> Vec<(String, Immersion)> {
    let mut v: Vec<(String, Immersion)> = [
        "rotation",
        "case2_arccos",
        "psi_y_case1",
        "psi_y_case2",
        "parabola",
        "cornu",
        "cmc",
        "cylinder",
        "constant_angle",
        "minimal_conformal",
    ]
    .iter()
    .map(|id| (id.to_string(), make_named_example(id).expect("example")))
    .collect();
    for (c1, c2) in [(1.0, 0.0), (0.0, 2.0), (1.0, 1.0)] {
        v.push((format!("minimal({c1}, {c2})"), make_minimal(c1, c2, None).unwrap()));
    }
    for c in [0.0, -0.5, -4.0, -1.0] {
        v.push((format!("flat({c})"), make_flat(c, None).unwrap()));
    }
    v
}

fn criterion_4(out: &mut Outcome) {
    let v = verifier(30);
    let mut lines = Vec::new();
    for (name, s) in theorem4_surfaces() {
        let reports = v.normal_flatness(&s);
        lines.push(named(&name, check(&reports[0])));
    }
    let control = make_named_example("perturbed_control").unwrap();
    let reports = v.normal_flatness(&control);
    let (flat, identity) = (&reports[0], &reports[1]);
    lines.push(named("perturbed_control", check(identity)));
    lines.push((
        flat.max_abs > CONTROL_FLATNESS_MIN,
        format!(
            "perturbed_control normal_flatness max {:.3e} > {CONTROL_FLATNESS_MIN:.0e}",
            flat.max_abs
        ),
    ));
    out.record(4, "normal flatness holds exactly when the angle is y-independent", lines);
}

fn frame_init() -> FrameInit {
    FrameInit::State(FrameState::new(
        LorentzVec3::new(0.0, 1.0, 0.0),
        LorentzVec3::new(0.0, 0.0, 1.0),
        LorentzVec3::new(1.0, 0.0, 0.0),
    ))
}

fn criterion_5(out: &mut Outcome) {
    let h = 1e-3;
    let mut lines = Vec::new();

    let zero = Profile::Constant { value: 0.0 };
    let t = integrate_frame(FrameCase::Spacelike, &zero, &frame_init(), -2.0, 2.0, h).unwrap();
    let a = t.at(FRAC_PI_2).a;
    let err = (a - LorentzVec3::new(1.0, 0.0, 0.0)).max_abs();
    lines.push((
        err <= FRAME_VALUE_TOL,
        format!("case 1, psi = 0: |A(pi/2) - (1,0,0)| = {err:.3e} <= {FRAME_VALUE_TOL:.0e}"),
    ));

    let psi = Profile::Linear {
        slope: 0.4,
        intercept: 0.2,
    };
    type Kind = fn(CausalCharacter) -> bool;
    for (case, label, want, is_kind) in [
        (FrameCase::Spacelike, "case 1", "spacelike", CausalCharacter::is_spacelike as Kind),
        (FrameCase::Timelike, "case 2", "timelike", CausalCharacter::is_timelike as Kind),
    ] {
        for (p, plabel) in [(&zero, "psi = 0"), (&psi, "psi = 0.2 + 0.4y")] {
            let t = integrate_frame(case, p, &frame_init(), -2.0, 2.0, h).unwrap();
            let traj = t.trajectory().expect("integrated");
            let drift = traj
                .params()
                .iter()
                .zip(traj.states())
                .filter(|(y, _)| y.abs() <= 2.0)
                .map(|(_, s)| FrameState::from_slice(s).drift())
                .fold(0.0f64, f64::max);
            lines.push((
                drift <= FRAME_DRIFT_TOL,
                format!("{label}, {plabel}: invariant drift over |y| <= 2 is {drift:.3e} <= {FRAME_DRIFT_TOL:.0e}"),
            ));
            let ok = (-20..=20).all(|k| {
                let y = 0.1 * k as f64;
                is_kind(causal_character(t.derivative(y).h, CAUSAL_TOL))
            });
            lines.push((ok, format!("{label}, {plabel}: H' is {want} on |y| <= 2")));
        }
    }

    let constants = FrameInit::Constants {
        c1: LorentzVec3::new(0.0, 1.0, 0.0),
        c2: LorentzVec3::new(0.0, 0.0, 1.0),
        c3: LorentzVec3::new(1.0, 0.0, 0.0),
        sign: Theorem3Sign::Plus,
    };
    let t = integrate_frame(FrameCase::Lightlike, &zero, &constants, -2.0, 2.0, h).unwrap();
    let mut err = 0.0f64;
    let mut light = true;
    for k in -20..=20 {
        let y = 0.1 * k as f64;
        let want = LorentzVec3::new(y, 1.0 - y * y / 2.0, y * y / 2.0);
        err = err.max((t.at(y).a - want).max_abs());
        light &= causal_character(t.derivative(y).h, CAUSAL_TOL).is_lightlike();
    }
    lines.push((
        err <= FRAME_VALUE_TOL,
        format!("case 3: |A(y) - (y, 1 - y^2/2, y^2/2)| max {err:.3e} <= {FRAME_VALUE_TOL:.0e}"),
    ));
    lines.push((light, "case 3: H' is lightlike on |y| <= 2".to_string()));
    out.record(5, "frame equations: example, invariant drift, causal character of H'", lines);
}

fn criterion_6(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(20260117);
    let theta = Profile::Linear {
        slope: 0.5,
        intercept: 1.0,
    };
    let mut lines = Vec::new();
    for _ in 0..5 {
        let c1: f64 = rng.random_range(1.0..=2.0);
        let c2: f64 = rng.random_range(-0.5..=0.5);
        let xs: Vec<f64> = (0..=40).map(|k| -1.0 + 0.05 * k as f64).collect();
        let mut r2 = 0.0f64;
        let mut r3 = 0.0f64;
        let mut failed = None;
        for &x in &xs {
            match beta_ode_residual(&theta, c1, c2, x) {
                Ok(r) => r2 = r2.max(r.abs()),
                Err(e) => failed = Some(e),
            }
            r3 = r3.max(angle_ode_residual(c1, c2, x).abs());
        }
        let label = format!("(c1, c2) = ({c1:.4}, {c2:.4})");
        lines.push(match failed {
            Some(e) => (false, format!("{label} beta ODE: {e}")),
            None => (r2 <= ODE_TOL, format!("{label} beta ODE residual {r2:.3e} <= {ODE_TOL:.0e}")),
        });
        lines.push((r3 <= ODE_TOL, format!("{label} angle ODE residual {r3:.3e} <= {ODE_TOL:.0e}")));
    }
    out.record(6, "closed-form ODE solutions satisfy their equations", lines);
}

fn criterion_7(out: &mut Outcome) {
    let quad = |f: &dyn Fn(f64) -> f64, z: f64| integrate(f, 0.0, z, 1e-13).expect("oracle converges");
    let mut lines = Vec::new();

    // (z, m): m from -5 up to 0.95, z on both sides of pi/2.
    let points: Vec<(f64, f64)> = (0..20)
        .map(|i| {
            let m = -5.0 + 0.3 * i as f64 + if i == 19 { 0.25 } else { 0.0 };
            let z = -2.5 + 0.27 * i as f64;
            (z, m)
        })
        .collect();
    let mut worst = 0.0f64;
    let mut worst_rt = 0.0f64;
    for &(z, m) in &points {
        let f = ellip_f(z, m).unwrap();
        let oracle = quad(&|t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), z);
        worst = worst.max((f - oracle).abs());
        worst_rt = worst_rt.max((jacobi_am(f, m).unwrap() - z).abs());
    }
    lines.push((worst <= SPECIAL_TOL, format!("ellip_f vs quadrature max {worst:.3e} <= {SPECIAL_TOL:.0e}")));
    lines.push((
        worst_rt <= ROUNDTRIP_TOL,
        format!("jacobi_am(ellip_f(z | m) | m) - z max {worst_rt:.3e} <= {ROUNDTRIP_TOL:.0e}"),
    ));

    let zs: Vec<f64> = (0..20).map(|i| -4.0 + 0.41 * i as f64).collect();
    let (mut wc, mut ws) = (0.0f64, 0.0f64);
    for &z in &zs {
        let arg = |t: f64| std::f64::consts::PI * t * t / 2.0;
        wc = wc.max((fresnel_c(z) - quad(&|t| arg(t).cos(), z)).abs());
        ws = ws.max((fresnel_s(z) - quad(&|t| arg(t).sin(), z)).abs());
    }
    lines.push((wc <= SPECIAL_TOL, format!("fresnel_c vs quadrature max {wc:.3e} <= {SPECIAL_TOL:.0e}")));
    lines.push((ws <= SPECIAL_TOL, format!("fresnel_s vs quadrature max {ws:.3e} <= {SPECIAL_TOL:.0e}")));

    // The fourth coordinate of the minimal surface with a = c cosh x, c = 1.
    let c: f64 = 1.0;
    let s = make_minimal(c, 0.0, Some(Rect::new(0.05, 2.05, -1.0, 1.0).unwrap())).unwrap();
    let mut worst_chi = 0.0f64;
    for k in 0..=38 {
        let x = 0.1 + 0.05 * k as f64;
        let chi = s.eval(x, 0.0)[3];
        let amp = (1.0 / x.cosh()).acos();
        let want = ellip_f(amp, 1.0 / (1.0 + c * c)).unwrap() / (c * c + 1.0).sqrt();
        worst_chi = worst_chi.max((chi - want).abs());
    }
    lines.push((
        worst_chi <= CHI_IDENTITY_TOL,
        format!("chi(x) vs elliptic closed form on [0.1, 2] max {worst_chi:.3e} <= {CHI_IDENTITY_TOL:.0e}"),
    ));
    out.record(7, "special functions against quadrature", lines);
}

fn criterion_8(out: &mut Outcome) {
    let v = verifier(50);
    let field = AngleField::Jacobi {
        k: 1.0,
        c: 1.0,
        sign: 1.0,
    };
    let rect = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
    let lines = v.minimal_angle_pde(&field, rect).iter().map(check).collect();
    out.record(8, "Jacobi-amplitude angle field solves the minimal-angle PDE in both forms", lines);
}

fn criterion_9(out: &mut Outcome) {
    let vals = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let params: Vec<(f64, f64)> = vals.iter().flat_map(|&c1| vals.iter().map(move |&c2| (c1, c2))).collect();
    let inadmissible = [(0.0, 0.0), (0.0, -1.0), (0.0, -2.0), (1.0, -2.0), (-1.0, -2.0)];
    let v = verifier(30);
    let mut lines = Vec::new();
    for e in flat_and_minimal_scan(&params, v.nx, v.ny, &v.cfg) {
        let label = format!("({}, {})", e.c1, e.c2);
        let expected_skip = inadmissible.contains(&(e.c1, e.c2));
        lines.push(match (&e.skipped, expected_skip) {
            (Some(_), true) => (true, format!("{label} inadmissible, skipped")),
            (Some(why), false) => (false, format!("{label} unexpectedly skipped: {why}")),
            (None, true) => (false, format!("{label} should have been rejected")),
            (None, false) => (
                e.max_gauss <= SCAN_K_MAX,
                format!("{label} max K {:.4e} <= {SCAN_K_MAX:.0e}", e.max_gauss),
            ),
        });
    }
    out.record(9, "no minimal member is flat", lines);
}

fn criterion_10(out: &mut Outcome) {
    let example = |id: &str| FamilySpec::Example {
        id: id.into(),
        domain: None,
    };
    let minimal = FamilySpec::Minimal {
        c1: 1.0,
        c2: 0.0,
        domain: None,
    };
    let fixtures: Vec<(&str, Option<FamilySpec>, Option<AngleField>)> = vec![
        ("principal_direction", Some(example("perturbed_control")), None),
        ("minimality", Some(example("cmc")), None),
        ("flatness", Some(minimal.clone()), None),
        ("cmc", Some(minimal), None),
        ("canonical_pde", Some(example("minimal_conformal")), None),
        ("canonical_pde", Some(example("off_ambient")), None),
        ("normal_flatness", Some(example("perturbed_control")), None),
        ("gauss_codazzi", Some(example("off_ambient")), None),
        ("structure_eq", Some(example("off_ambient")), None),
        ("h2_membership", Some(example("off_ambient")), None),
        (
            "minimal_angle_pde",
            None,
            Some(AngleField::Linear {
                a: 1.0,
                bx: 0.3,
                by: 0.0,
            }),
        ),
    ];
    let mut lines = Vec::new();
    for (check_name, surface, field) in fixtures {
        let fixture = match (&surface, &field) {
            (Some(FamilySpec::Example { id, .. }), _) => id.clone(),
            (Some(FamilySpec::Minimal { .. }), _) => "minimal(1, 0)".into(),
            _ => "theta = 1 + 0.3x".into(),
        };
        let mut run = RunConfig::new(surface, vec![check_name.to_string()]);
        run.nx = 20;
        run.ny = 20;
        run.angle_field = field;
        lines.push(match cmd_verify(&run, None) {
            Ok(o) => {
                let code = o.exit_code();
                let failing: Vec<&str> = o.reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
                (
                    code == EXIT_VERIFY_FAILED,
                    format!("{check_name} on {fixture}: exit {code}, failing {failing:?}"),
                )
            }
            Err(e) => (false, format!("{check_name} on {fixture}: command error {e}")),
        });
    }
    out.record(10, "every verifier fails its positive control", lines);
}

fn main() {
    let mut out = Outcome { failures: 0 };
    criterion_1(&mut out);
    criterion_2(&mut out);
    criterion_3(&mut out);
    criterion_4(&mut out);
    criterion_5(&mut out);
    criterion_6(&mut out);
    criterion_7(&mut out);
    criterion_8(&mut out);
    criterion_9(&mut out);
    criterion_10(&mut out);
    if out.failures > 0 {
        println!("{} acceptance criteria failed", out.failures);
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
