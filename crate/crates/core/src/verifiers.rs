//! Grid-based residuals of the geometric identities, reported as
//! [`ResidualReport`]s.
//!
//! Points are evaluated in parallel; the reduction (max, mean, argmax) runs
//! sequentially in row-major grid order, so reports are bitwise stable.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{make_minimal, minimal_default_domain, AngleField};
use crate::numeric::{diff1_richardson, diff2_richardson};
use crate::surface::{
    codazzi_residual, gauss_intrinsic, normal_curvature, normals, principal_direction_defect, sample,
    structure_residuals, EngineConfig, Immersion, Rect,
};

/// Smallest `sin θ` at which T is treated as well defined.
pub const MIN_SIN_THETA: f64 = 1e-3;

/// Tolerance on `|E − 1|` and `|F|` for canonical coordinates.
pub const CANONICAL_TOL: f64 = 1e-6;

/// `sin θ` below which the logarithmic form of the angle PDE is not evaluated.
pub const LOG_FORM_MIN_SIN: f64 = 0.1;

/// Default `|H|` of the constant-mean-curvature check.
pub const DEFAULT_CMC_TARGET: f64 = 0.5;

/// Names accepted by [`Verifier::run`].
pub const CHECKS: &[&str] = &[
    "principal_direction",
    "minimality",
    "flatness",
    "cmc",
    "canonical_pde",
    "normal_flatness",
    "gauss_codazzi",
    "structure_eq",
    "h2_membership",
    "minimal_angle_pde",
];

/// Default tolerance of every report name.
pub fn default_tolerance(report: &str) -> Option<f64> {
    Some(match report {
        "principal_direction" => 1e-5,
        "minimality" => 1e-6,
        "flatness_extrinsic" | "flatness_intrinsic" => 1e-4,
        "cmc" => 1e-6,
        "canonical_pde" => 1e-4,
        "normal_flatness" => 1e-5,
        "normal_curvature_identity" => 1e-4,
        "gauss_equation" => 5e-4,
        "codazzi" => 1e-3,
        "nabla_t" => 1e-4,
        "d_cos" => 1e-5,
        "h2_membership" => 1e-9,
        "minimal_angle_pde" | "minimal_angle_pde_log" | "laplacian_convention" => 1e-6,
        _ => return None,
    })
}

/// Report names produced by a check.
pub fn report_names(check: &str) -> Option<&'static [&'static str]> {
    Some(match check {
        "principal_direction" => &["principal_direction"],
        "minimality" => &["minimality"],
        "flatness" => &["flatness_extrinsic", "flatness_intrinsic"],
        "cmc" => &["cmc"],
        "canonical_pde" => &["canonical_pde"],
        "normal_flatness" => &["normal_flatness", "normal_curvature_identity"],
        "gauss_codazzi" => &["gauss_equation", "codazzi"],
        "structure_eq" => &["nabla_t", "d_cos"],
        "h2_membership" => &["h2_membership"],
        "minimal_angle_pde" => &["minimal_angle_pde", "minimal_angle_pde_log", "laplacian_convention"],
        _ => return None,
    })
}

/// Regular `nx × ny` grid over a rectangle, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, rect: Rect) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidParameter(format!("grid needs nx, ny >= 2, got {nx} x {ny}")));
        }
        rect.validate()?;
        Ok(Grid {
            nx,
            ny,
            x0: rect.x0,
            x1: rect.x1,
            y0: rect.y0,
            y1: rect.y1,
        })
    }

    pub fn rect(&self) -> Rect {
        Rect {
            x0: self.x0,
            x1: self.x1,
            y0: self.y0,
            y1: self.y1,
        }
    }

    fn node(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        Self::node(self.x0, self.x1, i, self.nx)
    }

    pub fn y(&self, j: usize) -> f64 {
        Self::node(self.y0, self.y1, j, self.ny)
    }

    /// Points in row-major order (`y` outer, `x` inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (self.x(i), self.y(j))))
            .collect()
    }
}

/// Worst point of a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgMax {
    pub x: f64,
    pub y: f64,
}

/// Outcome of one residual over one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    pub grid: Grid,
    /// `null` in JSON when the residual could not be evaluated.
    #[serde(serialize_with = "finite_or_null", deserialize_with = "null_as_nan")]
    pub max_abs: f64,
    #[serde(serialize_with = "finite_or_null", deserialize_with = "null_as_nan")]
    pub mean_abs: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub argmax: ArgMax,
    /// Why the residual could not be evaluated, if it could not.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

fn null_as_nan<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl ResidualReport {
    fn failed(name: &str, grid: Grid, tolerance: f64, err: &Error, at: (f64, f64)) -> Self {
        ResidualReport {
            name: name.to_string(),
            grid,
            max_abs: f64::NAN,
            mean_abs: f64::NAN,
            tolerance,
            pass: false,
            argmax: ArgMax { x: at.0, y: at.1 },
            error: Some(err.to_string()),
        }
    }
}

/// Evaluates `f` at every grid point and reduces each of its `N` outputs
/// into a report. The first error in grid order fails all `N` reports.
fn evaluate<const N: usize, F>(names: [&str; N], tols: [f64; N], grid: Grid, f: F) -> Vec<ResidualReport>
where
    F: Fn(f64, f64) -> Result<[f64; N]> + Sync,
{
    let points = grid.points();
    let values: Vec<Result<[f64; N]>> = points.par_iter().map(|&(x, y)| f(x, y)).collect();
    if let Some((k, Err(e))) = values.iter().enumerate().find(|(_, v)| v.is_err()) {
        return (0..N)
            .map(|i| ResidualReport::failed(names[i], grid, tols[i], e, points[k]))
            .collect();
    }
    (0..N)
        .map(|i| {
            let mut max = 0.0f64;
            let mut arg = points[0];
            let mut sum = 0.0;
            for (p, v) in points.iter().zip(&values) {
                let a = v.as_ref().expect("errors handled above")[i].abs();
                if a > max || (a.is_nan() && !max.is_nan()) {
                    max = a;
                    arg = *p;
                }
                sum += a;
            }
            ResidualReport {
                name: names[i].to_string(),
                grid,
                max_abs: max,
                mean_abs: sum / points.len() as f64,
                tolerance: tols[i],
                pass: max <= tols[i],
                argmax: ArgMax { x: arg.0, y: arg.1 },
                error: None,
            }
        })
        .collect()
}

/// Grid size, finite-difference steps and tolerances for a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct Verifier {
    pub nx: usize,
    pub ny: usize,
    pub cfg: EngineConfig,
    /// Overrides of [`default_tolerance`] by report name.
    pub tolerances: BTreeMap<String, f64>,
    pub cmc_target: f64,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier::new(20, 20)
    }
}

impl Verifier {
    pub fn new(nx: usize, ny: usize) -> Self {
        Verifier {
            nx,
            ny,
            cfg: EngineConfig::default(),
            tolerances: BTreeMap::new(),
            cmc_target: DEFAULT_CMC_TARGET,
        }
    }

    pub fn with_tolerance(mut self, report: &str, tol: f64) -> Self {
        self.tolerances.insert(report.to_string(), tol);
        self
    }

    pub fn tol(&self, report: &str) -> f64 {
        self.tolerances
            .get(report)
            .copied()
            .or_else(|| default_tolerance(report))
            .unwrap_or(0.0)
    }

    fn tols<const N: usize>(&self, names: [&str; N]) -> [f64; N] {
        names.map(|n| self.tol(n))
    }

    /// The surface's domain shrunk by the stencil margin.
    pub fn interior_grid(&self, imm: &Immersion) -> Result<Grid> {
        Grid::new(self.nx, self.ny, imm.domain().shrink(self.cfg.margin())?)
    }

    fn run_on<const N: usize, F>(&self, names: [&str; N], imm: &Immersion, f: F) -> Vec<ResidualReport>
    where
        F: Fn(f64, f64) -> Result<[f64; N]> + Sync,
    {
        let tols = self.tols(names);
        match self.interior_grid(imm) {
            Ok(grid) => evaluate(names, tols, grid, f),
            Err(e) => {
                let d = imm.domain();
                let grid = Grid {
                    nx: self.nx,
                    ny: self.ny,
                    x0: d.x0,
                    x1: d.x1,
                    y0: d.y0,
                    y1: d.y1,
                };
                (0..N)
                    .map(|i| ResidualReport::failed(names[i], grid, tols[i], &e, d.center()))
                    .collect()
            }
        }
    }

    /// `|g(A e₁, e₂)|`, `e₁ = T/|T|`: vanishes iff T is principal.
    pub fn principal_direction(&self, imm: &Immersion) -> ResidualReport {
        let cfg = self.cfg;
        self.run_on(["principal_direction"], imm, |x, y| {
            let s = sample(imm, x, y, &cfg)?;
            let sin = s.theta.sin();
            if !(sin >= MIN_SIN_THETA) {
                return Err(Error::DegenerateAngle { x, y, sin_theta: sin });
            }
            Ok([principal_direction_defect(&s)])
        })
        .remove(0)
    }

    /// `|H|`.
    pub fn minimality(&self, imm: &Immersion) -> ResidualReport {
        let cfg = self.cfg;
        self.run_on(["minimality"], imm, |x, y| Ok([sample(imm, x, y, &cfg)?.mean]))
            .remove(0)
    }

    /// `| |H| − target |`.
    pub fn cmc(&self, imm: &Immersion) -> ResidualReport {
        let (cfg, target) = (self.cfg, self.cmc_target);
        self.run_on(["cmc"], imm, |x, y| Ok([sample(imm, x, y, &cfg)?.mean.abs() - target]))
            .remove(0)
    }

    /// `|det A − cos²θ|` and the intrinsic `|K|`.
    pub fn flatness(&self, imm: &Immersion) -> Vec<ResidualReport> {
        let cfg = self.cfg;
        self.run_on(["flatness_extrinsic", "flatness_intrinsic"], imm, |x, y| {
            Ok([sample(imm, x, y, &cfg)?.gauss, gauss_intrinsic(imm, x, y, &cfg)?])
        })
    }

    /// `β_xx + tan θ θ_x β_x − β cos²θ` with `β = sqrt(G)`, after checking
    /// that the chart is canonical (`E = 1`, `F = 0`).
    pub fn canonical_pde(&self, imm: &Immersion) -> ResidualReport {
        let cfg = self.cfg;
        self.run_on(["canonical_pde"], imm, |x, y| {
            let s = sample(imm, x, y, &cfg)?;
            let (e, f, _) = s.metric;
            let (e_dev, f_dev) = ((e - 1.0).abs(), f.abs());
            if !(e_dev <= CANONICAL_TOL && f_dev <= CANONICAL_TOL) {
                return Err(Error::NotCanonical { x, y, e_dev, f_dev });
            }
            let beta = |t: f64| {
                crate::surface::partials(imm, t, y, &cfg)
                    .map(|(_, fy)| crate::surface::inner4(&fy, &fy).sqrt())
                    .unwrap_or(f64::NAN)
            };
            let theta = |t: f64| {
                normals(imm, t, y, &cfg)
                    .map(|(_, xi)| xi[3].clamp(-1.0, 1.0).acos())
                    .unwrap_or(f64::NAN)
            };
            let b = beta(x);
            let bx = diff1_richardson(beta, x, cfg.h2);
            let bxx = diff2_richardson(beta, x, cfg.h2);
            let tx = diff1_richardson(theta, x, cfg.h2);
            let t = s.theta;
            Ok([bxx + t.tan() * tx * bx - b * t.cos().powi(2)])
        })
        .remove(0)
    }

    /// `|R⊥(∂x,∂y)ξ|` and its distance from the angle-function prediction.
    pub fn normal_flatness(&self, imm: &Immersion) -> Vec<ResidualReport> {
        let cfg = self.cfg;
        self.run_on(["normal_flatness", "normal_curvature_identity"], imm, |x, y| {
            let n = normal_curvature(imm, x, y, &cfg)?;
            Ok([n.norm(), n.identity_defect()])
        })
    }

    /// Gauss equation `K_intrinsic = det A − cos²θ` and the Codazzi defect.
    pub fn gauss_codazzi(&self, imm: &Immersion) -> Vec<ResidualReport> {
        let cfg = self.cfg;
        self.run_on(["gauss_equation", "codazzi"], imm, |x, y| {
            let k = gauss_intrinsic(imm, x, y, &cfg)?;
            let s = sample(imm, x, y, &cfg)?;
            Ok([k - s.gauss, codazzi_residual(imm, x, y, &cfg)?])
        })
    }

    /// `∇_X T = cos θ A X` and `X(cos θ) = −g(AX, T)`.
    pub fn structure_eq(&self, imm: &Immersion) -> Vec<ResidualReport> {
        let cfg = self.cfg;
        self.run_on(["nabla_t", "d_cos"], imm, |x, y| {
            let r = structure_residuals(imm, x, y, &cfg)?;
            Ok([r.nabla_t, r.d_cos])
        })
    }

    /// `|<F_H, F_H> + 1|` over the full domain.
    pub fn h2_membership(&self, imm: &Immersion) -> ResidualReport {
        let names = ["h2_membership"];
        let tols = self.tols(names);
        match Grid::new(self.nx, self.ny, imm.domain()) {
            Ok(grid) => evaluate(names, tols, grid, |x, y| {
                let p = imm.eval(x, y);
                Ok([p[0] * p[0] + p[1] * p[1] - p[2] * p[2] + 1.0])
            })
            .remove(0),
            Err(e) => {
                let d = imm.domain();
                let grid = Grid {
                    nx: self.nx,
                    ny: self.ny,
                    x0: d.x0,
                    x1: d.x1,
                    y0: d.y0,
                    y1: d.y1,
                };
                ResidualReport::failed(names[0], grid, tols[0], &e, d.center())
            }
        }
    }

    /// Residuals of `cos θ(|∇θ|² − 1) − sin θ Δ₀θ = 0`, of its logarithmic
    /// form `sin²θ Δ₀ ln tan(θ/2) + cos θ = 0`, and of their sum (which
    /// vanishes identically). The logarithmic form is evaluated only where
    /// `sin θ ≥ LOG_FORM_MIN_SIN`.
    pub fn minimal_angle_pde(&self, field: &AngleField, rect: Rect) -> Vec<ResidualReport> {
        let names = ["minimal_angle_pde", "minimal_angle_pde_log", "laplacian_convention"];
        let tols = self.tols(names);
        let grid = match Grid::new(self.nx, self.ny, rect).and_then(|g| field.validate().map(|_| g)) {
            Ok(g) => g,
            Err(e) => {
                let grid = Grid {
                    nx: self.nx,
                    ny: self.ny,
                    x0: rect.x0,
                    x1: rect.x1,
                    y0: rect.y0,
                    y1: rect.y1,
                };
                return names
                    .iter()
                    .zip(tols)
                    .map(|(n, t)| ResidualReport::failed(n, grid, t, &e, rect.center()))
                    .collect();
            }
        };
        let (h2, h1) = (self.cfg.h2, self.cfg.h1);
        evaluate(names, tols, grid, |x, y| {
            let th = field.eval(x, y)?;
            let fx = |s: f64| field.eval(s, y).unwrap_or(f64::NAN);
            let fy = |s: f64| field.eval(x, s).unwrap_or(f64::NAN);
            let (tx, ty) = (diff1_richardson(fx, x, h2), diff1_richardson(fy, y, h2));
            let lap = diff2_richardson(fx, x, h2) + diff2_richardson(fy, y, h2);
            let r11 = th.cos() * (tx * tx + ty * ty - 1.0) - th.sin() * lap;
            if th.sin() < LOG_FORM_MIN_SIN {
                return Ok([r11, 0.0, 0.0]);
            }
            let log_tan = |t: f64| (0.5 * t).tan().ln();
            let lx = |s: f64| log_tan(fx(s));
            let ly = |s: f64| log_tan(fy(s));
            let lap_l = diff2_richardson(lx, x, h1) + diff2_richardson(ly, y, h1);
            let r10 = th.sin().powi(2) * lap_l + th.cos();
            Ok([r11, r10, r10 + r11])
        })
    }

    /// Runs a named check. `field` and `field_rect` are used only by
    /// `minimal_angle_pde`; without a field it yields a failed report.
    pub fn run(
        &self,
        check: &str,
        imm: Option<&Immersion>,
        field: Option<(&AngleField, Rect)>,
    ) -> Result<Vec<ResidualReport>> {
        let names = report_names(check).ok_or_else(|| Error::InvalidParameter(format!("unknown check `{check}`")))?;
        if check == "minimal_angle_pde" {
            return Ok(match field {
                Some((f, r)) => self.minimal_angle_pde(f, r),
                None => self.missing(names, "minimal_angle_pde needs an angle field"),
            });
        }
        let Some(imm) = imm else {
            return Ok(self.missing(names, "check needs a surface"));
        };
        Ok(match check {
            "principal_direction" => vec![self.principal_direction(imm)],
            "minimality" => vec![self.minimality(imm)],
            "flatness" => self.flatness(imm),
            "cmc" => vec![self.cmc(imm)],
            "canonical_pde" => vec![self.canonical_pde(imm)],
            "normal_flatness" => self.normal_flatness(imm),
            "gauss_codazzi" => self.gauss_codazzi(imm),
            "structure_eq" => self.structure_eq(imm),
            "h2_membership" => vec![self.h2_membership(imm)],
            _ => unreachable!("names checked above"),
        })
    }

    fn missing(&self, names: &[&str], why: &str) -> Vec<ResidualReport> {
        let grid = Grid {
            nx: self.nx,
            ny: self.ny,
            x0: 0.0,
            x1: 0.0,
            y0: 0.0,
            y1: 0.0,
        };
        names
            .iter()
            .map(|n| {
                ResidualReport::failed(n, grid, self.tol(n), &Error::InvalidParameter(why.to_string()), (0.0, 0.0))
            })
            .collect()
    }
}

/// Outcome of the flat-and-minimal scan for one parameter pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub c1: f64,
    pub c2: f64,
    /// `None` when the pair was skipped.
    pub domain: Option<Rect>,
    /// Largest Gaussian curvature over the grid.
    pub max_gauss: f64,
    /// Smallest `|K|` over the grid.
    pub min_abs_gauss: f64,
    pub argmax: ArgMax,
    /// Why the pair was skipped (inadmissible parameters).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// Maximum of `K` over an interior grid of every admissible minimal
/// surface in `params`. Inadmissible pairs are recorded as skipped.
pub fn flat_and_minimal_scan(params: &[(f64, f64)], nx: usize, ny: usize, cfg: &EngineConfig) -> Vec<ScanEntry> {
    params
        .iter()
        .map(|&(c1, c2)| {
            let skipped = |why: String| ScanEntry {
                c1,
                c2,
                domain: None,
                max_gauss: f64::NAN,
                min_abs_gauss: f64::NAN,
                argmax: ArgMax { x: 0.0, y: 0.0 },
                skipped: Some(why),
            };
            let imm = match minimal_default_domain(c1, c2).and_then(|d| make_minimal(c1, c2, Some(d))) {
                Ok(s) => s,
                Err(e) => return skipped(e.to_string()),
            };
            let grid = match imm.domain().shrink(cfg.margin()).and_then(|r| Grid::new(nx, ny, r)) {
                Ok(g) => g,
                Err(e) => return skipped(e.to_string()),
            };
            let pts = grid.points();
            let ks: Vec<Result<f64>> = pts.par_iter().map(|&(x, y)| sample(&imm, x, y, cfg).map(|s| s.gauss)).collect();
            let mut max = f64::NEG_INFINITY;
            let mut min_abs = f64::INFINITY;
            let mut arg = pts[0];
            for (p, k) in pts.iter().zip(ks) {
                let k = match k {
                    Ok(k) => k,
                    Err(e) => return skipped(e.to_string()),
                };
                if k > max {
                    max = k;
                    arg = *p;
                }
                min_abs = min_abs.min(k.abs());
            }
            ScanEntry {
                c1,
                c2,
                domain: Some(imm.domain()),
                max_gauss: max,
                min_abs_gauss: min_abs,
                argmax: ArgMax { x: arg.0, y: arg.1 },
                skipped: None,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_flat, make_named_example, minimal_angle_field};

    fn v() -> Verifier {
        Verifier::new(8, 8)
    }

    #[test]
    fn grid_points_row_major_with_exact_ends() {
        let g = Grid::new(3, 2, Rect::new(0.0, 0.3, 1.0, 2.0).unwrap()).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 6);
        assert_eq!(p[2], (0.3, 1.0));
        assert_eq!(p[3], (0.0, 2.0));
    }

    #[test]
    fn report_json_schema() {
        let s = make_named_example("rotation").unwrap();
        let r = v().h2_membership(&s);
        let j: serde_json::Value = serde_json::to_value(&r).unwrap();
        for k in ["name", "grid", "max_abs", "mean_abs", "tolerance", "pass", "argmax"] {
            assert!(j.get(k).is_some(), "{k}");
        }
        for k in ["nx", "ny", "x0", "x1", "y0", "y1"] {
            assert!(j["grid"].get(k).is_some(), "{k}");
        }
        assert!(j.get("error").is_none());
        let back: ResidualReport = serde_json::from_value(j).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rotation_passes_principal_direction() {
        let s = make_named_example("rotation").unwrap();
        let r = v().principal_direction(&s);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn flat_is_flat_and_canonical() {
        let s = make_flat(-0.5, None).unwrap();
        for r in v().flatness(&s) {
            assert!(r.pass, "{r:?}");
        }
        let r = v().canonical_pde(&s);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn conformal_chart_is_not_canonical() {
        let s = make_named_example("minimal_conformal").unwrap();
        let r = v().canonical_pde(&s);
        assert!(!r.pass);
        assert!(r.error.as_deref().unwrap().contains("not canonical"), "{r:?}");
    }

    #[test]
    fn perturbed_control_fails_principal_direction() {
        let s = make_named_example("perturbed_control").unwrap();
        let r = v().principal_direction(&s);
        assert!(!r.pass && r.error.is_none(), "{r:?}");
    }

    #[test]
    fn angle_pde_forms() {
        let f: AngleField = minimal_angle_field(1.0, 1.0, 1.0).unwrap().into();
        let rs = v().minimal_angle_pde(&f, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap());
        for r in &rs {
            assert!(r.pass, "{r:?}");
        }
        let half_pi = AngleField::Linear {
            a: std::f64::consts::FRAC_PI_2,
            bx: 0.0,
            by: 0.0,
        };
        let rs = v().minimal_angle_pde(&half_pi, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap());
        // Zero up to the round-off of the difference stencils.
        assert!(rs[0].max_abs < 1e-10, "{:?}", rs[0]);
        let theta_x = AngleField::Linear { a: 0.0, bx: 1.0, by: 0.0 };
        let rs = v().minimal_angle_pde(&theta_x, Rect::new(0.2, 1.0, 0.0, 1.0).unwrap());
        assert!(rs[0].max_abs < 1e-9, "{:?}", rs[0]);
        let bad = AngleField::Linear { a: 1.0, bx: 0.3, by: 0.0 };
        let rs = v().minimal_angle_pde(&bad, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap());
        assert!(!rs[0].pass);
    }

    #[test]
    fn unknown_check() {
        assert!(v().run("torsion", None, None).is_err());
        let rs = v().run("minimal_angle_pde", None, None).unwrap();
        assert!(rs.iter().all(|r| !r.pass && r.error.is_some()));
    }

    #[test]
    fn scan_skips_inadmissible() {
        let e = flat_and_minimal_scan(&[(1.0, 0.0), (0.0, -2.0)], 6, 6, &EngineConfig::default());
        assert!(e[0].skipped.is_none() && e[0].max_gauss <= -0.05, "{:?}", e[0]);
        assert!(e[1].skipped.is_some());
    }

    #[test]
    fn deterministic() {
        let s = make_named_example("cmc").unwrap();
        let a = v().gauss_codazzi(&s);
        let b = v().gauss_codazzi(&s);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
