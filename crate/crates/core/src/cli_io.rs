//! Plumbing behind the `h2xr` command line: configs, mesh export, report
//! files and exit codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::families::{AngleField, FamilySpec};
use crate::special::{ellip_f, fresnel_c, fresnel_s, jacobi_am};
use crate::surface::{sample, Immersion, Rect};
use crate::verifiers::{default_tolerance, Grid, ResidualReport, Verifier, CHECKS};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Errors of a command, each mapped to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Lib {
        context: String,
        #[source]
        source: Error,
    },

    #[error("cannot {action} `{}`: {source}", path.display())]
    Io {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib { source, .. } if source.is_numeric() => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        }
    }

    fn lib(context: impl Into<String>) -> impl FnOnce(Error) -> CliError {
        let context = context.into();
        move |source| CliError::Lib { context, source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            action: "create directory",
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a JSON argument given inline (starting with `{`) or as a file path.
pub fn read_json_arg(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|source| CliError::Io {
        action: "read",
        path: PathBuf::from(arg),
        source,
    })
}

/// Target coordinates of exported vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// `(x₁, x₂, x₃, t)` as computed.
    Raw4d,
    /// `(x₁/(1+x₃), x₂/(1+x₃), t)`: Poincaré disk times the line.
    /// For display only.
    PoincareDiskXR,
}

impl Chart {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "raw4d" => Ok(Chart::Raw4d),
            "poincare_disk_x_r" | "poincare" => Ok(Chart::PoincareDiskXR),
            _ => Err(CliError::Usage(format!(
                "unknown chart `{s}` (expected raw4d or poincare_disk_x_r)"
            ))),
        }
    }

    pub fn project(self, p: [f64; 4]) -> Vec<f64> {
        match self {
            Chart::Raw4d => p.to_vec(),
            Chart::PoincareDiskXR => {
                let d = 1.0 + p[2];
                vec![p[0] / d, p[1] / d, p[3]]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshFormat {
    Obj,
    Csv,
}

impl MeshFormat {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "obj" => Ok(MeshFormat::Obj),
            "csv" => Ok(MeshFormat::Csv),
            _ => Err(CliError::Usage(format!("unknown format `{s}` (expected obj or csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshExportConfig {
    pub chart: Chart,
    pub nx: usize,
    pub ny: usize,
    pub out: PathBuf,
    pub format: MeshFormat,
}

impl MeshExportConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(CliError::Usage(format!(
                "mesh grid needs nx, ny >= 2, got {} x {}",
                self.nx, self.ny
            )));
        }
        if self.format == MeshFormat::Obj && self.chart == Chart::Raw4d {
            return Err(CliError::Usage(
                "OBJ vertices are three-dimensional; use --chart poincare_disk_x_r or --format csv".into(),
            ));
        }
        Ok(())
    }

    /// Path of the per-vertex curvature table written next to the mesh.
    pub fn curvature_path(&self) -> PathBuf {
        self.out.with_extension("curvature.csv")
    }
}

/// Files written by [`cmd_generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedMesh {
    pub mesh: PathBuf,
    pub curvature: PathBuf,
    pub vertices: usize,
    pub faces: usize,
}

fn mesh_grid(imm: &Immersion, nx: usize, ny: usize) -> CliResult<Grid> {
    Grid::new(nx, ny, imm.domain()).map_err(CliError::lib("mesh grid"))
}

fn join_row(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Writes the mesh of `spec` and its curvature table.
pub fn cmd_generate(spec: &FamilySpec, cfg: &MeshExportConfig) -> CliResult<GeneratedMesh> {
    cfg.validate()?;
    let imm = spec.build().map_err(CliError::lib("building the surface"))?;
    export_mesh(&imm, cfg)
}

/// Mesh export of an already built surface.
pub fn export_mesh(imm: &Immersion, cfg: &MeshExportConfig) -> CliResult<GeneratedMesh> {
    cfg.validate()?;
    let grid = mesh_grid(imm, cfg.nx, cfg.ny)?;
    let points = grid.points();
    let vertices: Vec<Vec<f64>> = points.iter().map(|&(x, y)| cfg.chart.project(imm.eval(x, y))).collect();
    if let Some(k) = vertices.iter().position(|v| v.iter().any(|c| !c.is_finite())) {
        let (x, y) = points[k];
        return Err(CliError::Lib {
            context: "evaluating the surface".into(),
            source: Error::DegeneratePoint {
                x,
                y,
                reason: "non-finite vertex".into(),
            },
        });
    }

    let mut mesh = String::new();
    let mut faces = 0;
    match cfg.format {
        MeshFormat::Obj => {
            let _ = writeln!(mesh, "# {}", imm.tag());
            for v in &vertices {
                let _ = writeln!(mesh, "v {} {} {}", v[0], v[1], v[2]);
            }
            let idx = |i: usize, j: usize| j * cfg.nx + i + 1;
            for j in 0..cfg.ny - 1 {
                for i in 0..cfg.nx - 1 {
                    let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                    let _ = writeln!(mesh, "f {a} {b} {c}");
                    let _ = writeln!(mesh, "f {a} {c} {d}");
                    faces += 2;
                }
            }
        }
        MeshFormat::Csv => {
            mesh.push_str(match cfg.chart {
                Chart::Raw4d => "x1,x2,x3,t\n",
                Chart::PoincareDiskXR => "u,v,t\n",
            });
            for v in &vertices {
                mesh.push_str(&join_row(v));
                mesh.push('\n');
            }
        }
    }

    // Curvatures need a stencil around the point; near the boundary the
    // fields are left empty.
    let engine = Verifier::default().cfg;
    let rows: Vec<String> = points
        .par_iter()
        .map(|&(x, y)| match sample(imm, x, y, &engine) {
            Ok(s) => format!("{x},{y},{},{},{},{}", s.k1, s.k2, s.gauss, s.mean),
            Err(_) => format!("{x},{y},,,,"),
        })
        .collect();
    let mut curv = String::from("x,y,k1,k2,gauss,mean\n");
    for r in rows {
        curv.push_str(&r);
        curv.push('\n');
    }

    let curvature = cfg.curvature_path();
    write_file(&cfg.out, &mesh)?;
    write_file(&curvature, &curv)?;
    Ok(GeneratedMesh {
        mesh: cfg.out.clone(),
        curvature,
        vertices: vertices.len(),
        faces,
    })
}

fn default_n() -> usize {
    20
}

/// A verification run: surface, checks and tolerance overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Absent when only `minimal_angle_pde` is requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<FamilySpec>,
    pub checks: Vec<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_n")]
    pub nx: usize,
    #[serde(default = "default_n")]
    pub ny: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cmc_target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_field: Option<AngleField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_domain: Option<Rect>,
}

impl RunConfig {
    pub fn new(surface: Option<FamilySpec>, checks: Vec<String>) -> Self {
        RunConfig {
            surface,
            checks,
            tolerances: BTreeMap::new(),
            nx: default_n(),
            ny: default_n(),
            cmc_target: None,
            angle_field: None,
            angle_domain: None,
        }
    }

    /// Parses JSON; errors name the offending field path.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let spec_err = |path: String, message: String| CliError::Lib {
            context: "parsing the run configuration".into(),
            source: Error::InvalidSpec { path, message },
        };
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| spec_err(".".into(), e.to_string()))?;
        let surface = match value.as_object_mut().and_then(|o| o.remove("surface")) {
            Some(s) => Some(FamilySpec::from_json(&s.to_string()).map_err(|e| match e {
                Error::InvalidSpec { path, message } => {
                    let path = if path == "." { "surface".into() } else { format!("surface.{path}") };
                    spec_err(path, message)
                }
                other => CliError::lib("parsing the run configuration")(other),
            })?),
            None => None,
        };
        let mut cfg: RunConfig = serde_path_to_error::deserialize(value)
            .map_err(|e| spec_err(e.path().to_string(), e.into_inner().to_string()))?;
        cfg.surface = surface;
        Ok(cfg)
    }

    /// Rejects unknown checks and tolerance names before anything runs.
    pub fn validate(&self) -> CliResult<()> {
        if self.checks.is_empty() {
            return Err(CliError::Usage("no checks requested".into()));
        }
        for c in &self.checks {
            if !CHECKS.contains(&c.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown check `{c}` (known: {})",
                    CHECKS.join(", ")
                )));
            }
        }
        for (name, &tol) in &self.tolerances {
            if default_tolerance(name).is_none() {
                return Err(CliError::Usage(format!("unknown report name `{name}` in tolerances")));
            }
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::Usage(format!("tolerance of `{name}` must be positive, got {tol}")));
            }
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(CliError::Usage(format!("grid needs nx, ny >= 2, got {} x {}", self.nx, self.ny)));
        }
        let needs_surface = self.checks.iter().any(|c| c != "minimal_angle_pde");
        if needs_surface && self.surface.is_none() {
            return Err(CliError::Usage("the requested checks need a surface spec".into()));
        }
        if self.checks.iter().any(|c| c == "minimal_angle_pde") {
            let f = self
                .angle_field
                .ok_or_else(|| CliError::Usage("minimal_angle_pde needs an angle field".into()))?;
            f.validate().map_err(CliError::lib("angle field"))?;
            if let Some(r) = self.angle_domain {
                r.validate().map_err(CliError::lib("angle domain"))?;
            }
        }
        Ok(())
    }

    pub fn verifier(&self) -> Verifier {
        let mut v = Verifier::new(self.nx, self.ny);
        v.tolerances = self.tolerances.clone();
        if let Some(t) = self.cmc_target {
            v.cmc_target = t;
        }
        v
    }
}

/// Reports of a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub reports: Vec<ResidualReport>,
}

impl VerifyOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            EXIT_PASS
        } else {
            EXIT_VERIFY_FAILED
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.reports).expect("reports serialize")
    }
}

/// Unit square, the default domain of angle fields.
const UNIT_SQUARE: Rect = Rect {
    x0: 0.0,
    x1: 1.0,
    y0: 0.0,
    y1: 1.0,
};

/// Runs every requested check and, if `report` is given, writes the JSON
/// array of reports there. Nothing is written when the config is invalid.
pub fn cmd_verify(run: &RunConfig, report: Option<&Path>) -> CliResult<VerifyOutcome> {
    run.validate()?;
    let imm = match &run.surface {
        Some(s) => Some(s.build().map_err(CliError::lib("building the surface"))?),
        None => None,
    };
    let outcome = verify_surface(run, imm.as_ref())?;
    if let Some(path) = report {
        write_file(path, &outcome.to_json())?;
    }
    Ok(outcome)
}

fn verify_surface(run: &RunConfig, imm: Option<&Immersion>) -> CliResult<VerifyOutcome> {
    let verifier = run.verifier();
    let field = run.angle_field.as_ref().map(|f| (f, run.angle_domain.unwrap_or(UNIT_SQUARE)));
    let mut reports = Vec::new();
    for check in &run.checks {
        reports.extend(
            verifier
                .run(check, imm, field)
                .map_err(|e| CliError::Usage(e.to_string()))?,
        );
    }
    Ok(VerifyOutcome { reports })
}

/// `printf("%.{digits}g")`.
pub fn format_g(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let strip = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip(mantissa), sign, exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip(&format!("{:.*}", decimals, v))
    }
}

/// Special-function names accepted by [`cmd_specfun`] with their arity.
pub const SPECFUNS: &[(&str, usize)] = &[("ellip_f", 2), ("jacobi_am", 2), ("fresnel_c", 1), ("fresnel_s", 1)];

/// Evaluates a special function and formats it with 15 significant digits.
pub fn cmd_specfun(name: &str, args: &[f64]) -> CliResult<String> {
    let arity = SPECFUNS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, a)| a)
        .ok_or_else(|| {
            let known: Vec<&str> = SPECFUNS.iter().map(|(n, _)| *n).collect();
            CliError::Usage(format!("unknown function `{name}` (known: {})", known.join(", ")))
        })?;
    if args.len() != arity {
        return Err(CliError::Usage(format!(
            "{name} takes {arity} argument(s), got {}",
            args.len()
        )));
    }
    let value = match name {
        "ellip_f" => ellip_f(args[0], args[1]),
        "jacobi_am" => jacobi_am(args[0], args[1]),
        "fresnel_c" => Ok(fresnel_c(args[0])),
        "fresnel_s" => Ok(fresnel_s(args[0])),
        _ => unreachable!("name checked above"),
    }
    .map_err(CliError::lib(name))?;
    Ok(format_g(value, 15))
}

/// Checks that a named example is expected to satisfy, or, for the
/// positive controls, expected to fail.
pub fn example_checks(id: &str) -> &'static [&'static str] {
    const CANONICAL: &[&str] = &[
        "principal_direction",
        "canonical_pde",
        "normal_flatness",
        "gauss_codazzi",
        "structure_eq",
        "h2_membership",
    ];
    match id {
        "cmc" => &[
            "principal_direction",
            "cmc",
            "canonical_pde",
            "normal_flatness",
            "gauss_codazzi",
            "h2_membership",
        ],
        "cylinder" => &["principal_direction", "flatness", "normal_flatness", "h2_membership"],
        "perturbed_control" => &["principal_direction", "normal_flatness", "canonical_pde"],
        "off_ambient" => &["gauss_codazzi", "structure_eq", "h2_membership"],
        "minimal_conformal" => &["principal_direction", "minimality", "canonical_pde"],
        _ => CANONICAL,
    }
}

/// Files and reports of [`cmd_example`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleOutcome {
    pub mesh: GeneratedMesh,
    pub report_path: PathBuf,
    pub verify: VerifyOutcome,
}

/// Builds a named example, writes `<id>.obj` (Poincaré chart),
/// `<id>.curvature.csv` and `<id>.report.json` under `out_dir`.
pub fn cmd_example(id: &str, nx: usize, ny: usize, out_dir: &Path) -> CliResult<ExampleOutcome> {
    let spec = FamilySpec::Example {
        id: id.to_string(),
        domain: None,
    };
    let imm = spec.build().map_err(CliError::lib("building the example"))?;
    let mesh_cfg = MeshExportConfig {
        chart: Chart::PoincareDiskXR,
        nx,
        ny,
        out: out_dir.join(format!("{id}.obj")),
        format: MeshFormat::Obj,
    };
    let mut run = RunConfig::new(Some(spec), example_checks(id).iter().map(|s| s.to_string()).collect());
    run.nx = nx;
    run.ny = ny;
    run.validate()?;
    let mesh = export_mesh(&imm, &mesh_cfg)?;
    let verify = verify_surface(&run, Some(&imm))?;
    let report_path = out_dir.join(format!("{id}.report.json"));
    write_file(&report_path, &verify.to_json())?;
    Ok(ExampleOutcome {
        mesh,
        report_path,
        verify,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_g_matches_printf() {
        assert_eq!(format_g(0.7, 15), "0.7");
        assert_eq!(format_g(0.0, 15), "0");
        assert_eq!(format_g(1.0, 15), "1");
        assert_eq!(format_g(std::f64::consts::PI, 15), "3.14159265358979");
        assert_eq!(format_g(-2.5e-7, 15), "-2.5e-07");
        assert_eq!(format_g(1.5e20, 15), "1.5e+20");
        assert_eq!(format_g(123456.0, 15), "123456");
        assert_eq!(format_g(1e-4, 15), "0.0001");
        assert_eq!(format_g(0.5, 3), "0.5");
        assert_eq!(format_g(99999.5, 3), "1e+05");
    }

    #[test]
    fn poincare_chart() {
        let p = Chart::PoincareDiskXR.project([0.0, 0.0, 1.0, 2.0]);
        assert_eq!(p, vec![0.0, 0.0, 2.0]);
        let s = 1f64.sinh();
        let q = Chart::PoincareDiskXR.project([s, 0.0, 1f64.cosh(), 0.0]);
        // Distance 1 from the origin maps to radius tanh(1/2).
        assert!((q[0] - 0.5f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn specfun_values() {
        assert_eq!(cmd_specfun("ellip_f", &[0.7, 0.0]).unwrap(), "0.7");
        assert_eq!(cmd_specfun("fresnel_c", &[0.0]).unwrap(), "0");
        assert!(matches!(cmd_specfun("gamma", &[1.0]), Err(CliError::Usage(_))));
        assert!(matches!(cmd_specfun("fresnel_s", &[1.0, 2.0]), Err(CliError::Usage(_))));
    }

    #[test]
    fn run_config_rejects_unknown_check() {
        let cfg = RunConfig::new(None, vec!["curvature".into()]);
        assert_eq!(cfg.validate().unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn run_config_errors_are_located() {
        let err = RunConfig::from_json(r#"{"surface":{"family":"flat","c":"x"},"checks":["flatness"]}"#).unwrap_err();
        match err {
            CliError::Lib {
                source: Error::InvalidSpec { path, .. },
                ..
            } => assert_eq!(path, "surface.c"),
            other => panic!("{other:?}"),
        }
        let err = RunConfig::from_json(r#"{"checks":["flatness"],"nx":"ten"}"#).unwrap_err();
        match err {
            CliError::Lib {
                source: Error::InvalidSpec { path, .. },
                ..
            } => assert_eq!(path, "nx"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn numeric_errors_exit_3() {
        let e = CliError::Lib {
            context: "x".into(),
            source: Error::NoConvergence("y".into()),
        };
        assert_eq!(e.exit_code(), EXIT_NUMERIC);
    }
}
