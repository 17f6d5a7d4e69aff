use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use h2xr_core::cli_io::{
    cmd_example, cmd_generate, cmd_specfun, cmd_verify, read_json_arg, Chart, CliError, CliResult, MeshExportConfig,
    MeshFormat, RunConfig, VerifyOutcome, EXIT_PASS,
};
use h2xr_core::families::{AngleField, FamilySpec};
use h2xr_core::surface::Rect;

/// Surfaces in H²×R with a canonical principal direction.
#[derive(Parser)]
#[command(name = "h2xr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the mesh of a surface family.
    Generate {
        /// Family spec: inline JSON or a file path.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 50)]
        nx: usize,
        #[arg(long, default_value_t = 50)]
        ny: usize,
        /// raw4d or poincare_disk_x_r.
        #[arg(long, default_value = "poincare_disk_x_r")]
        chart: String,
        /// obj or csv.
        #[arg(long, default_value = "obj")]
        format: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run residual checks and write a JSON report.
    Verify {
        /// Family spec: inline JSON or a file path.
        #[arg(long)]
        spec: Option<String>,
        /// Full run configuration (JSON or path); flags below override it.
        #[arg(long)]
        config: Option<String>,
        /// Comma-separated check names.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        ny: Option<usize>,
        /// Tolerance override, `report_name=value`; repeatable.
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tolerances: Vec<String>,
        #[arg(long, allow_negative_numbers = true)]
        cmc_target: Option<f64>,
        /// Angle field for minimal_angle_pde, e.g. {"field":"jacobi","k":1,"c":1}.
        #[arg(long)]
        angle_field: Option<String>,
        /// Rectangle of the angle field as `x0,x1,y0,y1`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        angle_domain: Vec<f64>,
    },
    /// Evaluate a special function: ellip_f z m | jacobi_am u m | fresnel_c x | fresnel_s x.
    Specfun {
        name: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<f64>,
    },
    /// Build a named example, export its mesh and run its checks.
    Example {
        id: String,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 30)]
        nx: usize,
        #[arg(long, default_value_t = 30)]
        ny: usize,
    },
}

fn parse_spec(arg: &str) -> CliResult<FamilySpec> {
    FamilySpec::from_json(&read_json_arg(arg)?).map_err(|source| CliError::Lib {
        context: "parsing the family spec".into(),
        source,
    })
}

fn print_summary(outcome: &VerifyOutcome) {
    for r in &outcome.reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        match &r.error {
            Some(e) => println!("{status} {} (tol {:e}): {e}", r.name, r.tolerance),
            None => println!("{status} {} max {:e} (tol {:e})", r.name, r.max_abs, r.tolerance),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_run(
    spec: Option<String>,
    config: Option<String>,
    checks: Vec<String>,
    nx: Option<usize>,
    ny: Option<usize>,
    tolerances: Vec<String>,
    cmc_target: Option<f64>,
    angle_field: Option<String>,
    angle_domain: Vec<f64>,
) -> CliResult<RunConfig> {
    let mut run = match config {
        Some(c) => RunConfig::from_json(&read_json_arg(&c)?)?,
        None => RunConfig::new(None, Vec::new()),
    };
    if let Some(s) = spec {
        run.surface = Some(parse_spec(&s)?);
    }
    if !checks.is_empty() {
        run.checks = checks;
    }
    run.nx = nx.unwrap_or(run.nx);
    run.ny = ny.unwrap_or(run.ny);
    for t in tolerances {
        let (name, value) = t
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("tolerance `{t}` is not NAME=VALUE")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| CliError::Usage(format!("tolerance `{t}` has a non-numeric value")))?;
        run.tolerances.insert(name.to_string(), value);
    }
    if cmc_target.is_some() {
        run.cmc_target = cmc_target;
    }
    if let Some(f) = angle_field {
        let text = read_json_arg(&f)?;
        let field: AngleField = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid angle field: {e}")))?;
        run.angle_field = Some(field);
    }
    match angle_domain.as_slice() {
        [] => {}
        &[x0, x1, y0, y1] => run.angle_domain = Some(Rect { x0, x1, y0, y1 }),
        _ => return Err(CliError::Usage("--angle-domain takes x0,x1,y0,y1".into())),
    }
    Ok(run)
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Generate {
            spec,
            nx,
            ny,
            chart,
            format,
            out,
        } => {
            let cfg = MeshExportConfig {
                chart: Chart::parse(&chart)?,
                nx,
                ny,
                out,
                format: MeshFormat::parse(&format)?,
            };
            let spec = parse_spec(&spec)?;
            let mesh = cmd_generate(&spec, &cfg)?;
            println!(
                "wrote {} ({} vertices, {} faces) and {}",
                mesh.mesh.display(),
                mesh.vertices,
                mesh.faces,
                mesh.curvature.display()
            );
            Ok(EXIT_PASS)
        }
        Command::Verify {
            spec,
            config,
            checks,
            report,
            nx,
            ny,
            tolerances,
            cmc_target,
            angle_field,
            angle_domain,
        } => {
            let run = build_run(spec, config, checks, nx, ny, tolerances, cmc_target, angle_field, angle_domain)?;
            let outcome = cmd_verify(&run, report.as_deref())?;
            print_summary(&outcome);
            Ok(outcome.exit_code())
        }
        Command::Specfun { name, args } => {
            println!("{}", cmd_specfun(&name, &args)?);
            Ok(EXIT_PASS)
        }
        Command::Example { id, out_dir, nx, ny } => {
            let out = cmd_example(&id, nx, ny, &out_dir)?;
            print_summary(&out.verify);
            println!("wrote {} and {}", out.mesh.mesh.display(), out.report_path.display());
            Ok(out.verify.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
