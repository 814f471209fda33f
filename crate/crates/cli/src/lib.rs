//! `casimir` command-line front end.
//!
//! Distances are in metres, temperatures in kelvin and frequencies in Hz at
//! this boundary; everything is converted to SI angular units internally.
//! Exit codes: 0 success, 2 argument or I/O error, 3 material database
//! error, 4 convergence failure.

pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use casimir_core::asymptotics::{
    ideal_cp_force, ideal_pp_pressure, lowt_ratio_cp, lowt_ratio_pp, plasma_delta, t_eff, thermal_cp_force,
    thermal_pp_pressure, ExpansionInputs,
};
use casimir_core::dce::{detection_budget, photon_number, DceParams, Elapsed, TransitionSpec, LI6_HYPERFINE_HZ};
use casimir_core::materials::{default_materials, load_material_db};
use casimir_core::pfa::force_cp;
use casimir_core::units::{hz_to_angular, BOHR_RADIUS, E_CHARGE, FINE_STRUCTURE};
use casimir_core::{
    force_pp, pressure_pp, AreaConvention, CasimirError, CylinderPlane, ForceResult, M0Policy, MaterialRecord,
    ModelKind, NumericsConfig, ParallelPlates,
};

use table::{emit_quantities, emit_table, Format, Quantity, Row};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MATERIAL_DB: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

/// Environment variable naming the default material database.
pub const DB_ENV: &str = "CASIMIR_MATERIAL_DB";

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir forces between real metals at finite temperature"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parallel plates: pressure [Pa], or force [N] when --area is given.
    #[command(allow_hyphen_values = true)]
    Pp(PpArgs),
    /// Cylinder-plane force [N] in the proximity force approximation.
    #[command(allow_hyphen_values = true)]
    Cp(CpArgs),
    /// Force or pressure over a range of gaps for several models.
    #[command(allow_hyphen_values = true)]
    Sweep(SweepArgs),
    /// Closed-form limits at one gap.
    #[command(allow_hyphen_values = true)]
    Asymptote(AsymptoteArgs),
    /// Dynamical Casimir photon yield and detection budget.
    #[command(allow_hyphen_values = true)]
    Dce(DceArgs),
    /// List the material database.
    Materials(MaterialsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryKind {
    Pp,
    Cp,
}

impl GeometryKind {
    fn as_str(self) -> &'static str {
        match self {
            GeometryKind::Pp => "pp",
            GeometryKind::Cp => "cp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveModel {
    Plasma,
    Drude,
    /// The database record as stored (needed for tabulated materials).
    Tabulated,
    /// Perfect conductors at T = 0.
    Ideal,
    /// High-temperature limit.
    Thermal,
    /// Low-temperature plasma expansion.
    #[value(name = "lowT", alias = "lowt")]
    LowT,
}

impl CurveModel {
    fn as_str(self) -> &'static str {
        match self {
            CurveModel::Plasma => "plasma",
            CurveModel::Drude => "drude",
            CurveModel::Tabulated => "tabulated",
            CurveModel::Ideal => "ideal",
            CurveModel::Thermal => "thermal",
            CurveModel::LowT => "lowT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum M0Arg {
    PlasmaLike,
    DrudeLike,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Cylinder,
    Plane,
    GeometricMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DipoleArg {
    Electric,
    Magnetic,
}

#[derive(Debug, Clone, Args)]
pub struct MaterialArgs {
    /// Material database file [default: $CASIMIR_MATERIAL_DB, else built-in]
    #[arg(long, value_name = "PATH")]
    pub db: Option<PathBuf>,
    /// Material name in the database
    #[arg(long, default_value = "Au")]
    pub material: String,
    /// Permittivity model; overrides the database record (plasma/drude reuse its ω_p and ν)
    #[arg(long, value_parser = parse_model)]
    pub model: Option<ModelKind>,
    /// Zero-frequency TE policy, required for tabulated materials
    #[arg(long, value_enum)]
    pub m0: Option<M0Arg>,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse()
}

#[derive(Debug, Clone, Args)]
pub struct NumericsArgs {
    /// Width of each Matsubara y-integration range [dimensionless, default 50]
    #[arg(long, value_name = "Y")]
    pub y_cut: Option<f64>,
    /// Largest Matsubara frequency kept [Hz, default 1e17 rad/s = 1.59155e16 Hz]
    #[arg(long, value_name = "HZ")]
    pub zeta_max_hz: Option<f64>,
    /// Relative tolerance of every quadrature [dimensionless, default 1e-9]
    #[arg(long, value_name = "TOL")]
    pub rel_tol: Option<f64>,
    /// Upper limit of the cylinder angle integral [rad, default pi/20]
    #[arg(long, value_name = "RAD")]
    pub phi_max: Option<f64>,
    /// Area convention of the proximity force approximation [default cylinder]
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write the table to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads [default: all cores]
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PpArgs {
    #[command(flatten)]
    pub material: MaterialArgs,
    /// Gap d [m]
    #[arg(long = "d", value_name = "M")]
    pub gap: f64,
    /// Temperature [K]
    #[arg(long = "T", value_name = "K", default_value_t = 300.0)]
    pub temperature: f64,
    /// Plate area S [m^2]; without it the pressure is reported
    #[arg(long, value_name = "M2")]
    pub area: Option<f64>,
    #[command(flatten)]
    pub numerics: NumericsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CpArgs {
    #[command(flatten)]
    pub material: MaterialArgs,
    /// Gap d [m]
    #[arg(long = "d", value_name = "M")]
    pub gap: f64,
    /// Cylinder length L [m]
    #[arg(long = "L", value_name = "M", default_value_t = 0.02)]
    pub length: f64,
    /// Cylinder radius a [m]
    #[arg(long = "a", value_name = "M", default_value_t = 0.01)]
    pub radius: f64,
    /// Temperature [K]
    #[arg(long = "T", value_name = "K", default_value_t = 300.0)]
    pub temperature: f64,
    #[command(flatten)]
    pub numerics: NumericsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub material: MaterialArgs,
    /// Geometry
    #[arg(long, value_enum, default_value = "pp")]
    pub geometry: GeometryKind,
    /// Smallest gap [m]
    #[arg(long, value_name = "M")]
    pub d_min: f64,
    /// Largest gap [m]
    #[arg(long, value_name = "M")]
    pub d_max: f64,
    /// Number of gaps (>= 2)
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    /// Gap spacing
    #[arg(long, value_enum, default_value = "log")]
    pub spacing: Spacing,
    /// Comma-separated curves
    #[arg(long, value_enum, value_delimiter = ',', default_value = "plasma,drude")]
    pub models: Vec<CurveModel>,
    /// Temperature [K]
    #[arg(long = "T", value_name = "K", default_value_t = 300.0)]
    pub temperature: f64,
    /// Plate area S for pp [m^2]; without it pressures are reported
    #[arg(long, value_name = "M2")]
    pub area: Option<f64>,
    /// Cylinder length L for cp [m]
    #[arg(long = "L", value_name = "M", default_value_t = 0.02)]
    pub length: f64,
    /// Cylinder radius a for cp [m]
    #[arg(long = "a", value_name = "M", default_value_t = 0.01)]
    pub radius: f64,
    #[command(flatten)]
    pub numerics: NumericsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AsymptoteArgs {
    #[command(flatten)]
    pub material: MaterialArgs,
    /// Geometry
    #[arg(long, value_enum, default_value = "pp")]
    pub geometry: GeometryKind,
    /// Gap d [m]
    #[arg(long = "d", value_name = "M")]
    pub gap: f64,
    /// Temperature [K]
    #[arg(long = "T", value_name = "K", default_value_t = 300.0)]
    pub temperature: f64,
    /// Plate area S for pp [m^2]; without it pressures are reported
    #[arg(long, value_name = "M2")]
    pub area: Option<f64>,
    /// Cylinder length L for cp [m]
    #[arg(long = "L", value_name = "M", default_value_t = 0.02)]
    pub length: f64,
    /// Cylinder radius a for cp [m]
    #[arg(long = "a", value_name = "M", default_value_t = 0.01)]
    pub radius: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DceArgs {
    /// Cavity quality factor Q [dimensionless]
    #[arg(long = "Q")]
    pub q_factor: f64,
    /// Modulation amplitude dL/L [dimensionless]
    #[arg(long)]
    pub eps: f64,
    /// Cavity mode frequency [Hz]
    #[arg(long, value_name = "HZ", default_value_t = LI6_HYPERFINE_HZ)]
    pub freq_hz: f64,
    /// Geometry growth factor lambda [Hz, default: the mode frequency]
    #[arg(long, value_name = "HZ")]
    pub lambda_hz: Option<f64>,
    /// Also report the photon number after this time [s]
    #[arg(long = "t", value_name = "S")]
    pub time: Option<f64>,
    /// Detecting transition frequency [Hz, default 228e6 (6Li hyperfine)]
    #[arg(long, value_name = "HZ", default_value_t = LI6_HYPERFINE_HZ)]
    pub transition_freq_hz: f64,
    /// Transition dipole matrix element [C m, default e*a0]
    #[arg(long, value_name = "CM")]
    pub dipole: Option<f64>,
    /// Transition multipolarity
    #[arg(long, value_enum, default_value = "magnetic")]
    pub kind: DipoleArg,
    /// v/c suppression for magnetic transitions [dimensionless, default fine-structure constant]
    #[arg(long, value_name = "RATIO")]
    pub v_over_c: Option<f64>,
    /// Reference electric-dipole transition frequency [Hz, default: transition frequency]
    #[arg(long, value_name = "HZ")]
    pub ref_freq_hz: Option<f64>,
    /// Reference dipole matrix element [C m, default: transition dipole]
    #[arg(long, value_name = "CM")]
    pub ref_dipole: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MaterialsArgs {
    /// Material database file [default: $CASIMIR_MATERIAL_DB, else built-in]
    #[arg(long, value_name = "PATH")]
    pub db: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            kind: "argument",
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            kind: "io",
            message: message.into(),
        }
    }

    fn material(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_MATERIAL_DB,
            kind: "material-db",
            message: message.into(),
        }
    }

    /// Single-line form written to stderr.
    pub fn line(&self) -> String {
        format!(
            "error: kind={} code={} {}",
            self.kind,
            self.code,
            self.message.replace('\n', " ")
        )
    }
}

impl From<CasimirError> for CliError {
    fn from(e: CasimirError) -> Self {
        let message = e.to_string();
        match e {
            CasimirError::Parse { .. } | CasimirError::Validation { .. } => Self::material(message),
            CasimirError::Convergence { .. } => Self {
                code: EXIT_CONVERGENCE,
                kind: "convergence",
                message,
            },
            CasimirError::InvalidArgument { .. } | CasimirError::MissingM0Policy(_) | CasimirError::OutOfModel(_) => {
                Self::usage(message)
            }
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (program name first) and runs the command, writing results
/// to stdout (or `--out`) and diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let rendered = e.render().to_string();
                let reason: Vec<&str> = rendered
                    .lines()
                    .take_while(|l| !l.starts_with("Usage:"))
                    .map(|l| l.trim().trim_start_matches("error: "))
                    .filter(|l| !l.is_empty())
                    .collect();
                let reason = reason.join(" ");
                let _ = writeln!(stderr, "{}", CliError::usage(reason).line());
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.line());
            e.code
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Pp(args) => cmd_pp(args, stdout, stderr),
        Command::Cp(args) => cmd_cp(args, stdout, stderr),
        Command::Sweep(args) => cmd_sweep(args, stdout, stderr),
        Command::Asymptote(args) => cmd_asymptote(args, stdout, stderr),
        Command::Dce(args) => cmd_dce(args, stdout),
        Command::Materials(args) => cmd_materials(args, stdout),
    }
}

fn load_db(path: Option<&PathBuf>) -> CliResult<Vec<MaterialRecord>> {
    let path = path.cloned().or_else(|| std::env::var_os(DB_ENV).map(PathBuf::from));
    match path {
        Some(p) => Ok(load_material_db(&p)?),
        None => Ok(default_materials()),
    }
}

/// The requested record, converted to `--model` when given.
pub fn resolve_material(args: &MaterialArgs) -> CliResult<MaterialRecord> {
    let db = load_db(args.db.as_ref())?;
    let record = db
        .into_iter()
        .find(|r| r.name == args.material)
        .ok_or_else(|| CliError::material(format!("material `{}` not found in database", args.material)))?;
    match args.model {
        Some(kind) => Ok(record.with_model(kind)?),
        None => Ok(record),
    }
}

/// Numerical settings from the command-line overrides.
pub fn numerics(args: &NumericsArgs, m0: Option<M0Arg>) -> CliResult<NumericsConfig> {
    let mut cfg = NumericsConfig::default();
    if let Some(y) = args.y_cut {
        cfg.y_cut_offset = y;
    }
    if let Some(hz) = args.zeta_max_hz {
        cfg.zeta_max = hz_to_angular(hz);
    }
    if let Some(tol) = args.rel_tol {
        cfg.quad_rel_tol = tol;
    }
    if let Some(phi) = args.phi_max {
        cfg.phi_max = phi;
    }
    if let Some(c) = args.convention {
        cfg.area_convention = match c {
            ConventionArg::Cylinder => AreaConvention::Cylinder,
            ConventionArg::Plane => AreaConvention::Plane,
            ConventionArg::GeometricMean => AreaConvention::GeometricMean,
        };
    }
    cfg.m0_policy = m0.map(|m| match m {
        M0Arg::PlasmaLike => M0Policy::PlasmaLike,
        M0Arg::DrudeLike => M0Policy::DrudeLike,
    });
    cfg.validate()?;
    Ok(cfg)
}

fn with_pool<R: Send>(threads: Option<usize>, job: impl FnOnce() -> R + Send) -> CliResult<R> {
    match threads {
        None => Ok(job()),
        Some(0) => Err(CliError::usage("--threads must be >= 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::usage(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn write_output(
    out: Option<&PathBuf>,
    stdout: &mut dyn Write,
    emit: impl FnOnce(&mut dyn Write) -> std::io::Result<usize>,
) -> CliResult<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            emit(&mut w).map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))?;
            w.flush()
                .map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))?;
        }
        None => {
            emit(stdout).map_err(|e| CliError::io(format!("writing stdout: {e}")))?;
        }
    }
    Ok(())
}

fn lifshitz_row(d: f64, t: f64, model: &str, geometry: GeometryKind, unit: &str, r: &ForceResult) -> Row {
    Row {
        d_m: d,
        t_k: t,
        model: model.to_string(),
        geometry: geometry.as_str().to_string(),
        value: r.magnitude,
        unit: unit.to_string(),
        m_terms: r.m_terms_used,
        rel_err: r.rel_error_estimate,
    }
}

fn closed_form_row(d: f64, t: f64, model: &str, geometry: GeometryKind, value: f64, unit: &str) -> Row {
    Row {
        d_m: d,
        t_k: t,
        model: model.to_string(),
        geometry: geometry.as_str().to_string(),
        value,
        unit: unit.to_string(),
        m_terms: 0,
        rel_err: 0.0,
    }
}

fn cmd_pp(args: &PpArgs, stdout: &mut dyn Write, _stderr: &mut dyn Write) -> CliResult<()> {
    let material = resolve_material(&args.material)?;
    let cfg = numerics(&args.numerics, args.material.m0)?;
    let (result, unit) = with_pool(args.output.threads, || -> CliResult<_> {
        Ok(match args.area {
            Some(area) => {
                let plates = ParallelPlates::new(area, args.gap)?;
                (force_pp(&material, &plates, args.temperature, &cfg)?, "N")
            }
            None => (pressure_pp(&material, args.gap, args.temperature, &cfg)?, "Pa"),
        })
    })??;
    let row = lifshitz_row(
        args.gap,
        args.temperature,
        material.kind().as_str(),
        GeometryKind::Pp,
        unit,
        &result,
    );
    write_output(args.output.out.as_ref(), stdout, |w| {
        emit_table(&[row], args.output.format, w)
    })
}

fn cmd_cp(args: &CpArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let material = resolve_material(&args.material)?;
    let cfg = numerics(&args.numerics, args.material.m0)?;
    let geom = CylinderPlane::new(args.length, args.radius, args.gap)?;
    let result = with_pool(args.output.threads, || {
        force_cp(&material, &geom, args.temperature, &cfg)
    })??;
    if !result.pfa_valid {
        let _ = writeln!(
            stderr,
            "warning: d/a = {:e} >= 0.01, proximity approximation degraded",
            args.gap / args.radius
        );
    }
    let row = lifshitz_row(
        args.gap,
        args.temperature,
        material.kind().as_str(),
        GeometryKind::Cp,
        "N",
        &result.force,
    );
    write_output(args.output.out.as_ref(), stdout, |w| {
        emit_table(&[row], args.output.format, w)
    })
}

/// Gaps of a sweep, endpoints included.
pub fn sweep_gaps(d_min: f64, d_max: f64, points: usize, spacing: Spacing) -> CliResult<Vec<f64>> {
    if !(d_min > 0.0 && d_max > d_min && d_max.is_finite()) {
        return Err(CliError::usage(format!(
            "need 0 < d-min < d-max, got {d_min} and {d_max}"
        )));
    }
    if points < 2 {
        return Err(CliError::usage(format!("--points must be >= 2, got {points}")));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                return d_max;
            }
            let t = i as f64 / last;
            match spacing {
                Spacing::Log => d_min * (d_max / d_min).powf(t),
                Spacing::Linear => d_min + (d_max - d_min) * t,
            }
        })
        .collect())
}

struct CurveContext<'a> {
    record: &'a MaterialRecord,
    cfg: &'a NumericsConfig,
    geometry: GeometryKind,
    temperature: f64,
    area: Option<f64>,
    length: f64,
    radius: f64,
}

impl CurveContext<'_> {
    fn unit(&self) -> &'static str {
        match (self.geometry, self.area) {
            (GeometryKind::Pp, None) => "Pa",
            _ => "N",
        }
    }

    fn material_for(&self, model: CurveModel) -> CliResult<MaterialRecord> {
        Ok(match model {
            CurveModel::Plasma => self.record.with_model(ModelKind::Plasma)?,
            CurveModel::Drude => self.record.with_model(ModelKind::Drude)?,
            _ => self.record.clone(),
        })
    }

    /// One row plus an optional advisory.
    fn evaluate(&self, model: CurveModel, d: f64) -> CliResult<(Row, Option<String>)> {
        let t = self.temperature;
        let geometry = self.geometry;
        let unit = self.unit();
        let area = self.area.unwrap_or(1.0);
        match model {
            CurveModel::Plasma | CurveModel::Drude | CurveModel::Tabulated => {
                let material = self.material_for(model)?;
                match geometry {
                    GeometryKind::Pp => {
                        let r = match self.area {
                            Some(a) => force_pp(&material, &ParallelPlates::new(a, d)?, t, self.cfg)?,
                            None => pressure_pp(&material, d, t, self.cfg)?,
                        };
                        Ok((lifshitz_row(d, t, model.as_str(), geometry, unit, &r), None))
                    }
                    GeometryKind::Cp => {
                        let geom = CylinderPlane::new(self.length, self.radius, d)?;
                        let r = force_cp(&material, &geom, t, self.cfg)?;
                        let note = (!r.pfa_valid).then(|| {
                            format!(
                                "warning: d/a = {:e} >= 0.01, proximity approximation degraded",
                                d / self.radius
                            )
                        });
                        Ok((lifshitz_row(d, t, model.as_str(), geometry, unit, &r.force), note))
                    }
                }
            }
            CurveModel::Ideal => {
                let v = match geometry {
                    GeometryKind::Pp => area * ideal_pp_pressure(d)?,
                    GeometryKind::Cp => ideal_cp_force(self.length, self.radius, d)?,
                };
                Ok((closed_form_row(d, t, model.as_str(), geometry, v, unit), None))
            }
            CurveModel::Thermal => {
                let v = match geometry {
                    GeometryKind::Pp => area * thermal_pp_pressure(d, t)?,
                    GeometryKind::Cp => thermal_cp_force(self.length, self.radius, d, t)?,
                };
                Ok((closed_form_row(d, t, model.as_str(), geometry, v, unit), None))
            }
            CurveModel::LowT => {
                let x = ExpansionInputs::for_material(self.record, d, t)?;
                let (series, ideal) = match geometry {
                    GeometryKind::Pp => (lowt_ratio_pp(x), area * ideal_pp_pressure(d)?),
                    GeometryKind::Cp => (lowt_ratio_cp(x), ideal_cp_force(self.length, self.radius, d)?),
                };
                let note = (!series.valid).then(|| {
                    format!(
                        "warning: low-temperature series outside validity at d = {d:e} (T/T_eff = {:.3}, delta/d = {:.3})",
                        x.t_ratio, x.delta_over_d
                    )
                });
                Ok((
                    closed_form_row(d, t, model.as_str(), geometry, series.ratio * ideal, unit),
                    note,
                ))
            }
        }
    }
}

/// Evaluates every (model, gap) pair of a sweep; rows are ordered by model,
/// then by gap, whatever the degree of parallelism.
pub fn sweep_rows(args: &SweepArgs) -> CliResult<(Vec<Row>, Vec<String>)> {
    if args.models.is_empty() {
        return Err(CliError::usage("--models must name at least one curve"));
    }
    let record = resolve_material(&args.material)?;
    let cfg = numerics(&args.numerics, args.material.m0)?;
    let gaps = sweep_gaps(args.d_min, args.d_max, args.points, args.spacing)?;
    if let Some(area) = args.area {
        ParallelPlates::new(area, args.d_min)?;
    }
    let ctx = CurveContext {
        record: &record,
        cfg: &cfg,
        geometry: args.geometry,
        temperature: args.temperature,
        area: args.area,
        length: args.length,
        radius: args.radius,
    };
    let jobs: Vec<(CurveModel, f64)> = args
        .models
        .iter()
        .flat_map(|&m| gaps.iter().map(move |&d| (m, d)))
        .collect();
    let evaluated = with_pool(args.output.threads, || {
        jobs.par_iter()
            .map(|&(model, d)| ctx.evaluate(model, d))
            .collect::<CliResult<Vec<_>>>()
    })??;
    let mut notes = Vec::new();
    let rows = evaluated
        .into_iter()
        .map(|(row, note)| {
            notes.extend(note);
            row
        })
        .collect();
    Ok((rows, notes))
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let (rows, notes) = sweep_rows(args)?;
    for n in notes {
        let _ = writeln!(stderr, "{n}");
    }
    write_output(args.output.out.as_ref(), stdout, |w| {
        emit_table(&rows, args.output.format, w)
    })
}

fn cmd_asymptote(args: &AsymptoteArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let record = resolve_material(&args.material)?;
    let cfg = NumericsConfig::default();
    let ctx = CurveContext {
        record: &record,
        cfg: &cfg,
        geometry: args.geometry,
        temperature: args.temperature,
        area: args.area,
        length: args.length,
        radius: args.radius,
    };
    let mut rows = Vec::new();
    for model in [CurveModel::Ideal, CurveModel::Thermal, CurveModel::LowT] {
        let (row, note) = ctx.evaluate(model, args.gap)?;
        if let Some(n) = note {
            let _ = writeln!(stderr, "{n}");
        }
        rows.push(row);
    }
    rows.push(closed_form_row(
        args.gap,
        args.temperature,
        "t_eff",
        args.geometry,
        t_eff(args.gap)?,
        "K",
    ));
    rows.push(closed_form_row(
        args.gap,
        args.temperature,
        "delta",
        args.geometry,
        plasma_delta(&record)?,
        "m",
    ));
    write_output(args.output.out.as_ref(), stdout, |w| {
        emit_table(&rows, args.output.format, w)
    })
}

/// Quantities reported by the `dce` subcommand.
pub fn dce_quantities(args: &DceArgs) -> CliResult<Vec<Quantity>> {
    let params = DceParams::new(
        args.q_factor,
        args.eps,
        hz_to_angular(args.freq_hz),
        args.lambda_hz.map(hz_to_angular),
    )?;
    let omega_t = hz_to_angular(args.transition_freq_hz);
    let dipole = args.dipole.unwrap_or(E_CHARGE * BOHR_RADIUS);
    let transition = match args.kind {
        DipoleArg::Electric => TransitionSpec::electric(omega_t, dipole)?,
        DipoleArg::Magnetic => TransitionSpec::magnetic(omega_t, dipole, args.v_over_c.unwrap_or(FINE_STRUCTURE))?,
    };
    let reference = TransitionSpec::electric(
        args.ref_freq_hz.map_or(omega_t, hz_to_angular),
        args.ref_dipole.unwrap_or(dipole),
    )?;
    let budget = detection_budget(&params, &transition, &reference)?;
    let q = |name: &str, value: f64, unit: &str| Quantity {
        quantity: name.to_string(),
        value,
        unit: unit.to_string(),
    };
    let mut out = vec![
        q("photons_saturated", budget.photons_saturated, "1"),
        q("tau_sat", budget.tau_sat, "s"),
        q("power", budget.power_w, "W"),
        q("rate_spont", budget.rate_spont, "1/s"),
        q("comparison_ratio", budget.comparison_ratio, "1"),
    ];
    if let Some(t) = args.time {
        out.push(q("photons_at_t", photon_number(&params, Elapsed::Seconds(t))?, "1"));
    }
    Ok(out)
}

fn cmd_dce(args: &DceArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let items = dce_quantities(args)?;
    write_output(args.out.as_ref(), stdout, |w| emit_quantities(&items, args.format, w))
}

fn cmd_materials(args: &MaterialsArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let db = load_db(args.db.as_ref())?;
    let mut text = String::from("name,model,plasma_frequency_rad_s,relaxation_frequency_rad_s\n");
    let opt = |v: Option<f64>| v.map(table::sci).unwrap_or_default();
    for r in &db {
        text.push_str(&format!(
            "{},{},{},{}\n",
            r.name,
            r.kind(),
            opt(r.plasma_frequency()),
            opt(r.relaxation_frequency())
        ));
    }
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io(format!("writing stdout: {e}")))
}
