//! Command-line front end: spectra, traces, sweeps, peaks, algebra
//! verification and reproducible figure data.
//!
//! Exit codes: 0 on success, 1 for validation errors (bad flags, bad
//! grids, unwritable paths), 2 when a numerical verification fails.
//! The only environment variable honored is RAYON_NUM_THREADS, which
//! caps the worker threads used to render figure curves; outputs are
//! byte-identical for every thread count.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use fuzzy_sphere::io::{self, CurveMeta, GridSpec, Spacing};
use fuzzy_sphere::{
    algebra, area, find_peak, fuzzy_energy_levels, spectral_dimension, sweep, CurvePoint,
    DiracSpectrum, EnergyGrid, FuzzySphereParams, GeometryCurve, HeatTracePoint, Observable,
};

use output::{Manifest, OutputEntry};

/// Residual ceiling for `verify-algebra`.
const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "fuzzy-sphere",
    version,
    about = "Dirac spectra, heat traces and scale-dependent geometry of the fuzzy sphere"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the spectral lines (l, j, eigenvalue_sq, degeneracy)
    Spectrum {
        #[command(flatten)]
        sel: SpectrumSel,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Heat trace and its T-derivative over an energy grid
    Trace {
        #[command(flatten)]
        sel: SpectrumSel,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Area A(lambda) at one probe energy
    Area {
        #[command(flatten)]
        sel: SpectrumSel,
        /// Probe energy Lambda
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Spectral dimension D_s(lambda) at one probe energy
    Dimension {
        #[command(flatten)]
        sel: SpectrumSel,
        /// Probe energy Lambda
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep trace, area and dimension over an energy grid
    Sweep {
        #[command(flatten)]
        sel: SpectrumSel,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Locate an interior maximum of the area or dimension curve
    Peak {
        #[command(flatten)]
        sel: SpectrumSel,
        /// Which curve to maximize
        #[arg(long, value_enum)]
        which: WhichObservable,
        /// Lower bracket edge
        #[arg(long, default_value_t = 0.5)]
        bracket_lo: f64,
        /// Upper bracket edge
        #[arg(long, default_value_t = 50.0)]
        bracket_hi: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the coordinate-algebra relations for a list of N
    VerifyAlgebra {
        /// Truncation parameters to verify
        #[arg(long = "N", value_name = "N", value_delimiter = ',', required = true)]
        n_list: Vec<u32>,
        /// Sphere radius
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Emit one curve file per N plus the standard sphere, with a manifest
    Figures {
        /// Fuzzy truncation parameters, e.g. --N 2,4,8
        #[arg(long = "N", value_name = "N", value_delimiter = ',')]
        n_list: Vec<u32>,
        /// Truncation of the reference standard-sphere spectrum
        #[arg(long, default_value_t = 40)]
        nmax: u32,
        #[command(flatten)]
        grid: GridArgs,
        /// Sphere radius
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Include the l = N+1 zero modes
        #[arg(long)]
        include_zero_modes: bool,
        /// Append a normalized area_over_4pi column
        #[arg(long)]
        normalize_area: bool,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// Selection of a single spectrum, shared by the pointwise commands.
#[derive(Args)]
struct SpectrumSel {
    /// Fuzzy truncation parameter N (exactly one)
    #[arg(long = "N", value_name = "N", value_delimiter = ',')]
    n: Vec<u32>,
    /// Use the truncated standard-sphere spectrum instead
    #[arg(long)]
    standard: bool,
    /// Truncation of the standard-sphere spectrum
    #[arg(long, default_value_t = 40)]
    nmax: u32,
    /// Sphere radius (fuzzy spectra only)
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Include the l = N+1 zero modes
    #[arg(long)]
    include_zero_modes: bool,
}

#[derive(Args)]
struct GridArgs {
    /// Smallest probe energy
    #[arg(long, default_value_t = 0.1)]
    lambda_min: f64,
    /// Largest probe energy
    #[arg(long, default_value_t = 100.0)]
    lambda_max: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// Linear spacing instead of logarithmic
    #[arg(long)]
    linear: bool,
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Append a normalized area_over_4pi column
    #[arg(long)]
    normalize_area: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichObservable {
    Area,
    Dimension,
}

impl From<WhichObservable> for Observable {
    fn from(w: WhichObservable) -> Self {
        match w {
            WhichObservable::Area => Observable::Area,
            WhichObservable::Dimension => Observable::Dimension,
        }
    }
}

#[derive(Debug)]
enum AppError {
    Validation(String),
    Verification(String),
}

impl From<fuzzy_sphere::Error> for AppError {
    fn from(e: fuzzy_sphere::Error) -> Self {
        AppError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Validation(e.to_string())
    }
}

/// A resolved spectrum plus everything the metadata header records.
struct Selection {
    spectrum: DiracSpectrum,
    slug: String,
    n: Option<u32>,
    n_max: Option<u32>,
    radius: f64,
    include_zero_modes: Option<bool>,
}

impl SpectrumSel {
    fn resolve(&self) -> Result<Selection, AppError> {
        if self.standard {
            if !self.n.is_empty() {
                return Err(AppError::Validation(
                    "--standard and --N are mutually exclusive".into(),
                ));
            }
            if self.radius != 1.0 {
                return Err(AppError::Validation(
                    "--radius applies only to fuzzy spectra".into(),
                ));
            }
            if self.include_zero_modes {
                return Err(AppError::Validation(
                    "--include-zero-modes applies only to fuzzy spectra".into(),
                ));
            }
            return Ok(Selection {
                spectrum: DiracSpectrum::standard(self.nmax)?,
                slug: format!("standard_nmax{}", self.nmax),
                n: None,
                n_max: Some(self.nmax),
                radius: 1.0,
                include_zero_modes: None,
            });
        }
        if self.n.len() != 1 {
            return Err(AppError::Validation(format!(
                "expected exactly one --N value (or --standard), got {}",
                self.n.len()
            )));
        }
        let params = FuzzySphereParams::new(self.n[0], self.radius)?
            .with_zero_modes(self.include_zero_modes);
        Ok(Selection {
            spectrum: DiracSpectrum::fuzzy(&params),
            slug: fuzzy_slug(self.n[0], self.radius, self.include_zero_modes),
            n: Some(self.n[0]),
            n_max: None,
            radius: self.radius,
            include_zero_modes: Some(self.include_zero_modes),
        })
    }

    fn params(&self) -> Result<FuzzySphereParams, AppError> {
        if self.n.len() != 1 {
            return Err(AppError::Validation(
                "expected exactly one --N value".into(),
            ));
        }
        Ok(
            FuzzySphereParams::new(self.n[0], self.radius)?
                .with_zero_modes(self.include_zero_modes),
        )
    }
}

fn fuzzy_slug(n: u32, radius: f64, zero_modes: bool) -> String {
    let mut slug = format!("fuzzy_N{n}");
    if radius != 1.0 {
        slug.push_str(&format!("_r{radius}"));
    }
    if zero_modes {
        slug.push_str("_zm");
    }
    slug
}

impl Selection {
    fn meta(&self, grid: Option<GridSpec>, normalize_area: bool) -> CurveMeta {
        CurveMeta {
            label: self.spectrum.label().to_string(),
            n: self.n,
            n_max: self.n_max,
            include_zero_modes: self.include_zero_modes,
            radius: self.radius,
            grid,
            normalize_area,
        }
    }
}

impl GridArgs {
    fn build(&self) -> Result<(EnergyGrid, GridSpec), AppError> {
        let grid = if self.linear {
            EnergyGrid::linear(self.lambda_min, self.lambda_max, self.points)?
        } else {
            EnergyGrid::log_spaced(self.lambda_min, self.lambda_max, self.points)?
        };
        let spec = GridSpec {
            min: self.lambda_min,
            max: self.lambda_max,
            count: self.points,
            spacing: if self.linear {
                Spacing::Linear
            } else {
                Spacing::Log
            },
        };
        Ok((grid, spec))
    }
}

fn emit(out: &OutputArgs, name: &str, contents: &str) -> Result<(), AppError> {
    match &out.out {
        None => {
            print!("{contents}");
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(name);
            output::write_atomic(&path, contents)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    l: u32,
    j: f64,
    eigenvalue_sq: f64,
    degeneracy: u64,
}

fn run_spectrum(sel: &SpectrumSel, out: &OutputArgs) -> Result<(), AppError> {
    let selection = sel.resolve()?;
    let rows: Vec<SpectrumRow> = if sel.standard {
        selection
            .spectrum
            .lines()
            .iter()
            .enumerate()
            .map(|(i, line)| SpectrumRow {
                l: i as u32 + 1,
                j: (i as f64 + 1.0) - 0.5,
                eigenvalue_sq: line.eigenvalue_sq(),
                degeneracy: line.degeneracy(),
            })
            .collect()
    } else {
        fuzzy_energy_levels(&sel.params()?)
            .iter()
            .map(|lv| SpectrumRow {
                l: lv.l,
                j: lv.j(),
                eigenvalue_sq: lv.eigenvalue_sq,
                degeneracy: lv.degeneracy,
            })
            .collect()
    };

    let meta = selection.meta(None, false);
    let contents = match out.format {
        Format::Csv => {
            let mut text = format!(
                "# {}\nl,j,eigenvalue_sq,degeneracy\n",
                serde_json::to_string(&meta).expect("meta serializes")
            );
            for row in &rows {
                text.push_str(&format!(
                    "{},{:.1},{},{}\n",
                    row.l,
                    row.j,
                    io::format_f64(row.eigenvalue_sq),
                    row.degeneracy
                ));
            }
            text
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                meta: &'a CurveMeta,
                lines: &'a [SpectrumRow],
            }
            let mut text = serde_json::to_string_pretty(&Doc {
                meta: &meta,
                lines: &rows,
            })
            .expect("spectrum serializes");
            text.push('\n');
            text
        }
    };
    emit(
        out,
        &format!("spectrum_{}.{}", selection.slug, out.format.extension()),
        &contents,
    )
}

#[derive(Serialize)]
struct TraceRow {
    t: f64,
    lambda: f64,
    trace: f64,
    trace_t_derivative: f64,
}

fn run_trace(sel: &SpectrumSel, grid_args: &GridArgs, out: &OutputArgs) -> Result<(), AppError> {
    let selection = sel.resolve()?;
    let (grid, spec) = grid_args.build()?;
    let mut rows = Vec::with_capacity(grid.len());
    for &lambda in grid.values() {
        let t = 1.0 / (lambda * lambda);
        let point = HeatTracePoint::evaluate(&selection.spectrum, t)?;
        rows.push(TraceRow {
            t,
            lambda,
            trace: point.trace,
            trace_t_derivative: point.trace_t_derivative,
        });
    }

    let meta = selection.meta(Some(spec), false);
    let contents = match out.format {
        Format::Csv => {
            let mut text = format!(
                "# {}\nt,lambda,trace,trace_t_derivative\n",
                serde_json::to_string(&meta).expect("meta serializes")
            );
            for row in &rows {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    io::format_f64(row.t),
                    io::format_f64(row.lambda),
                    io::format_f64(row.trace),
                    io::format_f64(row.trace_t_derivative)
                ));
            }
            text
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                meta: &'a CurveMeta,
                points: &'a [TraceRow],
            }
            let mut text = serde_json::to_string_pretty(&Doc {
                meta: &meta,
                points: &rows,
            })
            .expect("trace serializes");
            text.push('\n');
            text
        }
    };
    emit(
        out,
        &format!("trace_{}.{}", selection.slug, out.format.extension()),
        &contents,
    )
}

fn curve_point(spectrum: &DiracSpectrum, lambda: f64) -> Result<CurvePoint, AppError> {
    let t = 1.0 / (lambda * lambda);
    Ok(CurvePoint {
        lambda,
        t,
        trace: fuzzy_sphere::heat_trace(spectrum, t)?,
        area: area(spectrum, lambda)?,
        dimension: spectral_dimension(spectrum, lambda)?,
    })
}

fn render_curve(
    curve: &GeometryCurve,
    meta: &CurveMeta,
    format: Format,
) -> Result<String, AppError> {
    Ok(match format {
        Format::Csv => io::curve_to_csv(curve, meta)?,
        Format::Json => io::curve_to_json(curve, meta)?,
    })
}

fn run_pointwise(
    command: &'static str,
    sel: &SpectrumSel,
    lambda: f64,
    out: &OutputArgs,
) -> Result<(), AppError> {
    let selection = sel.resolve()?;
    let point = curve_point(&selection.spectrum, lambda)?;
    let curve = GeometryCurve::new(selection.spectrum.label(), vec![point]);
    let meta = selection.meta(None, out.normalize_area);
    let contents = render_curve(&curve, &meta, out.format)?;
    emit(
        out,
        &format!("{command}_{}.{}", selection.slug, out.format.extension()),
        &contents,
    )
}

fn run_sweep(sel: &SpectrumSel, grid_args: &GridArgs, out: &OutputArgs) -> Result<(), AppError> {
    let selection = sel.resolve()?;
    let (grid, spec) = grid_args.build()?;
    let curve = sweep(&selection.spectrum, &grid)?;
    let meta = selection.meta(Some(spec), out.normalize_area);
    let contents = render_curve(&curve, &meta, out.format)?;
    emit(
        out,
        &format!("sweep_{}.{}", selection.slug, out.format.extension()),
        &contents,
    )
}

fn run_peak(
    sel: &SpectrumSel,
    which: WhichObservable,
    bracket: (f64, f64),
    out: &OutputArgs,
) -> Result<(), AppError> {
    let selection = sel.resolve()?;
    let peak = find_peak(&selection.spectrum, which.into(), bracket)?;
    eprintln!(
        "{} peak of {}: lambda_star = {:.9e}, value = {:.9e} (bracket [{}, {}])",
        Observable::from(which).name(),
        selection.spectrum.label(),
        peak.lambda_star,
        peak.value,
        bracket.0,
        bracket.1,
    );
    let point = curve_point(&selection.spectrum, peak.lambda_star)?;
    let curve = GeometryCurve::new(selection.spectrum.label(), vec![point]);
    let meta = selection.meta(None, out.normalize_area);
    let contents = render_curve(&curve, &meta, out.format)?;
    emit(
        out,
        &format!("peak_{}.{}", selection.slug, out.format.extension()),
        &contents,
    )
}

fn run_verify_algebra(n_list: &[u32], radius: f64, inject_fault: bool) -> Result<(), AppError> {
    if n_list.is_empty() {
        return Err(AppError::Validation("no N values requested".into()));
    }
    let mut worst = 0.0f64;
    for &n in n_list {
        let params = FuzzySphereParams::new(n, radius)?;
        let mut coords = algebra::fuzzy_coordinates(&params)?;
        if inject_fault {
            coords.x3 = coords.x3.scale_real(1.0 + 1e-3);
        }
        let comm = algebra::commutator_residual(&coords);
        let cas = algebra::casimir_residual(&coords);
        let herm = coords.hermiticity_error();
        worst = worst.max(comm).max(cas).max(herm);
        println!("N={n}: commutator {comm:.3e}  casimir {cas:.3e}  hermiticity {herm:.3e}");
    }
    if worst <= RESIDUAL_TOLERANCE {
        println!("PASS: all residuals <= {RESIDUAL_TOLERANCE:.1e}");
        Ok(())
    } else {
        Err(AppError::Verification(format!(
            "worst residual {worst:.3e} exceeds {RESIDUAL_TOLERANCE:.1e}"
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn run_figures(
    n_list: &[u32],
    nmax: u32,
    grid_args: &GridArgs,
    radius: f64,
    include_zero_modes: bool,
    normalize_area: bool,
    out_dir: &PathBuf,
    format: Format,
) -> Result<(), AppError> {
    if n_list.is_empty() {
        return Err(AppError::Validation("no spectra requested".into()));
    }
    let (grid, spec) = grid_args.build()?;

    struct Job {
        stem: String,
        spectrum: DiracSpectrum,
        meta: CurveMeta,
    }

    let mut jobs = Vec::new();
    for &n in n_list {
        let params = FuzzySphereParams::new(n, radius)?.with_zero_modes(include_zero_modes);
        let spectrum = DiracSpectrum::fuzzy(&params);
        jobs.push(Job {
            stem: fuzzy_slug(n, radius, include_zero_modes),
            meta: CurveMeta {
                label: spectrum.label().to_string(),
                n: Some(n),
                n_max: None,
                include_zero_modes: Some(include_zero_modes),
                radius,
                grid: Some(spec),
                normalize_area,
            },
            spectrum,
        });
    }
    let standard = DiracSpectrum::standard(nmax)?;
    jobs.push(Job {
        stem: format!("standard_nmax{nmax}"),
        meta: CurveMeta {
            label: standard.label().to_string(),
            n: None,
            n_max: Some(nmax),
            include_zero_modes: None,
            radius: 1.0,
            grid: Some(spec),
            normalize_area,
        },
        spectrum: standard,
    });

    // Rendering parallelizes across curves; results are collected in
    // job order, so the emitted bytes do not depend on thread count.
    let rendered: Result<Vec<(String, String, usize)>, AppError> = jobs
        .par_iter()
        .map(|job| {
            let curve = sweep(&job.spectrum, &grid)?;
            let contents = render_curve(&curve, &job.meta, format)?;
            let name = format!("{}.{}", job.stem, format.extension());
            Ok((name, contents, curve.points().len()))
        })
        .collect();
    let rendered = rendered?;

    std::fs::create_dir_all(out_dir)?;
    let mut entries = Vec::with_capacity(rendered.len());
    for (name, contents, rows) in &rendered {
        output::write_atomic(&out_dir.join(name), contents)?;
        eprintln!("wrote {}", out_dir.join(name).display());
        entries.push(OutputEntry {
            file: name.clone(),
            rows: *rows,
            sha256: output::sha256_hex(contents),
        });
    }

    let manifest = Manifest {
        tool: "fuzzy-sphere",
        version: env!("CARGO_PKG_VERSION"),
        command: "figures",
        n_list: n_list.to_vec(),
        n_max: nmax,
        radius,
        include_zero_modes,
        normalize_area,
        format: format.extension().to_string(),
        grid: spec,
        outputs: entries,
    };
    output::write_atomic(&out_dir.join("manifest.json"), &manifest.to_json())?;
    eprintln!("wrote {}", out_dir.join("manifest.json").display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Spectrum { sel, out } => run_spectrum(sel, out),
        Command::Trace { sel, grid, out } => run_trace(sel, grid, out),
        Command::Area { sel, lambda, out } => run_pointwise("area", sel, *lambda, out),
        Command::Dimension { sel, lambda, out } => run_pointwise("dimension", sel, *lambda, out),
        Command::Sweep { sel, grid, out } => run_sweep(sel, grid, out),
        Command::Peak {
            sel,
            which,
            bracket_lo,
            bracket_hi,
            out,
        } => run_peak(sel, *which, (*bracket_lo, *bracket_hi), out),
        Command::VerifyAlgebra {
            n_list,
            radius,
            inject_fault,
        } => run_verify_algebra(n_list, *radius, *inject_fault),
        Command::Figures {
            n_list,
            nmax,
            grid,
            radius,
            include_zero_modes,
            normalize_area,
            out,
            format,
        } => run_figures(
            n_list,
            *nmax,
            grid,
            *radius,
            *include_zero_modes,
            *normalize_area,
            out,
            *format,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
