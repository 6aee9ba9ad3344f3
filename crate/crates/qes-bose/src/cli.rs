//! Command-line front end.
//!
//! Six commands over one JSON config: `validate`, `conditions`,
//! `spectrum`, `oracle`, `scan`, `multimode`. Exit codes: 0 success,
//! 1 config/usage problems, 2 domain failures (ill-defined ground state,
//! violated invariant subspace — with the exact offending α printed —
//! infeasible shapes, unmatched oracle levels).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conditions::{
    build_cutoff_system, feasibility, first_cutoff_violation, solve_cutoff_system, CutoffSystem,
    Shape,
};
use crate::config::{resolve_sectors, RunConfig, ScanTarget, SectorChoice};
use crate::emit;
use crate::error::{QesError, Result};
use crate::model::{HamiltonianSpec, SectorBasis, ValidityStatus};
use crate::multimode::product_spectrum_with;
use crate::oracle::{default_n_max, match_spectra, MatchReport};
use crate::rational::{format_rational, to_f64, Rational};
use crate::spectra::{build_subspace_matrix, eigen_general_with, EigenOptions, SpectrumResult};

#[derive(Parser)]
#[command(
    name = "qes-bose",
    version,
    about = "Quasi-exactly solvable sectors of anharmonic Bose Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state well-definedness of the configured Hamiltonian
    Validate(CommonArgs),
    /// Build and solve the cutoff-condition system exactly
    Conditions(CommonArgs),
    /// Diagonalize the invariant sector(s); emits CSV + JSON
    Spectrum(CommonArgs),
    /// Certify algebraic levels against the truncated brute-force matrix
    Oracle(CommonArgs),
    /// Sweep one coefficient along its solution ray; emits CSV (+ SVG)
    Scan(CommonArgs),
    /// Spectrum of a two-mode product Hamiltonian
    Multimode(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Validate(a)
            | Command::Conditions(a)
            | Command::Spectrum(a)
            | Command::Oracle(a)
            | Command::Scan(a)
            | Command::Multimode(a) => a,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config path
    #[arg(long)]
    config: PathBuf,
    /// Stride-2 sector selection (overrides the config's sector fields)
    #[arg(long, value_enum)]
    sector: Option<SectorFlag>,
    /// Truncation cap for the brute-force matrix (particle numbers 0..=n_max)
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Tolerance: relative solver residual bound and oracle gap scale
    #[arg(long)]
    tol: Option<f64>,
    /// Artifact path; spectrum/scan/multimode write CSV here and a JSON
    /// sibling with extension .json, other commands write JSON directly
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG level-plot path (scan only)
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SectorFlag {
    Even,
    Odd,
    Both,
}

impl From<SectorFlag> for SectorChoice {
    fn from(f: SectorFlag) -> Self {
        match f {
            SectorFlag::Even => SectorChoice::Even,
            SectorFlag::Odd => SectorChoice::Odd,
            SectorFlag::Both => SectorChoice::Both,
        }
    }
}

/// Parse argv (without the program name) and run. Returns the exit code.
pub fn run<I>(args: I) -> i32
where
    I: IntoIterator,
    I::Item: Into<std::ffi::OsString> + Clone,
{
    let mut argv: Vec<std::ffi::OsString> = vec!["qes-bose".into()];
    argv.extend(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(err: &QesError) -> i32 {
    match err {
        QesError::Config(_)
        | QesError::ParseRational(_)
        | QesError::Json(_)
        | QesError::Io(_)
        | QesError::SectorInvalid(_)
        | QesError::SpecInvalid(_) => 1,
        _ => 2,
    }
}

struct Ctx {
    config: RunConfig,
    sector_flag: Option<SectorChoice>,
    n_max: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    max_dim: usize,
}

impl Ctx {
    fn new(args: &CommonArgs) -> Result<Self> {
        let config = RunConfig::from_path(&args.config)?;
        let max_dim = match std::env::var("QES_BOSE_MAX_DIM") {
            Ok(text) => text
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&d| d > 0)
                .ok_or_else(|| {
                    QesError::Config(format!(
                        "QES_BOSE_MAX_DIM must be a positive integer, got {text:?}"
                    ))
                })?,
            Err(_) => EigenOptions::default().max_dim,
        };
        if let Some(tol) = args.tol {
            if !tol.is_finite() || tol <= 0.0 {
                return Err(QesError::Config("--tol must be > 0".into()));
            }
        }
        Ok(Ctx {
            sector_flag: args.sector.map(Into::into),
            n_max: args.n_max.or(config.n_max),
            tol: args.tol.or(config.tol),
            out: args.out.clone(),
            svg: args.svg.clone(),
            max_dim,
            config,
        })
    }

    fn solver_opts(&self) -> EigenOptions {
        EigenOptions {
            tol: self.tol.unwrap_or(1e-12),
            max_dim: self.max_dim,
            ..Default::default()
        }
    }

    fn match_tol(&self) -> f64 {
        self.tol.unwrap_or(1e-10)
    }

    fn sectors(&self, spec: &HamiltonianSpec) -> Result<Vec<(String, SectorBasis)>> {
        resolve_sectors(&self.config, spec.q(), self.sector_flag)
    }

    fn sector_results(
        &self,
        spec: &HamiltonianSpec,
    ) -> Result<Vec<(String, SectorBasis, SpectrumResult)>> {
        let opts = self.solver_opts();
        self.sectors(spec)?
            .into_iter()
            .map(|(label, sector)| {
                let matrix = build_subspace_matrix(spec, &sector)?;
                Ok((label, sector, eigen_general_with(&matrix, opts)?))
            })
            .collect()
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let ctx = Ctx::new(cli.command.args())?;
    match cli.command {
        Command::Validate(_) => cmd_validate(&ctx),
        Command::Conditions(_) => cmd_conditions(&ctx),
        Command::Spectrum(_) => cmd_spectrum(&ctx),
        Command::Oracle(_) => cmd_oracle(&ctx),
        Command::Scan(_) => cmd_scan(&ctx),
        Command::Multimode(_) => cmd_multimode(&ctx),
    }
}

fn write_artifact(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}

// ── validate ────────────────────────────────────────────────────────

fn cmd_validate(ctx: &Ctx) -> Result<i32> {
    let spec = ctx.config.require_spec()?;
    let validity = spec.validate_ground_state();
    println!("{:?}: {}", validity.status, validity.message);
    if let Some(out) = &ctx.out {
        let mut text = serde_json::to_string_pretty(&validity)?;
        text.push('\n');
        write_artifact(out, &text)?;
    }
    Ok(if validity.status == ValidityStatus::IllDefined {
        2
    } else {
        0
    })
}

// ── conditions ──────────────────────────────────────────────────────

fn cmd_conditions(ctx: &Ctx) -> Result<i32> {
    let spec = ctx.config.require_spec()?;
    let shape = Shape::of(spec);
    let sectors = ctx.sectors(spec)?;
    let mut stacked: Option<CutoffSystem> = None;
    for (_, sector) in &sectors {
        let sys = build_cutoff_system(shape, sector);
        match &mut stacked {
            None => stacked = Some(sys),
            Some(acc) => acc.rows.extend(sys.rows),
        }
    }
    let sys = stacked.expect("resolve_sectors returns at least one sector");
    let solution = solve_cutoff_system(&sys);
    let feas = feasibility(shape);
    let report = emit::ConditionsReport::new(feas, sys.rows.len(), &solution);
    println!(
        "shape (s0={}, k0={}): n1={} conditions, n2={} unknowns, {}",
        shape.s0,
        shape.k0,
        report.n1,
        report.n2,
        if report.feasible {
            "feasible"
        } else {
            "infeasible"
        }
    );
    println!(
        "assembled system: {} rows over {} sector(s), rank {}",
        report.rows,
        sectors.len(),
        report.rank
    );
    if report.nullspace.is_empty() {
        println!("nullspace: only the zero coupling vector");
    } else {
        for v in &report.nullspace {
            println!("nullspace vector: ({})", v.join(", "));
        }
    }
    if let Some(out) = &ctx.out {
        write_artifact(out, &report.to_json())?;
    }
    Ok(0)
}

// ── spectrum ────────────────────────────────────────────────────────

fn cmd_spectrum(ctx: &Ctx) -> Result<i32> {
    let spec = ctx.config.require_spec()?;
    let results = ctx.sector_results(spec)?;
    let csv = emit::spectrum_csv(&results);
    match &ctx.out {
        Some(out) => {
            for (label, sector, result) in &results {
                println!(
                    "sector {label} (q={}, r={}, N={}): {} levels, residual_max {:.3e}",
                    sector.q(),
                    sector.r(),
                    sector.top(),
                    result.eigenvalues.len(),
                    result.residual_max
                );
            }
            write_artifact(out, &csv)?;
            write_artifact(&out.with_extension("json"), &emit::spectrum_json(&results))?;
        }
        None => print!("{csv}"),
    }
    Ok(0)
}

// ── oracle ──────────────────────────────────────────────────────────

fn cmd_oracle(ctx: &Ctx) -> Result<i32> {
    let spec = ctx.config.require_spec()?;
    let results = ctx.sector_results(spec)?;
    let n_max = ctx.n_max.unwrap_or_else(|| {
        results
            .iter()
            .map(|(_, sector, _)| default_n_max(sector))
            .max()
            .unwrap_or(0)
    });
    let tol = ctx.match_tol();
    let mut reports: Vec<(String, MatchReport)> = Vec::new();
    let mut all_matched = true;
    for (label, sector, result) in &results {
        let report = match_spectra(result, spec, sector, n_max, tol)?;
        all_matched &= report.all_matched();
        println!("sector {label} (n_max={n_max}):");
        print!("{}", emit::match_report_table(&report));
        reports.push((label.clone(), report));
    }
    if let Some(out) = &ctx.out {
        write_artifact(out, &emit::match_report_json(&reports))?;
    }
    Ok(if all_matched { 0 } else { 2 })
}

// ── scan ────────────────────────────────────────────────────────────

fn cmd_scan(ctx: &Ctx) -> Result<i32> {
    let spec = ctx.config.require_spec()?;
    let scan = ctx
        .config
        .scan
        .as_ref()
        .ok_or_else(|| QesError::Config("config has no `scan` section".into()))?;
    let sectors = ctx.sectors(spec)?;
    if sectors.len() != 1 {
        return Err(QesError::Config(
            "scan runs over a single sector (use --sector even or odd)".into(),
        ));
    }
    let (_, sector) = &sectors[0];
    let shape = Shape::of(spec);
    let feas = feasibility(shape);
    if !feas.feasible {
        return Err(QesError::InfeasibleShape {
            s0: shape.s0,
            k0: shape.k0,
            n1: feas.n1,
            n2: feas.n2,
        });
    }
    if let Some((k, index, alpha)) = first_cutoff_violation(spec, sector)? {
        return Err(QesError::InvariantSubspaceViolated {
            index,
            k,
            alpha: format_rational(&alpha),
        });
    }
    let target_name = match scan.target {
        ScanTarget::Coupling { s, k } => format!("A[{s},{k}]"),
        ScanTarget::Diagonal { p } => format!("eps[{p}]"),
    };
    // exact step values: from + (to-from)·i/(steps-1)
    let steps = scan.steps;
    let span = &scan.to - &scan.from;
    let values: Vec<Rational> = (0..steps)
        .map(|i| &scan.from + &span * Rational::new(i.into(), (steps - 1).into()))
        .collect();
    let opts = ctx.solver_opts();
    let mut levels = Vec::with_capacity(steps);
    for value in &values {
        let stepped = match scan.target {
            ScanTarget::Coupling { s, k } => {
                let base = spec.coupling(s, k);
                if num::Zero::is_zero(&base) {
                    return Err(QesError::Config(format!(
                        "cannot sweep A[{s},{k}]: its base value in the config is 0, \
                         so no solution ray passes through it"
                    )));
                }
                spec.scale_couplings(&(value / &base))
            }
            ScanTarget::Diagonal { p } => spec.with_eps(p, value.clone())?,
        };
        let matrix = build_subspace_matrix(&stepped, sector)?;
        levels.push(eigen_general_with(&matrix, opts)?.eigenvalues);
    }
    let csv = emit::scan_csv(&values, &levels);
    match &ctx.out {
        Some(out) => {
            println!(
                "scan of {target_name} over [{}, {}] in {steps} steps: {} levels per step",
                format_rational(&scan.from),
                format_rational(&scan.to),
                sector.dim()
            );
            write_artifact(out, &csv)?;
        }
        None => print!("{csv}"),
    }
    if let Some(svg_path) = &ctx.svg {
        let xs: Vec<f64> = values.iter().map(to_f64).collect();
        write_artifact(svg_path, &emit::scan_svg(&target_name, &xs, &levels))?;
    }
    Ok(0)
}

// ── multimode ───────────────────────────────────────────────────────

fn cmd_multimode(ctx: &Ctx) -> Result<i32> {
    let ph = ctx.config.require_product()?;
    let result = product_spectrum_with(ph, ctx.solver_opts())?;
    // CSV shape is identical to single-mode spectra; the JSON sibling
    // carries both sector descriptors
    let rows: Vec<(String, SectorBasis, SpectrumResult)> =
        vec![("product".into(), ph.sector_a, result.clone())];
    let csv = emit::spectrum_csv(&rows);
    match &ctx.out {
        Some(out) => {
            println!(
                "product sectors a=(q={}, r={}, N={}) x b=(q={}, r={}, N={}): {} levels, residual_max {:.3e}",
                ph.sector_a.q(),
                ph.sector_a.r(),
                ph.sector_a.top(),
                ph.sector_b.q(),
                ph.sector_b.r(),
                ph.sector_b.top(),
                result.eigenvalues.len(),
                result.residual_max
            );
            write_artifact(out, &csv)?;
            write_artifact(
                &out.with_extension("json"),
                &emit::product_json(&ph.sector_a, &ph.sector_b, &result),
            )?;
        }
        None => print!("{csv}"),
    }
    Ok(0)
}
