//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 condition violated (or audit margin negative), 2 input error,
//! 3 degenerate geometry. Nothing else is ever returned.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use meshreg_core::generators::{generate, GeneratorKind, GeneratorSpec};
use meshreg_core::mesh::{conformity_check, validate_mesh};
use meshreg_core::regularity::{verdict, Condition, Thresholds};
use meshreg_core::{AngleUnit, CellOutcome, ConditionVerdict, Mesh, ToleranceConfig};

use crate::eval;
use crate::io::{load_mesh, write_mesh, FamilyManifest};
use crate::report::{write_report, AuditSection, FamilyReport, FamilyVerdictRecord, QualityReport};

pub mod exit {
    pub const PASS: u8 = 0;
    pub const VIOLATED: u8 = 1;
    pub const INPUT_ERROR: u8 = 2;
    pub const DEGENERATE: u8 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "meshreg", version, about = "Dihedral angle and d-sine regularity checks for simplicial meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    /// Relative degeneracy tolerance
    #[arg(long = "tol", default_value_t = meshreg_core::geometry::DEFAULT_DEGENERACY_REL_TOL)]
    pub degeneracy_rel_tol: f64,
    /// Largest cell dimension for exhaustive subsimplex enumeration
    #[arg(long = "max-dim", default_value_t = meshreg_core::geometry::DEFAULT_MAX_SUBSIMPLEX_DIM)]
    pub max_dim: usize,
    /// Read angle thresholds in degrees and annotate reports with degrees
    #[arg(long)]
    pub degrees: bool,
}

impl Tolerances {
    fn config(&self) -> ToleranceConfig {
        ToleranceConfig {
            degeneracy_rel_tol: self.degeneracy_rel_tol,
            angle_unit: if self.degrees { AngleUnit::Degrees } else { AngleUnit::Radians },
            max_subsimplex_dim: self.max_dim,
        }
    }
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Lower bound on every subsimplex dihedral angle (radians unless --degrees)
    #[arg(long)]
    pub alpha0: Option<f64>,
    /// Lower bound on every vertex d-sine
    #[arg(long = "dsine-min")]
    pub dsine_min: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Report destination; `-` or absent writes to standard output
    #[arg(short = 'o', long = "report", visible_alias = "output")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the minimum angle and/or generalized d-sine condition on a mesh
    Check {
        mesh: PathBuf,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[command(flatten)]
        tolerances: Tolerances,
        #[command(flatten)]
        output: Output,
    },
    /// Audit the angle / d-sine equivalence inequalities cell by cell
    Audit {
        mesh: PathBuf,
        #[command(flatten)]
        tolerances: Tolerances,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a coarse-to-fine sequence of meshes listed in a manifest
    Family {
        manifest: PathBuf,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[command(flatten)]
        tolerances: Tolerances,
        #[command(flatten)]
        output: Output,
    },
    /// Write a single-cell mesh from one of the built-in simplex families
    Generate {
        /// regular, corner, flatten, needle or random
        #[arg(long)]
        kind: String,
        #[arg(long)]
        dim: usize,
        /// Family parameter t for flatten/needle, quality floor for random
        #[arg(long)]
        param: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Print dimension, counts, validation, conformity and a per-cell quality table
    Info {
        mesh: PathBuf,
        #[command(flatten)]
        tolerances: Tolerances,
    },
}

/// A failed command: exit code plus diagnostic.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl ToString) -> Failure {
    Failure {
        code: exit::INPUT_ERROR,
        message: message.to_string(),
    }
}

pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::INPUT_ERROR } else { exit::PASS };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("meshreg: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Check { mesh, thresholds, tolerances, output } => {
            cmd_check(&mesh, &thresholds, &tolerances, &output)
        }
        Command::Audit { mesh, tolerances, output } => cmd_audit(&mesh, &tolerances, &output),
        Command::Family { manifest, thresholds, tolerances, output } => {
            cmd_family(&manifest, &thresholds, &tolerances, &output)
        }
        Command::Generate { kind, dim, param, seed, scale, output } => {
            cmd_generate(&kind, dim, param, seed, scale, &output)
        }
        Command::Info { mesh, tolerances } => cmd_info(&mesh, &tolerances),
    }
}

fn sink(output: &Output) -> Result<Box<dyn Write>, Failure> {
    match output.report.as_deref() {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) if p == Path::new("-") => Ok(Box::new(io::stdout().lock())),
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| input_error(format!("{}: {e}", p.display()))),
    }
}

fn config(tolerances: &Tolerances) -> Result<ToleranceConfig, Failure> {
    let cfg = tolerances.config();
    cfg.validate().map_err(input_error)?;
    Ok(cfg)
}

fn thresholds(args: &ThresholdArgs, unit: AngleUnit) -> Result<Thresholds, Failure> {
    Thresholds::new(args.alpha0.map(|a| unit.to_radians(a)), args.dsine_min).map_err(input_error)
}

fn verdicts(outcomes: &[CellOutcome], t: &Thresholds) -> Vec<ConditionVerdict> {
    let mut out = Vec::new();
    if let Some(a) = t.alpha0 {
        out.push(verdict(outcomes, Condition::MinimumDihedralAngle, a));
    }
    if let Some(c) = t.dsine_min {
        out.push(verdict(outcomes, Condition::GeneralizedDsine, c));
    }
    out
}

fn evaluate(mesh: &Mesh, cfg: &ToleranceConfig) -> Result<Vec<CellOutcome>, Failure> {
    eval::assess(mesh, cfg).map_err(input_error)
}

fn report_degenerate(label: &str, outcomes: &[CellOutcome]) -> bool {
    let mut any = false;
    for o in outcomes {
        if let CellOutcome::Degenerate { cell_index, vertices } = o {
            eprintln!("meshreg: {label}cell {cell_index} is degenerate (vertices {vertices:?})");
            any = true;
        }
    }
    any
}

fn cmd_check(
    path: &Path,
    args: &ThresholdArgs,
    tolerances: &Tolerances,
    output: &Output,
) -> Result<u8, Failure> {
    let cfg = config(tolerances)?;
    let t = thresholds(args, cfg.angle_unit)?;
    if t.is_empty() {
        return Err(input_error("check needs --alpha0 and/or --dsine-min"));
    }
    let mesh = load_mesh(path).map_err(input_error)?;
    let outcomes = evaluate(&mesh, &cfg)?;
    let verdicts = verdicts(&outcomes, &t);
    let report = QualityReport::new(mesh.ambient_dim(), &outcomes, &verdicts, cfg.angle_unit);
    write_report(&report, sink(output)?).map_err(input_error)?;

    if report_degenerate("", &outcomes) {
        Ok(exit::DEGENERATE)
    } else if verdicts.iter().all(|v| v.satisfied) {
        Ok(exit::PASS)
    } else {
        Ok(exit::VIOLATED)
    }
}

fn cmd_audit(path: &Path, tolerances: &Tolerances, output: &Output) -> Result<u8, Failure> {
    let cfg = config(tolerances)?;
    let mesh = load_mesh(path).map_err(input_error)?;
    let outcomes = evaluate(&mesh, &cfg)?;
    let audit = eval::audit(&mesh, &cfg).map_err(input_error)?;
    let mut report = QualityReport::new(mesh.ambient_dim(), &outcomes, &[], cfg.angle_unit);
    report.audit = Some(AuditSection::from_report(&audit, |c| mesh.cell(c)));
    write_report(&report, sink(output)?).map_err(input_error)?;

    if report_degenerate("", &outcomes) || !audit.degenerate_cells().is_empty() {
        Ok(exit::DEGENERATE)
    } else if audit.margins_hold() {
        Ok(exit::PASS)
    } else {
        Ok(exit::VIOLATED)
    }
}

fn cmd_family(
    manifest_path: &Path,
    args: &ThresholdArgs,
    tolerances: &Tolerances,
    output: &Output,
) -> Result<u8, Failure> {
    let cfg = config(tolerances)?;
    let t = thresholds(args, cfg.angle_unit)?;
    let manifest = FamilyManifest::load(manifest_path).map_err(input_error)?;
    let meshes = manifest.load_meshes().map_err(input_error)?;

    let mut members = Vec::with_capacity(meshes.len());
    let mut per_mesh: Vec<Vec<ConditionVerdict>> = Vec::with_capacity(meshes.len());
    let mut degenerate = false;
    for (i, mesh) in meshes.iter().enumerate() {
        let outcomes = evaluate(mesh, &cfg)?;
        degenerate |= report_degenerate(&format!("mesh {i}: "), &outcomes);
        let v = verdicts(&outcomes, &t);
        let report = QualityReport::new(mesh.ambient_dim(), &outcomes, &v, cfg.angle_unit);
        members.push((manifest.meshes[i].display().to_string(), report));
        per_mesh.push(v);
    }
    // one column per supplied condition, one entry per mesh
    let conditions = per_mesh[0].len();
    let combined: Vec<FamilyVerdictRecord> = (0..conditions)
        .map(|c| {
            let column: Vec<ConditionVerdict> = per_mesh.iter().map(|v| v[c].clone()).collect();
            FamilyVerdictRecord::combine(&column, cfg.angle_unit)
        })
        .collect();
    let satisfied = combined.iter().all(|v| v.satisfied);
    let report = FamilyReport::new(meshes[0].ambient_dim(), members, combined, cfg.angle_unit);
    write_report(&report, sink(output)?).map_err(input_error)?;

    if degenerate {
        Ok(exit::DEGENERATE)
    } else if satisfied {
        Ok(exit::PASS)
    } else {
        Ok(exit::VIOLATED)
    }
}

fn cmd_generate(
    kind: &str,
    dim: usize,
    param: Option<f64>,
    seed: u64,
    scale: f64,
    output: &Output,
) -> Result<u8, Failure> {
    let kind: GeneratorKind = kind.parse().map_err(input_error)?;
    let param = match (kind, param) {
        (GeneratorKind::Flatten | GeneratorKind::Needle, None) => {
            return Err(input_error(format!("--kind {} needs --param", kind.name())));
        }
        (_, Some(p)) => p,
        (_, None) => 0.0,
    };
    let spec = GeneratorSpec { kind, dim, param, seed, scale };
    let simplex = generate(&spec).map_err(input_error)?;
    let mesh = Mesh::from_simplex(&simplex).map_err(input_error)?;
    let mut out = sink(output)?;
    write_mesh(&mesh, &mut out).map_err(input_error)?;
    out.flush().map_err(input_error)?;
    Ok(exit::PASS)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.7}"))
}

fn cmd_info(path: &Path, tolerances: &Tolerances) -> Result<u8, Failure> {
    let cfg = config(tolerances)?;
    let mesh = load_mesh(path).map_err(input_error)?;
    let validation = validate_mesh(&mesh, &cfg);
    let conformity = conformity_check(&mesh);
    let outcomes = evaluate(&mesh, &cfg)?;
    let report = QualityReport::new(mesh.ambient_dim(), &outcomes, &[], cfg.angle_unit);

    let mut text = String::new();
    let _ = writeln!(text, "ambient dimension: {}", mesh.ambient_dim());
    let _ = writeln!(text, "vertices: {}", mesh.vertex_count());
    let _ = writeln!(text, "cells: {}", mesh.cell_count());
    if validation.is_clean() {
        let _ = writeln!(text, "validation: OK");
    } else {
        let _ = writeln!(
            text,
            "validation: degenerate cells {:?}, unused vertices {:?}, duplicate cells {:?}",
            validation.degenerate_cells, validation.unused_vertices, validation.duplicate_cells
        );
    }
    if conformity.is_conforming() {
        let _ = writeln!(
            text,
            "conformity: OK ({} boundary facets, {} interior facets)",
            conformity.boundary_facets, conformity.interior_facets
        );
    } else {
        let _ = writeln!(text, "conformity: VIOLATION");
        for v in &conformity.violations {
            let _ = writeln!(text, "  facet {:?} shared by cells {:?}", v.facet, v.cells);
        }
    }
    let _ = write!(
        text,
        "{:>6}  {:>16}  {:>16}  {:>10}  {:>10}  {:>16}",
        "cell", "min_dihedral_rad", "max_dihedral_rad", "min_dsine", "ball_ratio", "dihedral_sum_rad"
    );
    if tolerances.degrees {
        let _ = write!(text, "  {:>16}", "min_dihedral_deg");
    }
    text.push('\n');
    for c in &report.cells {
        let _ = write!(
            text,
            "{:>6}  {:>16}  {:>16}  {:>10}  {:>10}  {:>16}",
            c.index,
            fmt_opt(c.min_dihedral_rad),
            fmt_opt(c.max_dihedral_rad),
            fmt_opt(c.min_dsine),
            fmt_opt(c.ball_ratio),
            fmt_opt(c.dihedral_sum_rad)
        );
        if tolerances.degrees {
            let _ = write!(text, "  {:>16}", fmt_opt(c.min_dihedral_deg));
        }
        if let Some(v) = &c.degenerate_vertices {
            let _ = write!(text, "  degenerate {v:?}");
        }
        text.push('\n');
    }
    io::stdout().write_all(text.as_bytes()).map_err(input_error)?;
    Ok(exit::PASS)
}
